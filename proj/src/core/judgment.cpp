#include "fare/core/judgment.hpp"

#include <cstdlib>

#include "fare/core/error.hpp"

namespace fare {

EvalInput swap_pairwise(const EvalInput& input) {
  const auto* pair = std::get_if<PairwiseResponses>(&input.responses);
  if (input.protocol.task != TaskKind::Pairwise || pair == nullptr) {
    throw DomainError("swap_pairwise: input '" + input.id + "' is not a pairwise input");
  }
  EvalInput out = input;
  out.responses = PairwiseResponses{pair->response_b, pair->response_a};
  return out;
}

Judgment map_swapped_judgment(const Judgment& judgment) {
  const auto* pair = std::get_if<PairChoice>(&judgment);
  if (pair == nullptr) throw DomainError("map_swapped_judgment: judgment is not a pair choice");
  return PairChoice{pair->choice == Choice::A ? Choice::B : Choice::A};
}

bool grade_judgment(const Judgment& pred, const Judgment& gold, const GradeOptions& options) {
  if (pred.index() != gold.index()) {
    throw DomainError("grade_judgment: prediction '" + describe(pred) +
                      "' and gold '" + describe(gold) + "' are different judgment kinds");
  }
  if (const auto* p = std::get_if<Rating>(&pred)) {
    return std::abs(p->value - std::get<Rating>(gold).value) <= options.rating_tolerance;
  }
  return pred == gold;
}

}  // namespace fare
