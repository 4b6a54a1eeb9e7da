#include "fare/curation/samples.hpp"

#include <algorithm>
#include <numeric>

#include "fare/core/error.hpp"
#include "fare/core/rng.hpp"
#include "fare/curation/answer.hpp"

namespace fare {

namespace {

LabeledSample make_sample(const SeedRecord& seed, std::string id, EvalProtocol protocol,
                          ResponseSet responses, Judgment gold) {
  LabeledSample s;
  s.input = EvalInput{std::move(id), std::move(protocol), seed.question, std::move(responses)};
  s.gold = gold;
  s.provenance = Provenance::Synthetic;
  s.domain_tag = seed.domain_tag;
  s.source_dataset = seed.source_dataset;
  return s;
}

LabeledSample pair_sample(const SeedRecord& seed, std::string id, const RubricCatalog& rubrics,
                          const std::string& good, const std::string& bad, bool good_first) {
  return make_sample(seed, std::move(id), rubrics.protocol_for(TaskKind::Pairwise,
                                                               seed.source_dataset),
                     good_first ? PairwiseResponses{good, bad} : PairwiseResponses{bad, good},
                     PairChoice{good_first ? Choice::A : Choice::B});
}

}  // namespace

std::vector<GradedResponse> grade_responses(const SeedRecord& seed,
                                            std::span<const RawResponse> responses) {
  std::vector<GradedResponse> out;
  out.reserve(responses.size());
  for (const auto& r : responses) {
    out.push_back({r.text, r.generator_id, r.temperature,
                   grade_against_answer(r.text, seed.gold_answer)});
  }
  return out;
}

std::vector<LabeledSample> build_pairwise_samples(const SeedRecord& seed,
                                                  std::span<const GradedResponse> graded,
                                                  std::size_t limit, std::uint64_t rng_seed,
                                                  const RubricCatalog& rubrics) {
  std::vector<std::size_t> good, bad;
  for (std::size_t i = 0; i < graded.size(); ++i) (graded[i].correct ? good : bad).push_back(i);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (auto g : good) {
    for (auto b : bad) pairs.emplace_back(g, b);
  }
  Rng rng(mix_seed(rng_seed, seed.id));
  if (pairs.size() > limit) {
    // Partial Fisher-Yates for a uniform subset, then back to enumeration order.
    for (std::size_t i = 0; i < limit; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.uniform_index(pairs.size() - i));
      std::swap(pairs[i], pairs[j]);
    }
    pairs.resize(limit);
    std::sort(pairs.begin(), pairs.end());
  }

  std::vector<LabeledSample> out;
  out.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const bool good_first = rng.bernoulli(0.5);
    out.push_back(pair_sample(seed, seed.id + "-pw-" + std::to_string(i), rubrics,
                              graded[pairs[i].first].text, graded[pairs[i].second].text,
                              good_first));
  }
  return out;
}

std::vector<LabeledSample> build_verification_samples(const SeedRecord& seed,
                                                      std::span<const GradedResponse> graded,
                                                      VerificationMode mode,
                                                      const RubricCatalog& rubrics) {
  const bool ref_based = mode == VerificationMode::RefBased;
  if (ref_based && !graded.empty() && seed.gold_answer.empty()) {
    throw DomainError("reference-based samples need a gold answer (seed " + seed.id + ")");
  }
  const TaskKind task =
      ref_based ? TaskKind::RefBasedVerification : TaskKind::RefFreeVerification;
  std::vector<LabeledSample> out;
  out.reserve(graded.size());
  for (std::size_t i = 0; i < graded.size(); ++i) {
    const auto& r = graded[i];
    ResponseSet responses = ref_based ? ResponseSet{RefBasedResponses{r.text, seed.gold_answer}}
                                      : ResponseSet{RefFreeResponses{r.text}};
    out.push_back(make_sample(seed, seed.id + (ref_based ? "-rb-" : "-rf-") + std::to_string(i),
                              rubrics.protocol_for(task, seed.source_dataset),
                              std::move(responses),
                              BinaryVerdict{r.correct ? Verdict::Correct : Verdict::Incorrect}));
  }
  return out;
}

std::vector<LabeledSample> build_injection_samples(const SeedRecord& seed,
                                                   std::span<const CorruptionKind> kinds,
                                                   std::uint64_t rng_seed,
                                                   const RubricCatalog& rubrics) {
  const FunctionCall call = FunctionCall::parse(seed.gold_answer);
  const std::string reference = call.raw_form();
  Rng rng(mix_seed(rng_seed, seed.id));

  std::vector<CorruptionKind> used;
  std::vector<LabeledSample> out;
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    std::optional<std::string> corrupted;
    for (std::size_t step = 0; step < kinds.size() && !corrupted; ++step) {
      const auto kind = kinds[(i + step) % kinds.size()];
      if (std::find(used.begin(), used.end(), kind) != used.end()) continue;
      corrupted = inject_error(call, kind, rng.next());
      if (corrupted) used.push_back(kind);
    }
    if (!corrupted) break;
    const bool good_first = rng.bernoulli(0.5);
    out.push_back(pair_sample(seed, seed.id + "-inj-" + std::to_string(out.size()), rubrics,
                              reference, *corrupted, good_first));
  }
  return out;
}

}  // namespace fare
