#include "fare/harness/rerank.hpp"

#include <atomic>
#include <mutex>
#include <thread>

#include "fare/core/error.hpp"
#include "fare/core/judgment.hpp"
#include "fare/core/parse.hpp"
#include "fare/core/prompt.hpp"
#include "fare/core/rng.hpp"

namespace fare {

std::vector<RerankCandidate> read_rerank_candidates(const std::filesystem::path& path) {
  const auto rows = read_jsonl(path);
  std::vector<RerankCandidate> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    try {
      const auto& row = rows[i];
      RerankCandidate c;
      c.id = row.at("id").get<std::string>();
      c.question = row.at("question").get<std::string>();
      c.responses = row.at("responses").get<std::vector<std::string>>();
      if (c.responses.empty()) throw DataError("responses must not be empty");
      if (row.contains("correct")) {
        c.correct = row.at("correct").get<std::vector<bool>>();
        if (c.correct->size() != c.responses.size()) {
          throw DataError("'correct' and 'responses' differ in length");
        }
      }
      out.push_back(std::move(c));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(path.string() + ": record " + std::to_string(i + 1) + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError(path.string() + ": record " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return out;
}

RerankOutcome rerank_best_of_n(const RerankCandidate& candidate, ChatBackend& backend,
                               const EndpointDescriptor& endpoint, const SamplingParams& params,
                               const RerankOptions& options) {
  if (candidate.responses.empty()) throw DomainError("rerank candidate has no responses");
  SamplingParams one = params;
  one.k = 1;
  const auto variant =
      options.direct ? TemplateVariant::DirectJudgment : TemplateVariant::WithCritique;
  Rng rng(mix_seed(options.seed, candidate.id));

  RerankOutcome out;
  for (std::size_t challenger = 1; challenger < candidate.responses.size(); ++challenger) {
    const bool incumbent_first = !options.randomize_positions || rng.bernoulli(0.5);
    const auto& champ = candidate.responses[out.selected];
    const auto& chall = candidate.responses[challenger];
    EvalInput duel{candidate.id + "-duel-" + std::to_string(challenger),
                   default_protocol(TaskKind::Pairwise, variant), candidate.question,
                   incumbent_first ? PairwiseResponses{champ, chall}
                                   : PairwiseResponses{chall, champ}};
    ++out.judge_calls;
    std::string completion;
    try {
      completion = sample_k(backend, endpoint, render_prompt(duel), one).completions.at(0);
    } catch (const Error& e) {
      out.notes.push_back("duel " + std::to_string(challenger) + " skipped: " + e.what());
      continue;
    }
    const auto parsed = parse_judgment(TaskKind::Pairwise, completion);
    if (!parsed_ok(parsed)) {
      out.notes.push_back("duel " + std::to_string(challenger) + ": unparseable verdict");
      continue;
    }
    const auto choice = std::get<PairChoice>(std::get<EvaluatorOutput>(parsed).judgment).choice;
    const bool incumbent_wins = (choice == Choice::A) == incumbent_first;
    if (!incumbent_wins) out.selected = challenger;
  }
  return out;
}

RerankSummary run_rerank(std::span<const RerankCandidate> candidates, ChatBackend& backend,
                         const EndpointDescriptor& endpoint, const SamplingParams& params,
                         const RerankOptions& options, std::size_t max_in_flight) {
  if (max_in_flight < 1) throw ConfigError("max_in_flight must be >= 1");
  RerankSummary summary;
  summary.outcomes.resize(candidates.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  const auto worker = [&] {
    for (std::size_t i = next++; i < candidates.size(); i = next++) {
      try {
        summary.outcomes[i] = rerank_best_of_n(candidates[i], backend, endpoint, params, options);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::min(max_in_flight, candidates.size());
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::size_t hits = 0, reachable = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& flags = candidates[i].correct;
    if (!flags) continue;
    ++summary.scored;
    hits += (*flags)[summary.outcomes[i].selected];
    for (bool f : *flags) {
      if (f) {
        ++reachable;
        break;
      }
    }
  }
  if (summary.scored > 0) {
    summary.accuracy = static_cast<double>(hits) / static_cast<double>(summary.scored);
    summary.oracle = static_cast<double>(reachable) / static_cast<double>(summary.scored);
  }
  return summary;
}

ordered_json rerank_to_json(std::span<const RerankCandidate> candidates,
                            const RerankSummary& summary) {
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& o = summary.outcomes[i];
    ordered_json row{{"id", candidates[i].id},
                     {"selected", o.selected},
                     {"judge_calls", o.judge_calls}};
    if (candidates[i].correct) row["selected_correct"] = (*candidates[i].correct)[o.selected];
    if (!o.notes.empty()) row["notes"] = o.notes;
    rows.push_back(std::move(row));
  }
  ordered_json out{{"selections", rows}};
  if (summary.scored > 0) {
    out["scored"] = summary.scored;
    out["accuracy"] = summary.accuracy;
    out["oracle"] = summary.oracle;
  }
  return out;
}

}  // namespace fare
