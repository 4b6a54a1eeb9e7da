#include "fare/rsft/examples.hpp"

#include <algorithm>
#include <cmath>

#include "fare/core/error.hpp"
#include "fare/core/hash.hpp"
#include "fare/core/judgment.hpp"
#include "fare/core/parse.hpp"
#include "fare/core/prompt.hpp"
#include "fare/core/rng.hpp"

namespace fare {

RejectDecision reject_sample(const LabeledSample& sample, const RolloutResult& rollout,
                             std::uint64_t seed) {
  RejectDecision d;
  d.stats.k = static_cast<int>(rollout.completions.size());
  std::vector<std::size_t> correct;
  for (std::size_t i = 0; i < rollout.completions.size(); ++i) {
    const auto parsed = parse_judgment(sample.task(), rollout.completions[i]);
    if (!parsed_ok(parsed)) continue;
    const Judgment& j = std::get<EvaluatorOutput>(parsed).judgment;
    if (judgment_matches_task(j, sample.task()) && grade_judgment(j, sample.gold)) {
      correct.push_back(i);
    }
  }
  d.stats.n_correct = static_cast<int>(correct.size());
  if (correct.empty()) return d;

  Rng rng(mix_seed(seed, sample.id()));
  const std::size_t pick = correct[rng.uniform_index(correct.size())];
  SFTExample ex;
  ex.input = sample.input;
  ex.input.protocol.variant = TemplateVariant::WithCritique;
  ex.gold = sample.gold;
  ex.messages = render_prompt(ex.input);
  ex.target = rollout.completions[pick];
  ex.pass = d.stats;
  ex.source_dataset = sample.source_dataset;
  d.kept = std::move(ex);
  return d;
}

std::size_t direct_count(double fraction, std::size_t n) {
  return static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
}

std::vector<SFTExample> convert_direct_judgment(std::vector<SFTExample> kept,
                                                const TaskFractions& fractions, bool drop_cot,
                                                std::uint64_t seed) {
  Rng rng(seed);
  for (const auto& [task, fraction] : fractions) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < kept.size(); ++i) {
      if (kept[i].task() == task && !kept[i].direct) idx.push_back(i);
    }
    const std::size_t want = std::min(direct_count(fraction, idx.size()), idx.size());
    for (std::size_t i = 0; i < want; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.uniform_index(idx.size() - i));
      std::swap(idx[i], idx[j]);
    }
    for (std::size_t i = 0; i < want; ++i) {
      SFTExample& ex = kept[idx[i]];
      const auto parsed = parse_judgment(task, ex.target);
      if (!parsed_ok(parsed)) {
        throw DomainError("kept example " + ex.id() + " has no parseable verdict");
      }
      const std::string reasoning = drop_cot ? "" : split_reasoning(ex.target).reasoning_raw;
      ex.input.protocol.variant = TemplateVariant::DirectJudgment;
      ex.messages = render_prompt(ex.input);
      ex.target = reasoning + verdict_line(std::get<EvaluatorOutput>(parsed).judgment);
      ex.direct = true;
    }
  }
  return kept;
}

std::vector<SFTExample> curriculum_sort(std::vector<SFTExample> kept) {
  std::stable_sort(kept.begin(), kept.end(), [](const SFTExample& a, const SFTExample& b) {
    return a.pass.pass_rate() > b.pass.pass_rate();
  });
  return kept;
}

SftRecord to_record(const SFTExample& ex) {
  return {ex.id(), ex.task(), ex.messages, ex.target, ex.direct, ex.pass.pass_rate(),
          ex.source_dataset};
}

ordered_json record_to_json(const SftRecord& r) {
  return ordered_json{{"id", r.id},
                      {"task", to_string(r.task)},
                      {"messages", messages_to_json(r.messages)},
                      {"target", r.target},
                      {"direct", r.direct},
                      {"pass_rate", r.pass_rate},
                      {"source", r.source}};
}

SftRecord record_from_json(const nlohmann::json& v) {
  try {
    SftRecord r;
    r.id = v.at("id").get<std::string>();
    const auto task = parse_task_kind(v.at("task").get<std::string>());
    if (!task) throw DataError("unknown task " + v.at("task").dump());
    r.task = *task;
    r.messages = messages_from_json(v.at("messages"));
    r.target = v.at("target").get<std::string>();
    r.direct = v.at("direct").get<bool>();
    r.pass_rate = v.at("pass_rate").get<double>();
    r.source = v.at("source").get<std::string>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad SFT record: ") + e.what());
  }
}

std::string emit_sft_dataset(std::span<const SFTExample> examples,
                             const std::filesystem::path& path) {
  std::string content;
  for (const auto& ex : examples) {
    content += dump_line(record_to_json(to_record(ex)));
    content += '\n';
  }
  write_text_atomic(path, content);
  return sha256_hex(content);
}

std::vector<SftRecord> read_sft_dataset(const std::filesystem::path& path) {
  std::vector<SftRecord> out;
  for (const auto& row : read_jsonl(path)) out.push_back(record_from_json(row));
  return out;
}

}  // namespace fare
