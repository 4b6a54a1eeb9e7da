#include "fare/harness/benchmark.hpp"

#include "fare/core/error.hpp"
#include "fare/core/judgment.hpp"
#include "fare/core/parse.hpp"
#include "fare/core/prompt.hpp"
#include "fare/harness/metrics.hpp"

namespace fare {

namespace {

struct Judged {
  std::optional<Judgment> judgment;
  std::string raw;  // verdict string, "parse_failure" or "error"
  bool request_failed = false;
  std::string note;
};

EvalInput prepare(const EvalInput& in, bool direct) {
  EvalInput out = in;
  out.protocol.variant = direct ? TemplateVariant::DirectJudgment : TemplateVariant::WithCritique;
  return out;
}

std::vector<Judged> judge_all(const BenchmarkJob& job, const std::vector<EvalInput>& inputs) {
  std::vector<RolloutRequest> requests;
  requests.reserve(inputs.size());
  for (const auto& in : inputs) requests.push_back({in.id, render_prompt(prepare(in, job.flags.direct))});
  SamplingParams params = job.params;
  params.k = job.flags.sc_k;
  const auto rollouts =
      run_rollout_batch(*job.backend, job.endpoint, requests, params, job.max_in_flight);

  std::vector<Judged> out(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    Judged& j = out[i];
    if (!rollouts[i].ok()) {
      j.raw = "error";
      j.request_failed = true;
      j.note = rollouts[i].failures.empty() ? "request failed" : rollouts[i].failures.back();
      continue;
    }
    std::vector<Judgment> votes;
    for (const auto& text : rollouts[i].completions) {
      const auto parsed = parse_judgment(inputs[i].protocol.task, text);
      if (parsed_ok(parsed)) votes.push_back(std::get<EvaluatorOutput>(parsed).judgment);
    }
    if (votes.empty()) {
      j.raw = "parse_failure";
      continue;
    }
    j.judgment = aggregate_self_consistency(votes);
    j.raw = format_verdict(*j.judgment);
  }
  return out;
}

std::vector<EvalInput> inputs_of(const BenchmarkJob& job) {
  std::vector<EvalInput> out;
  out.reserve(job.samples.size());
  for (const auto& s : job.samples) out.push_back(s.input);
  return out;
}

ordered_json config_echo(const BenchmarkJob& job) {
  return ordered_json{{"task", to_string(job.task)},
                      {"consistent", job.flags.consistent},
                      {"sc_k", job.flags.sc_k},
                      {"direct", job.flags.direct},
                      {"drop_failed_requests", job.flags.drop_failed_requests},
                      {"temperature", job.params.temperature},
                      {"max_tokens", job.params.max_tokens},
                      {"model", job.endpoint.model},
                      {"samples", job.samples.size()}};
}

ReportRow base_row(const LabeledSample& s, const Judged& j, const BenchmarkJob& job) {
  ReportRow row;
  row.id = s.id();
  row.predictions = {j.raw};
  row.prediction = j.judgment ? judgment_to_json(*j.judgment) : ordered_json();
  row.gold = judgment_to_json(s.gold);
  row.note = j.note;
  row.excluded = j.request_failed && job.flags.drop_failed_requests;
  return row;
}

MetricReport accuracy_report(const BenchmarkJob& job, const char* metric) {
  const auto judged = judge_all(job, inputs_of(job));
  MetricReport r;
  r.metric = metric;
  r.config = config_echo(job);
  for (std::size_t i = 0; i < job.samples.size(); ++i) {
    ReportRow row = base_row(job.samples[i], judged[i], job);
    row.credited = judged[i].judgment && grade_judgment(*judged[i].judgment, job.samples[i].gold);
    r.rows.push_back(std::move(row));
  }
  finalize(r);
  return r;
}

}  // namespace

void validate(const BenchmarkJob& job) {
  if (job.backend == nullptr) throw ConfigError("benchmark job has no backend");
  if (job.flags.sc_k < 1) throw ConfigError("sc_k must be >= 1");
  if (job.flags.consistent && job.task != TaskKind::Pairwise) {
    throw ConfigError("consistent mode applies to pairwise benchmarks only");
  }
  for (const auto& s : job.samples) {
    if (s.task() != job.task) {
      throw ConfigError("sample " + s.id() + " is " + std::string(to_string(s.task())) +
                        ", benchmark task is " + std::string(to_string(job.task)));
    }
  }
}

MetricReport run_pairwise_benchmark(const BenchmarkJob& job) {
  validate(job);
  if (job.task != TaskKind::Pairwise) throw ConfigError("pairwise benchmark needs pairwise samples");
  if (!job.flags.consistent) return accuracy_report(job, kMetricAccuracy);

  const auto inputs = inputs_of(job);
  std::vector<EvalInput> swapped;
  swapped.reserve(inputs.size());
  for (const auto& in : inputs) swapped.push_back(swap_pairwise(in));
  const auto first = judge_all(job, inputs);
  const auto second = judge_all(job, swapped);

  MetricReport r;
  r.metric = kMetricConsistentAccuracy;
  r.config = config_echo(job);
  std::size_t n = 0, right_first = 0, right_second = 0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto& gold = job.samples[i].gold;
    ReportRow row = base_row(job.samples[i], first[i], job);
    row.predictions.push_back(second[i].raw);
    const auto back = second[i].judgment
                          ? std::optional<Judgment>(map_swapped_judgment(*second[i].judgment))
                          : std::nullopt;
    const bool ok_first = first[i].judgment && grade_judgment(*first[i].judgment, gold);
    const bool ok_second = back && grade_judgment(*back, gold);
    const bool agree = first[i].judgment && back && *first[i].judgment == *back;
    row.credited = agree && ok_first;
    if (!agree) row.prediction = nullptr;
    if (!first[i].judgment || !back) {
      if (row.note.empty()) row.note = second[i].note;
    } else if (!agree) {
      row.note = "inconsistent across orders";
    }
    row.excluded = (first[i].request_failed || second[i].request_failed) &&
                   job.flags.drop_failed_requests;
    if (!row.excluded) {
      ++n;
      right_first += ok_first;
      right_second += ok_second;
    }
    r.rows.push_back(std::move(row));
  }
  if (n > 0) {
    r.extras["accuracy_original"] = static_cast<double>(right_first) / static_cast<double>(n);
    r.extras["accuracy_swapped"] = static_cast<double>(right_second) / static_cast<double>(n);
  }
  finalize(r);
  return r;
}

MetricReport run_step_benchmark(const BenchmarkJob& job) {
  validate(job);
  if (job.task != TaskKind::StepLevel) throw ConfigError("step benchmark needs step-level samples");
  const auto judged = judge_all(job, inputs_of(job));
  MetricReport r;
  r.metric = kMetricProcessBenchF1;
  r.config = config_echo(job);
  std::vector<StepOutcome> outcomes;
  for (std::size_t i = 0; i < job.samples.size(); ++i) {
    ReportRow row = base_row(job.samples[i], judged[i], job);
    row.credited = judged[i].judgment && grade_judgment(*judged[i].judgment, job.samples[i].gold);
    if (!row.excluded) {
      StepOutcome o;
      if (judged[i].judgment) o.predicted = std::get<ErrorStep>(*judged[i].judgment).index;
      o.gold = std::get<ErrorStep>(job.samples[i].gold).index;
      outcomes.push_back(o);
    }
    r.rows.push_back(std::move(row));
  }
  const auto score = processbench_f1(outcomes);
  r.extras["acc_error"] = score.acc_error;
  r.extras["acc_correct"] = score.acc_correct;
  finalize(r);
  return r;
}

MetricReport run_verification_benchmark(const BenchmarkJob& job) {
  validate(job);
  if (job.task != TaskKind::RefBasedVerification && job.task != TaskKind::RefFreeVerification) {
    throw ConfigError("verification benchmark needs verification samples");
  }
  return accuracy_report(job, kMetricAccuracy);
}

MetricReport run_rating_benchmark(const BenchmarkJob& job,
                                  const std::optional<std::vector<double>>& human) {
  validate(job);
  if (job.task != TaskKind::SingleRating) throw ConfigError("rating benchmark needs rating samples");
  if (human && human->size() != job.samples.size()) {
    throw DomainError("human ratings and samples differ in length");
  }
  const auto judged = judge_all(job, inputs_of(job));
  MetricReport r;
  r.metric = kMetricPearson;
  r.config = config_echo(job);
  for (std::size_t i = 0; i < job.samples.size(); ++i) {
    ReportRow row = base_row(job.samples[i], judged[i], job);
    if (human) row.gold = (*human)[i];
    row.credited = judged[i].judgment.has_value();
    if (!judged[i].judgment) {
      row.excluded = true;
      if (row.note.empty()) row.note = "no rating parsed";
    }
    r.rows.push_back(std::move(row));
  }
  finalize(r);
  return r;
}

MetricReport run_benchmark(const BenchmarkJob& job) {
  switch (job.task) {
    case TaskKind::Pairwise: return run_pairwise_benchmark(job);
    case TaskKind::StepLevel: return run_step_benchmark(job);
    case TaskKind::RefBasedVerification:
    case TaskKind::RefFreeVerification: return run_verification_benchmark(job);
    case TaskKind::SingleRating: return run_rating_benchmark(job);
  }
  throw ConfigError("unknown task");
}

}  // namespace fare
