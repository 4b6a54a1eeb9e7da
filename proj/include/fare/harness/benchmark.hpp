#pragma once

#include <optional>
#include <vector>

#include "fare/harness/report.hpp"
#include "fare/rollout/engine.hpp"

namespace fare {

struct BenchmarkFlags {
  bool consistent = false;  // pairwise only: judge both orders
  int sc_k = 1;             // self-consistency samples per judgment
  bool direct = false;      // direct-judgment prompts
  /// Leave samples whose requests failed out of the metric instead of
  /// counting them as incorrect.
  bool drop_failed_requests = false;
};

struct BenchmarkJob {
  TaskKind task = TaskKind::Pairwise;
  std::vector<LabeledSample> samples;
  ChatBackend* backend = nullptr;
  EndpointDescriptor endpoint;
  SamplingParams params;  // k is replaced by flags.sc_k
  BenchmarkFlags flags;
  std::size_t max_in_flight = 8;
};

/// Throws ConfigError for an inconsistent job (wrong sample tasks, sc_k < 1,
/// consistent on a non-pairwise task, missing backend).
void validate(const BenchmarkJob& job);

/// Consistent or single-order pairwise accuracy. Extras in consistent mode:
/// accuracy_original and accuracy_swapped.
MetricReport run_pairwise_benchmark(const BenchmarkJob& job);

/// ProcessBench-style F1 with acc_error and acc_correct extras.
MetricReport run_step_benchmark(const BenchmarkJob& job);

MetricReport run_verification_benchmark(const BenchmarkJob& job);

/// Pearson correlation of predicted ratings with reference ratings, taken
/// from `human` when given, else from each sample's gold rating. Samples
/// without a parseable rating are excluded.
MetricReport run_rating_benchmark(const BenchmarkJob& job,
                                  const std::optional<std::vector<double>>& human = std::nullopt);

/// Dispatches on job.task.
MetricReport run_benchmark(const BenchmarkJob& job);

}  // namespace fare
