#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fare/rollout/backend.hpp"

namespace fare {

enum class RolloutErrorKind { None, Transport, Protocol };

struct RolloutResult {
  std::string input_id;
  std::vector<std::string> completions;
  std::vector<CompletionUsage> usage;
  /// Notes for failed attempts, including ones that were retried.
  std::vector<std::string> failures;
  RolloutErrorKind error = RolloutErrorKind::None;
  int last_status = 0;

  bool ok() const { return error == RolloutErrorKind::None; }
};

struct RolloutRequest {
  std::string input_id;
  ChatMessages messages;
};

/// Exactly params.k completions. Retries transport failures with status 0,
/// 429 or 5xx using exponential backoff with jitter; other statuses and
/// protocol errors fail at once. Throws TransportError (last status) or
/// ProtocolError.
RolloutResult sample_k(ChatBackend& backend, const EndpointDescriptor& endpoint,
                       const ChatMessages& messages, const SamplingParams& params);

/// Runs sample_k over a batch with at most max_in_flight outstanding
/// requests. Results keep input order; failures are embedded per item.
std::vector<RolloutResult> run_rollout_batch(ChatBackend& backend,
                                             const EndpointDescriptor& endpoint,
                                             std::span<const RolloutRequest> batch,
                                             const SamplingParams& params,
                                             std::size_t max_in_flight);

}  // namespace fare
