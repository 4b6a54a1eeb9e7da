#include "fare/rollout/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <thread>

#include "fare/core/error.hpp"
#include "fare/core/hash.hpp"
#include "fare/core/rng.hpp"

namespace fare {

namespace {

bool retryable(int status) { return status == 0 || status == 429 || status >= 500; }

void backoff(const EndpointDescriptor& endpoint, int attempt, Rng& jitter) {
  if (endpoint.retry_base_ms <= 0) return;
  const double base = endpoint.retry_base_ms * static_cast<double>(1ULL << std::min(attempt, 16));
  const auto ms = static_cast<long long>(base * (0.5 + jitter.uniform01()));
  std::this_thread::sleep_for(std::chrono::milliseconds(ms));
}

ChatReply complete_with_retries(ChatBackend& backend, const EndpointDescriptor& endpoint,
                                const ChatRequest& request, std::vector<std::string>& notes,
                                Rng& jitter) {
  for (int attempt = 0;; ++attempt) {
    try {
      return backend.complete(request);
    } catch (const TransportError& e) {
      notes.push_back("attempt " + std::to_string(attempt + 1) + ": " + e.what());
      if (!retryable(e.last_status()) || attempt >= endpoint.max_retries) {
        throw TransportError("giving up after " + std::to_string(attempt + 1) +
                                 " attempt(s): " + e.what(),
                             e.last_status());
      }
    } catch (const ProtocolError& e) {
      notes.push_back("attempt " + std::to_string(attempt + 1) + ": " + e.what());
      throw;
    }
    backoff(endpoint, attempt, jitter);
  }
}

// Fills result in place so attempt notes survive a throw.
void sample_into(RolloutResult& result, ChatBackend& backend, const EndpointDescriptor& endpoint,
                 const ChatMessages& messages, const SamplingParams& params) {
  Rng jitter(message_hash(messages));
  while (static_cast<int>(result.completions.size()) < params.k) {
    const int have = static_cast<int>(result.completions.size());
    ChatRequest req{endpoint.model,     messages,
                    params.temperature, params.max_tokens,
                    endpoint.use_n_parameter ? params.k - have : 1,
                    params.stop,        have};
    ChatReply reply = complete_with_retries(backend, endpoint, req, result.failures, jitter);
    if (reply.choices.empty()) throw ProtocolError("endpoint returned zero choices");
    const std::size_t take = std::min<std::size_t>(reply.choices.size(),
                                                   static_cast<std::size_t>(params.k - have));
    for (std::size_t i = 0; i < take; ++i) {
      result.completions.push_back(std::move(reply.choices[i]));
      result.usage.push_back(i < reply.usage.size() ? reply.usage[i] : CompletionUsage{});
    }
  }
}

}  // namespace

RolloutResult sample_k(ChatBackend& backend, const EndpointDescriptor& endpoint,
                       const ChatMessages& messages, const SamplingParams& params) {
  validate(params);
  RolloutResult result;
  sample_into(result, backend, endpoint, messages, params);
  return result;
}

std::vector<RolloutResult> run_rollout_batch(ChatBackend& backend,
                                             const EndpointDescriptor& endpoint,
                                             std::span<const RolloutRequest> batch,
                                             const SamplingParams& params,
                                             std::size_t max_in_flight) {
  if (max_in_flight < 1) throw ConfigError("max_in_flight must be >= 1");
  validate(params);
  std::vector<RolloutResult> results(batch.size());
  std::atomic<std::size_t> next{0};

  const auto worker = [&] {
    for (std::size_t i = next++; i < batch.size(); i = next++) {
      RolloutResult& out = results[i];
      out.input_id = batch[i].input_id;
      try {
        sample_into(out, backend, endpoint, batch[i].messages, params);
      } catch (const TransportError& e) {
        out.error = RolloutErrorKind::Transport;
        out.last_status = e.last_status();
      } catch (const ProtocolError&) {
        out.error = RolloutErrorKind::Protocol;
      } catch (const std::exception& e) {
        out.error = RolloutErrorKind::Protocol;
        out.failures.push_back(e.what());
      }
      if (!out.ok()) {
        out.completions.clear();
        out.usage.clear();
      }
    }
  };

  const std::size_t workers = std::min(max_in_flight, batch.size());
  if (workers <= 1) {
    worker();
    return results;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return results;
}

}  // namespace fare
