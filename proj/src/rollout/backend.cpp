#include "fare/rollout/backend.hpp"

#include "fare/core/error.hpp"
#include "fare/rollout/http_backend.hpp"
#include "fare/rollout/mock_backend.hpp"

namespace fare {

void validate(const SamplingParams& params) {
  if (params.k < 1) throw ConfigError("sampling.k must be >= 1");
  if (!(params.temperature >= 0.0)) throw ConfigError("sampling.temperature must be >= 0");
  if (params.max_tokens < 1) throw ConfigError("sampling.max_tokens must be >= 1");
}

std::string_view to_string(BackendKind kind) { return kind == BackendKind::Http ? "http" : "mock"; }

std::optional<BackendKind> parse_backend_kind(std::string_view name) {
  if (name == "http") return BackendKind::Http;
  if (name == "mock") return BackendKind::Mock;
  return std::nullopt;
}

void validate(const EndpointDescriptor& endpoint) {
  if (endpoint.backend == BackendKind::Http && endpoint.base_url.empty()) {
    throw ConfigError("endpoint.base_url is required for the http backend");
  }
  if (endpoint.backend == BackendKind::Mock && endpoint.mock_script.empty()) {
    throw ConfigError("endpoint.mock_script is required for the mock backend");
  }
  if (endpoint.max_retries < 0) throw ConfigError("endpoint.max_retries must be >= 0");
  if (endpoint.timeout_ms < 1) throw ConfigError("endpoint.timeout_ms must be >= 1");
  if (endpoint.retry_base_ms < 0) throw ConfigError("endpoint.retry_base_ms must be >= 0");
}

std::shared_ptr<ChatBackend> make_backend(const EndpointDescriptor& endpoint) {
  validate(endpoint);
  if (endpoint.backend == BackendKind::Mock) {
    return ScriptedMockBackend::from_file(endpoint.mock_script);
  }
  return std::make_shared<HttpBackend>(endpoint);
}

}  // namespace fare
