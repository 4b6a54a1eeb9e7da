#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fare/core/types.hpp"

namespace fare {

struct SamplingParams {
  int k = 4;
  double temperature = 0.9;
  int max_tokens = 2048;
  std::vector<std::string> stop;
};

/// Throws ConfigError on k < 1, negative temperature or max_tokens < 1.
void validate(const SamplingParams& params);

enum class BackendKind { Http, Mock };

std::string_view to_string(BackendKind kind);
std::optional<BackendKind> parse_backend_kind(std::string_view name);

struct EndpointDescriptor {
  BackendKind backend = BackendKind::Http;
  std::string base_url;
  std::string model;
  std::optional<std::string> auth_token;
  int timeout_ms = 120000;
  int max_retries = 3;
  int retry_base_ms = 500;
  /// Ask for all k completions in one request via "n"; otherwise issue k
  /// requests with n = 1.
  bool use_n_parameter = true;
  /// Mock only: JSON script file (see ScriptedMockBackend).
  std::filesystem::path mock_script;
};

/// Throws ConfigError when required fields are missing.
void validate(const EndpointDescriptor& endpoint);

struct ChatRequest {
  std::string model;
  ChatMessages messages;
  double temperature = 0.0;
  int max_tokens = 0;
  int n = 1;
  std::vector<std::string> stop;
  /// Index of the first requested choice within the item's k completions.
  /// Not sent over the wire; lets mocks stay deterministic when completions
  /// are split across several requests.
  int first_choice = 0;
};

struct CompletionUsage {
  int prompt_tokens = 0;
  int completion_tokens = 0;
  friend bool operator==(const CompletionUsage&, const CompletionUsage&) = default;
};

struct ChatReply {
  std::vector<std::string> choices;
  /// One entry per choice.
  std::vector<CompletionUsage> usage;
};

/// One chat-completions call. Implementations throw TransportError (with the
/// HTTP status, 0 when no response arrived) or ProtocolError, and must be
/// safe to call from several threads at once.
class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual ChatReply complete(const ChatRequest& request) = 0;
};

/// Http -> HttpBackend; Mock -> ScriptedMockBackend loaded from mock_script.
std::shared_ptr<ChatBackend> make_backend(const EndpointDescriptor& endpoint);

}  // namespace fare
