#pragma once

#include <string>

#include "fare/rollout/backend.hpp"

namespace fare {

/// OpenAI-compatible chat completions over HTTP(S):
/// POST {base_url}/v1/chat/completions with {model, messages, temperature,
/// max_tokens, n[, stop]}; reads choices[i].message.content and usage.
/// A separate reasoning field ("reasoning_content" or "reasoning") is folded
/// back into the text as a leading <think>...</think> block.
class HttpBackend : public ChatBackend {
 public:
  explicit HttpBackend(EndpointDescriptor endpoint);

  ChatReply complete(const ChatRequest& request) override;

 private:
  EndpointDescriptor endpoint_;
  std::string origin_;  // scheme://host[:port]
  std::string path_;    // prefix + /v1/chat/completions
};

/// Request body as sent on the wire.
std::string chat_request_body(const ChatRequest& request);

/// Parses a response body. Throws ProtocolError on anything unexpected.
ChatReply parse_chat_response(const std::string& body);

}  // namespace fare
