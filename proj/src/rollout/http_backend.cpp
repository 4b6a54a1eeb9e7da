#include "fare/rollout/http_backend.hpp"

#include <httplib.h>

#include <nlohmann/json.hpp>

#include "fare/core/error.hpp"
#include "fare/core/io.hpp"

namespace fare {

namespace {

using json = nlohmann::json;

std::string excerpt(const std::string& body) {
  constexpr std::size_t kMax = 200;
  return body.size() <= kMax ? body : body.substr(0, kMax) + "...";
}

int int_field(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it != obj.end() && it->is_number_integer() ? it->get<int>() : 0;
}

}  // namespace

HttpBackend::HttpBackend(EndpointDescriptor endpoint) : endpoint_(std::move(endpoint)) {
  const std::string& url = endpoint_.base_url;
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("endpoint.base_url must start with http:// or https://: " + url);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  origin_ = url.substr(0, path_start);
  std::string prefix = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  path_ = prefix + "/v1/chat/completions";
}

std::string chat_request_body(const ChatRequest& request) {
  ordered_json body{{"model", request.model},
                    {"messages", messages_to_json(request.messages)},
                    {"temperature", request.temperature},
                    {"max_tokens", request.max_tokens},
                    {"n", request.n}};
  if (!request.stop.empty()) body["stop"] = request.stop;
  return dump_line(body);
}

ChatReply parse_chat_response(const std::string& body) {
  const json doc = json::parse(body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw ProtocolError("response body is not a JSON object: " + excerpt(body));
  }
  const auto choices = doc.find("choices");
  if (choices == doc.end() || !choices->is_array()) {
    throw ProtocolError("response has no 'choices' array: " + excerpt(body));
  }
  ChatReply reply;
  for (const auto& choice : *choices) {
    const auto msg = choice.find("message");
    if (!choice.is_object() || msg == choice.end() || !msg->is_object()) {
      throw ProtocolError("choice without a 'message' object");
    }
    const auto content = msg->find("content");
    if (content == msg->end() || !content->is_string()) {
      throw ProtocolError("choice message without string 'content'");
    }
    std::string text = content->get<std::string>();
    for (const char* key : {"reasoning_content", "reasoning"}) {
      const auto r = msg->find(key);
      if (r != msg->end() && r->is_string() && !r->get_ref<const std::string&>().empty()) {
        text = "<think>" + r->get<std::string>() + "</think>" + text;
        break;
      }
    }
    reply.choices.push_back(std::move(text));
  }

  // Usage is reported per request; spread it evenly over the choices.
  const int n = static_cast<int>(reply.choices.size());
  int prompt = 0, completion = 0;
  if (const auto usage = doc.find("usage"); usage != doc.end() && usage->is_object()) {
    prompt = int_field(*usage, "prompt_tokens");
    completion = int_field(*usage, "completion_tokens");
  }
  for (int i = 0; i < n; ++i) {
    reply.usage.push_back({prompt, completion / n + (i < completion % n ? 1 : 0)});
  }
  return reply;
}

ChatReply HttpBackend::complete(const ChatRequest& request) {
  httplib::Client client(origin_);
  const auto secs = endpoint_.timeout_ms / 1000;
  const auto usecs = (endpoint_.timeout_ms % 1000) * 1000;
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);
  if (endpoint_.auth_token && !endpoint_.auth_token->empty()) {
    client.set_bearer_token_auth(*endpoint_.auth_token);
  }

  const auto res = client.Post(path_, chat_request_body(request), "application/json");
  if (!res) {
    throw TransportError("request to " + origin_ + path_ + " failed: " +
                             httplib::to_string(res.error()),
                         0);
  }
  if (res->status < 200 || res->status >= 300) {
    throw TransportError(
        "HTTP " + std::to_string(res->status) + " from " + origin_ + path_ + ": " +
            excerpt(res->body),
        res->status);
  }
  return parse_chat_response(res->body);
}

}  // namespace fare
