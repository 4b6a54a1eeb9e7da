#include "fare/rollout/mock_backend.hpp"

#include "fare/core/error.hpp"
#include "fare/core/hash.hpp"
#include "fare/core/io.hpp"
#include "fare/core/rng.hpp"

namespace fare {

namespace {

using json = nlohmann::json;

std::vector<std::string> string_list(const json& value, const std::string& where) {
  if (!value.is_array() || value.empty()) {
    throw ConfigError("mock script: " + where + " must be a non-empty array of strings");
  }
  std::vector<std::string> out;
  for (const auto& v : value) {
    if (!v.is_string()) throw ConfigError("mock script: " + where + " must contain strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

int word_count(std::string_view text) {
  int n = 0;
  bool in_word = false;
  for (char c : text) {
    const bool space = c == ' ' || c == '\n' || c == '\t' || c == '\r';
    if (!space && !in_word) ++n;
    in_word = !space;
  }
  return n;
}

}  // namespace

ChatReply MockBackendBase::complete(const ChatRequest& request) {
  ++calls_;
  const auto now = ++in_flight_;
  for (auto peak = peak_.load(); now > peak && !peak_.compare_exchange_weak(peak, now);) {
  }
  struct Leave {
    std::atomic<std::size_t>& n;
    ~Leave() { --n; }
  } leave{in_flight_};

  int prompt_tokens = 0;
  for (const auto& m : request.messages) prompt_tokens += word_count(m.content);
  ChatReply reply;
  for (int i = 0; i < request.n; ++i) {
    reply.choices.push_back(complete_one(request, request.first_choice + i));
    reply.usage.push_back({prompt_tokens, word_count(reply.choices.back())});
  }
  return reply;
}

ScriptedMockBackend::ScriptedMockBackend(const json& script) {
  if (!script.is_object()) throw ConfigError("mock script must be a JSON object");
  for (const auto& [key, value] : script.items()) {
    if (key == "responses") {
      if (!value.is_object()) throw ConfigError("mock script: responses must be an object");
      for (const auto& [hash, list] : value.items()) {
        by_hash_[hash] = string_list(list, "responses." + hash);
      }
    } else if (key == "failures") {
      if (!value.is_object()) throw ConfigError("mock script: failures must be an object");
      for (const auto& [hash, status] : value.items()) {
        if (!status.is_number_integer()) {
          throw ConfigError("mock script: failures." + hash + " must be an integer status");
        }
        failures_[hash] = status.get<int>();
      }
    } else if (key == "rules") {
      if (!value.is_array()) throw ConfigError("mock script: rules must be an array");
      for (std::size_t i = 0; i < value.size(); ++i) {
        const auto& r = value[i];
        const std::string where = "rules[" + std::to_string(i) + "]";
        if (!r.is_object() || !r.contains("contains") || !r["contains"].is_string()) {
          throw ConfigError("mock script: " + where + " needs a string 'contains'");
        }
        Rule rule{r["contains"].get<std::string>(), {}, 0};
        if (r.contains("fail_status")) {
          if (!r["fail_status"].is_number_integer()) {
            throw ConfigError("mock script: " + where + ".fail_status must be an integer");
          }
          rule.fail_status = r["fail_status"].get<int>();
        } else {
          rule.responses = string_list(r.value("responses", json()), where + ".responses");
        }
        rules_.push_back(std::move(rule));
      }
    } else if (key == "default") {
      default_ = string_list(value, "default");
    } else {
      throw ConfigError("mock script: unknown key '" + key + "'");
    }
  }
}

std::shared_ptr<ScriptedMockBackend> ScriptedMockBackend::from_file(
    const std::filesystem::path& path) {
  const json script = json::parse(read_text(path), nullptr, false);
  if (script.is_discarded()) throw ConfigError("mock script " + path.string() + " is not JSON");
  return std::make_shared<ScriptedMockBackend>(script);
}

std::string ScriptedMockBackend::complete_one(const ChatRequest& request, int choice) {
  const std::string hash = to_hex(message_hash(request.messages));
  const auto pick = [&](const std::vector<std::string>& list) {
    return list[static_cast<std::size_t>(choice) % list.size()];
  };
  if (const auto f = failures_.find(hash); f != failures_.end()) {
    throw TransportError("scripted failure " + std::to_string(f->second), f->second);
  }
  if (const auto it = by_hash_.find(hash); it != by_hash_.end()) return pick(it->second);
  for (const auto& rule : rules_) {
    bool hit = false;
    for (const auto& m : request.messages) hit = hit || m.content.find(rule.contains) != std::string::npos;
    if (!hit) continue;
    if (rule.fail_status != 0) {
      throw TransportError("scripted failure " + std::to_string(rule.fail_status),
                           rule.fail_status);
    }
    return pick(rule.responses);
  }
  if (!default_.empty()) return pick(default_);
  throw ProtocolError("mock script has no completion for messages " + hash);
}

std::uint64_t choice_seed(const ChatRequest& request, int choice, std::uint64_t salt) {
  return mix_seed(mix_seed(message_hash(request.messages), static_cast<std::uint64_t>(choice)),
                  salt);
}

}  // namespace fare
