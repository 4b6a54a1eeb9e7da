#pragma once

#include <atomic>
#include <functional>
#include <map>
#include <mutex>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "fare/rollout/backend.hpp"

namespace fare {

/// Counters shared by the mock backends.
class MockBackendBase : public ChatBackend {
 public:
  ChatReply complete(const ChatRequest& request) final;

  std::size_t calls() const { return calls_.load(); }
  std::size_t peak_in_flight() const { return peak_.load(); }

 protected:
  virtual std::string complete_one(const ChatRequest& request, int choice) = 0;

 private:
  std::atomic<std::size_t> calls_{0};
  std::atomic<std::size_t> in_flight_{0};
  std::atomic<std::size_t> peak_{0};
};

/// Replays completions from a JSON script:
///   {"responses": {"<message hash hex>": ["...", ...]},
///    "rules": [{"contains": "...", "responses": [...]} |
///              {"contains": "...", "fail_status": 500}],
///    "failures": {"<message hash hex>": 500},
///    "default": ["..."]}
/// Lookup order: failures, responses, rules (first whose text occurs in any
/// message), default. Choice i of an item returns entry i modulo the list
/// length. Unscripted messages raise ProtocolError.
class ScriptedMockBackend : public MockBackendBase {
 public:
  explicit ScriptedMockBackend(const nlohmann::json& script);
  static std::shared_ptr<ScriptedMockBackend> from_file(const std::filesystem::path& path);

 protected:
  std::string complete_one(const ChatRequest& request, int choice) override;

 private:
  struct Rule {
    std::string contains;
    std::vector<std::string> responses;
    int fail_status = 0;
  };
  std::map<std::string, std::vector<std::string>> by_hash_;
  std::map<std::string, int> failures_;
  std::vector<Rule> rules_;
  std::vector<std::string> default_;
};

/// Calls a function for every choice. The function may throw TransportError
/// to simulate endpoint failures.
class FunctionMockBackend : public MockBackendBase {
 public:
  using Fn = std::function<std::string(const ChatRequest& request, int choice)>;
  explicit FunctionMockBackend(Fn fn) : fn_(std::move(fn)) {}

 protected:
  std::string complete_one(const ChatRequest& request, int choice) override {
    return fn_(request, choice);
  }

 private:
  Fn fn_;
};

/// Seed derived from the messages and the choice index only, so mock output
/// does not depend on scheduling.
std::uint64_t choice_seed(const ChatRequest& request, int choice, std::uint64_t salt = 0);

}  // namespace fare
