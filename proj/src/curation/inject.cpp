#include "fare/curation/inject.hpp"

#include <algorithm>
#include <vector>

#include "fare/core/error.hpp"
#include "fare/core/rng.hpp"

namespace fare {

namespace {

constexpr std::array<std::string_view, 8> kExtraNames = {
    "verbose", "debug", "timeout", "extra_param", "format", "limit", "callback", "retries"};

ordered_json extra_value(std::uint64_t pick) {
  switch (pick % 3) {
    case 0: return true;
    case 1: return 10;
    default: return "auto";
  }
}

// Same JSON type class for the purpose of InvalidType.
int type_class(const ordered_json& v) {
  if (v.is_boolean()) return 0;
  if (v.is_number()) return 1;
  if (v.is_string()) return 2;
  if (v.is_object()) return 3;
  if (v.is_array()) return 4;
  return 5;
}

ordered_json retyped(const ordered_json& v) {
  if (v.is_number()) return v.dump();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    const auto as_json = ordered_json::parse(s, nullptr, false);
    if (!as_json.is_discarded() && as_json.is_number()) return as_json;
    return 42;
  }
  return v.dump();
}

std::string serialize(const std::string& name, const ordered_json& args) {
  return ordered_json{{"name", name}, {"arguments", args}}.dump();
}

std::string syntax_error(const std::string& text, Rng& rng) {
  switch (rng.uniform_index(3)) {
    case 0: {
      // Drop one quote character, leaving an unbalanced string.
      std::vector<std::size_t> quotes;
      for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '"' && (i == 0 || text[i - 1] != '\\')) quotes.push_back(i);
      }
      std::string out = text;
      out.erase(quotes[rng.uniform_index(quotes.size())], 1);
      return out;
    }
    case 1: {
      // Closing brace replaced by a parenthesis.
      std::string out = text;
      out.back() = ')';
      return out;
    }
    default: {
      std::string out = text;
      out.insert(out.size() - 1, ",");
      return out;
    }
  }
}

}  // namespace

FunctionCall FunctionCall::parse(std::string_view text) {
  const auto j = ordered_json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw DataError("function call is not a JSON object");
  const auto name = j.find("name");
  if (name == j.end() || !name->is_string()) throw DataError("function call has no string 'name'");
  auto args = j.find("arguments");
  if (args == j.end()) args = j.find("parameters");
  FunctionCall call{name->get<std::string>(), ordered_json::object()};
  if (args != j.end()) {
    if (!args->is_object()) throw DataError("function call 'arguments' must be an object");
    call.arguments = *args;
  }
  return call;
}

std::string FunctionCall::raw_form() const { return serialize(name, arguments); }

std::string_view to_string(CorruptionKind kind) {
  switch (kind) {
    case CorruptionKind::InvalidType: return "invalid_type";
    case CorruptionKind::MissingArgument: return "missing_argument";
    case CorruptionKind::ExtraArgument: return "extra_argument";
    case CorruptionKind::SyntaxError: return "syntax_error";
    case CorruptionKind::MalformedJson: return "malformed_json";
  }
  return "unknown";
}

std::optional<CorruptionKind> parse_corruption_kind(std::string_view name) {
  for (auto k : kAllCorruptions) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::optional<std::string> inject_error(const FunctionCall& call, CorruptionKind kind,
                                        std::uint64_t seed) {
  Rng rng(mix_seed(seed, to_string(kind)));
  std::vector<std::string> keys;
  for (const auto& [k, _] : call.arguments.items()) keys.push_back(k);

  switch (kind) {
    case CorruptionKind::InvalidType: {
      if (keys.empty()) return std::nullopt;
      auto args = call.arguments;
      auto& slot = args[keys[rng.uniform_index(keys.size())]];
      slot = retyped(slot);
      return serialize(call.name, args);
    }
    case CorruptionKind::MissingArgument: {
      if (keys.empty()) return std::nullopt;
      auto args = call.arguments;
      args.erase(keys[rng.uniform_index(keys.size())]);
      return serialize(call.name, args);
    }
    case CorruptionKind::ExtraArgument: {
      std::string name;
      const auto start = rng.uniform_index(kExtraNames.size());
      for (std::size_t i = 0; i < kExtraNames.size() && name.empty(); ++i) {
        const std::string candidate(kExtraNames[(start + i) % kExtraNames.size()]);
        if (!call.arguments.contains(candidate)) name = candidate;
      }
      for (int suffix = 2; name.empty(); ++suffix) {
        const std::string candidate = "extra_param_" + std::to_string(suffix);
        if (!call.arguments.contains(candidate)) name = candidate;
      }
      auto args = call.arguments;
      args[name] = extra_value(rng.next());
      return serialize(call.name, args);
    }
    case CorruptionKind::SyntaxError:
      return syntax_error(call.raw_form(), rng);
    case CorruptionKind::MalformedJson: {
      std::string text = call.raw_form();
      text.pop_back();
      return text;
    }
  }
  return std::nullopt;
}

std::string_view to_string(CallDefect defect) {
  switch (defect) {
    case CallDefect::None: return "none";
    case CallDefect::Unparseable: return "unparseable";
    case CallDefect::WrongName: return "wrong_name";
    case CallDefect::MissingArgument: return "missing_argument";
    case CallDefect::ExtraArgument: return "extra_argument";
    case CallDefect::InvalidType: return "invalid_type";
  }
  return "unknown";
}

CallDefect diagnose_call(std::string_view candidate, const FunctionCall& reference) {
  FunctionCall call;
  try {
    call = FunctionCall::parse(candidate);
  } catch (const DataError&) {
    return CallDefect::Unparseable;
  }
  if (call.name != reference.name) return CallDefect::WrongName;
  for (const auto& [k, _] : reference.arguments.items()) {
    if (!call.arguments.contains(k)) return CallDefect::MissingArgument;
  }
  for (const auto& [k, _] : call.arguments.items()) {
    if (!reference.arguments.contains(k)) return CallDefect::ExtraArgument;
  }
  for (const auto& [k, v] : reference.arguments.items()) {
    if (type_class(call.arguments.at(k)) != type_class(v)) return CallDefect::InvalidType;
  }
  return CallDefect::None;
}

}  // namespace fare
