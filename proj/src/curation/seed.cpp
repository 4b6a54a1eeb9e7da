#include "fare/curation/seed.hpp"

#include "fare/core/error.hpp"
#include "fare/core/io.hpp"

namespace fare {

std::string_view to_string(SeedKind kind) {
  return kind == SeedKind::Math ? "math" : "tool_call";
}

std::optional<SeedKind> parse_seed_kind(std::string_view name) {
  if (name == "math" || name == "answer") return SeedKind::Math;
  if (name == "tool_call" || name == "tool" || name == "function_call") return SeedKind::ToolCall;
  return std::nullopt;
}

namespace {

using json = nlohmann::json;

std::string field(const json& obj, const char* key, bool required) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) {
    if (required) throw DataError(std::string("missing field '") + key + "'");
    return {};
  }
  if (!it->is_string()) throw DataError(std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

RawResponse response_from_json(const json& value) {
  if (value.is_string()) return {value.get<std::string>(), "", 0.0};
  if (!value.is_object()) throw DataError("response must be a string or object");
  RawResponse r;
  r.text = field(value, "text", true);
  r.generator_id = field(value, "generator", false);
  if (const auto it = value.find("temperature"); it != value.end()) {
    if (!it->is_number()) throw DataError("temperature must be a number");
    r.temperature = it->get<double>();
    if (r.temperature < 0) throw DataError("temperature must be >= 0");
  }
  return r;
}

}  // namespace

std::vector<SeedBundle> read_seeds(const std::filesystem::path& path) {
  const auto rows = read_jsonl(path);
  std::vector<SeedBundle> out;
  out.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const json& row = rows[i];
    try {
      if (!row.is_object()) throw DataError("seed must be a JSON object");
      SeedBundle b;
      b.record.id = field(row, "id", true);
      b.record.question = field(row, "question", true);
      b.record.gold_answer = field(row, "gold_answer", false);
      b.record.domain_tag = field(row, "domain", false);
      b.record.source_dataset = field(row, "dataset", false);
      if (const auto kind = field(row, "kind", false); !kind.empty()) {
        const auto k = parse_seed_kind(kind);
        if (!k) throw DataError("unknown seed kind '" + kind + "'");
        b.record.kind = *k;
      }
      if (const auto it = row.find("responses"); it != row.end()) {
        if (!it->is_array()) throw DataError("responses must be an array");
        for (const auto& r : *it) b.responses.push_back(response_from_json(r));
      }
      out.push_back(std::move(b));
    } catch (const DataError& e) {
      throw DataError(path.string() + ": record " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace fare
