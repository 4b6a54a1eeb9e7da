#include "fare/core/io.hpp"

#include <fstream>
#include <sstream>

#include "fare/core/error.hpp"
#include "fare/core/prompt.hpp"

namespace fare {
namespace {

using json = nlohmann::json;

std::string require_string(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw DataError(std::string("missing or non-string field '") + key + "'");
  }
  return it->get<std::string>();
}

std::string optional_string(const json& obj, const char* key, std::string fallback = {}) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  if (!it->is_string()) throw DataError(std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

}  // namespace

ordered_json judgment_to_json(const Judgment& judgment) {
  if (const auto* p = std::get_if<PairChoice>(&judgment)) return p->choice == Choice::A ? "A" : "B";
  if (const auto* s = std::get_if<ErrorStep>(&judgment)) return s->index;
  if (const auto* v = std::get_if<BinaryVerdict>(&judgment))
    return v->verdict == Verdict::Correct ? "correct" : "incorrect";
  return std::get<Rating>(judgment).value;
}

Judgment judgment_from_json(const json& value, TaskKind task) {
  switch (task) {
    case TaskKind::Pairwise: {
      if (value.is_string()) {
        const auto s = value.get<std::string>();
        if (s == "A" || s == "[A]") return PairChoice{Choice::A};
        if (s == "B" || s == "[B]") return PairChoice{Choice::B};
      }
      throw DataError("pairwise gold must be \"A\" or \"B\", got " + value.dump());
    }
    case TaskKind::StepLevel:
      if (value.is_number_integer()) return ErrorStep{value.get<int>()};
      throw DataError("step-level gold must be an integer step index, got " + value.dump());
    case TaskKind::RefBasedVerification:
    case TaskKind::RefFreeVerification:
      if (value.is_boolean()) {
        return BinaryVerdict{value.get<bool>() ? Verdict::Correct : Verdict::Incorrect};
      }
      if (value.is_string()) {
        const auto s = value.get<std::string>();
        if (s == "correct" || s == "Correct" || s == "[A]") return BinaryVerdict{Verdict::Correct};
        if (s == "incorrect" || s == "Incorrect" || s == "[B]")
          return BinaryVerdict{Verdict::Incorrect};
      }
      throw DataError("verification gold must be \"correct\" or \"incorrect\", got " +
                      value.dump());
    case TaskKind::SingleRating:
      if (value.is_number_integer()) return Rating{value.get<int>()};
      throw DataError("rating gold must be an integer, got " + value.dump());
  }
  throw DataError("unknown task");
}

ordered_json messages_to_json(const ChatMessages& messages) {
  ordered_json out = ordered_json::array();
  for (const auto& m : messages) {
    out.push_back(ordered_json{{"role", to_string(m.role)}, {"content", m.content}});
  }
  return out;
}

ChatMessages messages_from_json(const json& value) {
  if (!value.is_array()) throw DataError("messages must be an array");
  ChatMessages out;
  for (const auto& m : value) {
    if (!m.is_object()) throw DataError("message must be an object");
    const auto role = parse_role(require_string(m, "role"));
    if (!role) throw DataError("unknown message role " + m.at("role").dump());
    out.push_back({*role, require_string(m, "content")});
  }
  return out;
}

ordered_json sample_to_json(const LabeledSample& sample) {
  const EvalInput& in = sample.input;
  ordered_json responses;
  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, PairwiseResponses>) {
          responses = {{"a", r.response_a}, {"b", r.response_b}};
        } else if constexpr (std::is_same_v<T, StepResponses>) {
          responses = {{"steps", r.steps}};
        } else if constexpr (std::is_same_v<T, RefBasedResponses>) {
          responses = {{"candidate", r.candidate}, {"reference", r.reference}};
        } else {
          responses = {{"response", r.response}};
        }
      },
      in.responses);

  return ordered_json{{"id", in.id},
                      {"task", to_string(in.protocol.task)},
                      {"variant", to_string(in.protocol.variant)},
                      {"rubric_id", in.protocol.rubric_id},
                      {"rubric", in.protocol.rubric_text},
                      {"question", in.question},
                      {"responses", responses},
                      {"gold", judgment_to_json(sample.gold)},
                      {"provenance", to_string(sample.provenance)},
                      {"domain", sample.domain_tag},
                      {"source", sample.source_dataset}};
}

LabeledSample sample_from_json(const json& value) {
  if (!value.is_object()) throw DataError("sample must be a JSON object");
  LabeledSample s;
  s.input.id = require_string(value, "id");

  const auto task = parse_task_kind(require_string(value, "task"));
  if (!task) throw DataError("unknown task " + value.at("task").dump());
  const auto variant = parse_template_variant(optional_string(value, "variant", "with_critique"));
  if (!variant) throw DataError("unknown variant " + value.at("variant").dump());

  s.input.protocol = default_protocol(*task, *variant);
  s.input.protocol.rubric_text = optional_string(value, "rubric", s.input.protocol.rubric_text);
  s.input.protocol.rubric_id = optional_string(value, "rubric_id", s.input.protocol.rubric_id);
  s.input.question = require_string(value, "question");

  const auto rit = value.find("responses");
  if (rit == value.end() || !rit->is_object()) throw DataError("missing object field 'responses'");
  const json& r = *rit;
  switch (*task) {
    case TaskKind::Pairwise:
      s.input.responses = PairwiseResponses{require_string(r, "a"), require_string(r, "b")};
      break;
    case TaskKind::StepLevel: {
      const auto sit = r.find("steps");
      if (sit == r.end() || !sit->is_array()) throw DataError("missing array field 'steps'");
      StepResponses steps;
      for (const auto& step : *sit) {
        if (!step.is_string()) throw DataError("steps must be strings");
        steps.steps.push_back(step.get<std::string>());
      }
      s.input.responses = std::move(steps);
      break;
    }
    case TaskKind::RefBasedVerification:
      s.input.responses =
          RefBasedResponses{require_string(r, "candidate"), require_string(r, "reference")};
      break;
    case TaskKind::RefFreeVerification:
      s.input.responses = RefFreeResponses{require_string(r, "response")};
      break;
    case TaskKind::SingleRating:
      s.input.responses = RatingResponses{require_string(r, "response")};
      break;
  }

  const auto git = value.find("gold");
  if (git == value.end()) throw DataError("missing field 'gold'");
  s.gold = judgment_from_json(*git, *task);

  const auto provenance = parse_provenance(optional_string(value, "provenance", "existing"));
  if (!provenance) throw DataError("unknown provenance " + value.at("provenance").dump());
  s.provenance = *provenance;
  s.domain_tag = optional_string(value, "domain");
  s.source_dataset = optional_string(value, "source");

  try {
    validate(s);
  } catch (const DomainError& e) {
    throw DataError(e.what());
  }
  return s;
}

std::vector<json> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<json> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::parse_error& e) {
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<LabeledSample> read_samples(const std::filesystem::path& path) {
  const auto rows = read_jsonl(path);
  std::vector<LabeledSample> out;
  out.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    try {
      out.push_back(sample_from_json(rows[i]));
    } catch (const DataError& e) {
      throw DataError(path.string() + ": record " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return out;
}

void write_samples(const std::filesystem::path& path, const std::vector<LabeledSample>& samples) {
  std::string content;
  for (const auto& s : samples) {
    content += dump_line(sample_to_json(s));
    content += '\n';
  }
  write_text_atomic(path, content);
}

std::string dump_line(const ordered_json& value) {
  return value.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_atomic(const std::filesystem::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (out) out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      std::filesystem::remove(tmp, ec);
      throw DataError("failed to write " + path.string());
    }
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw DataError("failed to move " + tmp.string() + " into place: " + ec.message());
  }
}

}  // namespace fare
