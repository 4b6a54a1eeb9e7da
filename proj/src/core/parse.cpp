#include "fare/core/parse.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <vector>

namespace fare {
namespace {

constexpr std::string_view kThinkOpen = "<think>";
constexpr std::string_view kThinkClose = "</think>";
constexpr std::string_view kHarmonyStart = "<|start|>assistant";
constexpr std::string_view kHarmonyAnalysis = "<|channel|>analysis<|message|>";
constexpr std::string_view kHarmonyEnd = "<|end|>";
constexpr std::string_view kHarmonyFinal = "<|start|>assistant<|channel|>final<|message|>";
constexpr std::string_view kHarmonyFinalShort = "<|channel|>final<|message|>";

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string_view trim_decoration(std::string_view s) {
  auto deco = [](char c) { return is_space(c) || c == '*' || c == '`' || c == '_'; };
  while (!s.empty() && deco(s.front())) s.remove_prefix(1);
  while (!s.empty() && deco(s.back())) s.remove_suffix(1);
  return s;
}

bool iequals_prefix(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[i])) !=
        std::tolower(static_cast<unsigned char>(prefix[i]))) {
      return false;
    }
  }
  return true;
}

std::size_t ifind(std::string_view haystack, std::string_view needle) {
  if (needle.size() > haystack.size()) return std::string_view::npos;
  for (std::size_t i = 0; i + needle.size() <= haystack.size(); ++i) {
    if (iequals_prefix(haystack.substr(i), needle)) return i;
  }
  return std::string_view::npos;
}

std::string_view skip_leading(std::string_view s, std::string_view chars) {
  while (!s.empty() && chars.find(s.front()) != std::string_view::npos) s.remove_prefix(1);
  return s;
}

// If `line` is a verdict line, returns the text after the marker's colon.
std::optional<std::string_view> verdict_value(std::string_view line) {
  std::string_view s = skip_leading(line, " \t*#>-");
  if (!iequals_prefix(s, "verdict")) return std::nullopt;
  s.remove_prefix(7);
  s = skip_leading(s, " \t*");
  if (s.empty() || s.front() != ':') return std::nullopt;
  s.remove_prefix(1);
  return s;
}

std::string_view strip_brackets(std::string_view s) {
  s = trim_decoration(s);
  while (s.size() >= 2 && s.front() == '[' && s.back() == ']') {
    s = trim(s.substr(1, s.size() - 2));
  }
  return s;
}

std::optional<int> parse_int(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  int value = 0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || s.empty()) return std::nullopt;
  return value;
}

struct Line {
  std::size_t begin;
  std::string_view text;
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back({start, line});
    if (end == text.size()) break;
    start = end + 1;
  }
  return lines;
}

std::optional<Judgment> judgment_from_value(TaskKind task, std::string_view raw,
                                            std::string& reason) {
  std::string_view value = trim_decoration(raw);
  while (!value.empty() && value.back() == '.') value.remove_suffix(1);
  value = strip_brackets(value);
  if (value.empty()) {
    reason = "empty verdict";
    return std::nullopt;
  }

  switch (task) {
    case TaskKind::Pairwise:
    case TaskKind::RefBasedVerification:
    case TaskKind::RefFreeVerification: {
      if (value.size() != 1 || (std::toupper(static_cast<unsigned char>(value[0])) != 'A' &&
                                std::toupper(static_cast<unsigned char>(value[0])) != 'B')) {
        reason = "verdict '" + std::string(raw) + "' is not [A] or [B]";
        return std::nullopt;
      }
      const bool is_a = std::toupper(static_cast<unsigned char>(value[0])) == 'A';
      if (task == TaskKind::Pairwise) return PairChoice{is_a ? Choice::A : Choice::B};
      return BinaryVerdict{is_a ? Verdict::Correct : Verdict::Incorrect};
    }
    case TaskKind::StepLevel: {
      if (iequals_prefix(value, "step")) value = trim(value.substr(4));
      const auto n = parse_int(value);
      if (!n) {
        reason = "verdict '" + std::string(raw) + "' is not a step number";
        return std::nullopt;
      }
      if (*n < -1) {
        reason = "step number " + std::to_string(*n) + " is below -1";
        return std::nullopt;
      }
      return ErrorStep{*n};
    }
    case TaskKind::SingleRating: {
      const auto n = parse_int(value);
      if (!n) {
        reason = "verdict '" + std::string(raw) + "' is not an integer rating";
        return std::nullopt;
      }
      if (*n < kMinRating || *n > kMaxRating) {
        reason = "rating " + std::to_string(*n) + " outside [1, 5]";
        return std::nullopt;
      }
      return Rating{*n};
    }
  }
  reason = "unknown task";
  return std::nullopt;
}

}  // namespace

ReasoningSplit split_reasoning(std::string_view text) {
  std::size_t offset = 0;
  while (offset < text.size() && is_space(text[offset])) ++offset;
  std::string_view s = text.substr(offset);

  auto finish = [&](std::size_t consumed) {
    // Swallow whitespace between the channel and the answer.
    while (consumed < text.size() && is_space(text[consumed])) ++consumed;
    std::string_view answer = text.substr(consumed);
    for (std::string_view tail : {std::string_view("<|return|>"), kHarmonyEnd}) {
      const std::string_view trimmed = trim(answer);
      if (trimmed.size() >= tail.size() &&
          trimmed.substr(trimmed.size() - tail.size()) == tail) {
        answer = trimmed.substr(0, trimmed.size() - tail.size());
      }
    }
    return ReasoningSplit{std::string(text.substr(0, consumed)), std::string(answer)};
  };

  if (s.substr(0, kThinkOpen.size()) == kThinkOpen) {
    const std::size_t close = s.find(kThinkClose);
    if (close == std::string_view::npos) return ReasoningSplit{std::string(text), ""};
    return finish(offset + close + kThinkClose.size());
  }

  std::size_t pos = 0;
  if (s.substr(0, kHarmonyStart.size()) == kHarmonyStart) pos = kHarmonyStart.size();
  if (s.substr(pos, kHarmonyAnalysis.size()) == kHarmonyAnalysis) {
    const std::size_t end = s.find(kHarmonyEnd, pos + kHarmonyAnalysis.size());
    if (end == std::string_view::npos) return ReasoningSplit{std::string(text), ""};
    std::size_t consumed = end + kHarmonyEnd.size();
    for (std::string_view final_header : {kHarmonyFinal, kHarmonyFinalShort}) {
      if (s.substr(consumed, final_header.size()) == final_header) {
        consumed += final_header.size();
        break;
      }
    }
    return finish(offset + consumed);
  }

  return ReasoningSplit{"", std::string(text)};
}

ParseResult parse_judgment(TaskKind task, std::string_view text) {
  const ReasoningSplit split = split_reasoning(text);
  const std::string_view body = split.answer;
  const std::vector<Line> lines = split_lines(body);

  std::optional<std::size_t> marker_line;
  for (std::size_t i = lines.size(); i-- > 0;) {
    if (verdict_value(lines[i].text)) {
      marker_line = i;
      break;
    }
  }
  if (!marker_line) return ParseFailure{"no verdict marker", std::string(text)};

  std::string_view value = *verdict_value(lines[*marker_line].text);
  if (ifind(value, "verdict") != std::string_view::npos &&
      ifind(value, ":") != std::string_view::npos) {
    return ParseFailure{"multiple verdict markers on one line", std::string(text)};
  }
  if (trim_decoration(value).empty()) {
    // "Verdict:" alone on its line; the value sits on the next non-empty line.
    for (std::size_t i = *marker_line + 1; i < lines.size(); ++i) {
      if (!trim(lines[i].text).empty()) {
        value = lines[i].text;
        break;
      }
    }
  }

  std::string reason;
  auto judgment = judgment_from_value(task, value, reason);
  if (!judgment) return ParseFailure{reason, std::string(text)};

  std::string_view prefix = body.substr(0, lines[*marker_line].begin);
  if (const std::size_t at = prefix.find("Explanation:"); at != std::string_view::npos) {
    prefix = prefix.substr(at + std::string_view("Explanation:").size());
  }
  prefix = trim_decoration(prefix);

  EvaluatorOutput out;
  if (!prefix.empty()) out.critique = std::string(prefix);
  out.judgment = *judgment;
  return out;
}

std::string verdict_line(const Judgment& judgment) {
  return "Verdict: " + format_verdict(judgment);
}

}  // namespace fare
