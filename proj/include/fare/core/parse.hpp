#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "fare/core/types.hpp"

namespace fare {

struct ParseFailure {
  std::string reason;
  std::string raw_text;
  friend bool operator==(const ParseFailure&, const ParseFailure&) = default;
};

using ParseResult = std::variant<EvaluatorOutput, ParseFailure>;

inline bool parsed_ok(const ParseResult& r) { return std::holds_alternative<EvaluatorOutput>(r); }

/// Model output split into an optional leading reasoning channel and the
/// visible answer. Recognized channels: a leading `<think>...</think>` block
/// and a harmony-style `<|channel|>analysis<|message|>...<|end|>` segment
/// (followed by an optional `<|start|>assistant<|channel|>final<|message|>`).
struct ReasoningSplit {
  /// Exact prefix including delimiters; empty when there is no channel.
  std::string reasoning_raw;
  std::string answer;
};

ReasoningSplit split_reasoning(std::string_view text);

/// Extracts the judgment from the last "Verdict:" line of the answer part of
/// `text`. The text before that line, after an optional "Explanation:"
/// marker, becomes the critique. Never throws.
ParseResult parse_judgment(TaskKind task, std::string_view text);

/// "Verdict: <formatted judgment>".
std::string verdict_line(const Judgment& judgment);

}  // namespace fare
