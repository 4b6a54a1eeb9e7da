#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace fare {

enum class ExtractMode {
  /// Last \boxed{...}, else text after the last "answer" marker, else the
  /// last non-empty line.
  Lenient,
  /// Only \boxed{...} or an explicit answer marker count.
  Strict,
};

std::optional<std::string> extract_final_answer(std::string_view response,
                                                ExtractMode mode = ExtractMode::Lenient);

/// Lowercases, removes "$" and a wrapping \boxed{} or \text{}, collapses
/// whitespace and strips trailing punctuation.
std::string normalize_answer(std::string_view answer);

__extension__ using int128 = __int128;

/// Exact value of a normalized numeric answer: integers, decimals, a/b and
/// \frac{a}{b} (optionally signed). Reduced, with positive denominator.
struct ExactNumber {
  int128 num = 0;
  int128 den = 1;
  friend bool operator==(const ExactNumber&, const ExactNumber&) = default;
};

std::optional<ExactNumber> parse_exact_number(std::string_view normalized);

/// True when two already-extracted answers agree after normalization.
bool answers_equivalent(std::string_view a, std::string_view b);

/// Extracts the response's final answer and compares it to the gold answer.
/// The gold answer goes through the same extraction, so a boxed gold works.
bool grade_against_answer(std::string_view response, std::string_view gold_answer,
                          ExtractMode mode = ExtractMode::Lenient);

}  // namespace fare
