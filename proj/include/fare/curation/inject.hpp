#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "fare/core/io.hpp"

namespace fare {

/// A tool invocation. The canonical text form is compact JSON
/// {"name": ..., "arguments": {...}} with argument order preserved.
struct FunctionCall {
  std::string name;
  ordered_json arguments = ordered_json::object();

  /// Throws DataError unless text is a JSON object with a string "name" and
  /// an object "arguments" (also accepted under "parameters").
  static FunctionCall parse(std::string_view text);

  std::string raw_form() const;

  friend bool operator==(const FunctionCall&, const FunctionCall&) = default;
};

enum class CorruptionKind { InvalidType, MissingArgument, ExtraArgument, SyntaxError, MalformedJson };

inline constexpr std::array<CorruptionKind, 5> kAllCorruptions = {
    CorruptionKind::InvalidType, CorruptionKind::MissingArgument, CorruptionKind::ExtraArgument,
    CorruptionKind::SyntaxError, CorruptionKind::MalformedJson};

std::string_view to_string(CorruptionKind kind);
std::optional<CorruptionKind> parse_corruption_kind(std::string_view name);

/// Corrupted text for the call, or nullopt when the kind does not apply
/// (InvalidType and MissingArgument need at least one argument).
std::optional<std::string> inject_error(const FunctionCall& call, CorruptionKind kind,
                                        std::uint64_t seed);

enum class CallDefect { None, Unparseable, WrongName, MissingArgument, ExtraArgument, InvalidType };

std::string_view to_string(CallDefect defect);

/// Compares candidate text against a reference call. The first defect found
/// is reported, in the order listed in CallDefect.
CallDefect diagnose_call(std::string_view candidate, const FunctionCall& reference);

}  // namespace fare
