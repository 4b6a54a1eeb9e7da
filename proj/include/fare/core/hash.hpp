#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "fare/core/types.hpp"

namespace fare {

std::uint64_t fnv1a64(std::string_view data, std::uint64_t basis = 0xcbf29ce484222325ULL);

/// Stable 64-bit hash of a message list, independent of process and
/// platform. Roles and contents are length-prefixed so boundaries matter.
std::uint64_t message_hash(const ChatMessages& messages);

/// 16 lowercase hex digits.
std::string to_hex(std::uint64_t value);

/// Lowercase hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

}  // namespace fare
