#pragma once

#include <span>
#include <string>
#include <vector>

#include "fare/core/io.hpp"

namespace fare {

inline constexpr std::size_t kDefaultNgram = 13;

/// Lowercased whitespace tokens.
std::vector<std::string> ngram_tokens(std::string_view text);

struct Removal {
  std::string id;
  std::size_t eval_index = 0;  // lowest matching eval question
};

struct DecontamResult {
  std::vector<LabeledSample> kept;
  std::vector<Removal> removed;
  std::size_t n = kDefaultNgram;
};

/// Drops training samples whose question shares an n-gram with any eval
/// question. A text with fewer than n tokens contributes its whole token
/// sequence as its only gram, so short exact duplicates are still caught.
/// Throws DomainError when n == 0.
DecontamResult decontaminate(std::span<const LabeledSample> train,
                             std::span<const std::string> eval_questions,
                             std::size_t n = kDefaultNgram);

/// {"n", "removed": [{"id", "eval_index"}], "kept"}
ordered_json removal_report(const DecontamResult& result);

}  // namespace fare
