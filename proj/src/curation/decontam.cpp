#include "fare/curation/decontam.hpp"

#include <cctype>
#include <unordered_map>

#include "fare/core/error.hpp"

namespace fare {

namespace {

// Grams joined with a unit separator, which whitespace tokenization never emits.
std::vector<std::string> grams(const std::vector<std::string>& tokens, std::size_t n) {
  std::vector<std::string> out;
  if (tokens.empty()) return out;
  const std::size_t width = tokens.size() < n ? tokens.size() : n;
  for (std::size_t i = 0; i + width <= tokens.size(); ++i) {
    std::string g = tokens[i];
    for (std::size_t k = 1; k < width; ++k) {
      g.push_back('\x1f');
      g += tokens[i + k];
    }
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace

std::vector<std::string> ngram_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

DecontamResult decontaminate(std::span<const LabeledSample> train,
                             std::span<const std::string> eval_questions, std::size_t n) {
  if (n == 0) throw DomainError("n-gram size must be >= 1");
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t e = 0; e < eval_questions.size(); ++e) {
    for (auto& g : grams(ngram_tokens(eval_questions[e]), n)) index.emplace(std::move(g), e);
  }

  DecontamResult result;
  result.n = n;
  for (const auto& sample : train) {
    std::optional<std::size_t> hit;
    for (const auto& g : grams(ngram_tokens(sample.input.question), n)) {
      if (const auto it = index.find(g); it != index.end() && (!hit || it->second < *hit)) {
        hit = it->second;
      }
    }
    if (hit) {
      result.removed.push_back({sample.id(), *hit});
    } else {
      result.kept.push_back(sample);
    }
  }
  return result;
}

ordered_json removal_report(const DecontamResult& result) {
  ordered_json removed = ordered_json::array();
  for (const auto& r : result.removed) {
    removed.push_back(ordered_json{{"id", r.id}, {"eval_index", r.eval_index}});
  }
  return ordered_json{{"n", result.n}, {"removed", removed}, {"kept", result.kept.size()}};
}

}  // namespace fare
