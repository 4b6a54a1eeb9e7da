#include "fare/curation/answer.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <vector>

namespace fare {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// Content of the balanced group opening at s[open] == '{', or nullopt.
std::optional<std::string_view> braced(std::string_view s, std::size_t open) {
  if (open >= s.size() || s[open] != '{') return std::nullopt;
  int depth = 0;
  for (std::size_t i = open; i < s.size(); ++i) {
    if (s[i] == '{') ++depth;
    if (s[i] == '}' && --depth == 0) return s.substr(open + 1, i - open - 1);
  }
  return std::nullopt;
}

std::optional<std::string_view> last_boxed(std::string_view s) {
  for (std::size_t pos = s.rfind("\\boxed"); pos != std::string_view::npos;
       pos = pos == 0 ? std::string_view::npos : s.rfind("\\boxed", pos - 1)) {
    std::size_t open = pos + 6;
    while (open < s.size() && s[open] == ' ') ++open;
    if (auto inner = braced(s, open)) return inner;
  }
  return std::nullopt;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string_view> lines_of(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto nl = s.find('\n', start);
    const auto end = nl == std::string_view::npos ? s.size() : nl;
    out.push_back(s.substr(start, end - start));
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return out;
}

// Text after "answer is", "answer:" or "answer =" on the last line that has one.
std::optional<std::string_view> after_answer_marker(std::string_view s) {
  const auto lines = lines_of(s);
  for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
    const std::string low = lower(*it);
    for (std::size_t pos = low.rfind("answer"); pos != std::string::npos;
         pos = pos == 0 ? std::string::npos : low.rfind("answer", pos - 1)) {
      std::size_t i = pos + 6;
      while (i < low.size() && (low[i] == '*' || low[i] == ' ')) ++i;
      std::size_t skip = 0;
      if (low.compare(i, 2, "is") == 0) {
        skip = 2;
      } else if (i < low.size() && (low[i] == ':' || low[i] == '=')) {
        skip = 1;
      }
      if (skip == 0) continue;
      const auto rest = trim(it->substr(i + skip));
      std::string_view value = rest;
      while (!value.empty() && value.front() == '*') value.remove_prefix(1);
      value = trim(value);
      if (!value.empty()) return value;
    }
  }
  return std::nullopt;
}

std::string_view strip_wrapper(std::string_view s, std::string_view command) {
  if (s.substr(0, command.size()) != command) return s;
  std::size_t open = command.size();
  while (open < s.size() && s[open] == ' ') ++open;
  const auto inner = braced(s, open);
  if (!inner || open + inner->size() + 2 != s.size()) return s;
  return *inner;
}

bool parse_digits(std::string_view s, int128& value) {
  if (s.empty() || s.size() > 18) return false;
  value = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    value = value * 10 + (c - '0');
  }
  return true;
}

int128 gcd128(int128 a, int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::optional<ExactNumber> reduced(int128 num, int128 den) {
  if (den == 0) return std::nullopt;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const int128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return ExactNumber{num, den};
}

// Unsigned integer or decimal ("12", "0.5", ".5", "3.").
std::optional<ExactNumber> parse_decimal(std::string_view s) {
  const auto dot = s.find('.');
  std::string_view whole = s.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
  if (whole.empty() && frac.empty()) return std::nullopt;
  if (whole.size() + frac.size() > 18) return std::nullopt;
  int128 w = 0, f = 0, scale = 1;
  if (!whole.empty() && !parse_digits(whole, w)) return std::nullopt;
  if (!frac.empty() && !parse_digits(frac, f)) return std::nullopt;
  for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
  return reduced(w * scale + f, scale);
}

}  // namespace

std::optional<std::string> extract_final_answer(std::string_view response, ExtractMode mode) {
  if (auto boxed = last_boxed(response)) {
    const auto t = trim(*boxed);
    if (!t.empty()) return std::string(t);
  }
  if (auto marked = after_answer_marker(response)) return std::string(*marked);
  if (mode == ExtractMode::Strict) return std::nullopt;
  const auto lines = lines_of(response);
  for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
    const auto t = trim(*it);
    if (!t.empty()) return std::string(t);
  }
  return std::nullopt;
}

std::string normalize_answer(std::string_view answer) {
  std::string s;
  for (char c : answer) {
    if (c != '$') s.push_back(c);
  }
  std::string_view v = trim(s);
  for (bool changed = true; changed;) {
    const auto before = v.size();
    v = trim(strip_wrapper(v, "\\boxed"));
    v = trim(strip_wrapper(v, "\\text"));
    v = trim(strip_wrapper(v, "\\mathrm"));
    while (!v.empty() && std::string_view(".,;:!").find(v.back()) != std::string_view::npos) {
      v.remove_suffix(1);
      v = trim(v);
    }
    changed = v.size() != before;
  }
  std::string out;
  bool pending_space = false;
  for (char c : v) {
    if (is_space(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space && !out.empty()) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

std::optional<ExactNumber> parse_exact_number(std::string_view normalized) {
  std::string compact;
  for (char c : normalized) {
    if (!is_space(c)) compact.push_back(c);
  }
  std::string_view s = compact;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  std::optional<ExactNumber> value;
  for (std::string_view cmd : {"\\frac", "\\dfrac", "\\tfrac"}) {
    if (s.substr(0, cmd.size()) != cmd) continue;
    const auto num = braced(s, cmd.size());
    if (!num) return std::nullopt;
    const std::size_t den_open = cmd.size() + num->size() + 2;
    const auto den = braced(s, den_open);
    if (!den || den_open + den->size() + 2 != s.size()) return std::nullopt;
    const auto n = parse_decimal(*num);
    const auto d = parse_decimal(*den);
    if (!n || !d || d->num == 0) return std::nullopt;
    value = reduced(n->num * d->den, n->den * d->num);
    break;
  }
  if (!value) {
    if (const auto slash = s.find('/'); slash != std::string_view::npos) {
      const auto n = parse_decimal(s.substr(0, slash));
      const auto d = parse_decimal(s.substr(slash + 1));
      if (!n || !d || d->num == 0) return std::nullopt;
      value = reduced(n->num * d->den, n->den * d->num);
    } else {
      value = parse_decimal(s);
    }
  }
  if (value && negative) value->num = -value->num;
  return value;
}

bool answers_equivalent(std::string_view a, std::string_view b) {
  const std::string na = normalize_answer(a);
  const std::string nb = normalize_answer(b);
  if (na.empty() || nb.empty()) return false;
  if (na == nb) return true;
  const auto xa = parse_exact_number(na);
  const auto xb = parse_exact_number(nb);
  return xa && xb && *xa == *xb;
}

bool grade_against_answer(std::string_view response, std::string_view gold_answer,
                          ExtractMode mode) {
  const auto answer = extract_final_answer(response, mode);
  if (!answer) return false;
  const auto gold = extract_final_answer(gold_answer, ExtractMode::Lenient);
  return answers_equivalent(*answer, gold ? std::string_view(*gold) : gold_answer);
}

}  // namespace fare
