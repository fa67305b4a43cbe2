#include "distill/boxed.hpp"

#include <cctype>

#include "distill/error.hpp"

namespace distill {

namespace {

constexpr std::string_view kOpen = "\\boxed{";

// Index one past the brace closing the group whose content starts at
// `begin`, or npos if it never closes.
std::size_t match_group(std::string_view text, std::size_t begin) {
  int depth = 1;
  for (std::size_t i = begin; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '\\') {
      ++i;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return i + 1;
    }
  }
  return std::string_view::npos;
}

std::string trim_lower(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  std::string out(s.substr(b, e - b));
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::optional<std::string> extract_boxed(std::string_view text) {
  std::optional<std::string> last;
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (text[pos] == '\\' && text.substr(pos, kOpen.size()) == kOpen) {
      const std::size_t begin = pos + kOpen.size();
      const std::size_t end = match_group(text, begin);
      if (end != std::string_view::npos) {
        last = std::string(text.substr(begin, end - 1 - begin));
        pos = end;
        continue;
      }
      pos = begin;
      continue;
    }
    // Any other backslash escapes the following character.
    pos += text[pos] == '\\' ? 2 : 1;
  }
  return last;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::correct: return "correct";
    case Verdict::incorrect: return "incorrect";
    case Verdict::invalid: return "invalid";
  }
  return "invalid";
}

Verdict parse_verdict_name(std::string_view s) {
  if (s == "correct") return Verdict::correct;
  if (s == "incorrect") return Verdict::incorrect;
  if (s == "invalid") return Verdict::invalid;
  throw Error(Errc::ParseError, "unknown verdict '" + std::string(s) + "'");
}

JudgeVerdict parse_verdict(std::string_view judge_response) {
  JudgeVerdict v;
  v.raw = std::string(judge_response);
  if (auto boxed = extract_boxed(judge_response)) {
    const auto word = trim_lower(*boxed);
    if (word == "yes") {
      v.outcome = Verdict::correct;
    } else if (word == "no") {
      v.outcome = Verdict::incorrect;
    }
  }
  return v;
}

}  // namespace distill
