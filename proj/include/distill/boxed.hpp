#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace distill {

// Content of the last top-level, brace-balanced \boxed{...} group. Boxes
// nested inside an outer box belong to it. A backslash escapes the next
// character, so \{ and \} do not count as structure. Unterminated groups
// are skipped.
std::optional<std::string> extract_boxed(std::string_view text);

enum class Verdict { correct, incorrect, invalid };

std::string_view to_string(Verdict v);
Verdict parse_verdict_name(std::string_view s);

struct JudgeVerdict {
  Verdict outcome = Verdict::invalid;
  std::string raw;

  bool operator==(const JudgeVerdict&) const = default;
};

// Boxed "yes" -> correct, "no" -> incorrect (case-insensitive, surrounding
// whitespace ignored); anything else is invalid.
JudgeVerdict parse_verdict(std::string_view judge_response);

}  // namespace distill
