#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "distill/benchmarks.hpp"

namespace distill {

inline constexpr std::size_t kDefaultAnswerTailChars = 4000;

struct Shot {
  std::string question;
  std::string answer;
};

// Task instruction shown before every evaluation question.
std::string_view eval_instruction(Benchmark b);

// Layout, blocks separated by one blank line:
//
//   <instruction>
//
//   Question: <shot question>        (once per shot)
//   Answer: <shot answer>
//
//   Question: <question>             (with shots)
//   Answer:
//
// Without shots the question follows the instruction verbatim.
std::string render_eval_prompt(Benchmark b, std::string_view question,
                               std::span<const Shot> shots = {});
// Throws UnknownBenchmark.
std::string render_eval_prompt(std::string_view benchmark, std::string_view question,
                               std::span<const Shot> shots = {});

// Last `max_chars` UTF-8 code points of `text`.
std::string answer_tail(std::string_view text, std::size_t max_chars);

// Fills the judge template. ifeval uses its requirement-checking template
// and ignores `truth`; every other benchmark requires it
// (MissingGroundTruth).
std::string render_judge_prompt(Benchmark b, std::string_view question,
                                std::string_view response,
                                const std::optional<std::string>& truth,
                                std::size_t tail_chars = kDefaultAnswerTailChars);

}  // namespace distill
