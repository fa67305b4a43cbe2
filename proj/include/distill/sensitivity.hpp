#pragma once

#include <span>
#include <vector>

#include "distill/benchmarks.hpp"
#include "distill/records.hpp"

namespace distill {

// How much a benchmark gains from switching IFT -> reasoning, and what it
// costs in generated tokens.
struct TaskSensitivity {
  Benchmark benchmark = Benchmark::gsm8k;
  double extra_token_factor = 0.0;  // mean reasoning / mean IFT completion tokens
  double accuracy_gain = 0.0;       // reasoning - IFT accuracy, as a fraction
  double ift_mean_tokens = 0.0;
  double reasoning_mean_tokens = 0.0;
  double ift_accuracy = 0.0;
  double reasoning_accuracy = 0.0;

  double accuracy_gain_pp() const { return 100.0 * accuracy_gain; }
};

// One entry per benchmark, in benchmark order. Throws BenchmarkMismatch
// when the two sets cover different benchmarks, ZeroIftLength, and
// MissingVerdict.
std::vector<TaskSensitivity> task_sensitivity(std::span<const GenerationRecord> ift_records,
                                              std::span<const GenerationRecord> reasoning_records);

}  // namespace distill
