#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "distill/benchmarks.hpp"
#include "distill/records.hpp"

namespace distill {

// Completion lengths of one (model, category, correctness) group. Empty
// groups keep count 0 and no mean/median.
struct LengthCell {
  std::string model;
  Category category = Category::general_mc;
  bool correct = false;  // invalid verdicts fall in the incorrect group
  std::size_t count = 0;
  std::optional<double> mean_tokens;
  std::optional<double> median_tokens;
};

struct CategoryAccuracyPoint {
  std::string model;
  Category category = Category::general_mc;
  double accuracy = 0.0;
};

struct LengthStats {
  std::vector<LengthCell> cells;                // sorted by model, category, correct
  std::vector<CategoryAccuracyPoint> accuracy;  // accuracy line per model/category
};

// Throws MissingVerdict.
LengthStats length_stats(std::span<const GenerationRecord> records);

}  // namespace distill
