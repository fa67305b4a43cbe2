#pragma once

#include <cstddef>
#include <map>
#include <span>

#include "distill/benchmarks.hpp"
#include "distill/records.hpp"

namespace distill {

struct AccuracyCell {
  std::size_t total = 0;
  std::size_t correct = 0;
  std::size_t invalid = 0;  // also counted as incorrect

  double accuracy() const { return total ? static_cast<double>(correct) / total : 0.0; }
  double invalid_rate() const { return total ? static_cast<double>(invalid) / total : 0.0; }
};

struct CategoryScore {
  double accuracy = 0.0;      // unweighted mean over its benchmarks present
  double invalid_rate = 0.0;  // same averaging
  std::size_t n_benchmarks = 0;
};

struct AccuracyReport {
  std::map<Benchmark, AccuracyCell> benchmarks;
  std::map<Category, CategoryScore> categories;

  // Unweighted mean over the categories present.
  double overall() const;
};

// Throws MissingVerdict naming the first record without one.
AccuracyReport category_accuracy(std::span<const GenerationRecord> records);

}  // namespace distill
