#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "distill/records.hpp"

namespace distill {

inline constexpr std::array<unsigned, 5> kBudgetPercentiles = {0, 25, 50, 75, 100};

// Nearest-rank percentile: the smallest value with at least p% of the
// observations <= it (p = 0 gives the minimum). Throws EmptyRecordSet, and
// InvalidArgument for p > 100.
std::uint64_t nearest_rank(std::span<const std::uint64_t> values, unsigned percentile);

// Caps answers at the given completion-length percentile of `records`.
// Longer answers are marked truncated, judged incorrect and clamped to the
// threshold so FLOPs reflect the stopped generation.
std::vector<GenerationRecord> apply_length_budget(std::span<const GenerationRecord> records,
                                                  unsigned percentile);

}  // namespace distill
