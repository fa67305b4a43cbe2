#include "distill/budget.hpp"

#include <algorithm>
#include <string>

#include "distill/error.hpp"

namespace distill {

std::uint64_t nearest_rank(std::span<const std::uint64_t> values, unsigned percentile) {
  if (values.empty()) throw Error(Errc::EmptyRecordSet, "no values");
  if (percentile > 100) {
    throw Error(Errc::InvalidArgument, "percentile " + std::to_string(percentile) + " > 100");
  }
  std::vector<std::uint64_t> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  // rank = ceil(p * n / 100), at least 1; integer arithmetic keeps it exact.
  const std::size_t n = sorted.size();
  std::size_t rank = (static_cast<std::size_t>(percentile) * n + 99) / 100;
  rank = std::max<std::size_t>(rank, 1);
  return sorted[rank - 1];
}

std::vector<GenerationRecord> apply_length_budget(std::span<const GenerationRecord> records,
                                                  unsigned percentile) {
  if (records.empty()) throw Error(Errc::EmptyRecordSet, "no records");
  std::vector<std::uint64_t> lengths;
  lengths.reserve(records.size());
  for (const auto& r : records) lengths.push_back(r.completion_tokens);
  const std::uint64_t threshold = nearest_rank(lengths, percentile);

  std::vector<GenerationRecord> out(records.begin(), records.end());
  for (auto& r : out) {
    if (r.completion_tokens <= threshold) continue;
    r.truncated = true;
    r.completion_tokens = threshold;
    r.verdict = JudgeVerdict{Verdict::incorrect,
                             "length budget: stopped at " + std::to_string(threshold) +
                                 " tokens (p" + std::to_string(percentile) + ")"};
  }
  return out;
}

}  // namespace distill
