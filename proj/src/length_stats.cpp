#include "distill/length_stats.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "distill/accuracy.hpp"
#include "distill/error.hpp"

namespace distill {

namespace {

double median(std::vector<std::uint64_t> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n % 2 == 1) return static_cast<double>(v[n / 2]);
  return (static_cast<double>(v[n / 2 - 1]) + static_cast<double>(v[n / 2])) / 2.0;
}

}  // namespace

LengthStats length_stats(std::span<const GenerationRecord> records) {
  using Key = std::tuple<std::string, Category, bool>;
  std::map<Key, std::vector<std::uint64_t>> groups;
  std::map<std::string, std::vector<GenerationRecord>> by_model;
  for (const auto& r : records) {
    if (!r.verdict) throw Error(Errc::MissingVerdict, r.prompt_id);
    // Both correctness groups exist for every (model, category) seen.
    groups[{r.model, r.category(), true}];
    groups[{r.model, r.category(), false}];
    groups[{r.model, r.category(), r.is_correct()}].push_back(r.completion_tokens);
    by_model[r.model].push_back(r);
  }

  LengthStats out;
  for (const auto& [key, lengths] : groups) {
    LengthCell cell;
    std::tie(cell.model, cell.category, cell.correct) = key;
    cell.count = lengths.size();
    if (!lengths.empty()) {
      double sum = 0.0;
      for (auto l : lengths) sum += static_cast<double>(l);
      cell.mean_tokens = sum / static_cast<double>(lengths.size());
      cell.median_tokens = median(lengths);
    }
    out.cells.push_back(std::move(cell));
  }
  for (const auto& [model, recs] : by_model) {
    const auto report = category_accuracy(recs);
    for (const auto& [cat, score] : report.categories) {
      out.accuracy.push_back({model, cat, score.accuracy});
    }
  }
  return out;
}

}  // namespace distill
