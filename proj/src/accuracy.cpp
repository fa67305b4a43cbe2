#include "distill/accuracy.hpp"

#include "distill/error.hpp"

namespace distill {

double AccuracyReport::overall() const {
  if (categories.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& [_, score] : categories) sum += score.accuracy;
  return sum / static_cast<double>(categories.size());
}

AccuracyReport category_accuracy(std::span<const GenerationRecord> records) {
  AccuracyReport report;
  for (const auto& r : records) {
    if (!r.verdict) throw Error(Errc::MissingVerdict, r.prompt_id);
    auto& cell = report.benchmarks[r.benchmark];
    ++cell.total;
    if (r.verdict->outcome == Verdict::correct) ++cell.correct;
    if (r.verdict->outcome == Verdict::invalid) ++cell.invalid;
  }
  for (const auto& [bench, cell] : report.benchmarks) {
    auto& score = report.categories[category_of(bench)];
    score.accuracy += cell.accuracy();
    score.invalid_rate += cell.invalid_rate();
    ++score.n_benchmarks;
  }
  for (auto& [_, score] : report.categories) {
    score.accuracy /= static_cast<double>(score.n_benchmarks);
    score.invalid_rate /= static_cast<double>(score.n_benchmarks);
  }
  return report;
}

}  // namespace distill
