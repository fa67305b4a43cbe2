#include "distill/sensitivity.hpp"

#include <map>
#include <string>

#include "distill/error.hpp"

namespace distill {

namespace {

struct Tally {
  double tokens = 0.0;
  std::size_t n = 0;
  std::size_t correct = 0;

  double mean_tokens() const { return tokens / static_cast<double>(n); }
  double accuracy() const { return static_cast<double>(correct) / static_cast<double>(n); }
};

std::map<Benchmark, Tally> tally(std::span<const GenerationRecord> records) {
  std::map<Benchmark, Tally> out;
  for (const auto& r : records) {
    if (!r.verdict) throw Error(Errc::MissingVerdict, r.prompt_id);
    auto& t = out[r.benchmark];
    t.tokens += static_cast<double>(r.completion_tokens);
    ++t.n;
    t.correct += r.is_correct();
  }
  return out;
}

}  // namespace

std::vector<TaskSensitivity> task_sensitivity(std::span<const GenerationRecord> ift_records,
                                              std::span<const GenerationRecord> reasoning_records) {
  const auto ift = tally(ift_records);
  const auto rea = tally(reasoning_records);
  for (const auto& [b, _] : ift) {
    if (!rea.contains(b)) {
      throw Error(Errc::BenchmarkMismatch, std::string(to_string(b)) + " has no reasoning records");
    }
  }
  for (const auto& [b, _] : rea) {
    if (!ift.contains(b)) {
      throw Error(Errc::BenchmarkMismatch, std::string(to_string(b)) + " has no IFT records");
    }
  }

  std::vector<TaskSensitivity> out;
  for (const auto& [b, i] : ift) {
    const auto& r = rea.at(b);
    if (i.tokens == 0.0) throw Error(Errc::ZeroIftLength, std::string(to_string(b)));
    TaskSensitivity s;
    s.benchmark = b;
    s.ift_mean_tokens = i.mean_tokens();
    s.reasoning_mean_tokens = r.mean_tokens();
    s.extra_token_factor = s.reasoning_mean_tokens / s.ift_mean_tokens;
    s.ift_accuracy = i.accuracy();
    s.reasoning_accuracy = r.accuracy();
    s.accuracy_gain = s.reasoning_accuracy - s.ift_accuracy;
    out.push_back(s);
  }
  return out;
}

}  // namespace distill
