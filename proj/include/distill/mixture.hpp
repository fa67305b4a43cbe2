#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

namespace distill {

enum class AnswerMode { ift, reasoning };
enum class TrainingOrder { sequential, mixed };

std::string_view to_string(AnswerMode m);
std::string_view to_string(TrainingOrder o);
AnswerMode parse_answer_mode(std::string_view s);
TrainingOrder parse_training_order(std::string_view s);

// One prompt answered by the teacher in both modes.
struct PairedEntry {
  std::string prompt_id;
  std::string prompt;
  std::string ift_answer;
  std::string reasoning_answer;
  std::uint64_t ift_tokens = 0;
  std::uint64_t reasoning_tokens = 0;
};

struct PairedCorpus {
  std::vector<PairedEntry> entries;
};

// Throws DuplicateIds or MissingAnswer.
void validate_corpus(const PairedCorpus& corpus);

PairedCorpus parse_paired_corpus(std::istream& in, const std::string& source);
PairedCorpus load_paired_corpus(const std::filesystem::path& path);

struct MixtureSpec {
  double rho = 0.0;
  TrainingOrder order = TrainingOrder::sequential;
  std::uint64_t seed = 0;
};

// round(rho * n) with ties to even. Throws RhoOutOfRange.
std::size_t reasoning_count(double rho, std::size_t n);

struct ReasoningPartition {
  // Both lists keep the order of the input ids.
  std::vector<std::string> reasoning_ids;
  std::vector<std::string> ift_ids;
};

ReasoningPartition select_reasoning_subset(std::span<const std::string> ids,
                                           double rho, std::uint64_t seed);

// Warmup-stable-decay learning-rate schedule. Steps are 0-based.
//   [0, warmup]                 linear 0 -> peak (peak reached at `warmup`)
//   (warmup, total-1-decay]     peak
//   (total-1-decay, total-1]    linear peak -> floor_fraction * peak
struct WsdSchedule {
  double peak_lr = 0.0;
  std::uint64_t warmup_steps = 150;
  std::uint64_t decay_steps = 300;
  std::uint64_t total_steps = 0;
  double floor_fraction = 0.1;
};

// Throws InvalidSchedule.
void validate_schedule(const WsdSchedule& s);

// Throws StepOutOfRange for step >= total_steps.
double wsd_lr(const WsdSchedule& s, std::uint64_t step);

std::vector<std::pair<std::uint64_t, double>> schedule_points(const WsdSchedule& s);

// Peak learning rate for (model, mode) from a table of the form
// {"<model>": {"ift": lr, "reasoning": lr}}.
std::optional<double> lookup_peak_lr(const nlohmann::json& table,
                                     std::string_view model, AnswerMode mode);

struct PlanExample {
  std::string prompt_id;
  AnswerMode mode_used = AnswerMode::ift;
  std::string answer;
  std::uint64_t tokens = 0;
};

struct TrainingPlan {
  std::vector<PlanExample> examples;
  MixtureSpec spec;
  std::optional<WsdSchedule> schedule;
};

// Sequential: IFT block then reasoning block, each shuffled. Mixed: one
// shuffle over the union. Both start from corpus order, and all draws come
// from a single engine seeded with spec.seed (selection first).
TrainingPlan build_plan(const PairedCorpus& corpus, const MixtureSpec& spec);

// One line per example: {"answer","mode_used","prompt_id","tokens"}.
std::string plan_to_jsonl(const TrainingPlan& plan);

// Spec, seed, PRNG id and schedule parameters (no timestamps).
nlohmann::json plan_manifest(const TrainingPlan& plan);

}  // namespace distill
