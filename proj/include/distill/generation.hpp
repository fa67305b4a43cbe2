#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "distill/benchmarks.hpp"
#include "distill/chat_client.hpp"
#include "distill/records.hpp"
#include "json.hpp"

namespace distill {

struct GenerationSettings {
  double temperature = 1.0;
  double top_p = 1.0;
  std::uint64_t max_tokens = 16384;
  std::uint32_t n_shots = 0;

  SamplingParams sampling() const { return {temperature, top_p, max_tokens}; }

  static GenerationSettings teacher_reasoning() { return {0.6, 0.95, 16384, 0}; }
  static GenerationSettings teacher_ift() { return {0.7, 0.8, 16384, 0}; }
  // Distilled students are evaluated zero-shot; base models use n_shots = 3.
  static GenerationSettings student_eval() { return {1.0, 1.0, 16384, 0}; }
  static GenerationSettings judge() { return {0.7, 0.95, 4096, 0}; }
};

// Throws InvalidArgument unless temperature >= 0 and top_p in (0, 1].
void validate_settings(const GenerationSettings& s);

struct GenerationItem {
  std::string prompt_id;
  Benchmark benchmark = Benchmark::gsm8k;
  std::string prompt;    // fully rendered prompt sent to the service
  std::string question;  // raw question, used by the judge
  std::optional<std::string> truth;
};

struct RunOptions {
  std::uint32_t max_retries = 2;
  std::size_t parallel = 1;
  // Append-only JSONL; completed records are reused on the next run.
  // Empty path disables persistence.
  std::filesystem::path journal;
  // Written as {"manifest": ...} when the journal is created.
  nlohmann::json manifest;
  std::string model_label;
  AnswerMode mode = AnswerMode::ift;
};

struct RunStats {
  std::size_t executed = 0;  // items sent to the service in this run
  std::size_t resumed = 0;   // items taken from the journal
  std::size_t failed = 0;    // items recorded with an error marker
  std::size_t retries = 0;
};

// Runs after a successful generation, before the record is persisted
// (e.g. judging). Throwing ChatError or Error marks the record failed.
using RecordFinalizer = std::function<void(const GenerationItem&, GenerationRecord&)>;

// One record per item, in item order. A journal record counts as complete
// when it has no error marker and, if a finalizer is given, a verdict.
// Throws EndpointUnreachable when an item exhausts its retries on
// connection failures; finished records stay in the journal.
std::vector<GenerationRecord> run_generation(const ChatClient& client,
                                             const GenerationSettings& settings,
                                             std::span<const GenerationItem> items,
                                             const RunOptions& options,
                                             const RecordFinalizer& finalize = {},
                                             RunStats* stats = nullptr);

}  // namespace distill
