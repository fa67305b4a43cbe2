#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "distill/benchmarks.hpp"
#include "distill/boxed.hpp"
#include "distill/mixture.hpp"
#include "json.hpp"

namespace distill {

struct GenerationRecord {
  std::string prompt_id;
  Benchmark benchmark = Benchmark::gsm8k;
  AnswerMode mode = AnswerMode::ift;
  std::string model;
  std::uint64_t prompt_tokens = 0;
  std::uint64_t completion_tokens = 0;
  std::string response;
  std::optional<std::string> extracted_answer;
  std::optional<JudgeVerdict> verdict;
  bool truncated = false;
  std::uint32_t retries = 0;
  // Set when every attempt failed; such records carry no usable response.
  std::optional<std::string> error;

  Category category() const { return category_of(benchmark); }
  bool ok() const { return !error.has_value(); }
  bool is_correct() const { return verdict && verdict->outcome == Verdict::correct; }
};

nlohmann::json to_json(const GenerationRecord& r);
// Throws MissingKey / MissingTokenCounts / UnknownBenchmark.
GenerationRecord record_from_json(const nlohmann::json& j);

// Records files: an optional first line {"manifest": {...}} followed by one
// record per line. Later lines win when a prompt_id repeats (resumed runs
// append retries of failed items). Order of first appearance is kept.
std::vector<GenerationRecord> read_records(const std::filesystem::path& path);

}  // namespace distill
