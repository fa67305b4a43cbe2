#pragma once

// Twelve-item evaluation scenario, one item per benchmark, served by a
// scripted mock. Student models "student-ift" and "student-reasoning"
// answer with the completion lengths and correctness in kScript; the judge
// model compares the boxed answer with the ground truth.

#include <array>
#include <filesystem>
#include <fstream>
#include <string>

#include "distill/benchmarks.hpp"
#include "distill/boxed.hpp"
#include "mock_server.hpp"

namespace e2e {

struct ScriptRow {
  distill::Benchmark benchmark;
  std::uint64_t ift_tokens;
  std::uint64_t reasoning_tokens;
  bool ift_correct;
  bool reasoning_correct;
};

using B = distill::Benchmark;
inline constexpr std::array<ScriptRow, 12> kScript = {{
    {B::winogrande, 20, 140, true, true},
    {B::openbookqa, 30, 90, true, true},
    {B::mmlu_misc, 25, 100, false, false},
    {B::squad, 40, 200, true, true},
    {B::coqa, 50, 100, false, true},
    {B::ifeval, 60, 360, false, true},
    {B::aqua_rat, 10, 80, true, true},
    {B::mmlu_math, 15, 150, false, true},
    {B::mmlu_pro_math, 12, 108, false, true},
    {B::gsm8k, 50, 350, true, true},
    {B::math_500, 45, 540, false, true},
    {B::aime, 64, 1024, false, false},
}};

inline std::string truth_of(distill::Benchmark b) {
  return "T-" + std::string(distill::to_string(b));
}

inline std::string question_of(distill::Benchmark b) {
  return "Q-" + std::string(distill::to_string(b)) + ": what is the answer?";
}

inline const ScriptRow& row_for_question(const std::string& text) {
  for (const auto& r : kScript) {
    if (text.find(question_of(r.benchmark)) != std::string::npos) return r;
  }
  throw std::runtime_error("no scripted question in: " + text.substr(0, 200));
}

// One JSONL file holding all twelve items.
inline void write_benchmarks(const std::filesystem::path& path) {
  std::ofstream out(path);
  for (const auto& r : kScript) {
    nlohmann::json j = {{"id", "1"},
                        {"benchmark", distill::to_string(r.benchmark)},
                        {"question", question_of(r.benchmark)}};
    if (r.benchmark != B::ifeval) j["answer"] = truth_of(r.benchmark);
    out << j.dump() << '\n';
  }
}

inline mock::Reply handle(const nlohmann::json& req) {
  const std::string model = req.at("model");
  const std::string prompt = mock::prompt_of(req);
  if (model == "judge") {
    const auto& r = row_for_question(prompt);
    const auto start = prompt.find("User Answer:\n");
    const auto end = prompt.find("\n\nGround Truth:\n");
    const std::string answer = prompt.substr(start, end == std::string::npos ? std::string::npos : end - start);
    const auto boxed = distill::extract_boxed(answer);
    bool ok = false;
    if (r.benchmark == B::ifeval) {
      ok = boxed == std::string("compliant");
    } else {
      ok = boxed == truth_of(r.benchmark);
    }
    return mock::chat(ok ? "Same result. \\boxed{yes}" : "Different. \\boxed{no}", 300, 8);
  }
  const bool reasoning = model == "student-reasoning";
  if (!reasoning && model != "student-ift") return mock::status(404);
  const auto& r = row_for_question(prompt);
  const bool correct = reasoning ? r.reasoning_correct : r.ift_correct;
  const std::string answer =
      correct ? (r.benchmark == B::ifeval ? "compliant" : truth_of(r.benchmark)) : "wrong";
  const std::string body =
      (reasoning ? "<think>working</think> " : "") + std::string("\\boxed{") + answer + "}";
  return mock::chat(body, 40, reasoning ? r.reasoning_tokens : r.ift_tokens);
}

}  // namespace e2e
