#include "distill/records.hpp"

#include <unordered_map>

#include "distill/error.hpp"
#include "distill/jsonl.hpp"

namespace distill {

nlohmann::json to_json(const GenerationRecord& r) {
  nlohmann::json j;
  j["prompt_id"] = r.prompt_id;
  j["benchmark"] = to_string(r.benchmark);
  j["category"] = to_string(r.category());
  j["mode"] = to_string(r.mode);
  j["model"] = r.model;
  j["prompt_tokens"] = r.prompt_tokens;
  j["completion_tokens"] = r.completion_tokens;
  j["response"] = r.response;
  j["extracted_answer"] =
      r.extracted_answer ? nlohmann::json(*r.extracted_answer) : nlohmann::json();
  if (r.verdict) {
    j["verdict"] = to_string(r.verdict->outcome);
    j["judge_raw"] = r.verdict->raw;
  } else {
    j["verdict"] = nullptr;
    j["judge_raw"] = nullptr;
  }
  j["truncated"] = r.truncated;
  j["retries"] = r.retries;
  j["error"] = r.error ? nlohmann::json(*r.error) : nlohmann::json();
  return j;
}

GenerationRecord record_from_json(const nlohmann::json& j) {
  GenerationRecord r;
  if (!j.contains("prompt_id")) throw Error(Errc::MissingKey, "prompt_id");
  r.prompt_id = j.at("prompt_id").get<std::string>();
  if (!j.contains("benchmark")) throw Error(Errc::MissingKey, "benchmark");
  r.benchmark = parse_benchmark(j.at("benchmark").get<std::string>());
  if (j.contains("category") && j["category"].is_string() &&
      parse_category(j["category"].get<std::string>()) != r.category()) {
    throw Error(Errc::InvalidArgument,
                r.prompt_id + ": category does not match benchmark " +
                    std::string(to_string(r.benchmark)));
  }
  r.mode = parse_answer_mode(j.value("mode", std::string("ift")));
  r.model = j.value("model", std::string());
  if (j.contains("error") && j["error"].is_string()) r.error = j["error"].get<std::string>();
  const bool has_counts = j.contains("prompt_tokens") && j["prompt_tokens"].is_number() &&
                          j.contains("completion_tokens") &&
                          j["completion_tokens"].is_number();
  if (has_counts) {
    r.prompt_tokens = j["prompt_tokens"].get<std::uint64_t>();
    r.completion_tokens = j["completion_tokens"].get<std::uint64_t>();
  } else if (!r.error) {
    throw Error(Errc::MissingTokenCounts, r.prompt_id);
  }
  r.response = j.value("response", std::string());
  if (j.contains("extracted_answer") && j["extracted_answer"].is_string()) {
    r.extracted_answer = j["extracted_answer"].get<std::string>();
  }
  if (j.contains("verdict") && j["verdict"].is_string()) {
    JudgeVerdict v;
    v.outcome = parse_verdict_name(j["verdict"].get<std::string>());
    if (j.contains("judge_raw") && j["judge_raw"].is_string()) {
      v.raw = j["judge_raw"].get<std::string>();
    }
    r.verdict = std::move(v);
  }
  r.truncated = j.value("truncated", false);
  r.retries = j.value("retries", 0u);
  return r;
}

std::vector<GenerationRecord> read_records(const std::filesystem::path& path) {
  std::vector<GenerationRecord> out;
  std::unordered_map<std::string, std::size_t> index;
  for_each_jsonl(path, [&](const nlohmann::json& j, std::size_t) {
    if (j.contains("manifest")) return;
    auto r = record_from_json(j);
    auto it = index.find(r.prompt_id);
    if (it == index.end()) {
      index.emplace(r.prompt_id, out.size());
      out.push_back(std::move(r));
    } else {
      out[it->second] = std::move(r);
    }
  });
  return out;
}

}  // namespace distill
