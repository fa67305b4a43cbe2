#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include "common.hpp"
#include "distill/error.hpp"
#include "distill/generation.hpp"
#include "distill/jsonl.hpp"
#include "distill/prompts.hpp"
#include "distill/rng.hpp"

namespace distill::cli {

void EvalCommand::attach(CLI::App& app) {
  app.add_option("--endpoint", endpoint, "Chat-completions base URL")
      ->envname("DISTILL_ENDPOINT");
  app.add_option("--model", model, "Model served at --endpoint")->envname("DISTILL_MODEL");
  app.add_option("--judge-endpoint", judge_endpoint, "Judge URL (default: --endpoint)")
      ->envname("DISTILL_JUDGE_ENDPOINT");
  app.add_option("--judge-model", judge_model, "Judge model name")
      ->envname("DISTILL_JUDGE_MODEL");
  app.add_option("--benchmarks", benchmarks, "Benchmark JSONL files")->group("Required");
  app.add_option("--out", out, "Records JSONL (resumable)")->group("Required");
  app.add_option("--mode", mode, "Training format of the model: ift | reasoning")
      ->capture_default_str();
  app.add_option("--label", label, "Model label stored in records (default: --model)");
  app.add_option("--shots", shots, "Few-shot exemplars per benchmark (3 for base models)")
      ->capture_default_str();
  app.add_option("--seed", seed, "Seed for exemplar selection")->capture_default_str();
  app.add_option("--parallel", parallel, "Requests in flight")->capture_default_str();
  app.add_option("--max-retries", max_retries)->capture_default_str();
  app.add_option("--max-tokens", max_tokens)->capture_default_str();
  app.add_option("--temperature", temperature)->capture_default_str();
  app.add_option("--top-p", top_p)->capture_default_str();
  app.add_option("--tail-chars", tail_chars, "Answer suffix shown to the judge")
      ->capture_default_str();
  app.add_option("--timeout", timeout_s, "Per-request timeout in seconds")->capture_default_str();
  app.add_flag("--allow-partial", allow_partial, "Exit 0 even if some items failed");
}

namespace {

struct BenchItem {
  GenerationItem item;
  std::string raw_id;
};

std::vector<BenchItem> load_benchmark_file(const std::string& path) {
  const auto stem = std::filesystem::path(path).stem().string();
  std::vector<BenchItem> out;
  for_each_jsonl(std::filesystem::path(path), [&](const nlohmann::json& j, std::size_t line) {
    BenchItem b;
    if (j.contains("benchmark")) {
      b.item.benchmark = parse_benchmark(j["benchmark"].get<std::string>());
    } else if (auto found = find_benchmark(stem)) {
      b.item.benchmark = *found;
    } else {
      throw Error(Errc::UnknownBenchmark, "no benchmark field and file stem '" + stem + "'");
    }
    if (!j.contains("question")) throw Error(Errc::MissingKey, "question");
    b.item.question = j["question"].get<std::string>();
    if (j.contains("id")) {
      b.raw_id = j["id"].is_string() ? j["id"].get<std::string>() : j["id"].dump();
    } else {
      b.raw_id = std::to_string(line);
    }
    b.item.prompt_id = std::string(to_string(b.item.benchmark)) + "/" + b.raw_id;
    for (const char* key : {"answer", "truth"}) {
      if (j.contains(key) && j[key].is_string()) {
        b.item.truth = j[key].get<std::string>();
        break;
      }
    }
    if (!b.item.truth && b.item.benchmark != Benchmark::ifeval) {
      throw Error(Errc::MissingGroundTruth, b.item.prompt_id);
    }
    out.push_back(std::move(b));
  });
  return out;
}

std::string env_or_empty(const char* name) {
  const char* v = std::getenv(name);
  return v ? v : "";
}

}  // namespace

int EvalCommand::execute(RunManifest& m, Streams io) {
  m.seed = seed;
  if (endpoint.empty()) throw Error(Errc::InvalidArgument, "--endpoint (or DISTILL_ENDPOINT) is required");
  if (model.empty()) throw Error(Errc::InvalidArgument, "--model (or DISTILL_MODEL) is required");
  if (judge_model.empty()) {
    throw Error(Errc::InvalidArgument, "--judge-model (or DISTILL_JUDGE_MODEL) is required");
  }
  const AnswerMode answer_mode = parse_answer_mode(mode);

  std::vector<BenchItem> all;
  std::set<std::string> seen;
  for (const auto& path : benchmarks) {
    for (auto& b : load_benchmark_file(path)) {
      if (!seen.insert(b.item.prompt_id).second) {
        throw Error(Errc::DuplicateIds, b.item.prompt_id + " in " + path);
      }
      all.push_back(std::move(b));
    }
    m.inputs.push_back(path);
  }

  // Fixed exemplars per benchmark, drawn once from the seed and excluded
  // from evaluation.
  std::map<Benchmark, std::vector<Shot>> shots_for;
  std::set<std::string> exemplar_ids;
  if (shots > 0) {
    Engine engine(seed);
    for (auto bench : kAllBenchmarks) {
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < all.size(); ++i) {
        if (all[i].item.benchmark == bench) idx.push_back(i);
      }
      if (idx.empty()) continue;
      if (idx.size() <= shots) {
        throw Error(Errc::InvalidArgument, std::string(to_string(bench)) + " has " +
                                               std::to_string(idx.size()) + " items; need more than " +
                                               std::to_string(shots) + " for exemplars");
      }
      seeded_shuffle(idx, engine);
      for (std::size_t k = 0; k < shots; ++k) {
        const auto& ex = all[idx[k]].item;
        shots_for[bench].push_back({ex.question, ex.truth.value_or("")});
        exemplar_ids.insert(ex.prompt_id);
      }
    }
  }

  std::vector<GenerationItem> items;
  for (auto& b : all) {
    if (exemplar_ids.contains(b.item.prompt_id)) continue;
    const auto& sh = shots_for[b.item.benchmark];
    b.item.prompt = render_eval_prompt(b.item.benchmark, b.item.question, sh);
    items.push_back(b.item);
  }

  GenerationSettings settings;
  settings.temperature = temperature;
  settings.top_p = top_p;
  settings.max_tokens = max_tokens;
  settings.n_shots = shots;
  validate_settings(settings);

  Endpoint student{endpoint, model, env_or_empty("DISTILL_API_KEY"),
                   std::chrono::seconds(timeout_s)};
  std::string judge_key = env_or_empty("DISTILL_JUDGE_API_KEY");
  if (judge_key.empty()) judge_key = student.api_key;
  Endpoint judge{judge_endpoint.empty() ? endpoint : judge_endpoint, judge_model, judge_key,
                 std::chrono::seconds(timeout_s)};
  const ChatClient student_client(student);
  const ChatClient judge_client(judge);
  const auto judge_params = GenerationSettings::judge().sampling();
  const std::uint32_t retry_limit = max_retries;
  const std::size_t tail = tail_chars;

  RecordFinalizer judge_fn = [&](const GenerationItem& item, GenerationRecord& rec) {
    const auto prompt =
        render_judge_prompt(item.benchmark, item.question, rec.response, item.truth, tail);
    const auto reply =
        complete_with_retries(judge_client, prompt, judge_params, retry_limit, &rec.retries);
    rec.verdict = parse_verdict(reply.content);
  };

  RunOptions opts;
  opts.max_retries = max_retries;
  opts.parallel = parallel;
  opts.journal = out;
  opts.manifest = m.header();
  opts.model_label = label.empty() ? model : label;
  opts.mode = answer_mode;

  RunStats stats;
  const auto records = run_generation(student_client, settings, items, opts, judge_fn, &stats);

  // Rewrite the journal in item order so reruns produce identical files.
  std::ostringstream body;
  body << nlohmann::json{{"manifest", m.header()}}.dump() << '\n';
  std::size_t verdicted = 0;
  for (const auto& r : records) {
    body << to_json(r).dump() << '\n';
    verdicted += r.verdict.has_value();
  }
  write_file_atomic(out, body.str());
  m.outputs.push_back(out);
  m.details = {{"items", items.size()},
               {"executed", stats.executed},
               {"resumed", stats.resumed},
               {"failed", stats.failed},
               {"retries", stats.retries},
               {"exemplars", exemplar_ids.size()}};
  write_sidecar(out + ".manifest.json", m);

  io.out << "records: " << records.size() << " (" << verdicted << " judged, " << stats.resumed
         << " resumed, " << stats.failed << " failed)\n";
  if (stats.failed > 0 && !allow_partial) return 1;
  return 0;
}

}  // namespace distill::cli
