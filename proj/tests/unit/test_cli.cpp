#include <doctest.h>

#include <cstdlib>

#include "cli_run.hpp"
#include "distill/flops.hpp"
#include "distill/geometry.hpp"
#include "distill/records.hpp"
#include "e2e.hpp"
#include "oracles.hpp"
#include "temp_dir.hpp"

using namespace testing_support;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = fs::path(DISTILL_SOURCE_DIR) / "tests/fixtures";

std::vector<nlohmann::json> plan_lines(const fs::path& p) {
  std::vector<nlohmann::json> out;
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) out.push_back(nlohmann::json::parse(line));
  return out;
}

std::vector<std::string> eval_args(const std::string& url, const fs::path& bench,
                                   const fs::path& out, const std::string& mode) {
  return {"eval",        "--endpoint",    url,
          "--model",     "student-" + mode, "--label",
          "student",     "--mode",        mode,
          "--judge-model", "judge",       "--benchmarks",
          bench.string(), "--out",        out.string(),
          "--parallel",  "3"};
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("version and usage") {
    auto v = run_cli({"--version"});
    CHECK(v.code == 0);
    CHECK(v.out.find(distill::cli::kToolVersion) != std::string::npos);
    CHECK(run_cli({}).code != 0);
    CHECK(run_cli({"mix"}).code == 2);
  }

  TEST_CASE("mix: sequential quarter on the 8-entry fixture") {
    TempDir dir;
    auto r = run_cli({"mix", "--corpus", (kFixtures / "paired_8.jsonl").string(), "--rho", "0.25",
                      "--mode", "sequential", "--seed", "3", "--out", dir.path().string()});
    REQUIRE(r.code == 0);
    auto lines = plan_lines(dir / "plan.jsonl");
    REQUIRE(lines.size() == 9);
    CHECK(lines[0].contains("manifest"));
    CHECK(lines[0]["manifest"]["plan"]["n_reasoning"] == 2);
    CHECK(lines[0]["manifest"]["plan"]["prng"] == "mt19937_64/fisher-yates-rejection/v1");
    for (std::size_t i = 1; i <= 6; ++i) CHECK(lines[i]["mode_used"] == "ift");
    for (std::size_t i = 7; i <= 8; ++i) {
      CHECK(lines[i]["mode_used"] == "reasoning");
      CHECK(lines[i]["answer"].get<std::string>().starts_with("<think>"));
    }
    CHECK(fs::exists(dir / "plan.manifest.json"));
    CHECK_FALSE(fs::exists(dir / "schedule.csv"));

    // Same inputs, byte-identical plan.
    const auto first = slurp(dir / "plan.jsonl");
    run_cli({"mix", "--corpus", (kFixtures / "paired_8.jsonl").string(), "--rho", "0.25", "--mode",
             "sequential", "--seed", "3", "--out", dir.path().string()});
    CHECK(slurp(dir / "plan.jsonl") == first);
  }

  TEST_CASE("mix: rho 0 keeps only IFT answers") {
    TempDir dir;
    auto r = run_cli({"mix", "--corpus", (kFixtures / "paired_8.jsonl").string(), "--rho", "0",
                      "--out", dir.path().string()});
    REQUIRE(r.code == 0);
    auto lines = plan_lines(dir / "plan.jsonl");
    for (std::size_t i = 1; i < lines.size(); ++i) {
      CHECK(lines[i]["answer"].get<std::string>().starts_with("The answer is"));
    }
  }

  TEST_CASE("mix: bad rho") {
    TempDir dir;
    auto r = run_cli({"mix", "--corpus", (kFixtures / "paired_8.jsonl").string(), "--rho", "1.5",
                      "--out", dir.path().string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("RhoOutOfRange") != std::string::npos);
  }

  TEST_CASE("mix: schedule from the peak-LR table") {
    TempDir dir;
    auto r = run_cli({"mix", "--corpus", (kFixtures / "paired_8.jsonl").string(), "--rho", "1",
                      "--model", "Qwen2.5-1.5B", "--total-steps", "600", "--out",
                      dir.path().string()});
    REQUIRE(r.code == 0);
    auto rows = read_csv(dir / "schedule.csv");
    REQUIRE(rows.size() == 600);
    CHECK(std::stod(rows[150]["lr"]) == 1e-5);
    CHECK(std::stod(rows[599]["lr"]) == 0.1 * 1e-5);
    const auto header = plan_lines(dir / "plan.jsonl")[0]["manifest"];
    CHECK(first_line(dir / "schedule.csv") ==
          "# manifest_sha256=" + header["config_digest"].get<std::string>());
    CHECK(header["plan"]["schedule"]["peak_lr"] == 1e-5);

    auto mixed = run_cli({"mix", "--corpus", (kFixtures / "paired_8.jsonl").string(), "--rho", "0.5",
                          "--model", "Qwen2.5-1.5B", "--total-steps", "600", "--out",
                          dir.path().string()});
    CHECK(mixed.code == 2);
    auto unknown = run_cli({"mix", "--corpus", (kFixtures / "paired_8.jsonl").string(), "--rho", "1",
                            "--model", "Llama-9B", "--total-steps", "600", "--out",
                            dir.path().string()});
    CHECK(unknown.code == 2);
    CHECK(unknown.err.find("MissingKey") != std::string::npos);
  }

  TEST_CASE("config file precedence") {
    TempDir dir;
    const auto cfg = dir / "cfg.json";
    spit(cfg, nlohmann::json{{"seed", 11},
                             {"mix",
                              {{"corpus", (kFixtures / "paired_8.jsonl").string()},
                               {"rho", 0.5},
                               {"mode", "mixed"},
                               {"out", (dir / "a").string()}}}}
                  .dump());
    REQUIRE(run_cli({"--config", cfg.string(), "mix"}).code == 0);
    auto a = plan_lines(dir / "a/plan.jsonl")[0]["manifest"];
    CHECK(a["seed"] == 11);
    CHECK(a["plan"]["order"] == "mixed");
    CHECK(a["plan"]["n_reasoning"] == 4);

    REQUIRE(run_cli({"--config", cfg.string(), "mix", "--seed", "12", "--out",
                     (dir / "b").string()})
                .code == 0);
    auto b = plan_lines(dir / "b/plan.jsonl")[0]["manifest"];
    CHECK(b["seed"] == 12);
    CHECK(b["plan"]["order"] == "mixed");
  }

  TEST_CASE("flops: training zeros") {
    auto r = run_cli({"flops", "--geometry", (kFixtures / "tiny_geometry.json").string(), "--mode",
                      "training", "--lengths", "0,0"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("\nTOTAL,0,0\n") != std::string::npos);
  }

  TEST_CASE("flops: inference totals match the oracle") {
    TempDir dir;
    const auto out = dir / "f.csv";
    auto r = run_cli({"flops", "--geometry", (kFixtures / "tiny_geometry.json").string(), "--mode",
                      "inference", "--records", (kFixtures / "records_3.jsonl").string(), "--out",
                      out.string()});
    REQUIRE(r.code == 0);
    const auto g = distill::load_geometry_file(kFixtures / "tiny_geometry.json");
    const auto want = oracle::generation(g, 3, 2) + oracle::generation(g, 5, 0) +
                      oracle::generation(g, 8, 11);
    auto rows = read_csv(out);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0]["id"] == "gsm8k/1");
    CHECK(rows[0]["flops"] == "1996");
    CHECK(rows[3]["id"] == "TOTAL");
    CHECK(rows[3]["flops"] == distill::FlopCount(want).to_string());
    CHECK(fs::exists(dir / "f.csv.manifest.json"));

    auto training = run_cli({"flops", "--geometry", (kFixtures / "tiny_geometry.json").string(),
                             "--mode", "training", "--records",
                             (kFixtures / "records_3.jsonl").string()});
    REQUIRE(training.code == 0);
    const auto tw = oracle::training_step(g, 5) + oracle::training_step(g, 5) +
                    oracle::training_step(g, 19);
    CHECK(training.out.find("TOTAL,29," + distill::FlopCount(tw).to_string()) != std::string::npos);
  }

  TEST_CASE("flops: missing counts name the record") {
    TempDir dir;
    const auto recs = dir / "r.jsonl";
    spit(recs, R"({"prompt_id":"ok","prompt_tokens":2,"completion_tokens":3})"
               "\n"
               R"({"prompt_id":"broken-7","prompt_tokens":2})"
               "\n");
    auto r = run_cli({"flops", "--geometry", (kFixtures / "tiny_geometry.json").string(), "--mode",
                      "inference", "--records", recs.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("MissingTokenCounts") != std::string::npos);
    CHECK(r.err.find("broken-7") != std::string::npos);
  }

  TEST_CASE("eval then report on the 12-item scenario") {
    TempDir dir;
    const auto bench = dir / "items.jsonl";
    e2e::write_benchmarks(bench);
    mock::Server server(e2e::handle);

    const auto ift = dir / "ift.jsonl";
    auto r = run_cli(eval_args(server.url(), bench, ift, "ift"));
    INFO(r.err);
    REQUIRE(r.code == 0);
    CHECK(server.requests() == 24);
    auto recs = distill::read_records(ift);
    REQUIRE(recs.size() == 12);
    for (const auto& rec : recs) CHECK(rec.verdict.has_value());
    CHECK(recs[0].prompt_id == "winogrande/1");
    CHECK(recs[0].is_correct());
    CHECK(recs[0].completion_tokens == 20);

    const auto before = slurp(ift);
    REQUIRE(run_cli(eval_args(server.url(), bench, ift, "ift")).code == 0);
    CHECK(server.requests() == 24);
    CHECK(slurp(ift) == before);

    const auto rea = dir / "rea.jsonl";
    REQUIRE(run_cli(eval_args(server.url(), bench, rea, "reasoning")).code == 0);
    CHECK(server.requests() == 48);

    const auto models = dir / "models.json";
    spit(models, nlohmann::json{{"student", {{"geometry", (kFixtures / "tiny_geometry.json").string()},
                                             {"size", 0.5}}}}
                     .dump());
    const auto out = dir / "report";
    auto rep = run_cli({"report", "--records", ift.string(), rea.string(), "--models",
                        models.string(), "--out", out.string()});
    INFO(rep.err);
    REQUIRE(rep.code == 0);

    auto sens = read_csv(out / "sensitivity.csv");
    CHECK(sens.size() == 12);
    auto budget = read_csv(out / "budget.csv");
    std::map<std::string, std::vector<double>> by_mode;
    for (auto& row : budget) by_mode[row["mode"]].push_back(std::stod(row["accuracy"]));
    for (auto& [mode, accs] : by_mode) {
      CAPTURE(mode);
      REQUIRE(accs.size() == 5);
      for (std::size_t i = 1; i < accs.size(); ++i) CHECK(accs[i] >= accs[i - 1]);
    }
    auto frontier = read_csv(out / "frontier.csv");
    REQUIRE_FALSE(frontier.empty());
    for (std::size_t i = 1; i < frontier.size(); ++i) {
      CHECK(std::stod(frontier[i]["flops"]) >= std::stod(frontier[i - 1]["flops"]));
      CHECK(std::stod(frontier[i]["accuracy"]) >= std::stod(frontier[i - 1]["accuracy"]));
    }
    for (const char* name : {"accuracy.csv", "fits.csv", "length_stats.csv", "length_accuracy.csv",
                             "inference_points.csv"}) {
      CAPTURE(name);
      CHECK(first_line(out / name).starts_with("# manifest_sha256="));
    }
    CHECK(fs::exists(out / "report.manifest.json"));

    // Reports are reproducible byte for byte.
    const auto acc = slurp(out / "accuracy.csv");
    const auto fits = slurp(out / "fits.csv");
    REQUIRE(run_cli({"report", "--records", ift.string(), rea.string(), "--models", models.string(),
                     "--out", out.string()})
                .code == 0);
    CHECK(slurp(out / "accuracy.csv") == acc);
    CHECK(slurp(out / "fits.csv") == fits);
  }

  TEST_CASE("eval: judge prose is an invalid verdict") {
    TempDir dir;
    const auto bench = dir / "gsm8k.jsonl";
    spit(bench, R"({"id":"a","question":"1+1?","answer":"2"})" "\n");
    mock::Server server([](const nlohmann::json& req) {
      if (req["model"] == "judge") return mock::chat("Looks equivalent to me.", 1, 1);
      return mock::chat("\\boxed{2}", 1, 1);
    });
    const auto out = dir / "r.jsonl";
    auto r = run_cli({"eval", "--endpoint", server.url(), "--model", "s", "--judge-model", "judge",
                      "--benchmarks", bench.string(), "--out", out.string()});
    REQUIRE(r.code == 0);
    auto recs = distill::read_records(out);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].prompt_id == "gsm8k/a");
    CHECK(recs[0].verdict->outcome == distill::Verdict::invalid);
  }

  TEST_CASE("eval: failures set the exit code unless partial results are allowed") {
    TempDir dir;
    const auto bench = dir / "aime.jsonl";
    spit(bench, R"({"id":1,"question":"q","answer":"a"})" "\n");
    mock::Server server([](const nlohmann::json&) { return mock::status(500); });
    auto args = std::vector<std::string>{"eval", "--endpoint", server.url(), "--model", "s",
                                         "--judge-model", "judge", "--benchmarks", bench.string(),
                                         "--out", (dir / "r.jsonl").string(), "--max-retries", "0"};
    CHECK(run_cli(args).code == 1);
    args.push_back("--allow-partial");
    CHECK(run_cli(args).code == 0);
  }

  TEST_CASE("eval: endpoint from the environment") {
    TempDir dir;
    const auto bench = dir / "gsm8k.jsonl";
    spit(bench, R"({"id":"a","question":"1+1?","answer":"2"})" "\n");
    mock::Server server([](const nlohmann::json& req) {
      if (req["model"] == "judge") return mock::chat("\\boxed{yes}", 1, 1);
      return mock::chat("\\boxed{2}", 1, 1);
    });
    ::setenv("DISTILL_ENDPOINT", server.url().c_str(), 1);
    auto r = run_cli({"eval", "--model", "s", "--judge-model", "judge", "--benchmarks",
                      bench.string(), "--out", (dir / "r.jsonl").string()});
    ::unsetenv("DISTILL_ENDPOINT");
    CHECK(r.code == 0);
    CHECK(server.requests() == 2);
  }

  TEST_CASE("eval: few-shot exemplars are excluded from evaluation") {
    TempDir dir;
    const auto bench = dir / "gsm8k.jsonl";
    std::string body;
    for (int i = 0; i < 6; ++i) {
      body += nlohmann::json{{"id", i}, {"question", "q" + std::to_string(i)}, {"answer", "a"}}.dump() + "\n";
    }
    spit(bench, body);
    mock::Server server([](const nlohmann::json& req) {
      if (req["model"] == "judge") return mock::chat("\\boxed{yes}", 1, 1);
      return mock::chat("\\boxed{a}", 1, 1);
    });
    auto r = run_cli({"eval", "--endpoint", server.url(), "--model", "s", "--judge-model", "judge",
                      "--benchmarks", bench.string(), "--out", (dir / "r.jsonl").string(),
                      "--shots", "3", "--parallel", "1"});
    REQUIRE(r.code == 0);
    CHECK(distill::read_records(dir / "r.jsonl").size() == 3);
    for (const auto& req : server.seen()) {
      if (req["model"] == "judge") continue;
      const auto prompt = mock::prompt_of(req);
      std::size_t n = 0;
      for (auto p = prompt.find("Question: "); p != std::string::npos; p = prompt.find("Question: ", p + 1)) ++n;
      CHECK(n == 4);
    }
  }
}
