#include <fstream>
#include <sstream>

#include "common.hpp"
#include "distill/error.hpp"
#include "distill/jsonl.hpp"
#include "distill/mixture.hpp"

namespace distill::cli {

void MixCommand::attach(CLI::App& app) {
  app.add_option("--corpus", corpus, "Paired-corpus JSONL")->group("Required");
  app.add_option("--rho", rho, "Reasoning ratio in [0, 1]")->group("Required");
  app.add_option("--mode", mode, "sequential | mixed")->capture_default_str();
  app.add_option("--seed", seed, "Seed for selection and shuffling")->capture_default_str();
  app.add_option("--out", out_dir, "Output directory")->group("Required");
  app.add_option("--model", model, "Student model name for the peak-LR table");
  app.add_option("--lr-format", lr_format,
                 "Peak-LR column: ift | reasoning (required for 0 < rho < 1 with --model)");
  app.add_option("--peak-lr", peak_lr, "Explicit peak learning rate");
  app.add_option("--total-steps", total_steps, "Optimizer steps (default: from token counts)");
  app.add_option("--batch-tokens", batch_tokens, "Tokens per optimizer step")
      ->capture_default_str();
  app.add_option("--warmup-steps", warmup_steps)->capture_default_str();
  app.add_option("--decay-steps", decay_steps)->capture_default_str();
  app.add_option("--lr-table", lr_table, "Peak-LR table JSON")
      ->default_str(DISTILL_DATA_DIR "/peak_lr.json");
}

namespace {

std::optional<double> resolve_peak_lr(const MixCommand& c) {
  if (c.peak_lr > 0.0) return c.peak_lr;
  if (c.model.empty()) return std::nullopt;

  AnswerMode format;
  if (!c.lr_format.empty()) {
    format = parse_answer_mode(c.lr_format);
  } else if (c.rho == 0.0) {
    format = AnswerMode::ift;
  } else if (c.rho == 1.0) {
    format = AnswerMode::reasoning;
  } else {
    throw Error(Errc::InvalidArgument,
                "rho=" + fmt(c.rho) + " mixes formats; pass --lr-format or --peak-lr");
  }
  const std::string table_path = c.lr_table.empty() ? DISTILL_DATA_DIR "/peak_lr.json" : c.lr_table;
  std::ifstream in(table_path);
  if (!in) throw Error(Errc::IoError, "cannot open " + table_path);
  nlohmann::json table;
  in >> table;
  auto lr = lookup_peak_lr(table, c.model, format);
  if (!lr) {
    throw Error(Errc::MissingKey, "no peak LR for (" + c.model + ", " +
                                      std::string(to_string(format)) +
                                      ") in " + table_path + "; pass --peak-lr");
  }
  return lr;
}

}  // namespace

int MixCommand::execute(RunManifest& m, Streams io) {
  m.seed = seed;
  MixtureSpec spec;
  spec.rho = rho;
  spec.order = parse_training_order(mode);
  spec.seed = seed;
  // Validate rho before touching the corpus so the error is about rho.
  (void)reasoning_count(rho, 0);

  const auto corpus_data = load_paired_corpus(corpus);
  m.inputs.push_back(corpus);
  TrainingPlan plan = build_plan(corpus_data, spec);

  if (auto lr = resolve_peak_lr(*this)) {
    WsdSchedule s;
    s.peak_lr = *lr;
    s.warmup_steps = warmup_steps;
    s.decay_steps = decay_steps;
    if (total_steps > 0) {
      s.total_steps = total_steps;
    } else {
      std::uint64_t tokens = 0;
      for (const auto& ex : plan.examples) tokens += ex.tokens;
      s.total_steps = batch_tokens ? (tokens + batch_tokens - 1) / batch_tokens : 0;
      if (s.total_steps < warmup_steps + decay_steps + 1) {
        throw Error(Errc::InvalidSchedule,
                    "corpus yields only " + std::to_string(s.total_steps) +
                        " steps of " + std::to_string(batch_tokens) +
                        " tokens; pass --total-steps");
      }
    }
    validate_schedule(s);
    plan.schedule = s;
  }

  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  const auto plan_path = dir / "plan.jsonl";
  const auto manifest_path = dir / "plan.manifest.json";

  nlohmann::json header = m.header();
  header["plan"] = plan_manifest(plan);
  std::string body = nlohmann::json{{"manifest", header}}.dump() + "\n" + plan_to_jsonl(plan);
  write_file_atomic(plan_path, body);
  m.outputs.push_back(plan_path.string());

  if (plan.schedule) {
    const auto sched_path = dir / "schedule.csv";
    std::ostringstream csv;
    csv << csv_preamble(m) << "step,lr\n";
    for (const auto& [step, lr] : schedule_points(*plan.schedule)) {
      csv << step << ',' << fmt(lr) << '\n';
    }
    write_file_atomic(sched_path, csv.str());
    m.outputs.push_back(sched_path.string());
  }

  m.details["plan"] = header["plan"];
  write_sidecar(manifest_path, m);

  const auto& pm = header["plan"];
  io.out << "wrote " << plan_path.string() << ": " << pm["n_examples"].get<std::size_t>()
         << " examples, " << pm["n_reasoning"].get<std::size_t>() << " reasoning\n";
  return 0;
}

}  // namespace distill::cli
