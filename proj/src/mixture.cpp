#include "distill/mixture.hpp"

#include <cfenv>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include "distill/error.hpp"
#include "distill/jsonl.hpp"
#include "distill/rng.hpp"

namespace distill {

std::string_view to_string(AnswerMode m) {
  return m == AnswerMode::ift ? "ift" : "reasoning";
}

std::string_view to_string(TrainingOrder o) {
  return o == TrainingOrder::sequential ? "sequential" : "mixed";
}

AnswerMode parse_answer_mode(std::string_view s) {
  if (s == "ift") return AnswerMode::ift;
  if (s == "reasoning") return AnswerMode::reasoning;
  throw Error(Errc::InvalidArgument, "unknown answer mode '" + std::string(s) + "'");
}

TrainingOrder parse_training_order(std::string_view s) {
  if (s == "sequential") return TrainingOrder::sequential;
  if (s == "mixed") return TrainingOrder::mixed;
  throw Error(Errc::InvalidArgument, "unknown training order '" + std::string(s) + "'");
}

void validate_corpus(const PairedCorpus& corpus) {
  std::unordered_set<std::string> seen;
  for (const auto& e : corpus.entries) {
    if (!seen.insert(e.prompt_id).second) {
      throw Error(Errc::DuplicateIds, e.prompt_id);
    }
    if (e.ift_answer.empty() || e.reasoning_answer.empty()) {
      throw Error(Errc::MissingAnswer, e.prompt_id);
    }
  }
}

PairedCorpus parse_paired_corpus(std::istream& in, const std::string& source) {
  PairedCorpus corpus;
  std::unordered_set<std::string> seen;
  for_each_jsonl(in, source, [&](const nlohmann::json& j, std::size_t) {
    for (const char* key : {"prompt_id", "prompt", "ift_answer", "reasoning_answer",
                            "ift_tokens", "reasoning_tokens"}) {
      if (!j.contains(key)) throw Error(Errc::MissingKey, key);
    }
    PairedEntry e;
    e.prompt_id = j.at("prompt_id").get<std::string>();
    e.prompt = j.at("prompt").get<std::string>();
    e.ift_answer = j.at("ift_answer").get<std::string>();
    e.reasoning_answer = j.at("reasoning_answer").get<std::string>();
    e.ift_tokens = j.at("ift_tokens").get<std::uint64_t>();
    e.reasoning_tokens = j.at("reasoning_tokens").get<std::uint64_t>();
    if (!seen.insert(e.prompt_id).second) throw Error(Errc::DuplicateIds, e.prompt_id);
    if (e.ift_answer.empty() || e.reasoning_answer.empty()) {
      throw Error(Errc::MissingAnswer, e.prompt_id);
    }
    corpus.entries.push_back(std::move(e));
  });
  return corpus;
}

PairedCorpus load_paired_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  return parse_paired_corpus(in, path.string());
}

std::size_t reasoning_count(double rho, std::size_t n) {
  if (!(rho >= 0.0 && rho <= 1.0)) {
    throw Error(Errc::RhoOutOfRange, "rho=" + std::to_string(rho));
  }
  const int saved = std::fegetround();
  std::fesetround(FE_TONEAREST);
  const double k = std::nearbyint(rho * static_cast<double>(n));
  std::fesetround(saved);
  return static_cast<std::size_t>(k);
}

namespace {

// Marks which positions of an n-element id list go to reasoning mode.
std::vector<bool> draw_reasoning_mask(std::size_t n, double rho, Engine& engine) {
  const std::size_t k = reasoning_count(rho, n);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  seeded_shuffle(order, engine);
  std::vector<bool> mask(n, false);
  for (std::size_t i = 0; i < k; ++i) mask[order[i]] = true;
  return mask;
}

void check_unique(std::span<const std::string> ids) {
  std::unordered_set<std::string_view> seen;
  for (const auto& id : ids) {
    if (!seen.insert(id).second) throw Error(Errc::DuplicateIds, id);
  }
}

}  // namespace

ReasoningPartition select_reasoning_subset(std::span<const std::string> ids,
                                           double rho, std::uint64_t seed) {
  check_unique(ids);
  Engine engine(seed);
  const auto mask = draw_reasoning_mask(ids.size(), rho, engine);
  ReasoningPartition out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    (mask[i] ? out.reasoning_ids : out.ift_ids).push_back(ids[i]);
  }
  return out;
}

void validate_schedule(const WsdSchedule& s) {
  if (!(s.peak_lr > 0.0) || !std::isfinite(s.peak_lr)) {
    throw Error(Errc::InvalidSchedule, "peak_lr must be positive");
  }
  if (!(s.floor_fraction >= 0.0 && s.floor_fraction <= 1.0)) {
    throw Error(Errc::InvalidSchedule, "floor_fraction must lie in [0, 1]");
  }
  if (s.warmup_steps == 0 || s.decay_steps == 0) {
    throw Error(Errc::InvalidSchedule, "warmup_steps and decay_steps must be >= 1");
  }
  // Step `warmup_steps` must sit on the plateau, so at least one plateau step.
  if (s.total_steps < s.warmup_steps + s.decay_steps + 1) {
    throw Error(Errc::InvalidSchedule,
                "total_steps=" + std::to_string(s.total_steps) + " < warmup_steps + decay_steps + 1 = " +
                    std::to_string(s.warmup_steps + s.decay_steps + 1));
  }
}

double wsd_lr(const WsdSchedule& s, std::uint64_t step) {
  validate_schedule(s);
  if (step >= s.total_steps) {
    throw Error(Errc::StepOutOfRange, "step " + std::to_string(step) + " >= total_steps " +
                                          std::to_string(s.total_steps));
  }
  if (step <= s.warmup_steps) {
    const double frac = static_cast<double>(step) / static_cast<double>(s.warmup_steps);
    return s.peak_lr * frac;
  }
  const std::uint64_t decay_start = s.total_steps - 1 - s.decay_steps;
  if (step <= decay_start) return s.peak_lr;
  const double frac = static_cast<double>(step - decay_start) /
                      static_cast<double>(s.decay_steps);
  return s.peak_lr * ((1.0 - frac) + frac * s.floor_fraction);
}

std::vector<std::pair<std::uint64_t, double>> schedule_points(const WsdSchedule& s) {
  validate_schedule(s);
  std::vector<std::pair<std::uint64_t, double>> out;
  out.reserve(s.total_steps);
  for (std::uint64_t i = 0; i < s.total_steps; ++i) out.emplace_back(i, wsd_lr(s, i));
  return out;
}

std::optional<double> lookup_peak_lr(const nlohmann::json& table,
                                     std::string_view model, AnswerMode mode) {
  const std::string key(model);
  if (!table.is_object() || !table.contains(key)) return std::nullopt;
  const auto& row = table.at(key);
  const std::string m(to_string(mode));
  if (!row.is_object() || !row.contains(m) || !row.at(m).is_number()) return std::nullopt;
  return row.at(m).get<double>();
}

TrainingPlan build_plan(const PairedCorpus& corpus, const MixtureSpec& spec) {
  validate_corpus(corpus);
  Engine engine(spec.seed);
  const auto mask = draw_reasoning_mask(corpus.entries.size(), spec.rho, engine);

  auto make_example = [&](std::size_t i) {
    const auto& e = corpus.entries[i];
    PlanExample ex;
    ex.prompt_id = e.prompt_id;
    ex.mode_used = mask[i] ? AnswerMode::reasoning : AnswerMode::ift;
    ex.answer = mask[i] ? e.reasoning_answer : e.ift_answer;
    ex.tokens = mask[i] ? e.reasoning_tokens : e.ift_tokens;
    return ex;
  };

  TrainingPlan plan;
  plan.spec = spec;
  if (spec.order == TrainingOrder::mixed) {
    for (std::size_t i = 0; i < corpus.entries.size(); ++i) {
      plan.examples.push_back(make_example(i));
    }
    seeded_shuffle(plan.examples, engine);
    return plan;
  }

  std::vector<PlanExample> ift_block;
  std::vector<PlanExample> reasoning_block;
  for (std::size_t i = 0; i < corpus.entries.size(); ++i) {
    (mask[i] ? reasoning_block : ift_block).push_back(make_example(i));
  }
  seeded_shuffle(ift_block, engine);
  seeded_shuffle(reasoning_block, engine);
  plan.examples = std::move(ift_block);
  plan.examples.insert(plan.examples.end(),
                       std::make_move_iterator(reasoning_block.begin()),
                       std::make_move_iterator(reasoning_block.end()));
  return plan;
}

std::string plan_to_jsonl(const TrainingPlan& plan) {
  std::string out;
  for (const auto& ex : plan.examples) {
    nlohmann::json j;
    j["prompt_id"] = ex.prompt_id;
    j["mode_used"] = to_string(ex.mode_used);
    j["answer"] = ex.answer;
    j["tokens"] = ex.tokens;
    out += j.dump();
    out += '\n';
  }
  return out;
}

nlohmann::json plan_manifest(const TrainingPlan& plan) {
  nlohmann::json m;
  m["rho"] = plan.spec.rho;
  m["order"] = to_string(plan.spec.order);
  m["seed"] = plan.spec.seed;
  m["prng"] = kPrngId;
  m["sequential_block_shuffle"] = plan.spec.order == TrainingOrder::sequential;
  m["n_examples"] = plan.examples.size();
  std::size_t n_reasoning = 0;
  for (const auto& ex : plan.examples) n_reasoning += ex.mode_used == AnswerMode::reasoning;
  m["n_reasoning"] = n_reasoning;
  if (plan.schedule) {
    const auto& s = *plan.schedule;
    m["schedule"] = {{"kind", "wsd"},
                     {"peak_lr", s.peak_lr},
                     {"warmup_steps", s.warmup_steps},
                     {"decay_steps", s.decay_steps},
                     {"total_steps", s.total_steps},
                     {"floor_fraction", s.floor_fraction}};
  }
  return m;
}

}  // namespace distill
