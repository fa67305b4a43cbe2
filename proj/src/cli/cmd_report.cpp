#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "common.hpp"
#include "distill/accuracy.hpp"
#include "distill/budget.hpp"
#include "distill/error.hpp"
#include "distill/flops.hpp"
#include "distill/jsonl.hpp"
#include "distill/length_stats.hpp"
#include "distill/pareto.hpp"
#include "distill/power_law.hpp"
#include "distill/saturating.hpp"
#include "distill/sensitivity.hpp"

namespace distill::cli {

void ReportCommand::attach(CLI::App& app) {
  app.add_option("--records", records, "Records JSONL files")->group("Required");
  app.add_option("--models", models,
                 "JSON {label: {geometry: path, size: number}}; enables FLOPs reports");
  app.add_option("--points", points, "Extra cost points CSV: label,flops,accuracy");
  app.add_option("--out", out_dir, "Output directory")->group("Required");
  app.add_option("--percentile", percentiles, "Budget percentiles (default 0 25 50 75 100)");
  app.add_option("--teacher-accuracy", teacher_accuracy, "Accuracy cap for saturating fits")
      ->capture_default_str();
  app.add_option("--x-scale", x_scale, "FLOPs unit for the saturating search")
      ->capture_default_str();
  app.add_option("--starts", starts, "Multi-starts for the saturating search")
      ->capture_default_str();
  app.add_option("--seed", seed)->capture_default_str();
}

namespace {

struct ModelInfo {
  ModelGeometry geometry;
  std::optional<double> size;
};

std::map<std::string, ModelInfo> load_models(const std::string& path, std::ostream& err) {
  std::map<std::string, ModelInfo> out;
  if (path.empty()) return out;
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path);
  nlohmann::json doc;
  in >> doc;
  const auto base = std::filesystem::path(path).parent_path();
  for (const auto& [label, entry] : doc.items()) {
    if (!entry.contains("geometry")) throw Error(Errc::MissingKey, label + ".geometry");
    ModelInfo info;
    std::vector<std::string> warnings;
    std::filesystem::path g = entry["geometry"].get<std::string>();
    if (g.is_relative()) g = base / g;
    info.geometry = load_geometry_file(g, &warnings);
    for (const auto& w : warnings) err << "warning: " << g.string() << ": " << w << "\n";
    if (entry.contains("size")) info.size = entry["size"].get<double>();
    out.emplace(label, std::move(info));
  }
  return out;
}

std::vector<CostPoint> load_points_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path);
  std::vector<CostPoint> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#' || line.starts_with("label,")) continue;
    std::stringstream ss(line);
    CostPoint p;
    std::string flops;
    std::string acc;
    if (!std::getline(ss, p.label, ',') || !std::getline(ss, flops, ',') ||
        !std::getline(ss, acc, ',')) {
      throw Error(Errc::ParseError, path + ":" + std::to_string(lineno) + ": expected 3 columns");
    }
    try {
      p.flops = std::stod(flops);
      p.accuracy = std::stod(acc);
    } catch (const std::exception&) {
      throw Error(Errc::ParseError, path + ":" + std::to_string(lineno) + ": bad number");
    }
    validate_point(p);
    out.push_back(p);
  }
  return out;
}

using Group = std::pair<std::string, AnswerMode>;  // (model, mode)

std::string group_label(const Group& g) {
  return g.first + "/" + std::string(to_string(g.second));
}

// Mean multi-token inference FLOPs per record; nullopt without geometry.
std::optional<double> mean_inference_flops(const std::vector<GenerationRecord>& recs,
                                           const ModelInfo* info) {
  if (info == nullptr || recs.empty()) return std::nullopt;
  FlopCount total;
  for (const auto& r : recs) {
    total += generation_flops(info->geometry, std::max<std::uint64_t>(r.prompt_tokens, 1),
                              r.completion_tokens);
  }
  return total.to_double() / static_cast<double>(recs.size());
}

std::string opt_fmt(const std::optional<double>& v) { return v ? fmt(*v) : ""; }

}  // namespace

int ReportCommand::execute(RunManifest& m, Streams io) {
  m.seed = seed;
  if (percentiles.empty()) percentiles.assign(kBudgetPercentiles.begin(), kBudgetPercentiles.end());
  for (auto p : percentiles) {
    if (p > 100) throw Error(Errc::InvalidArgument, "percentile must be <= 100");
  }

  std::map<Group, std::vector<GenerationRecord>> groups;
  std::vector<GenerationRecord> all;
  std::size_t skipped = 0;
  for (const auto& path : records) {
    for (auto& r : read_records(path)) {
      if (!r.ok() || !r.verdict) {
        ++skipped;
        continue;
      }
      groups[{r.model, r.mode}].push_back(r);
      all.push_back(std::move(r));
    }
    m.inputs.push_back(path);
  }
  if (skipped > 0) io.err << "warning: skipped " << skipped << " failed or unjudged records\n";
  if (all.empty()) throw Error(Errc::EmptyRecordSet, "no judged records");

  const auto model_info = load_models(models, io.err);
  if (!models.empty()) m.inputs.push_back(models);
  auto info_for = [&](const std::string& model) -> const ModelInfo* {
    auto it = model_info.find(model);
    return it == model_info.end() ? nullptr : &it->second;
  };

  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  const std::string pre = csv_preamble(m);
  auto emit = [&](const std::string& name, const std::string& body) {
    const auto path = dir / name;
    write_file_atomic(path, pre + body);
    m.outputs.push_back(path.string());
  };

  // Accuracy per benchmark, category and overall.
  {
    std::ostringstream csv;
    csv << "model,mode,level,name,n,accuracy,invalid_rate\n";
    for (const auto& [g, recs] : groups) {
      const auto rep = category_accuracy(recs);
      const std::string head = g.first + "," + std::string(to_string(g.second)) + ",";
      for (const auto& [b, cell] : rep.benchmarks) {
        csv << head << "benchmark," << to_string(b) << ',' << cell.total << ','
            << fmt(cell.accuracy()) << ',' << fmt(cell.invalid_rate()) << '\n';
      }
      for (const auto& [c, score] : rep.categories) {
        csv << head << "category," << to_string(c) << ',' << score.n_benchmarks << ','
            << fmt(score.accuracy) << ',' << fmt(score.invalid_rate) << '\n';
      }
      csv << head << "overall,all," << rep.categories.size() << ',' << fmt(rep.overall())
          << ",\n";
    }
    emit("accuracy.csv", csv.str());
  }

  // Inference cost points and frontiers.
  std::vector<CostPoint> inference_points;
  std::map<AnswerMode, std::vector<CostPoint>> points_by_mode;
  for (const auto& [g, recs] : groups) {
    const auto flops = mean_inference_flops(recs, info_for(g.first));
    if (!flops || *flops <= 0.0) continue;
    CostPoint p{group_label(g), *flops, category_accuracy(recs).overall()};
    inference_points.push_back(p);
    points_by_mode[g.second].push_back(p);
  }
  {
    std::ostringstream csv;
    csv << "family,label,flops,accuracy\n";
    auto write_family = [&](const std::string& family, const std::vector<CostPoint>& pts) {
      if (pts.empty()) return;
      for (const auto& p : pareto_frontier(pts)) {
        csv << family << ',' << p.label << ',' << fmt(p.flops) << ',' << fmt(p.accuracy) << '\n';
      }
    };
    write_family("inference", inference_points);
    if (!points.empty()) {
      write_family("points", load_points_csv(points));
      m.inputs.push_back(points);
    }
    emit("frontier.csv", csv.str());

    std::ostringstream all_csv;
    all_csv << "label,flops,accuracy\n";
    for (const auto& p : inference_points) {
      all_csv << p.label << ',' << fmt(p.flops) << ',' << fmt(p.accuracy) << '\n';
    }
    emit("inference_points.csv", all_csv.str());
  }

  // Saturating fits per training format, power laws per format/category.
  {
    std::ostringstream csv;
    csv << "kind,group,n_points,status,alpha,beta,gamma,delta,acc_cap,mae,r2_log\n";
    for (const auto& [mode, pts] : points_by_mode) {
      const std::string head = "saturating," + std::string(to_string(mode)) + "," +
                               std::to_string(pts.size()) + ",";
      try {
        SaturatingFitOptions opt;
        opt.seed = seed;
        opt.x_scale = x_scale;
        opt.starts = starts;
        const auto fit = fit_saturating(pts, teacher_accuracy, opt);
        csv << head << "ok," << fmt(fit.alpha) << ',' << fmt(fit.beta) << ',' << fmt(fit.gamma)
            << ',' << fmt(fit.delta) << ',' << fmt(fit.acc_cap) << ',' << fmt(fit.mae) << ",\n";
      } catch (const Error& e) {
        csv << head << to_string(e.code()) << ",,,,," << fmt(teacher_accuracy) << ",,\n";
      }
    }
    for (auto mode : {AnswerMode::ift, AnswerMode::reasoning}) {
      for (auto cat : kAllCategories) {
        std::vector<std::pair<double, double>> xy;
        for (const auto& [g, recs] : groups) {
          if (g.second != mode) continue;
          const auto* info = info_for(g.first);
          if (info == nullptr || !info->size) continue;
          std::vector<GenerationRecord> sub;
          for (const auto& r : recs) {
            if (r.category() == cat) sub.push_back(r);
          }
          if (auto f = mean_inference_flops(sub, info)) xy.emplace_back(*info->size, *f);
        }
        if (xy.empty()) continue;
        const std::string head = "power_law," + std::string(to_string(mode)) + ":" +
                                 std::string(to_string(cat)) + "," + std::to_string(xy.size()) + ",";
        try {
          const auto fit = fit_power_law(xy);
          csv << head << "ok," << fmt(fit.alpha) << ',' << fmt(fit.beta_exp) << ",,,,,"
              << fmt(fit.r2_log) << '\n';
        } catch (const Error& e) {
          csv << head << to_string(e.code()) << ",,,,,,,\n";
        }
      }
    }
    emit("fits.csv", csv.str());
  }

  // Length statistics by correctness, plus the accuracy line.
  {
    const auto stats = length_stats(all);
    std::ostringstream csv;
    csv << "model,category,correct,count,mean_tokens,median_tokens\n";
    for (const auto& c : stats.cells) {
      csv << c.model << ',' << to_string(c.category) << ',' << (c.correct ? "true" : "false")
          << ',' << c.count << ',' << opt_fmt(c.mean_tokens) << ',' << opt_fmt(c.median_tokens)
          << '\n';
    }
    emit("length_stats.csv", csv.str());
    std::ostringstream acc;
    acc << "model,category,accuracy\n";
    for (const auto& a : stats.accuracy) {
      acc << a.model << ',' << to_string(a.category) << ',' << fmt(a.accuracy) << '\n';
    }
    emit("length_accuracy.csv", acc.str());
  }

  // Task sensitivity for models evaluated in both formats.
  {
    std::ostringstream csv;
    csv << "model,benchmark,category,ift_mean_tokens,reasoning_mean_tokens,extra_token_factor,"
           "ift_accuracy,reasoning_accuracy,accuracy_gain_pp\n";
    std::set<std::string> model_names;
    for (const auto& [g, _] : groups) model_names.insert(g.first);
    for (const auto& name : model_names) {
      auto ift_it = groups.find({name, AnswerMode::ift});
      auto rea_it = groups.find({name, AnswerMode::reasoning});
      if (ift_it == groups.end() || rea_it == groups.end()) continue;
      std::set<Benchmark> in_ift;
      std::set<Benchmark> common;
      for (const auto& r : ift_it->second) in_ift.insert(r.benchmark);
      for (const auto& r : rea_it->second) {
        if (in_ift.contains(r.benchmark)) common.insert(r.benchmark);
      }
      std::vector<GenerationRecord> ift;
      std::vector<GenerationRecord> rea;
      for (const auto& r : ift_it->second) {
        if (common.contains(r.benchmark)) ift.push_back(r);
      }
      for (const auto& r : rea_it->second) {
        if (common.contains(r.benchmark)) rea.push_back(r);
      }
      if (common.empty()) continue;
      for (const auto& s : task_sensitivity(ift, rea)) {
        csv << name << ',' << to_string(s.benchmark) << ',' << to_string(category_of(s.benchmark))
            << ',' << fmt(s.ift_mean_tokens) << ',' << fmt(s.reasoning_mean_tokens) << ','
            << fmt(s.extra_token_factor) << ',' << fmt(s.ift_accuracy) << ','
            << fmt(s.reasoning_accuracy) << ',' << fmt(s.accuracy_gain_pp()) << '\n';
      }
    }
    emit("sensitivity.csv", csv.str());
  }

  // Length-budget sweep.
  {
    std::ostringstream csv;
    csv << "model,mode,percentile,threshold_tokens,n_truncated,accuracy,mean_inference_flops\n";
    for (const auto& [g, recs] : groups) {
      std::vector<std::uint64_t> lengths;
      for (const auto& r : recs) lengths.push_back(r.completion_tokens);
      for (auto p : percentiles) {
        const auto capped = apply_length_budget(recs, p);
        std::size_t truncated = 0;
        for (std::size_t i = 0; i < capped.size(); ++i) {
          truncated += capped[i].completion_tokens < recs[i].completion_tokens;
        }
        csv << g.first << ',' << to_string(g.second) << ',' << p << ','
            << nearest_rank(lengths, p) << ',' << truncated << ','
            << fmt(category_accuracy(capped).overall()) << ','
            << opt_fmt(mean_inference_flops(capped, info_for(g.first))) << '\n';
      }
    }
    emit("budget.csv", csv.str());
  }

  m.details = {{"groups", groups.size()}, {"records", all.size()}, {"skipped", skipped}};
  write_sidecar(dir / "report.manifest.json", m);
  io.out << "report: " << all.size() << " records in " << groups.size() << " groups -> "
         << dir.string() << "\n";
  return 0;
}

}  // namespace distill::cli
