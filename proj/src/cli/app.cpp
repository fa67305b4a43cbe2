#include <chrono>
#include <ctime>
#include <fstream>

#include "common.hpp"
#include "distill/cli.hpp"
#include "distill/digest.hpp"
#include "distill/error.hpp"
#include "distill/jsonl.hpp"

namespace distill::cli {

std::string RunManifest::digest() const {
  nlohmann::json j{{"command", command}, {"config", config}, {"tool_version", kToolVersion}};
  return sha256_hex(j.dump());
}

nlohmann::json RunManifest::header() const {
  return {{"command", command},
          {"config_digest", digest()},
          {"seed", seed},
          {"tool_version", kToolVersion}};
}

nlohmann::json RunManifest::full() const {
  auto j = header();
  j["config"] = config;
  j["inputs"] = inputs;
  j["outputs"] = outputs;
  j["started_at"] = started_at;
  j["finished_at"] = utc_now();
  j["details"] = details;
  return j;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace {

bool is_internal(const CLI::Option* opt, const CLI::App& app) {
  return opt == app.get_help_ptr() || opt->get_single_name() == "config";
}

std::vector<std::string> as_strings(const nlohmann::json& v) {
  std::vector<std::string> out;
  auto one = [](const nlohmann::json& x) {
    if (x.is_string()) return x.get<std::string>();
    if (x.is_boolean()) return std::string(x.get<bool>() ? "true" : "false");
    return x.dump();
  };
  if (v.is_array()) {
    for (const auto& x : v) out.push_back(one(x));
  } else {
    out.push_back(one(v));
  }
  return out;
}

}  // namespace

nlohmann::json resolved_options(const CLI::App& app) {
  nlohmann::json j = nlohmann::json::object();
  for (const CLI::Option* opt : app.get_options()) {
    if (is_internal(opt, app)) continue;
    const std::string name = opt->get_single_name();
    if (opt->count() > 0) {
      const auto& res = opt->results();
      if (opt->get_items_expected_max() > 1) {
        j[name] = res;
      } else {
        j[name] = res.empty() ? std::string() : res.back();
      }
    } else {
      j[name] = opt->get_default_str();
    }
  }
  return j;
}

void apply_config(CLI::App& app, const nlohmann::json& config) {
  if (!config.is_object()) return;
  const nlohmann::json empty = nlohmann::json::object();
  const auto& section = config.contains(app.get_name()) && config[app.get_name()].is_object()
                            ? config[app.get_name()]
                            : empty;
  for (CLI::Option* opt : app.get_options({})) {
    if (is_internal(opt, app) || opt->count() > 0) continue;
    const std::string name = opt->get_single_name();
    const nlohmann::json* value = nullptr;
    if (section.contains(name)) {
      value = &section[name];
    } else if (config.contains(name) && !config[name].is_object()) {
      value = &config[name];
    }
    if (value == nullptr) continue;
    opt->add_result(as_strings(*value));
    opt->run_callback();
  }
}

std::string fmt(double v) { return nlohmann::json(v).dump(); }

void write_sidecar(const std::filesystem::path& path, const RunManifest& m) {
  write_file_atomic(path, m.full().dump(2) + "\n");
}

std::string csv_preamble(const RunManifest& m) {
  return "# manifest_sha256=" + m.digest() + "\n";
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compute-aware distillation toolkit: mixtures, FLOPs, evaluation, reports",
               "distill"};
  app.set_version_flag("--version", kToolVersion);
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (flag > env > config > default)");
  app.require_subcommand(1);

  MixCommand mix;
  FlopsCommand flops;
  EvalCommand eval;
  ReportCommand report;
  auto* mix_app = app.add_subcommand("mix", "Build a reasoning-ratio training plan");
  auto* flops_app = app.add_subcommand("flops", "Training or inference FLOPs per record");
  auto* eval_app = app.add_subcommand("eval", "Generate and judge benchmark answers");
  auto* report_app = app.add_subcommand("report", "Accuracy, frontier, fit and budget reports");
  mix.attach(*mix_app);
  flops.attach(*flops_app);
  eval.attach(*eval_app);
  report.attach(*report_app);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw Error(Errc::IoError, "cannot open config " + config_path);
      nlohmann::json doc;
      try {
        in >> doc;
      } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::ParseError, config_path + ": " + e.what());
      }
      apply_config(*sub, doc);
    }
    // Checked here rather than by CLI11 so a config file can supply them.
    for (const CLI::Option* opt : sub->get_options()) {
      if (opt->get_group() == "Required" && opt->count() == 0) {
        throw Error(Errc::InvalidArgument, opt->get_name() + " is required");
      }
    }
    RunManifest m;
    m.command = sub->get_name();
    m.config = resolved_options(*sub);
    m.started_at = utc_now();
    if (config_path.size()) m.inputs.push_back(config_path);

    if (sub == mix_app) return mix.execute(m, {out, err});
    if (sub == flops_app) return flops.execute(m, {out, err});
    if (sub == eval_app) return eval.execute(m, {out, err});
    return report.execute(m, {out, err});
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace distill::cli
