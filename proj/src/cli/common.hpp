#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

namespace distill::cli {

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

// Resolved settings and provenance of one command invocation. Everything
// except the timestamps is deterministic for identical inputs.
struct RunManifest {
  std::string command;
  nlohmann::json config;  // resolved options, secrets excluded
  std::uint64_t seed = 0;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::string started_at;
  nlohmann::json details = nlohmann::json::object();  // command-specific summary

  std::string digest() const;
  // Short form embedded in data files.
  nlohmann::json header() const;
  // Sidecar form, including timestamps and paths.
  nlohmann::json full() const;
};

std::string utc_now();

// Snapshot of an App's options: results if given, else the default string.
nlohmann::json resolved_options(const CLI::App& app);

// Fills options that were neither given on the command line nor through
// their environment variable from `config` (top-level keys, overridden by a
// section named after the subcommand).
void apply_config(CLI::App& app, const nlohmann::json& config);

// Shortest round-trip decimal form of a double.
std::string fmt(double v);

void write_sidecar(const std::filesystem::path& path, const RunManifest& m);

// CSV files start with a comment line naming the manifest digest.
std::string csv_preamble(const RunManifest& m);

// Each subcommand binds its options in attach() and runs in execute(),
// which receives a manifest with command/config/started_at filled in.
struct MixCommand {
  std::string corpus;
  double rho = 0.0;
  std::string mode = "sequential";
  std::uint64_t seed = 0;
  std::string out_dir;
  std::string model;
  std::string lr_format;
  double peak_lr = 0.0;
  std::uint64_t total_steps = 0;
  std::uint64_t batch_tokens = 262144;
  std::uint64_t warmup_steps = 150;
  std::uint64_t decay_steps = 300;
  std::string lr_table;

  void attach(CLI::App& app);
  int execute(RunManifest& m, Streams io);
};

struct FlopsCommand {
  std::string geometry;
  std::string records;
  std::string lengths;
  std::string mode = "training";
  std::string out;
  std::uint64_t seed = 0;

  void attach(CLI::App& app);
  int execute(RunManifest& m, Streams io);
};

struct EvalCommand {
  std::string endpoint;
  std::string model;
  std::string judge_endpoint;
  std::string judge_model;
  std::vector<std::string> benchmarks;
  std::string out;
  std::string mode = "ift";
  std::string label;
  std::uint32_t shots = 0;
  std::uint64_t seed = 0;
  std::size_t parallel = 4;
  std::uint32_t max_retries = 2;
  std::uint64_t max_tokens = 16384;
  double temperature = 1.0;
  double top_p = 1.0;
  std::size_t tail_chars = 4000;
  std::uint64_t timeout_s = 600;
  bool allow_partial = false;

  void attach(CLI::App& app);
  int execute(RunManifest& m, Streams io);
};

struct ReportCommand {
  std::vector<std::string> records;
  std::string models;
  std::string points;
  std::string out_dir;
  std::vector<unsigned> percentiles;
  double teacher_accuracy = 1.0;
  double x_scale = 1e12;
  std::size_t starts = 32;
  std::uint64_t seed = 0;

  void attach(CLI::App& app);
  int execute(RunManifest& m, Streams io);
};

}  // namespace distill::cli
