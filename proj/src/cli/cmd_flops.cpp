#include <fstream>
#include <sstream>

#include "common.hpp"
#include "distill/error.hpp"
#include "distill/flops.hpp"
#include "distill/geometry.hpp"
#include "distill/jsonl.hpp"

namespace distill::cli {

void FlopsCommand::attach(CLI::App& app) {
  app.add_option("--geometry", geometry, "Geometry JSON")->group("Required");
  app.add_option("--records", records,
                 "JSONL with prompt_tokens/completion_tokens (or tokens) per line");
  app.add_option("--lengths", lengths,
                 "Comma-separated lengths; training: L,..., inference: P:G,...");
  app.add_option("--mode", mode, "training | inference")->capture_default_str();
  app.add_option("--out", out, "CSV path (default: stdout)");
  app.add_option("--seed", seed)->capture_default_str();
}

namespace {

struct Row {
  std::string id;
  std::uint64_t prompt = 0;
  std::uint64_t completion = 0;
  std::uint64_t length = 0;  // training sequence length
};

std::uint64_t parse_u64(const std::string& s) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty() || s[0] == '-') {
    throw Error(Errc::InvalidArgument, "not a non-negative integer: '" + s + "'");
  }
  return v;
}

std::vector<Row> rows_from_lengths(const std::string& spec, bool inference) {
  std::vector<Row> rows;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    Row r;
    r.id = "#" + std::to_string(rows.size() + 1);
    if (inference) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) {
        throw Error(Errc::InvalidArgument, "inference lengths are PROMPT:GEN, got '" + item + "'");
      }
      r.prompt = parse_u64(item.substr(0, colon));
      r.completion = parse_u64(item.substr(colon + 1));
    } else {
      r.length = parse_u64(item);
    }
    rows.push_back(r);
  }
  return rows;
}

std::vector<Row> rows_from_records(const std::string& path, bool inference) {
  std::vector<Row> rows;
  for_each_jsonl(std::filesystem::path(path), [&](const nlohmann::json& j, std::size_t line) {
    if (j.contains("manifest")) return;
    Row r;
    r.id = j.contains("prompt_id") ? j["prompt_id"].get<std::string>()
                                   : "line " + std::to_string(line);
    auto count = [&](const char* key) -> std::optional<std::uint64_t> {
      if (j.contains(key) && j[key].is_number_unsigned()) return j[key].get<std::uint64_t>();
      return std::nullopt;
    };
    const auto prompt = count("prompt_tokens");
    const auto completion = count("completion_tokens");
    const auto tokens = count("tokens");
    if (inference) {
      if (!prompt || !completion) throw Error(Errc::MissingTokenCounts, r.id);
      r.prompt = *prompt;
      r.completion = *completion;
    } else if (completion) {
      r.length = prompt.value_or(0) + *completion;
    } else if (tokens) {
      r.length = *tokens;
    } else {
      throw Error(Errc::MissingTokenCounts, r.id);
    }
    rows.push_back(r);
  });
  return rows;
}

}  // namespace

int FlopsCommand::execute(RunManifest& m, Streams io) {
  m.seed = seed;
  const bool inference = mode == "inference";
  if (!inference && mode != "training") {
    throw Error(Errc::InvalidArgument, "--mode must be training or inference");
  }
  if (records.empty() == lengths.empty()) {
    throw Error(Errc::InvalidArgument, "pass exactly one of --records or --lengths");
  }
  std::vector<std::string> warnings;
  const auto g = load_geometry_file(geometry, &warnings);
  for (const auto& w : warnings) io.err << "warning: " << w << "\n";
  m.inputs.push_back(geometry);

  std::vector<Row> rows;
  if (!records.empty()) {
    rows = rows_from_records(records, inference);
    m.inputs.push_back(records);
  } else {
    rows = rows_from_lengths(lengths, inference);
  }

  std::ostringstream csv;
  csv << csv_preamble(m);
  FlopCount total;
  if (inference) {
    csv << "id,prompt_tokens,completion_tokens,flops\n";
    std::uint64_t sum_p = 0;
    std::uint64_t sum_c = 0;
    for (const auto& r : rows) {
      if (r.prompt == 0) {
        throw Error(Errc::InvalidArgument, r.id + ": inference needs prompt_tokens >= 1");
      }
      const auto f = generation_flops(g, r.prompt, r.completion);
      total += f;
      sum_p += r.prompt;
      sum_c += r.completion;
      csv << r.id << ',' << r.prompt << ',' << r.completion << ',' << f.to_string() << '\n';
    }
    csv << "TOTAL," << sum_p << ',' << sum_c << ',' << total.to_string() << '\n';
  } else {
    if (rows.empty()) throw Error(Errc::EmptyLengths, "no sequences");
    csv << "id,seq_len,flops\n";
    std::vector<std::uint64_t> lens;
    std::uint64_t sum_l = 0;
    for (const auto& r : rows) {
      const auto f = training_step_flops(g, r.length);
      lens.push_back(r.length);
      sum_l += r.length;
      csv << r.id << ',' << r.length << ',' << f.to_string() << '\n';
    }
    total = training_total_flops(g, lens);
    csv << "TOTAL," << sum_l << ',' << total.to_string() << '\n';
  }

  m.details["total_flops"] = total.to_string();
  m.details["n_rows"] = rows.size();
  if (out.empty()) {
    io.out << csv.str();
  } else {
    write_file_atomic(out, csv.str());
    m.outputs.push_back(out);
    write_sidecar(std::filesystem::path(out).string() + ".manifest.json", m);
    io.out << "total " << total.to_string() << " FLOPs over " << rows.size() << " rows\n";
  }
  return 0;
}

}  // namespace distill::cli
