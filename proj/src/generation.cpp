#include "distill/generation.hpp"

#include <atomic>
#include <fstream>
#include <iterator>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "distill/error.hpp"

namespace distill {

void validate_settings(const GenerationSettings& s) {
  if (!(s.temperature >= 0.0)) {
    throw Error(Errc::InvalidArgument, "temperature must be >= 0");
  }
  if (!(s.top_p > 0.0 && s.top_p <= 1.0)) {
    throw Error(Errc::InvalidArgument, "top_p must lie in (0, 1]");
  }
}

namespace {

// Serializes appends from the worker threads.
class JournalWriter {
 public:
  JournalWriter(const std::filesystem::path& path, const nlohmann::json& manifest) {
    if (path.empty()) return;
    const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
    out_.open(path, std::ios::app | std::ios::binary);
    if (!out_) throw Error(Errc::IoError, "cannot open journal " + path.string());
    if (fresh && !manifest.is_null()) {
      out_ << nlohmann::json{{"manifest", manifest}}.dump() << '\n';
      out_.flush();
    }
  }

  void append(const GenerationRecord& r) {
    if (!out_.is_open()) return;
    std::lock_guard lock(mu_);
    out_ << to_json(r).dump() << '\n';
    out_.flush();
  }

 private:
  std::ofstream out_;
  std::mutex mu_;
};

// A run killed mid-append leaves an unterminated last line; drop it so the
// journal parses and the item is simply redone.
void drop_torn_tail(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  const std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (data.empty() || data.back() == '\n') return;
  const auto cut = data.rfind('\n');
  in.close();
  std::filesystem::resize_file(path, cut == std::string::npos ? 0 : cut + 1);
}

}  // namespace

std::vector<GenerationRecord> run_generation(const ChatClient& client,
                                             const GenerationSettings& settings,
                                             std::span<const GenerationItem> items,
                                             const RunOptions& options,
                                             const RecordFinalizer& finalize,
                                             RunStats* stats) {
  validate_settings(settings);

  std::unordered_map<std::string, GenerationRecord> done;
  if (!options.journal.empty() && std::filesystem::exists(options.journal)) {
    drop_torn_tail(options.journal);
    for (auto& r : read_records(options.journal)) {
      const bool complete = r.ok() && (!finalize || r.verdict.has_value());
      if (complete) done.emplace(r.prompt_id, std::move(r));
    }
  }

  std::vector<GenerationRecord> out(items.size());
  std::vector<std::size_t> pending;
  RunStats local;
  for (std::size_t i = 0; i < items.size(); ++i) {
    auto it = done.find(items[i].prompt_id);
    if (it != done.end()) {
      out[i] = it->second;
      ++local.resumed;
    } else {
      pending.push_back(i);
    }
  }

  JournalWriter journal(options.journal, options.manifest);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  std::mutex err_mu;
  std::optional<Error> fatal;
  std::atomic<std::size_t> failed{0};
  std::atomic<std::size_t> retries{0};

  auto work = [&] {
    for (;;) {
      if (abort.load()) return;
      const std::size_t k = next.fetch_add(1);
      if (k >= pending.size()) return;
      const auto& item = items[pending[k]];

      GenerationRecord rec;
      rec.prompt_id = item.prompt_id;
      rec.benchmark = item.benchmark;
      rec.mode = options.mode;
      rec.model = options.model_label;
      try {
        auto resp = complete_with_retries(client, item.prompt, settings.sampling(),
                                          options.max_retries, &rec.retries);
        rec.response = std::move(resp.content);
        rec.prompt_tokens = resp.prompt_tokens;
        rec.completion_tokens = resp.completion_tokens;
        rec.truncated = resp.finish_reason == "length";
        rec.extracted_answer = extract_boxed(rec.response);
        if (finalize) finalize(item, rec);
      } catch (const ChatError& e) {
        if (e.kind() == ChatFailure::unreachable) {
          std::lock_guard lock(err_mu);
          if (!fatal) fatal.emplace(Errc::EndpointUnreachable, e.what());
          abort.store(true);
          return;
        }
        rec.error = e.kind() == ChatFailure::malformed
                        ? "MalformedResponse(" + item.prompt_id + "): " + e.what()
                        : std::string(e.what());
      } catch (const Error& e) {
        rec.error = e.what();
      }
      if (rec.error) ++failed;
      retries += rec.retries;
      journal.append(rec);
      out[pending[k]] = std::move(rec);
    }
  };

  const std::size_t n_workers =
      std::max<std::size_t>(1, std::min(options.parallel, pending.size()));
  {
    std::vector<std::jthread> workers;
    for (std::size_t w = 0; w < n_workers; ++w) workers.emplace_back(work);
  }
  if (fatal) throw *fatal;

  local.executed = pending.size();
  local.failed = failed.load();
  local.retries = retries.load();
  if (stats != nullptr) *stats = local;
  return out;
}

}  // namespace distill
