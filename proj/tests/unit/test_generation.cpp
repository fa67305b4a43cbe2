#include <doctest.h>

#include <atomic>
#include <map>
#include <mutex>

#include "distill/chat_client.hpp"
#include "distill/error.hpp"
#include "distill/generation.hpp"
#include "distill/records.hpp"
#include "mock_server.hpp"
#include "temp_dir.hpp"

using namespace distill;
using testing_support::TempDir;

namespace {

std::vector<GenerationItem> make_items(std::size_t n) {
  std::vector<GenerationItem> items;
  for (std::size_t i = 0; i < n; ++i) {
    GenerationItem it;
    it.prompt_id = "gsm8k/" + std::to_string(i);
    it.benchmark = Benchmark::gsm8k;
    it.question = "q" + std::to_string(i);
    it.prompt = "prompt " + std::to_string(i);
    it.truth = std::to_string(i);
    items.push_back(it);
  }
  return items;
}

// Answers "echo <prompt>" with token counts derived from the prompt number.
mock::Reply echo(const nlohmann::json& req) {
  const auto p = mock::prompt_of(req);
  const auto n = std::stoull(p.substr(p.find(' ') + 1));
  return mock::chat("echo " + p + " \\boxed{" + std::to_string(n) + "}", 100 + n, 7 * n + 1);
}

std::size_t journal_lines(const std::filesystem::path& p) {
  const auto s = testing_support::slurp(p);
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_SUITE("generation") {
  TEST_CASE("request shape and usage pass-through") {
    mock::Server server([](const nlohmann::json&) { return mock::chat("fixed \\boxed{A}", 31, 17); });
    ChatClient client({server.url(), "student-x", "secret-key", std::chrono::seconds(5)});
    auto r = client.complete("hello", {0.6, 0.95, 1234});
    CHECK(r.content == "fixed \\boxed{A}");
    CHECK(r.prompt_tokens == 31);
    CHECK(r.completion_tokens == 17);
    CHECK(r.finish_reason == "stop");
    const auto seen = server.seen();
    REQUIRE(seen.size() == 1);
    CHECK(seen[0]["model"] == "student-x");
    CHECK(seen[0]["temperature"] == 0.6);
    CHECK(seen[0]["top_p"] == 0.95);
    CHECK(seen[0]["max_tokens"] == 1234);
    CHECK(seen[0]["messages"][0]["role"] == "user");
    CHECK(seen[0]["messages"][0]["content"] == "hello");
  }

  TEST_CASE("url forms resolve to the same route") {
    mock::Server server([](const nlohmann::json&) { return mock::chat("ok", 1, 1); });
    for (const auto& url : {server.url(), server.url() + "/v1", server.url() + "/v1/",
                            server.url() + "/v1/chat/completions"}) {
      CAPTURE(url);
      ChatClient client({url, "m", "", std::chrono::seconds(5)});
      CHECK(client.complete("x", {}).content == "ok");
    }
  }

  TEST_CASE("failure kinds") {
    std::atomic<int> mode{0};
    mock::Server server([&](const nlohmann::json&) -> mock::Reply {
      switch (mode.load()) {
        case 0: return mock::status(503);
        case 1: return {200, "not json"};
        default: return {200, R"({"choices":[]})"};
      }
    });
    ChatClient client({server.url(), "m", "", std::chrono::seconds(5)});
    for (int m : {0, 1, 2}) {
      mode = m;
      try {
        client.complete("x", {});
        FAIL("expected ChatError");
      } catch (const ChatError& e) {
        CHECK(e.kind() == (m == 0 ? ChatFailure::http_status : ChatFailure::malformed));
      }
    }
    ChatClient dead({"http://127.0.0.1:1", "m", "", std::chrono::seconds(2)});
    try {
      dead.complete("x", {});
      FAIL("expected ChatError");
    } catch (const ChatError& e) {
      CHECK(e.kind() == ChatFailure::unreachable);
    }
  }

  TEST_CASE("pass-through of token counts") {
    mock::Server server(echo);
    ChatClient client({server.url(), "m", "", std::chrono::seconds(5)});
    auto items = make_items(5);
    RunOptions opts;
    opts.model_label = "label";
    opts.mode = AnswerMode::reasoning;
    auto recs = run_generation(client, GenerationSettings::student_eval(), items, opts);
    REQUIRE(recs.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK(recs[i].prompt_id == items[i].prompt_id);
      CHECK(recs[i].prompt_tokens == 100 + i);
      CHECK(recs[i].completion_tokens == 7 * i + 1);
      CHECK(recs[i].extracted_answer == std::to_string(i));
      CHECK(recs[i].model == "label");
      CHECK(recs[i].mode == AnswerMode::reasoning);
      CHECK(recs[i].retries == 0);
      CHECK(recs[i].ok());
    }
  }

  TEST_CASE("length finish marks truncation") {
    mock::Server server([](const nlohmann::json&) { return mock::chat("cut off", 5, 16384, "length"); });
    ChatClient client({server.url(), "m", "", std::chrono::seconds(5)});
    auto recs = run_generation(client, GenerationSettings::student_eval(), make_items(1), {});
    CHECK(recs[0].truncated);
    CHECK_FALSE(recs[0].extracted_answer.has_value());
  }

  TEST_CASE("fail once then succeed") {
    std::mutex mu;
    std::map<std::string, int> calls;
    mock::Server server([&](const nlohmann::json& req) {
      const auto p = mock::prompt_of(req);
      std::lock_guard lock(mu);
      if (calls[p]++ == 0) return mock::status(500);
      return echo(req);
    });
    ChatClient client({server.url(), "m", "", std::chrono::seconds(5)});
    RunStats stats;
    RunOptions opts;
    opts.max_retries = 2;
    auto recs = run_generation(client, GenerationSettings::student_eval(), make_items(3), opts, {}, &stats);
    for (const auto& r : recs) {
      CHECK(r.ok());
      CHECK(r.retries == 1);
    }
    CHECK(stats.retries == 3);
    CHECK(server.requests() == 6);
  }

  TEST_CASE("exhausted retries leave an error marker") {
    mock::Server server([](const nlohmann::json&) { return mock::status(500); });
    ChatClient client({server.url(), "m", "", std::chrono::seconds(5)});
    RunStats stats;
    RunOptions opts;
    opts.max_retries = 2;
    auto recs = run_generation(client, GenerationSettings::student_eval(), make_items(2), opts, {}, &stats);
    for (const auto& r : recs) {
      CHECK_FALSE(r.ok());
      CHECK(r.retries == 2);
    }
    CHECK(stats.failed == 2);
    CHECK(server.requests() == 6);

    mock::Server garbage([](const nlohmann::json&) { return mock::Reply{200, "{}"}; });
    ChatClient gc({garbage.url(), "m", "", std::chrono::seconds(5)});
    opts.max_retries = 0;
    auto bad = run_generation(gc, GenerationSettings::student_eval(), make_items(1), opts);
    REQUIRE(bad[0].error.has_value());
    CHECK(bad[0].error->starts_with("MalformedResponse(gsm8k/0)"));
  }

  TEST_CASE("unreachable endpoint") {
    ChatClient client({"http://127.0.0.1:1", "m", "", std::chrono::seconds(2)});
    RunOptions opts;
    opts.max_retries = 0;
    try {
      run_generation(client, GenerationSettings::student_eval(), make_items(2), opts);
      FAIL("expected EndpointUnreachable");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::EndpointUnreachable);
    }
  }

  TEST_CASE("resume after 50 of 100 issues exactly 50 requests") {
    TempDir dir;
    const auto journal = dir / "records.jsonl";
    const auto items = make_items(100);
    RunOptions opts;
    opts.journal = journal;
    opts.manifest = {{"command", "test"}};
    {
      mock::Server server(echo);
      ChatClient client({server.url(), "m", "", std::chrono::seconds(5)});
      run_generation(client, GenerationSettings::student_eval(), items, opts);
      CHECK(server.requests() == 100);
    }
    // Keep the header and the first 50 records, then add a torn half-line
    // as a killed writer would leave it.
    const auto text = testing_support::slurp(journal);
    std::size_t cut = 0;
    for (int i = 0; i < 51; ++i) cut = text.find('\n', cut) + 1;
    testing_support::spit(journal, text.substr(0, cut) + R"({"prompt_id":"gsm8k/50","bench)");

    mock::Server server(echo);
    ChatClient client({server.url(), "m", "", std::chrono::seconds(5)});
    RunStats stats;
    opts.parallel = 4;
    auto recs = run_generation(client, GenerationSettings::student_eval(), items, opts, {}, &stats);
    CHECK(server.requests() == 50);
    CHECK(stats.resumed == 50);
    CHECK(stats.executed == 50);
    REQUIRE(recs.size() == 100);
    for (std::size_t i = 0; i < 100; ++i) {
      CHECK(recs[i].prompt_id == items[i].prompt_id);
      CHECK(recs[i].completion_tokens == 7 * i + 1);
    }
    CHECK(journal_lines(journal) == 101);
    CHECK(read_records(journal).size() == 100);

    auto again = run_generation(client, GenerationSettings::student_eval(), items, opts);
    CHECK(server.requests() == 50);
    CHECK(again.size() == 100);
  }

  TEST_CASE("failed records are retried on resume") {
    TempDir dir;
    RunOptions opts;
    opts.journal = dir / "j.jsonl";
    opts.max_retries = 0;
    {
      mock::Server server([](const nlohmann::json& req) {
        return mock::prompt_of(req) == "prompt 1" ? mock::status(500) : echo(req);
      });
      ChatClient client({server.url(), "m", "", std::chrono::seconds(5)});
      RunStats stats;
      run_generation(client, GenerationSettings::student_eval(), make_items(3), opts, {}, &stats);
      CHECK(stats.failed == 1);
    }
    mock::Server server(echo);
    ChatClient client({server.url(), "m", "", std::chrono::seconds(5)});
    auto recs = run_generation(client, GenerationSettings::student_eval(), make_items(3), opts);
    CHECK(server.requests() == 1);
    CHECK(recs[1].ok());
    CHECK(read_records(opts.journal)[1].ok());
  }

  TEST_CASE("order is kept under parallel completion") {
    mock::Server server([](const nlohmann::json& req) {
      const auto p = mock::prompt_of(req);
      const auto n = std::stoull(p.substr(p.find(' ') + 1));
      std::this_thread::sleep_for(std::chrono::milliseconds((37 * n) % 11));
      return echo(req);
    });
    ChatClient client({server.url(), "m", "", std::chrono::seconds(5)});
    RunOptions opts;
    opts.parallel = 8;
    const auto items = make_items(40);
    auto recs = run_generation(client, GenerationSettings::student_eval(), items, opts);
    for (std::size_t i = 0; i < items.size(); ++i) CHECK(recs[i].prompt_id == items[i].prompt_id);
  }

  TEST_CASE("finalizer verdicts and resume requires them") {
    TempDir dir;
    RunOptions opts;
    opts.journal = dir / "j.jsonl";
    mock::Server server(echo);
    ChatClient client({server.url(), "m", "", std::chrono::seconds(5)});
    std::atomic<int> judged{0};
    RecordFinalizer judge = [&](const GenerationItem&, GenerationRecord& r) {
      ++judged;
      r.verdict = JudgeVerdict{Verdict::correct, "\\boxed{yes}"};
    };
    // First pass without a judge: records complete for generation only.
    run_generation(client, GenerationSettings::student_eval(), make_items(4), opts);
    CHECK(server.requests() == 4);
    auto recs = run_generation(client, GenerationSettings::student_eval(), make_items(4), opts, judge);
    CHECK(server.requests() == 8);
    CHECK(judged == 4);
    for (const auto& r : recs) CHECK(r.is_correct());
    run_generation(client, GenerationSettings::student_eval(), make_items(4), opts, judge);
    CHECK(server.requests() == 8);
  }

  TEST_CASE("bearer key is sent") {
    std::atomic<bool> ok{false};
    httplib::Server raw;
    raw.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
      ok = req.get_header_value("Authorization") == "Bearer k-123";
      auto r = mock::chat("x", 1, 1);
      res.set_content(r.body, "application/json");
    });
    const int port = raw.bind_to_any_port("127.0.0.1");
    std::thread t([&] { raw.listen_after_bind(); });
    raw.wait_until_ready();
    ChatClient client({"http://127.0.0.1:" + std::to_string(port), "m", "k-123", std::chrono::seconds(5)});
    client.complete("x", {});
    raw.stop();
    t.join();
    CHECK(ok);
  }
}
