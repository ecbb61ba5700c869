#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <mutex>
#include <set>
#include <thread>

#include <httplib.h>

#include "textsynth/client.hpp"
#include "textsynth/corpus_io.hpp"
#include "textsynth/mock_server.hpp"
#include "textsynth/toy_backend.hpp"

using namespace textsynth;

namespace {

Corpus fixture_corpus() {
    Corpus corpus("fixture");
    const std::vector<std::pair<std::string, std::string>> rows = {
        {"wake me up at seven", "alarm"},
        {"set an alarm for six", "alarm"},
        {"cancel my alarm now", "alarm"},
        {"send an email to john", "email"},
        {"check my inbox please", "email"},
        {"reply to the last email", "email"},
        {"play some jazz music", "music"},
        {"skip to the next song", "music"},
        {"pause the music please", "music"},
    };
    for (std::size_t i = 0; i < rows.size(); ++i) {
        corpus.add({"u" + std::to_string(i), rows[i].first, rows[i].second, Source::kReal});
    }
    return corpus;
}

std::string endpoint_of(const MockLlmServer& server) {
    return "http://127.0.0.1:" + std::to_string(server.port());
}

}  // namespace

TEST_CASE("toy service parses the target domain from the final instruction line") {
    CHECK(*ToyCompletionService::parse_target_domain(
              "Please generate a sentence related to alarm:") == "alarm");
    CHECK(*ToyCompletionService::parse_target_domain(
              "Please generate a sentence related to email: x\n"
              "Please generate a sentence related to weather:") == "weather");
    CHECK(!ToyCompletionService::parse_target_domain("complete this").has_value());
}

TEST_CASE("toy service completes deterministically per seed") {
    ToyCompletionService service(fixture_corpus());
    CompletionRequest request;
    request.prompt = "Please generate a sentence related to alarm:";
    request.seed = 3;
    request.max_tokens = 16;
    const auto first = service.complete(request);
    const auto second = service.complete(request);
    CHECK(first.text == second.text);
    CHECK(first.finish_reason == second.finish_reason);
    if (first.finish_reason == FinishReason::kStop) {
        CHECK(first.text.find('\n') == std::string::npos);
    }
}

TEST_CASE("complete against the mock returns non-empty text with a valid finish reason") {
    MockLlmServer server(fixture_corpus());
    server.start(0);
    HttpCompletionClient client(endpoint_of(server));
    CompletionRequest request;
    request.prompt = "Please generate a sentence related to alarm:";
    request.seed = 1;
    const CompletionResponse response = client.complete(request);
    CHECK(!response.text.empty());
    CHECK((response.finish_reason == FinishReason::kStop ||
           response.finish_reason == FinishReason::kLength));
    // finish_reason stop implies no stop string inside the text.
    if (response.finish_reason == FinishReason::kStop) {
        CHECK(response.text.find('\n') == std::string::npos);
    }
    server.stop();
}

TEST_CASE("unreachable endpoint raises a retryable error within the timeout") {
    HttpCompletionClient client("http://127.0.0.1:1", std::chrono::milliseconds(2000));
    CompletionRequest request;
    request.prompt = "x";
    const auto start = std::chrono::steady_clock::now();
    try {
        client.complete(request);
        FAIL("expected ClientError");
    } catch (const ClientError& e) {
        CHECK(e.retryable());
    }
    const auto elapsed = std::chrono::steady_clock::now() - start;
    CHECK(elapsed < std::chrono::seconds(5));
}

TEST_CASE("HTTP 500 surfaces as a non-retryable error with status and body") {
    MockLlmServer server(fixture_corpus());
    server.set_fail_rate(1.0);
    server.start(0);
    HttpCompletionClient client(endpoint_of(server));
    CompletionRequest request;
    request.prompt = "Please generate a sentence related to alarm:";
    try {
        client.complete(request);
        FAIL("expected ClientError");
    } catch (const ClientError& e) {
        CHECK(e.status() == 500);
        CHECK(!e.retryable());
        CHECK(e.body().find("injected") != std::string::npos);
    }
    server.stop();
}

TEST_CASE("generate_corpus produces n labeled synthetic utterances") {
    ToyCompletionService backend(fixture_corpus());
    PromptStrategy strategy{StrategyKind::kNaive, 0};
    SamplingConfig cfg;
    cfg.seed = 0;
    cfg.max_tokens = 12;
    GenerateStats stats;
    const Corpus corpus =
        generate_corpus(backend, strategy, "weather", fixture_corpus(), 1, cfg, 1, &stats);
    REQUIRE(corpus.size() == 1);
    CHECK(corpus.at(0).domain == "weather");
    CHECK(corpus.at(0).source == Source::kSynthetic);
    CHECK(stats.generated == 1);
    CHECK(stats.requested == 1);
}

TEST_CASE("generate_corpus is independent of max_in_flight over HTTP") {
    MockLlmServer server(fixture_corpus());
    server.start(0);
    HttpCompletionClient client(endpoint_of(server));
    PromptStrategy strategy{StrategyKind::kIcif, 2};
    SamplingConfig cfg;
    cfg.seed = 11;
    cfg.max_tokens = 12;
    const Corpus sequential =
        generate_corpus(client, strategy, "cooking", fixture_corpus(), 24, cfg, 1);
    const Corpus parallel =
        generate_corpus(client, strategy, "cooking", fixture_corpus(), 24, cfg, 8);
    REQUIRE(sequential.size() == parallel.size());
    for (std::size_t i = 0; i < sequential.size(); ++i) {
        CHECK(sequential.at(i).id == parallel.at(i).id);
        CHECK(sequential.at(i).text == parallel.at(i).text);
    }
    CHECK(server.max_observed_in_flight() <= 8);
    server.stop();
}

TEST_CASE("generate_corpus aborts when more than 20% of sentences fail") {
    MockLlmServer server(fixture_corpus());
    server.set_fail_rate(0.5);
    server.start(0);
    HttpCompletionClient client(endpoint_of(server));
    PromptStrategy strategy{StrategyKind::kNaive, 0};
    SamplingConfig cfg;
    cfg.seed = 2;
    try {
        generate_corpus(client, strategy, "alarm", fixture_corpus(), 40, cfg, 4);
        FAIL("expected GenerationAborted");
    } catch (const GenerationAborted& e) {
        CHECK(e.stats().failed > 8);
        CHECK(e.partial().size() == e.stats().generated);
    }
    server.stop();
}

TEST_CASE("blank completions are retried then skipped with a warning count") {
    // Every sentence of this corpus tokenizes to nothing, so the toy LM can
    // only ever emit EOS and completions come back blank.
    Corpus punctuation("punct");
    punctuation.add({"p0", "!!!", "d", Source::kReal});
    punctuation.add({"p1", "...", "d", Source::kReal});
    ToyCompletionService backend(punctuation);
    PromptStrategy strategy{StrategyKind::kNaive, 0};
    SamplingConfig cfg;
    GenerateStats stats;
    const Corpus corpus =
        generate_corpus(backend, strategy, "d", punctuation, 5, cfg, 2, &stats);
    CHECK(corpus.empty());
    CHECK(stats.skipped_blank == 5);
    CHECK(stats.failed == 0);
}

TEST_CASE("generate_corpus validates its arguments") {
    ToyCompletionService backend(fixture_corpus());
    PromptStrategy strategy{StrategyKind::kIcl, 100};   // more demos than source size
    SamplingConfig cfg;
    CHECK_THROWS_AS(generate_corpus(backend, strategy, "d", fixture_corpus(), 1, cfg, 1),
                    std::invalid_argument);
    PromptStrategy naive{StrategyKind::kNaive, 0};
    CHECK_THROWS_AS(generate_corpus(backend, naive, "d", fixture_corpus(), 0, cfg, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(generate_corpus(backend, naive, "d", fixture_corpus(), 1, cfg, 0),
                    std::invalid_argument);
}

TEST_CASE("transient failures are retried with the same seed") {
    // Backend that fails each sentence's first attempt with a retryable
    // error, then succeeds.
    class FlakyBackend : public CompletionBackend {
    public:
        CompletionResponse complete(const CompletionRequest& request) override {
            std::lock_guard<std::mutex> lock(mutex_);
            REQUIRE(request.seed.has_value());
            seeds_.push_back(*request.seed);
            if (failed_once_.insert(*request.seed).second) {
                throw ClientError("transient", /*retryable=*/true);
            }
            return {" sentence for seed " + std::to_string(*request.seed),
                    FinishReason::kStop};
        }
        std::set<uint64_t> failed_once_;
        std::vector<uint64_t> seeds_;
        std::mutex mutex_;
    } backend;

    PromptStrategy strategy{StrategyKind::kNaive, 0};
    SamplingConfig cfg;
    cfg.seed = 21;
    GenerateStats stats;
    const Corpus corpus =
        generate_corpus(backend, strategy, "alarm", fixture_corpus(), 2, cfg, 1, &stats);
    CHECK(corpus.size() == 2);
    CHECK(stats.failed == 0);
    // Each sentence was attempted twice with an unperturbed seed.
    REQUIRE(backend.seeds_.size() == 4);
    CHECK(backend.seeds_[0] == backend.seeds_[1]);
    CHECK(backend.seeds_[2] == backend.seeds_[3]);
}

TEST_CASE("bearer token is passed through as an Authorization header") {
    httplib::Server server;
    std::string seen_auth;
    server.Post("/v1/complete", [&](const httplib::Request& req, httplib::Response& res) {
        seen_auth = req.get_header_value("Authorization");
        res.set_content(R"({"text":" ok","finish_reason":"stop"})", "application/json");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread thread([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    HttpCompletionClient client("http://127.0.0.1:" + std::to_string(port));
    client.set_bearer_token("sekrit");
    CompletionRequest request;
    request.prompt = "x";
    const auto response = client.complete(request);
    CHECK(response.text == " ok");
    CHECK(seen_auth == "Bearer sekrit");

    server.stop();
    thread.join();
}

TEST_CASE("request seed drives the mock; absent seed still completes") {
    MockLlmServer server(fixture_corpus());
    server.start(0);
    HttpCompletionClient client(endpoint_of(server));
    CompletionRequest request;
    request.prompt = "Please generate a sentence related to music:";
    request.seed = 7;
    const auto a = client.complete(request);
    const auto b = client.complete(request);
    CHECK(a.text == b.text);
    request.seed.reset();
    CHECK_NOTHROW(client.complete(request));
    server.stop();
}
