#include "textsynth/client.hpp"

#include <atomic>
#include <mutex>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "wire.hpp"

namespace textsynth {
namespace {

constexpr int kMaxAttempts = 3;
constexpr std::chrono::milliseconds kInitialBackoff{250};

std::string trim_copy(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) {
        return "";
    }
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

void CompletionRequest::validate() const {
    SamplingConfig cfg;
    cfg.typical_tau = typical_tau;
    cfg.repetition_penalty = repetition_penalty;
    cfg.temperature = temperature;
    cfg.validate();
}

std::string_view to_string(FinishReason reason) {
    switch (reason) {
        case FinishReason::kStop: return "stop";
        case FinishReason::kLength: return "length";
        case FinishReason::kError: return "error";
    }
    return "error";
}

FinishReason finish_reason_from_string(std::string_view s) {
    if (s == "stop") return FinishReason::kStop;
    if (s == "length") return FinishReason::kLength;
    if (s == "error") return FinishReason::kError;
    throw std::invalid_argument("unknown finish_reason: \"" + std::string(s) + "\"");
}

nlohmann::json to_wire(const CompletionRequest& request) {
    nlohmann::json body;
    body["prompt"] = request.prompt;
    body["max_tokens"] = request.max_tokens;
    body["typical_tau"] = request.typical_tau;
    body["repetition_penalty"] = request.repetition_penalty;
    body["temperature"] = request.temperature;
    if (request.seed) {
        body["seed"] = *request.seed;
    }
    body["stop"] = request.stop;
    return body;
}

CompletionRequest request_from_wire(const nlohmann::json& body) {
    CompletionRequest request;
    request.prompt = body.at("prompt").get<std::string>();
    if (body.contains("max_tokens")) request.max_tokens = body.at("max_tokens").get<std::size_t>();
    if (body.contains("typical_tau")) request.typical_tau = body.at("typical_tau").get<double>();
    if (body.contains("repetition_penalty")) {
        request.repetition_penalty = body.at("repetition_penalty").get<double>();
    }
    if (body.contains("temperature")) request.temperature = body.at("temperature").get<double>();
    if (body.contains("seed") && !body.at("seed").is_null()) {
        request.seed = body.at("seed").get<uint64_t>();
    }
    if (body.contains("stop")) request.stop = body.at("stop").get<std::vector<std::string>>();
    return request;
}

HttpCompletionClient::HttpCompletionClient(std::string endpoint, std::chrono::milliseconds timeout)
    : endpoint_(std::move(endpoint)), timeout_(timeout) {
    while (!endpoint_.empty() && endpoint_.back() == '/') {
        endpoint_.pop_back();
    }
}

CompletionResponse HttpCompletionClient::complete(const CompletionRequest& request) {
    request.validate();
    // A fresh httplib::Client per round trip keeps this object shareable
    // across threads.
    httplib::Client http(endpoint_);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
    const auto usecs =
        std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
    http.set_connection_timeout(secs.count(), usecs.count());
    http.set_read_timeout(secs.count(), usecs.count());
    http.set_write_timeout(secs.count(), usecs.count());
    httplib::Headers headers;
    if (!bearer_token_.empty()) {
        headers.emplace("Authorization", "Bearer " + bearer_token_);
    }

    const auto result =
        http.Post("/v1/complete", headers, to_wire(request).dump(), "application/json");
    if (!result) {
        std::ostringstream msg;
        msg << "completion request to " << endpoint_
            << " failed: " << httplib::to_string(result.error());
        throw ClientError(msg.str(), /*retryable=*/true);
    }
    if (result->status < 200 || result->status >= 300) {
        std::ostringstream msg;
        msg << "completion endpoint returned HTTP " << result->status;
        throw ClientError(msg.str(), /*retryable=*/false, result->status, result->body);
    }
    try {
        const auto body = nlohmann::json::parse(result->body);
        CompletionResponse response;
        response.text = body.at("text").get<std::string>();
        response.finish_reason =
            finish_reason_from_string(body.at("finish_reason").get<std::string>());
        return response;
    } catch (const std::exception& e) {
        throw ClientError(std::string("malformed completion response: ") + e.what(),
                          /*retryable=*/false, result->status, result->body);
    }
}

Corpus generate_corpus(CompletionBackend& backend, const PromptStrategy& strategy,
                       const std::string& target_domain, const Corpus& source,
                       std::size_t n, const SamplingConfig& cfg, std::size_t max_in_flight,
                       GenerateStats* stats_out) {
    if (n < 1) {
        throw std::invalid_argument("generate_corpus requires n >= 1");
    }
    if (max_in_flight < 1) {
        throw std::invalid_argument("generate_corpus requires max_in_flight >= 1");
    }
    strategy.validate();
    cfg.validate();
    if (strategy.uses_demonstrations() && strategy.num_demonstrations > source.size()) {
        throw std::invalid_argument("source corpus has " + std::to_string(source.size()) +
                                    " utterances, fewer than the " +
                                    std::to_string(strategy.num_demonstrations) +
                                    " demonstrations requested");
    }

    enum class Outcome { kOk, kBlank, kFailed };
    std::vector<std::string> texts(n);
    std::vector<Outcome> outcomes(n, Outcome::kFailed);
    std::atomic<std::size_t> next{0};

    const auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
            const uint64_t seed = sentence_seed(cfg.seed, i);
            CompletionRequest request;
            request.prompt = build_prompt(strategy, target_domain, source, seed).text;
            request.max_tokens = cfg.max_tokens;
            request.typical_tau = cfg.typical_tau;
            request.repetition_penalty = cfg.repetition_penalty;
            request.temperature = cfg.temperature;
            request.seed = seed;   // not perturbed on retry

            Outcome outcome = Outcome::kFailed;
            auto backoff = kInitialBackoff;
            for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
                try {
                    const CompletionResponse response = backend.complete(request);
                    const std::string text = trim_copy(response.text);
                    if (text.empty()) {
                        outcome = Outcome::kBlank;
                        continue;   // immediate retry; nothing transient to wait out
                    }
                    texts[i] = text;
                    outcome = Outcome::kOk;
                    break;
                } catch (const ClientError& e) {
                    outcome = Outcome::kFailed;
                    if (!e.retryable() || attempt + 1 == kMaxAttempts) {
                        break;
                    }
                    std::this_thread::sleep_for(backoff);
                    backoff *= 2;
                }
            }
            outcomes[i] = outcome;
        }
    };

    std::vector<std::thread> threads;
    const std::size_t thread_count = std::min(max_in_flight, n);
    threads.reserve(thread_count);
    for (std::size_t t = 0; t < thread_count; ++t) {
        threads.emplace_back(worker);
    }
    for (auto& thread : threads) {
        thread.join();
    }

    GenerateStats stats;
    stats.requested = n;
    Corpus corpus("synthetic:" + target_domain);
    for (std::size_t i = 0; i < n; ++i) {
        switch (outcomes[i]) {
            case Outcome::kOk: {
                char suffix[16];
                std::snprintf(suffix, sizeof(suffix), "%05zu", i);
                corpus.add({"syn-" + target_domain + "-" + suffix, texts[i], target_domain,
                            Source::kSynthetic});
                ++stats.generated;
                break;
            }
            case Outcome::kBlank:
                ++stats.skipped_blank;
                break;
            case Outcome::kFailed:
                ++stats.failed;
                break;
        }
    }
    if (stats_out) {
        *stats_out = stats;
    }
    if (static_cast<double>(stats.failed) > 0.20 * static_cast<double>(n)) {
        std::ostringstream msg;
        msg << stats.failed << " of " << n << " sentences failed (> 20%); aborting with "
            << stats.generated << " partial results";
        throw GenerationAborted(msg.str(), std::move(corpus), stats);
    }
    return corpus;
}

}  // namespace textsynth
