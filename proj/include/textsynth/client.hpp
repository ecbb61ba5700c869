#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "textsynth/corpus.hpp"
#include "textsynth/prompt.hpp"
#include "textsynth/sampling.hpp"

namespace textsynth {

struct CompletionRequest {
    std::string prompt;
    std::size_t max_tokens = 32;
    double typical_tau = 0.9;
    double repetition_penalty = 1.1;
    double temperature = 1.0;
    std::optional<uint64_t> seed;
    std::vector<std::string> stop = {"\n"};   // one prompt, one sentence

    void validate() const;   // same range constraints as SamplingConfig
};

enum class FinishReason { kStop, kLength, kError };

std::string_view to_string(FinishReason reason);
FinishReason finish_reason_from_string(std::string_view s);

struct CompletionResponse {
    std::string text;
    FinishReason finish_reason = FinishReason::kStop;
};

// Error from a completion backend. `retryable` marks transient transport
// failures (connection refused, timeout); HTTP-level and protocol errors are
// not retryable.
class ClientError : public std::runtime_error {
public:
    ClientError(const std::string& message, bool retryable, int status = 0,
                std::string body = std::string())
        : std::runtime_error(message), retryable_(retryable), status_(status),
          body_(std::move(body)) {}

    bool retryable() const { return retryable_; }
    int status() const { return status_; }
    const std::string& body() const { return body_; }

private:
    bool retryable_;
    int status_;
    std::string body_;
};

class CompletionBackend {
public:
    virtual ~CompletionBackend() = default;
    virtual CompletionResponse complete(const CompletionRequest& request) = 0;
};

// Wire format: POST {endpoint}/v1/complete with a JSON object mirroring
// CompletionRequest in snake_case; the response mirrors CompletionResponse.
// One HTTP round trip per complete() call; the retry loop lives in
// generate_corpus. Shareable across threads.
class HttpCompletionClient : public CompletionBackend {
public:
    explicit HttpCompletionClient(std::string endpoint,
                                  std::chrono::milliseconds timeout = std::chrono::seconds(30));

    void set_bearer_token(std::string token) { bearer_token_ = std::move(token); }

    // Throws ClientError: retryable on network/timeout, non-retryable with
    // status and body on non-2xx, non-retryable protocol error on a body
    // that does not decode.
    CompletionResponse complete(const CompletionRequest& request) override;

private:
    std::string endpoint_;
    std::chrono::milliseconds timeout_;
    std::string bearer_token_;
};

struct GenerateStats {
    std::size_t requested = 0;
    std::size_t generated = 0;
    std::size_t skipped_blank = 0;
    std::size_t failed = 0;
};

// Thrown when more than 20% of sentences fail; carries whatever was
// generated.
class GenerationAborted : public std::runtime_error {
public:
    GenerationAborted(const std::string& message, Corpus partial, GenerateStats stats)
        : std::runtime_error(message), partial_(std::move(partial)), stats_(stats) {}

    const Corpus& partial() const { return partial_; }
    const GenerateStats& stats() const { return stats_; }

private:
    Corpus partial_;
    GenerateStats stats_;
};

// Generates n synthetic utterances for target_domain. Per-sentence prompts
// come from build_prompt with the seed-split contract (base seed XOR index);
// the same derived seed is sent as the request seed, so results do not depend
// on completion order or on max_in_flight. Blank completions are retried up
// to 3 times (seeds are not perturbed) then skipped with a warning; transport
// errors are retried with exponential backoff starting at 250 ms. Result
// order is request-index order. Throws GenerationAborted when more than 20%
// of sentences fail.
Corpus generate_corpus(CompletionBackend& backend, const PromptStrategy& strategy,
                       const std::string& target_domain, const Corpus& source,
                       std::size_t n, const SamplingConfig& cfg, std::size_t max_in_flight,
                       GenerateStats* stats_out = nullptr);

}  // namespace textsynth
