#pragma once

#include <cstdint>
#include <unordered_set>
#include <vector>

#include "textsynth/corpus.hpp"
#include "textsynth/rng.hpp"

namespace textsynth {

struct SamplingConfig {
    double typical_tau = 0.9;
    double repetition_penalty = 1.1;
    double temperature = 1.0;
    std::size_t max_tokens = 32;
    uint64_t seed = 0;

    // tau in (0,1], penalty >= 1, temperature > 0.
    void validate() const;
};

// Anything that can score the next token given a token context. Vocab entries
// are index-aligned with the logit vectors. Implementations must be safe for
// concurrent queries.
class LogitSource {
public:
    virtual ~LogitSource() = default;
    virtual const std::vector<std::string>& vocab() const = 0;
    virtual std::size_t eos_index() const = 0;
    virtual std::vector<double> next_token_logits(const TokenSeq& context) const = 0;
};

// Throws unless entries are >= 0 and sum to 1 +/- 1e-9.
void validate_distribution(const std::vector<double>& probs);

// Each logit divided by temperature. Throws if temperature <= 0.
std::vector<double> apply_temperature(std::vector<double> logits, double temperature);

// Repetition penalty on the given vocab indices: positive logits divided by
// theta, non-positive multiplied by theta. Throws if theta < 1.
std::vector<double> apply_repetition_penalty(std::vector<double> logits,
                                             const std::unordered_set<std::size_t>& context_tokens,
                                             double theta);

std::vector<double> softmax(const std::vector<double>& logits);

// Locally typical filtering. Scores each nonzero-probability token by the
// absolute difference between its information content -log(p) and the
// distribution entropy (natural log), sorts ascending with ties broken by
// higher probability then lower index, keeps the shortest prefix whose
// cumulative mass reaches tau, zeroes the rest and renormalizes.
std::vector<double> typical_filter(const std::vector<double>& probs, double tau);

// Categorical draw by inverse CDF in vocab-index order.
std::size_t sample_token(const std::vector<double>& probs, Rng& rng);

// Sampling loop: logits -> temperature -> repetition penalty over tokens
// generated so far in this sentence (not the prompt) -> softmax -> typical
// filter -> draw. Stops at EOS or max_tokens; EOS is not part of the result.
TokenSeq generate_sentence(const LogitSource& source, const TokenSeq& prompt_context,
                           const SamplingConfig& cfg);

}  // namespace textsynth
