#include "textsynth/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace textsynth {

void SamplingConfig::validate() const {
    if (!(typical_tau > 0.0) || typical_tau > 1.0) {
        throw std::invalid_argument("typical_tau must be in (0, 1], got " +
                                    std::to_string(typical_tau));
    }
    if (!(repetition_penalty >= 1.0)) {
        throw std::invalid_argument("repetition_penalty must be >= 1, got " +
                                    std::to_string(repetition_penalty));
    }
    if (!(temperature > 0.0)) {
        throw std::invalid_argument("temperature must be > 0, got " +
                                    std::to_string(temperature));
    }
}

void validate_distribution(const std::vector<double>& probs) {
    double sum = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0)) {
            throw std::invalid_argument("distribution entries must be >= 0");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("distribution does not sum to 1 (sum = " +
                                    std::to_string(sum) + ")");
    }
}

std::vector<double> apply_temperature(std::vector<double> logits, double temperature) {
    if (!(temperature > 0.0)) {
        throw std::invalid_argument("temperature must be > 0");
    }
    for (double& logit : logits) {
        logit /= temperature;
    }
    return logits;
}

std::vector<double> apply_repetition_penalty(std::vector<double> logits,
                                             const std::unordered_set<std::size_t>& context_tokens,
                                             double theta) {
    if (!(theta >= 1.0)) {
        throw std::invalid_argument("repetition penalty must be >= 1, got " +
                                    std::to_string(theta));
    }
    for (std::size_t idx : context_tokens) {
        if (idx >= logits.size()) {
            throw std::invalid_argument("penalized token index " + std::to_string(idx) +
                                        " out of range");
        }
        if (logits[idx] > 0.0) {
            logits[idx] /= theta;
        } else {
            logits[idx] *= theta;
        }
    }
    return logits;
}

std::vector<double> softmax(const std::vector<double>& logits) {
    if (logits.empty()) {
        throw std::invalid_argument("softmax over an empty logit vector");
    }
    const double max_logit = *std::max_element(logits.begin(), logits.end());
    if (!std::isfinite(max_logit)) {
        throw std::invalid_argument("softmax requires at least one finite logit");
    }
    std::vector<double> probs(logits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        probs[i] = std::exp(logits[i] - max_logit);
        sum += probs[i];
    }
    for (double& p : probs) {
        p /= sum;
    }
    return probs;
}

std::vector<double> typical_filter(const std::vector<double>& probs, double tau) {
    validate_distribution(probs);
    if (!(tau > 0.0) || tau > 1.0) {
        throw std::invalid_argument("tau must be in (0, 1], got " + std::to_string(tau));
    }

    double entropy = 0.0;
    for (double p : probs) {
        if (p > 0.0) {
            entropy -= p * std::log(p);
        }
    }

    struct Candidate {
        std::size_t index;
        double prob;
        double score;
    };
    std::vector<Candidate> candidates;
    candidates.reserve(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] > 0.0) {
            candidates.push_back({i, probs[i], std::abs(-std::log(probs[i]) - entropy)});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.score != b.score) return a.score < b.score;
        if (a.prob != b.prob) return a.prob > b.prob;
        return a.index < b.index;
    });

    // The 1e-12 slack lets grid-aligned taus resolve to the mathematical
    // prefix (a uniform 1/V distribution stores probabilities a few ulp below
    // the exact value, so k/V can round just under tau).
    std::size_t kept = candidates.size();
    double cumulative = 0.0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        cumulative += candidates[i].prob;
        if (cumulative >= tau - 1e-12) {
            kept = i + 1;
            break;
        }
    }

    double mass = 0.0;
    for (std::size_t i = 0; i < kept; ++i) {
        mass += candidates[i].prob;
    }
    std::vector<double> out(probs.size(), 0.0);
    for (std::size_t i = 0; i < kept; ++i) {
        out[candidates[i].index] = candidates[i].prob / mass;
    }
    return out;
}

std::size_t sample_token(const std::vector<double>& probs, Rng& rng) {
    validate_distribution(probs);
    const double u = uniform_double(rng);
    double cumulative = 0.0;
    std::size_t last_nonzero = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] <= 0.0) {
            continue;
        }
        cumulative += probs[i];
        last_nonzero = i;
        if (u < cumulative) {
            return i;
        }
    }
    return last_nonzero;   // u landed in the rounding gap at the top of the CDF
}

TokenSeq generate_sentence(const LogitSource& source, const TokenSeq& prompt_context,
                           const SamplingConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);
    const auto& vocab = source.vocab();
    TokenSeq context = prompt_context;
    TokenSeq generated;
    std::unordered_set<std::size_t> generated_ids;
    while (generated.size() < cfg.max_tokens) {
        auto logits = source.next_token_logits(context);
        logits = apply_temperature(std::move(logits), cfg.temperature);
        logits = apply_repetition_penalty(std::move(logits), generated_ids,
                                          cfg.repetition_penalty);
        const auto filtered = typical_filter(softmax(logits), cfg.typical_tau);
        const std::size_t token = sample_token(filtered, rng);
        if (token == source.eos_index()) {
            break;
        }
        generated_ids.insert(token);
        generated.push_back(vocab.at(token));
        context.push_back(vocab.at(token));
    }
    return generated;
}

}  // namespace textsynth
