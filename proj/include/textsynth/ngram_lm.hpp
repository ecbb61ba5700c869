#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "textsynth/corpus.hpp"
#include "textsynth/sampling.hpp"

namespace textsynth {

inline constexpr const char* kBosToken = "<s>";
inline constexpr const char* kEosToken = "</s>";
inline constexpr const char* kUnkToken = "<unk>";

// Backoff n-gram language model over metric tokens. Stands in for a large
// LM so the whole pipeline runs offline. Counts are collected over sentences
// padded with (order-1) BOS tokens and one EOS; the vocab is the sorted set
// of observed tokens plus the reserved BOS/EOS/UNK, so fitting is invariant
// to corpus order.
class NgramModel final : public LogitSource {
public:
    // Empty model: no counts, reserved vocab only. Every lookup falls through
    // to the uniform floor.
    NgramModel() : NgramModel(3, 0.4) {}
    explicit NgramModel(int order, double backoff_factor = 0.4);

    static NgramModel fit(const Corpus& corpus, int order = 3, double backoff_factor = 0.4);

    int order() const { return order_; }
    double backoff_factor() const { return backoff_factor_; }

    const std::vector<std::string>& vocab() const override { return vocab_; }
    std::size_t bos_index() const { return 0; }
    std::size_t eos_index() const override { return 1; }
    std::size_t unk_index() const { return 2; }
    // Unseen tokens map to UNK.
    std::size_t token_index(const std::string& token) const;

    // Count of `token` following `context` (exact context length match), and
    // the total continuation count of `context`. Contexts longer than
    // order-1 are truncated to their last order-1 tokens.
    int64_t continuation_count(const TokenSeq& context, const std::string& token) const;
    int64_t context_count(const TokenSeq& context) const;

    // Stupid backoff: the longest observed suffix of the context supplies the
    // continuation distribution; each level of backoff scales by
    // backoff_factor; the result is renormalized, so exp(logits) is a proper
    // distribution. BOS never receives probability. A context with no match
    // at any order (possible only when the model is empty) yields the uniform
    // floor over vocab minus BOS.
    std::vector<double> next_token_logits(const TokenSeq& context) const override;

private:
    struct ContextStats {
        int64_t total = 0;
        std::unordered_map<int32_t, int64_t> counts;
    };

    static std::string pack_key(const int32_t* ids, std::size_t len);
    std::vector<int32_t> context_ids(const TokenSeq& context) const;

    int order_;
    double backoff_factor_;
    std::vector<std::string> vocab_;
    std::unordered_map<std::string, std::size_t> token_to_index_;
    // tables_[len]: contexts of exactly `len` tokens, len in [0, order-1].
    std::vector<std::unordered_map<std::string, ContextStats>> tables_;
};

}  // namespace textsynth
