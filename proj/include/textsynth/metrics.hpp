#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "textsynth/corpus.hpp"

namespace textsynth {

struct CorpusProfile {
    double distinct1 = 0.0;
    double distinct2 = 0.0;
    double self_bleu4 = 0.0;
    double js_div = 0.0;
    // Set when self-BLEU ran on a seeded subsample instead of the full corpus.
    std::optional<std::size_t> sample_size;
    uint64_t sample_seed = 0;
};

// Unique n-grams / total n-grams over the whole corpus (metric tokens).
// Sentences shorter than n contribute nothing; throws when the corpus yields
// zero n-grams.
double distinct_n(const Corpus& corpus, int n);

// BLEU of one hypothesis against references: geometric mean of clipped
// modified n-gram precisions for n = 1..max_n, times brevity penalty
// exp(1 - r/c) when c < r, where r is the reference length closest to c
// (ties -> shorter). No smoothing: any zero precision gives 0. The effective
// max_n is capped at the hypothesis length.
double sentence_bleu(const TokenSeq& hypothesis, const std::vector<TokenSeq>& references,
                     int max_n = 4);

// Mean sentence_bleu of each (sampled) sentence against all others. When
// sample_size is set, hypotheses are a seeded uniform sample; references are
// always the full corpus.
double self_bleu(const Corpus& corpus, int max_n = 4,
                 std::optional<std::size_t> sample_size = std::nullopt,
                 uint64_t seed = 0);

// Jensen-Shannon divergence, log base 2, over the union support: in [0, 1],
// 0 iff p == q, 1 for disjoint supports.
double js_divergence(const TokenDistribution& p, const TokenDistribution& q);

// distinct-1/2 and self-BLEU-4 on the synthetic corpus; JS divergence between
// the unigram distributions of synthetic and reference. Self-BLEU falls back
// to a sample of 1000 (seed 0) when |synthetic| > 2000 and no sample size was
// given; pass one explicitly to override.
CorpusProfile profile_corpus(const Corpus& synthetic, const Corpus& reference,
                             std::optional<std::size_t> sample_size = std::nullopt);

// Report formats: JSON object and CSV row
// {corpus, distinct1, distinct2, self_bleu4, js_div, sample_size, seed}.
void write_profile_json(const CorpusProfile& profile, const std::string& corpus_name,
                        std::ostream& out);
void write_profile_csv(const CorpusProfile& profile, const std::string& corpus_name,
                       std::ostream& out);

}  // namespace textsynth
