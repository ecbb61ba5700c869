#pragma once

#include <string>
#include <utility>
#include <vector>

#include "textsynth/corpus.hpp"

namespace textsynth {

enum class EditOp { kMatch, kSubstitute, kInsert, kDelete };

struct Alignment {
    std::vector<EditOp> ops;
    std::size_t matches = 0;
    std::size_t substitutions = 0;
    std::size_t deletions = 0;
    std::size_t insertions = 0;
    std::size_t ref_len = 0;

    std::size_t distance() const { return substitutions + deletions + insertions; }
};

// Minimal edit distance with unit costs. On cost ties the backtrace prefers
// match > substitute > delete > insert.
Alignment align(const TokenSeq& reference, const TokenSeq& hypothesis);

// Pooled WER over (reference, hypothesis) pairs:
// sum(S+D+I) / sum(ref_len) * 100. Throws when the total reference length is
// zero.
double wer(const std::vector<std::pair<TokenSeq, TokenSeq>>& pairs);

// (baseline - adapted) / baseline * 100. Throws if baseline <= 0.
double relative_reduction(double baseline, double adapted);

struct DomainResult {
    std::string domain;
    double baseline_wer = 0.0;
    double adapted_wer = 0.0;
    double relative_improvement = 0.0;
};

DomainResult make_domain_result(std::string domain, double baseline_wer, double adapted_wer);

struct CrossDomainReport {
    std::vector<DomainResult> rows;
    // Macro averages across domains.
    double mean_baseline_wer = 0.0;
    double mean_adapted_wer = 0.0;
    // Mean of the per-domain relative improvements (the headline average).
    double mean_relative_improvement = 0.0;
    // Relative reduction computed on the two mean WERs, reported alongside.
    double relative_of_means = 0.0;
};

// Per-domain rows plus macro averages. Throws on empty input or when a row's
// relative_improvement disagrees with its WERs by more than 0.01.
CrossDomainReport cross_domain_report(const std::vector<DomainResult>& results);

}  // namespace textsynth
