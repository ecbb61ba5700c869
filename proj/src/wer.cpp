#include "textsynth/wer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace textsynth {

Alignment align(const TokenSeq& reference, const TokenSeq& hypothesis) {
    const std::size_t rows = reference.size();
    const std::size_t cols = hypothesis.size();
    // dp[i][j]: minimal edits turning reference[0..i) into hypothesis[0..j).
    std::vector<std::vector<std::size_t>> dp(rows + 1, std::vector<std::size_t>(cols + 1));
    for (std::size_t i = 0; i <= rows; ++i) dp[i][0] = i;
    for (std::size_t j = 0; j <= cols; ++j) dp[0][j] = j;
    for (std::size_t i = 1; i <= rows; ++i) {
        for (std::size_t j = 1; j <= cols; ++j) {
            const std::size_t diag =
                dp[i - 1][j - 1] + (reference[i - 1] == hypothesis[j - 1] ? 0 : 1);
            dp[i][j] = std::min({diag, dp[i - 1][j] + 1, dp[i][j - 1] + 1});
        }
    }

    Alignment alignment;
    alignment.ref_len = rows;
    std::size_t i = rows;
    std::size_t j = cols;
    while (i > 0 || j > 0) {
        if (i > 0 && j > 0 && reference[i - 1] == hypothesis[j - 1] &&
            dp[i][j] == dp[i - 1][j - 1]) {
            alignment.ops.push_back(EditOp::kMatch);
            --i;
            --j;
        } else if (i > 0 && j > 0 && dp[i][j] == dp[i - 1][j - 1] + 1) {
            alignment.ops.push_back(EditOp::kSubstitute);
            --i;
            --j;
        } else if (i > 0 && dp[i][j] == dp[i - 1][j] + 1) {
            alignment.ops.push_back(EditOp::kDelete);
            --i;
        } else {
            alignment.ops.push_back(EditOp::kInsert);
            --j;
        }
    }
    std::reverse(alignment.ops.begin(), alignment.ops.end());
    for (EditOp op : alignment.ops) {
        switch (op) {
            case EditOp::kMatch: ++alignment.matches; break;
            case EditOp::kSubstitute: ++alignment.substitutions; break;
            case EditOp::kDelete: ++alignment.deletions; break;
            case EditOp::kInsert: ++alignment.insertions; break;
        }
    }
    return alignment;
}

double wer(const std::vector<std::pair<TokenSeq, TokenSeq>>& pairs) {
    std::size_t errors = 0;
    std::size_t ref_tokens = 0;
    for (const auto& [reference, hypothesis] : pairs) {
        const Alignment alignment = align(reference, hypothesis);
        errors += alignment.distance();
        ref_tokens += alignment.ref_len;
    }
    if (ref_tokens == 0) {
        throw std::invalid_argument("WER undefined: zero reference tokens");
    }
    return static_cast<double>(errors) / static_cast<double>(ref_tokens) * 100.0;
}

double relative_reduction(double baseline, double adapted) {
    if (!(baseline > 0.0)) {
        throw std::invalid_argument("relative reduction requires baseline > 0, got " +
                                    std::to_string(baseline));
    }
    return (baseline - adapted) / baseline * 100.0;
}

DomainResult make_domain_result(std::string domain, double baseline_wer, double adapted_wer) {
    DomainResult result;
    result.domain = std::move(domain);
    result.baseline_wer = baseline_wer;
    result.adapted_wer = adapted_wer;
    result.relative_improvement = relative_reduction(baseline_wer, adapted_wer);
    return result;
}

CrossDomainReport cross_domain_report(const std::vector<DomainResult>& results) {
    if (results.empty()) {
        throw std::invalid_argument("cross-domain report requires at least one domain result");
    }
    CrossDomainReport report;
    report.rows = results;
    double baseline_sum = 0.0;
    double adapted_sum = 0.0;
    double relative_sum = 0.0;
    for (const auto& row : results) {
        if (row.baseline_wer > 0.0) {
            const double expected = relative_reduction(row.baseline_wer, row.adapted_wer);
            if (std::abs(expected - row.relative_improvement) > 0.01) {
                throw std::invalid_argument(
                    "domain \"" + row.domain + "\": relative_improvement " +
                    std::to_string(row.relative_improvement) +
                    " disagrees with its WERs (expected " + std::to_string(expected) + ")");
            }
        }
        baseline_sum += row.baseline_wer;
        adapted_sum += row.adapted_wer;
        relative_sum += row.relative_improvement;
    }
    const double n = static_cast<double>(results.size());
    report.mean_baseline_wer = baseline_sum / n;
    report.mean_adapted_wer = adapted_sum / n;
    report.mean_relative_improvement = relative_sum / n;
    report.relative_of_means = report.mean_baseline_wer > 0.0
                                   ? relative_reduction(report.mean_baseline_wer,
                                                        report.mean_adapted_wer)
                                   : 0.0;
    return report;
}

}  // namespace textsynth
