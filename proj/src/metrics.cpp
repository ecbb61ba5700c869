#include "textsynth/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "textsynth/rng.hpp"

namespace textsynth {
namespace {

// Tokens cannot contain whitespace, so '\n' joins are collision-free.
std::string gram_key(const TokenSeq& tokens, std::size_t start, std::size_t n) {
    std::string key = tokens[start];
    for (std::size_t k = 1; k < n; ++k) {
        key += '\n';
        key += tokens[start + k];
    }
    return key;
}

using GramCounts = std::unordered_map<std::string, std::size_t>;

GramCounts count_grams(const TokenSeq& tokens, std::size_t n) {
    GramCounts counts;
    if (tokens.size() >= n) {
        for (std::size_t start = 0; start + n <= tokens.size(); ++start) {
            ++counts[gram_key(tokens, start, n)];
        }
    }
    return counts;
}

void check_distribution(const TokenDistribution& dist, const char* which) {
    double sum = 0.0;
    for (const auto& [token, p] : dist) {
        if (!(p >= 0.0) || !std::isfinite(p)) {
            throw std::invalid_argument(std::string(which) +
                                        " distribution has an invalid probability for token \"" +
                                        token + "\"");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument(std::string(which) + " distribution sums to " +
                                    std::to_string(sum) + ", not 1");
    }
}

double round6(double v) {
    return std::round(v * 1e6) / 1e6;
}

}  // namespace

double distinct_n(const Corpus& corpus, int n) {
    if (n < 1) {
        throw std::invalid_argument("distinct-n requires n >= 1");
    }
    GramCounts unique;
    std::size_t total = 0;
    for (const auto& utt : corpus.utterances()) {
        const TokenSeq tokens = tokenize(utt.text, TokenizeMode::kMetric);
        for (auto& [key, count] : count_grams(tokens, static_cast<std::size_t>(n))) {
            unique[key] += count;
            total += count;
        }
    }
    if (total == 0) {
        throw std::invalid_argument("corpus \"" + corpus.name() + "\" yields no " +
                                    std::to_string(n) + "-grams");
    }
    return static_cast<double>(unique.size()) / static_cast<double>(total);
}

double sentence_bleu(const TokenSeq& hypothesis, const std::vector<TokenSeq>& references,
                     int max_n) {
    if (hypothesis.empty()) {
        throw std::invalid_argument("sentence_bleu: empty hypothesis");
    }
    std::vector<const TokenSeq*> refs;
    for (const auto& ref : references) {
        if (!ref.empty()) {
            refs.push_back(&ref);
        }
    }
    if (refs.empty()) {
        throw std::invalid_argument("sentence_bleu: no non-empty reference");
    }

    const std::size_t c = hypothesis.size();
    const std::size_t effective_n = std::min<std::size_t>(static_cast<std::size_t>(max_n), c);

    double log_precision_sum = 0.0;
    for (std::size_t n = 1; n <= effective_n; ++n) {
        const GramCounts hyp_grams = count_grams(hypothesis, n);
        std::vector<GramCounts> ref_grams;
        ref_grams.reserve(refs.size());
        for (const TokenSeq* ref : refs) {
            ref_grams.push_back(count_grams(*ref, n));
        }
        std::size_t clipped = 0;
        std::size_t total = 0;
        for (const auto& [gram, count] : hyp_grams) {
            std::size_t best = 0;
            for (const auto& grams : ref_grams) {
                const auto it = grams.find(gram);
                if (it != grams.end()) {
                    best = std::max(best, it->second);
                }
            }
            clipped += std::min(count, best);
            total += count;
        }
        if (clipped == 0) {
            return 0.0;   // no smoothing
        }
        log_precision_sum += std::log(static_cast<double>(clipped) / static_cast<double>(total));
    }
    const double geo_mean = std::exp(log_precision_sum / static_cast<double>(effective_n));

    // Closest reference length; ties prefer the shorter reference.
    std::size_t r = refs.front()->size();
    for (const TokenSeq* ref : refs) {
        const std::size_t len = ref->size();
        const auto dist = [&](std::size_t l) {
            return l > c ? l - c : c - l;
        };
        if (dist(len) < dist(r) || (dist(len) == dist(r) && len < r)) {
            r = len;
        }
    }
    const double bp =
        c < r ? std::exp(1.0 - static_cast<double>(r) / static_cast<double>(c)) : 1.0;
    return bp * geo_mean;
}

double self_bleu(const Corpus& corpus, int max_n, std::optional<std::size_t> sample_size,
                 uint64_t seed) {
    if (corpus.size() < 2) {
        throw std::invalid_argument("self-BLEU requires at least 2 sentences");
    }
    std::vector<TokenSeq> sentences;
    for (const auto& utt : corpus.utterances()) {
        TokenSeq tokens = tokenize(utt.text, TokenizeMode::kMetric);
        if (!tokens.empty()) {
            sentences.push_back(std::move(tokens));
        }
    }
    const std::size_t count = sentences.size();
    if (count < 2) {
        throw std::invalid_argument("self-BLEU requires at least 2 sentences with tokens");
    }

    // Per-n gram tables with the global max and runner-up count per gram, so
    // clipping against "all other sentences" never rescans the corpus.
    struct GramStats {
        std::size_t max = 0;
        std::size_t second = 0;
        std::size_t argmax = 0;
    };
    const std::size_t n_orders = static_cast<std::size_t>(max_n);
    std::vector<std::vector<GramCounts>> per_sentence(count);
    std::vector<std::unordered_map<std::string, GramStats>> global(n_orders);
    for (std::size_t s = 0; s < count; ++s) {
        per_sentence[s].reserve(n_orders);
        for (std::size_t n = 1; n <= n_orders; ++n) {
            per_sentence[s].push_back(count_grams(sentences[s], n));
            for (const auto& [gram, cnt] : per_sentence[s].back()) {
                GramStats& stats = global[n - 1][gram];
                if (cnt > stats.max) {
                    stats.second = stats.max;
                    stats.max = cnt;
                    stats.argmax = s;
                } else if (cnt > stats.second) {
                    stats.second = cnt;
                }
            }
        }
    }
    std::map<std::size_t, std::size_t> length_counts;
    for (const auto& sentence : sentences) {
        ++length_counts[sentence.size()];
    }

    std::vector<std::size_t> hypothesis_indices;
    if (sample_size && *sample_size < count) {
        Rng rng(seed);
        hypothesis_indices = sample_indices(rng, count, *sample_size);
    } else {
        hypothesis_indices.resize(count);
        for (std::size_t i = 0; i < count; ++i) hypothesis_indices[i] = i;
    }

    double sum = 0.0;
    for (std::size_t h : hypothesis_indices) {
        const std::size_t c = sentences[h].size();
        const std::size_t effective_n = std::min(n_orders, c);
        double log_precision_sum = 0.0;
        bool zero_precision = false;
        for (std::size_t n = 1; n <= effective_n && !zero_precision; ++n) {
            std::size_t clipped = 0;
            std::size_t total = 0;
            for (const auto& [gram, cnt] : per_sentence[h][n - 1]) {
                const GramStats& stats = global[n - 1].at(gram);
                const std::size_t ref_max = stats.argmax == h ? stats.second : stats.max;
                clipped += std::min(cnt, ref_max);
                total += cnt;
            }
            if (clipped == 0) {
                zero_precision = true;
            } else {
                log_precision_sum +=
                    std::log(static_cast<double>(clipped) / static_cast<double>(total));
            }
        }
        if (zero_precision) {
            continue;   // contributes 0 to the mean
        }
        const double geo_mean = std::exp(log_precision_sum / static_cast<double>(effective_n));

        std::size_t r = 0;
        bool have_r = false;
        for (const auto& [len, cnt] : length_counts) {
            const std::size_t available = cnt - (len == c ? 1 : 0);
            if (available == 0) {
                continue;
            }
            const auto dist = [&](std::size_t l) { return l > c ? l - c : c - l; };
            if (!have_r || dist(len) < dist(r) || (dist(len) == dist(r) && len < r)) {
                r = len;
                have_r = true;
            }
        }
        const double bp =
            c < r ? std::exp(1.0 - static_cast<double>(r) / static_cast<double>(c)) : 1.0;
        sum += bp * geo_mean;
    }
    return sum / static_cast<double>(hypothesis_indices.size());
}

double js_divergence(const TokenDistribution& p, const TokenDistribution& q) {
    check_distribution(p, "first");
    check_distribution(q, "second");

    double kl_p = 0.0;
    double kl_q = 0.0;
    auto it_p = p.begin();
    auto it_q = q.begin();
    const auto accumulate = [](double& kl, double numerator, double m) {
        if (numerator > 0.0) {
            kl += numerator * std::log2(numerator / m);
        }
    };
    while (it_p != p.end() || it_q != q.end()) {
        double vp = 0.0;
        double vq = 0.0;
        if (it_q == q.end() || (it_p != p.end() && it_p->first < it_q->first)) {
            vp = (it_p++)->second;
        } else if (it_p == p.end() || it_q->first < it_p->first) {
            vq = (it_q++)->second;
        } else {
            vp = (it_p++)->second;
            vq = (it_q++)->second;
        }
        const double m = 0.5 * (vp + vq);
        accumulate(kl_p, vp, m);
        accumulate(kl_q, vq, m);
    }
    const double jsd = 0.5 * kl_p + 0.5 * kl_q;
    return std::clamp(jsd, 0.0, 1.0);
}

CorpusProfile profile_corpus(const Corpus& synthetic, const Corpus& reference,
                             std::optional<std::size_t> sample_size) {
    if (synthetic.size() < 2) {
        throw std::invalid_argument("profiling requires a synthetic corpus of size >= 2");
    }
    if (reference.empty()) {
        throw std::invalid_argument("profiling requires a non-empty reference corpus");
    }
    CorpusProfile profile;
    std::optional<std::size_t> effective = sample_size;
    if (!effective && synthetic.size() > 2000) {
        effective = 1000;   // quadratic cost control; override with an explicit size
    }
    if (effective && *effective >= synthetic.size()) {
        effective.reset();
    }
    profile.distinct1 = distinct_n(synthetic, 1);
    profile.distinct2 = distinct_n(synthetic, 2);
    profile.sample_size = effective;
    profile.sample_seed = 0;
    profile.self_bleu4 = self_bleu(synthetic, 4, effective, profile.sample_seed);
    profile.js_div = js_divergence(unigram_distribution(synthetic),
                                   unigram_distribution(reference));
    return profile;
}

void write_profile_json(const CorpusProfile& profile, const std::string& corpus_name,
                        std::ostream& out) {
    nlohmann::ordered_json report;
    report["corpus"] = corpus_name;
    report["distinct1"] = round6(profile.distinct1);
    report["distinct2"] = round6(profile.distinct2);
    report["self_bleu4"] = round6(profile.self_bleu4);
    report["js_div"] = round6(profile.js_div);
    if (profile.sample_size) {
        report["sample_size"] = *profile.sample_size;
        report["seed"] = profile.sample_seed;
    } else {
        report["sample_size"] = nullptr;
        report["seed"] = nullptr;
    }
    out << report.dump(2) << "\n";
}

void write_profile_csv(const CorpusProfile& profile, const std::string& corpus_name,
                       std::ostream& out) {
    out << "corpus,distinct1,distinct2,self_bleu4,js_div,sample_size,seed\n";
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f,%.6f", profile.distinct1, profile.distinct2,
                  profile.self_bleu4, profile.js_div);
    out << corpus_name << "," << buf << ",";
    if (profile.sample_size) {
        out << *profile.sample_size << "," << profile.sample_seed;
    } else {
        out << ",";
    }
    out << "\n";
}

}  // namespace textsynth
