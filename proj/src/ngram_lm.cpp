#include "textsynth/ngram_lm.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <set>
#include <stdexcept>

namespace textsynth {

NgramModel::NgramModel(int order, double backoff_factor)
    : order_(order), backoff_factor_(backoff_factor) {
    if (order_ < 1) {
        throw std::invalid_argument("n-gram order must be >= 1, got " + std::to_string(order_));
    }
    if (!(backoff_factor_ > 0.0) || backoff_factor_ > 1.0) {
        throw std::invalid_argument("backoff factor must be in (0, 1]");
    }
    vocab_ = {kBosToken, kEosToken, kUnkToken};
    for (std::size_t i = 0; i < vocab_.size(); ++i) {
        token_to_index_[vocab_[i]] = i;
    }
    tables_.resize(static_cast<std::size_t>(order_));
}

std::string NgramModel::pack_key(const int32_t* ids, std::size_t len) {
    std::string key(len * sizeof(int32_t), '\0');
    if (len > 0) {
        std::memcpy(key.data(), ids, len * sizeof(int32_t));
    }
    return key;
}

std::size_t NgramModel::token_index(const std::string& token) const {
    const auto it = token_to_index_.find(token);
    return it == token_to_index_.end() ? unk_index() : it->second;
}

std::vector<int32_t> NgramModel::context_ids(const TokenSeq& context) const {
    const std::size_t window = static_cast<std::size_t>(order_) - 1;
    const std::size_t start = context.size() > window ? context.size() - window : 0;
    std::vector<int32_t> ids;
    ids.reserve(context.size() - start);
    for (std::size_t i = start; i < context.size(); ++i) {
        ids.push_back(static_cast<int32_t>(token_index(context[i])));
    }
    return ids;
}

NgramModel NgramModel::fit(const Corpus& corpus, int order, double backoff_factor) {
    if (corpus.empty()) {
        throw std::invalid_argument("cannot fit an n-gram model on an empty corpus");
    }
    NgramModel model(order, backoff_factor);

    std::vector<TokenSeq> sentences;
    sentences.reserve(corpus.size());
    std::set<std::string> observed;
    for (const auto& utt : corpus.utterances()) {
        sentences.push_back(tokenize(utt.text, TokenizeMode::kMetric));
        for (const auto& tok : sentences.back()) {
            observed.insert(tok);
        }
    }
    // Sorted vocab makes the fitted model independent of corpus order.
    for (const auto& tok : observed) {
        model.token_to_index_[tok] = model.vocab_.size();
        model.vocab_.push_back(tok);
    }

    const std::size_t pad = static_cast<std::size_t>(order) - 1;
    const int32_t bos = static_cast<int32_t>(model.bos_index());
    const int32_t eos = static_cast<int32_t>(model.eos_index());
    std::vector<int32_t> ids;
    for (const auto& sentence : sentences) {
        ids.assign(pad, bos);
        for (const auto& tok : sentence) {
            ids.push_back(static_cast<int32_t>(model.token_to_index_.at(tok)));
        }
        ids.push_back(eos);
        // Continuation positions are the real tokens plus EOS, so BOS is never
        // counted as a continuation at any order.
        for (std::size_t pos = pad; pos < ids.size(); ++pos) {
            for (std::size_t len = 0; len < static_cast<std::size_t>(order); ++len) {
                auto& stats = model.tables_[len][pack_key(ids.data() + pos - len, len)];
                ++stats.total;
                ++stats.counts[ids[pos]];
            }
        }
    }
    return model;
}

int64_t NgramModel::continuation_count(const TokenSeq& context, const std::string& token) const {
    const auto ids = context_ids(context);
    if (ids.size() >= tables_.size()) {
        return 0;
    }
    const auto table_it = tables_[ids.size()].find(pack_key(ids.data(), ids.size()));
    if (table_it == tables_[ids.size()].end()) {
        return 0;
    }
    const auto count_it = table_it->second.counts.find(static_cast<int32_t>(token_index(token)));
    return count_it == table_it->second.counts.end() ? 0 : count_it->second;
}

int64_t NgramModel::context_count(const TokenSeq& context) const {
    const auto ids = context_ids(context);
    if (ids.size() >= tables_.size()) {
        return 0;
    }
    const auto table_it = tables_[ids.size()].find(pack_key(ids.data(), ids.size()));
    return table_it == tables_[ids.size()].end() ? 0 : table_it->second.total;
}

std::vector<double> NgramModel::next_token_logits(const TokenSeq& context) const {
    const auto ids = context_ids(context);
    std::vector<double> probs(vocab_.size(), 0.0);

    double scale = 1.0;
    bool matched = false;
    for (std::size_t len = ids.size() + 1; len-- > 0;) {
        const auto table_it = tables_[len].find(pack_key(ids.data() + (ids.size() - len), len));
        if (table_it != tables_[len].end() && table_it->second.total > 0) {
            const auto& stats = table_it->second;
            for (const auto& [token_id, count] : stats.counts) {
                probs[static_cast<std::size_t>(token_id)] =
                    scale * static_cast<double>(count) / static_cast<double>(stats.total);
            }
            matched = true;
            break;
        }
        scale *= backoff_factor_;
    }
    if (!matched) {
        // Uniform floor over everything but BOS.
        const double p = 1.0 / static_cast<double>(vocab_.size() - 1);
        for (std::size_t i = 0; i < probs.size(); ++i) {
            probs[i] = i == bos_index() ? 0.0 : p;
        }
    }

    double total = 0.0;
    for (double p : probs) total += p;
    std::vector<double> logits(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i) {
        logits[i] = probs[i] > 0.0 ? std::log(probs[i] / total)
                                   : -std::numeric_limits<double>::infinity();
    }
    return logits;
}

}  // namespace textsynth
