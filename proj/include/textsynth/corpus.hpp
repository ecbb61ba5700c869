#pragma once

#include <map>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace textsynth {

// Whitespace-free, non-empty token strings.
using TokenSeq = std::vector<std::string>;

// Token -> probability. std::map keeps iteration order deterministic.
using TokenDistribution = std::map<std::string, double>;

enum class Source { kReal, kSynthetic };

std::string_view to_string(Source source);
Source source_from_string(std::string_view s);

struct Utterance {
    std::string id;
    std::string text;     // raw sentence, UTF-8
    std::string domain;   // lowercase, trimmed
    Source source = Source::kReal;
};

// Validates Utterance invariants; throws std::invalid_argument on violation.
// Returns the utterance with its domain normalized (trimmed + lowercased).
Utterance validate_utterance(Utterance utt);

// Ordered collection of utterances with distinct ids. Immutable in practice:
// built once, then shared read-only.
class Corpus {
public:
    Corpus() = default;
    explicit Corpus(std::string name) : name_(std::move(name)) {}

    // Validates and appends; throws on invariant violation or duplicate id.
    void add(Utterance utt);

    const std::vector<Utterance>& utterances() const { return utterances_; }
    const Utterance& at(std::size_t i) const { return utterances_.at(i); }
    std::size_t size() const { return utterances_.size(); }
    bool empty() const { return utterances_.empty(); }
    const std::string& name() const { return name_; }
    void set_name(std::string name) { name_ = std::move(name); }

    // Distinct domain labels, sorted.
    std::vector<std::string> domains() const;
    bool has_domain(const std::string& domain) const;
    Corpus filter_domain(const std::string& domain) const;

private:
    std::string name_;
    std::vector<Utterance> utterances_;
    std::unordered_set<std::string> ids_;
};

enum class TokenizeMode { kMetric, kWer };

// Shared normalizer: lowercase (ASCII case folding), split on Unicode
// whitespace, strip leading/trailing punctuation per token, drop tokens that
// become empty. Metric and WER modes share the normalization so diversity
// metrics and WER cannot silently disagree.
TokenSeq tokenize(std::string_view text, TokenizeMode mode = TokenizeMode::kMetric);

// Raw splitting on Unicode whitespace only; no case folding, no punctuation
// stripping. Backs the WER --raw flag.
TokenSeq split_whitespace(std::string_view text);

struct DomainSplit {
    std::string target_domain;
    Corpus source_train;   // every domain except target
    Corpus target_test;    // target domain only
};

// Leave-one-domain-out partition. Throws if target_domain does not occur,
// listing the available domains.
DomainSplit leave_one_domain_out(const Corpus& corpus, const std::string& target_domain);

// Unigram probabilities over metric tokens. Throws if the corpus yields no
// tokens.
TokenDistribution unigram_distribution(const Corpus& corpus);

}  // namespace textsynth
