#include "textsynth/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <stdexcept>

namespace textsynth {
namespace {

bool is_ascii_space(unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

std::string trim(std::string_view s) {
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && is_ascii_space(static_cast<unsigned char>(s[begin]))) ++begin;
    while (end > begin && is_ascii_space(static_cast<unsigned char>(s[end - 1]))) --end;
    return std::string(s.substr(begin, end - begin));
}

std::string ascii_lower(std::string s) {
    for (char& c : s) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return s;
}

// Decodes the UTF-8 code point starting at s[i], advancing i. Malformed
// bytes are consumed one at a time and returned with the high bit set past
// the Unicode range so they never match a character class.
uint32_t decode_utf8(std::string_view s, std::size_t& i) {
    const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(s[k]); };
    const unsigned char b0 = byte(i);
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    std::size_t len = 0;
    uint32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        ++i;
        return 0x110000u + b0;
    }
    if (i + len > s.size()) {
        ++i;
        return 0x110000u + b0;
    }
    for (std::size_t k = 1; k < len; ++k) {
        if ((byte(i + k) & 0xC0) != 0x80) {
            ++i;
            return 0x110000u + b0;
        }
        cp = (cp << 6) | (byte(i + k) & 0x3F);
    }
    i += len;
    return cp;
}

void encode_utf8(uint32_t cp, std::string& out) {
    if (cp >= 0x110000u) {   // opaque malformed byte, emit verbatim
        out.push_back(static_cast<char>(cp - 0x110000u));
    } else if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

bool is_space_cp(uint32_t cp) {
    switch (cp) {
        case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
        case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
        case 0x202F: case 0x205F: case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

// ASCII punctuation plus the common typographic marks; good enough for
// transcript-style text without pulling in a full Unicode category table.
bool is_strippable_punct(uint32_t cp) {
    if (cp < 0x80) {
        return std::ispunct(static_cast<int>(cp)) != 0;
    }
    switch (cp) {
        case 0xA1:     // inverted exclamation
        case 0xBF:     // inverted question
        case 0xAB: case 0xBB:               // guillemets
        case 0xB7:     // middle dot
        case 0x2013: case 0x2014:           // en/em dash
        case 0x2018: case 0x2019:           // curly single quotes
        case 0x201C: case 0x201D:           // curly double quotes
        case 0x2026:   // ellipsis
            return true;
        default:
            return false;
    }
}

uint32_t lower_cp(uint32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return cp - 'A' + 'a';
    return cp;
}

std::string normalize_token(const std::vector<uint32_t>& cps) {
    std::size_t begin = 0;
    std::size_t end = cps.size();
    while (begin < end && is_strippable_punct(cps[begin])) ++begin;
    while (end > begin && is_strippable_punct(cps[end - 1])) --end;
    std::string out;
    for (std::size_t k = begin; k < end; ++k) {
        encode_utf8(lower_cp(cps[k]), out);
    }
    return out;
}

}  // namespace

std::string_view to_string(Source source) {
    return source == Source::kReal ? "real" : "synthetic";
}

Source source_from_string(std::string_view s) {
    if (s == "real") return Source::kReal;
    if (s == "synthetic") return Source::kSynthetic;
    throw std::invalid_argument("unknown source value: \"" + std::string(s) +
                                "\" (expected \"real\" or \"synthetic\")");
}

Utterance validate_utterance(Utterance utt) {
    if (utt.id.empty()) {
        throw std::invalid_argument("utterance id must be non-empty");
    }
    if (trim(utt.text).empty()) {
        throw std::invalid_argument("utterance \"" + utt.id +
                                    "\": text is empty after trimming whitespace");
    }
    utt.domain = ascii_lower(trim(utt.domain));
    if (utt.domain.empty()) {
        throw std::invalid_argument("utterance \"" + utt.id + "\": domain is empty");
    }
    return utt;
}

void Corpus::add(Utterance utt) {
    utt = validate_utterance(std::move(utt));
    if (!ids_.insert(utt.id).second) {
        throw std::invalid_argument("duplicate utterance id: \"" + utt.id + "\"");
    }
    utterances_.push_back(std::move(utt));
}

std::vector<std::string> Corpus::domains() const {
    std::set<std::string> seen;
    for (const auto& utt : utterances_) {
        seen.insert(utt.domain);
    }
    return std::vector<std::string>(seen.begin(), seen.end());
}

bool Corpus::has_domain(const std::string& domain) const {
    return std::any_of(utterances_.begin(), utterances_.end(),
                       [&](const Utterance& u) { return u.domain == domain; });
}

Corpus Corpus::filter_domain(const std::string& domain) const {
    Corpus out(name_.empty() ? domain : name_ + ":" + domain);
    for (const auto& utt : utterances_) {
        if (utt.domain == domain) {
            out.add(utt);
        }
    }
    return out;
}

TokenSeq tokenize(std::string_view text, TokenizeMode /*mode*/) {
    // Metric and WER modes share the normalization by design.
    TokenSeq tokens;
    std::vector<uint32_t> current;
    std::size_t i = 0;
    const auto flush = [&] {
        if (!current.empty()) {
            std::string tok = normalize_token(current);
            if (!tok.empty()) {
                tokens.push_back(std::move(tok));
            }
            current.clear();
        }
    };
    while (i < text.size()) {
        const uint32_t cp = decode_utf8(text, i);
        if (is_space_cp(cp)) {
            flush();
        } else {
            current.push_back(cp);
        }
    }
    flush();
    return tokens;
}

TokenSeq split_whitespace(std::string_view text) {
    TokenSeq tokens;
    std::string current;
    std::size_t i = 0;
    const auto flush = [&] {
        if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    };
    while (i < text.size()) {
        const std::size_t start = i;
        const uint32_t cp = decode_utf8(text, i);
        if (is_space_cp(cp)) {
            flush();
        } else {
            current.append(text.substr(start, i - start));
        }
    }
    flush();
    return tokens;
}

DomainSplit leave_one_domain_out(const Corpus& corpus, const std::string& target_domain) {
    if (!corpus.has_domain(target_domain)) {
        std::ostringstream msg;
        msg << "domain \"" << target_domain << "\" not present in corpus \"" << corpus.name()
            << "\"; available domains:";
        for (const auto& d : corpus.domains()) {
            msg << " " << d;
        }
        throw std::invalid_argument(msg.str());
    }
    DomainSplit split;
    split.target_domain = target_domain;
    split.source_train = Corpus(corpus.name() + ":train");
    split.target_test = Corpus(corpus.name() + ":test");
    for (const auto& utt : corpus.utterances()) {
        if (utt.domain == target_domain) {
            split.target_test.add(utt);
        } else {
            split.source_train.add(utt);
        }
    }
    return split;
}

TokenDistribution unigram_distribution(const Corpus& corpus) {
    std::map<std::string, int64_t> counts;
    int64_t total = 0;
    for (const auto& utt : corpus.utterances()) {
        for (auto& tok : tokenize(utt.text, TokenizeMode::kMetric)) {
            ++counts[std::move(tok)];
            ++total;
        }
    }
    if (total == 0) {
        throw std::invalid_argument("corpus \"" + corpus.name() +
                                    "\" yields no tokens under metric tokenization");
    }
    TokenDistribution dist;
    for (const auto& [token, count] : counts) {
        dist[token] = static_cast<double>(count) / static_cast<double>(total);
    }
    return dist;
}

}  // namespace textsynth
