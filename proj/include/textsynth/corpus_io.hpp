#pragma once

#include <iosfwd>
#include <string>

#include "textsynth/corpus.hpp"

namespace textsynth {

// Corpus file format: UTF-8, one JSON object per line with required keys
// `id`, `text`, `domain` and optional `source` (default "real"). Blank lines
// are ignored. Errors carry the 1-based line number.
Corpus load_corpus(const std::string& path);
Corpus read_corpus(std::istream& in, const std::string& name);

// Writer emits keys in the order id, text, domain, source.
void save_corpus(const Corpus& corpus, const std::string& path);
void write_corpus(const Corpus& corpus, std::ostream& out);

}  // namespace textsynth
