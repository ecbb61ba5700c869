#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "textsynth/corpus.hpp"

namespace textsynth {

inline constexpr const char* kInstructionPrefix = "Please generate a sentence related to ";

enum class StrategyKind { kNaive, kIcl, kInstructOnly, kIcif };

std::string_view to_string(StrategyKind kind);
// Accepts "naive", "icl", "if"/"instruct_only", "icif".
StrategyKind strategy_from_string(std::string_view s);

struct PromptStrategy {
    StrategyKind kind = StrategyKind::kNaive;
    std::size_t num_demonstrations = 0;

    bool uses_demonstrations() const {
        return kind == StrategyKind::kIcl || kind == StrategyKind::kIcif;
    }
    // icl/icif require num_demonstrations >= 1; naive/instruct_only require 0.
    void validate() const;
};

struct Prompt {
    std::string text;
    std::string target_domain;
    std::vector<std::string> demonstration_ids;   // in prompt order
};

// The bare target instruction: "Please generate a sentence related to {domain}:"
std::string target_instruction(const std::string& domain);

// One demonstration line: "Please generate a sentence related to {domain}: {text}"
std::string format_instruction(const Utterance& utt);

// k distinct utterances sampled uniformly without replacement; deterministic
// given the seed. Throws if k > |source|.
std::vector<Utterance> sample_demonstrations(const Corpus& source, std::size_t k,
                                             uint64_t rng_seed);

// naive/instruct_only: the bare target instruction. icl/icif: k demonstration
// lines joined by single newlines, a newline, then the bare target
// instruction.
Prompt build_prompt(const PromptStrategy& strategy, const std::string& target_domain,
                    const Corpus& source, uint64_t rng_seed);

// Seed-split contract: sentence i uses base_seed XOR i, so parallel
// generation equals sequential generation sentence-for-sentence.
inline uint64_t sentence_seed(uint64_t base_seed, std::size_t sentence_index) {
    return base_seed ^ static_cast<uint64_t>(sentence_index);
}

struct InstructionRecord {
    std::string prompt;
    std::string completion;   // leading space so prompt+completion is the full instruction
};

// One record per utterance, order preserved. Throws on an empty corpus.
std::vector<InstructionRecord> build_instruction_dataset(const Corpus& source);

// Instruction dataset file: one JSON object per line with keys `prompt`,
// `completion`.
void write_instruction_dataset(const std::vector<InstructionRecord>& records,
                               std::ostream& out);
void save_instruction_dataset(const std::vector<InstructionRecord>& records,
                              const std::string& path);
std::vector<InstructionRecord> load_instruction_dataset(const std::string& path);

}  // namespace textsynth
