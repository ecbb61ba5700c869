#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "textsynth/sampling.hpp"

namespace textsynth {

// Raised for user-facing command failures (bad config, missing files,
// violated preconditions). main() prints the message and exits nonzero.
class CommandError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SynthesizeOptions {
    std::string source_path;
    std::string target_domain;
    std::string strategy = "icif";
    std::size_t num_demonstrations = 10;
    std::string endpoint = "builtin-toylm";
    std::size_t count = 100;
    SamplingConfig sampling;
    int lm_order = 3;
    std::size_t jobs = 1;
    std::string out_dir = ".";
};

struct ProfileOptions {
    std::string synthetic_path;
    std::string reference_path;
    std::optional<std::size_t> sample_size;
    bool full = false;   // force full self-BLEU even on large corpora
    std::string out_dir = ".";
};

struct WerOptions {
    std::string pairs_path;
    std::string baseline_path;   // optional
    bool raw = false;            // raw whitespace tokenization
    std::string out_dir = ".";
};

struct MixOptions {
    std::string synthetic_path;
    std::string real_path;
    double real_fraction = 0.10;
    bool dedup = true;
    uint64_t seed = 0;
    std::string out_dir = ".";
};

struct SweepOptions {
    std::string axis = "corpus_size";
    std::vector<std::size_t> points;
    std::size_t repeats = 1;
    uint64_t seed = 0;
    std::string synthetic_path;   // optional; enables corpus_size materialization
    std::string out_dir = ".";
};

struct MockLlmOptions {
    std::string corpus_path;
    int order = 3;
    int port = 8080;
    double fail_rate = 0.0;
};

struct BuildInstructionsOptions {
    std::string source_path;
    std::string out_dir = ".";
};

void cmd_synthesize(const SynthesizeOptions& options);
void cmd_profile(const ProfileOptions& options);
void cmd_wer(const WerOptions& options);
void cmd_mix(const MixOptions& options);
void cmd_sweep(const SweepOptions& options);
void cmd_build_instructions(const BuildInstructionsOptions& options);
[[noreturn]] void cmd_mock_llm(const MockLlmOptions& options);

// Full argv-level entry point (subcommand dispatch, --config merging, error
// reporting to stderr). Returns the process exit code.
int run_cli(const std::vector<std::string>& args);

}  // namespace textsynth
