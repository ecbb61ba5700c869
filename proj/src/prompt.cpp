#include "textsynth/prompt.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "textsynth/rng.hpp"

namespace textsynth {

std::string_view to_string(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::kNaive: return "naive";
        case StrategyKind::kIcl: return "icl";
        case StrategyKind::kInstructOnly: return "instruct_only";
        case StrategyKind::kIcif: return "icif";
    }
    return "naive";
}

StrategyKind strategy_from_string(std::string_view s) {
    if (s == "naive") return StrategyKind::kNaive;
    if (s == "icl") return StrategyKind::kIcl;
    if (s == "if" || s == "instruct_only") return StrategyKind::kInstructOnly;
    if (s == "icif") return StrategyKind::kIcif;
    throw std::invalid_argument("unknown strategy: \"" + std::string(s) +
                                "\" (expected naive, icl, if, or icif)");
}

void PromptStrategy::validate() const {
    if (uses_demonstrations()) {
        if (num_demonstrations < 1) {
            throw std::invalid_argument(std::string(to_string(kind)) +
                                        " strategy requires num_demonstrations >= 1");
        }
    } else if (num_demonstrations != 0) {
        throw std::invalid_argument(std::string(to_string(kind)) +
                                    " strategy takes no demonstrations");
    }
}

std::string target_instruction(const std::string& domain) {
    return std::string(kInstructionPrefix) + domain + ":";
}

std::string format_instruction(const Utterance& utt) {
    return target_instruction(utt.domain) + " " + utt.text;
}

std::vector<Utterance> sample_demonstrations(const Corpus& source, std::size_t k,
                                             uint64_t rng_seed) {
    if (k > source.size()) {
        throw std::invalid_argument("cannot sample " + std::to_string(k) +
                                    " demonstrations from corpus of size " +
                                    std::to_string(source.size()));
    }
    Rng rng(rng_seed);
    std::vector<Utterance> demos;
    demos.reserve(k);
    for (std::size_t idx : sample_indices(rng, source.size(), k)) {
        demos.push_back(source.at(idx));
    }
    return demos;
}

Prompt build_prompt(const PromptStrategy& strategy, const std::string& target_domain,
                    const Corpus& source, uint64_t rng_seed) {
    strategy.validate();
    Prompt prompt;
    prompt.target_domain = target_domain;
    std::ostringstream text;
    if (strategy.uses_demonstrations()) {
        for (const auto& demo :
             sample_demonstrations(source, strategy.num_demonstrations, rng_seed)) {
            text << format_instruction(demo) << "\n";
            prompt.demonstration_ids.push_back(demo.id);
        }
    }
    text << target_instruction(target_domain);
    prompt.text = text.str();
    return prompt;
}

std::vector<InstructionRecord> build_instruction_dataset(const Corpus& source) {
    if (source.empty()) {
        throw std::invalid_argument("cannot build an instruction dataset from an empty corpus");
    }
    std::vector<InstructionRecord> records;
    records.reserve(source.size());
    for (const auto& utt : source.utterances()) {
        records.push_back({target_instruction(utt.domain), " " + utt.text});
    }
    return records;
}

void write_instruction_dataset(const std::vector<InstructionRecord>& records,
                               std::ostream& out) {
    for (const auto& record : records) {
        nlohmann::ordered_json line;
        line["prompt"] = record.prompt;
        line["completion"] = record.completion;
        out << line.dump() << "\n";
    }
}

void save_instruction_dataset(const std::vector<InstructionRecord>& records,
                              const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open instruction dataset for writing: " + path);
    }
    write_instruction_dataset(records, out);
    if (!out) {
        throw std::runtime_error("failed writing instruction dataset: " + path);
    }
}

std::vector<InstructionRecord> load_instruction_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open instruction dataset: " + path);
    }
    std::vector<InstructionRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) {
            continue;
        }
        try {
            const auto record = nlohmann::json::parse(line);
            records.push_back({record.at("prompt").get<std::string>(),
                               record.at("completion").get<std::string>()});
        } catch (const std::exception& e) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": malformed instruction record: " + e.what());
        }
    }
    return records;
}

}  // namespace textsynth
