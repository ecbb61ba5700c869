#include "textsynth/toy_backend.hpp"

#include <algorithm>
#include <random>

#include "textsynth/sampling.hpp"

namespace textsynth {
namespace {

std::string ascii_lower(std::string s) {
    for (char& c : s) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return s;
}

std::string trim_copy(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) {
        return "";
    }
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

ToyCompletionService::ToyCompletionService(const Corpus& corpus, int order)
    : order_(order), global_(NgramModel::fit(corpus, order)) {
    for (const auto& domain : corpus.domains()) {
        per_domain_.emplace(domain, NgramModel::fit(corpus.filter_domain(domain), order));
    }
}

std::optional<std::string> ToyCompletionService::parse_target_domain(const std::string& prompt) {
    const std::string needle = ascii_lower(kInstructionPrefix);
    const std::string haystack = ascii_lower(prompt);
    const auto start = haystack.rfind(needle);
    if (start == std::string::npos) {
        return std::nullopt;
    }
    const auto domain_start = start + needle.size();
    const auto colon = haystack.find(':', domain_start);
    if (colon == std::string::npos) {
        return std::nullopt;
    }
    const std::string domain = trim_copy(haystack.substr(domain_start, colon - domain_start));
    if (domain.empty()) {
        return std::nullopt;
    }
    return domain;
}

const NgramModel& ToyCompletionService::model_for(const std::string& prompt) const {
    if (const auto domain = parse_target_domain(prompt)) {
        const auto it = per_domain_.find(*domain);
        if (it != per_domain_.end()) {
            return it->second;
        }
        // Unseen domain: the zero-shot case, served by the global model.
    }
    return global_;
}

CompletionResponse ToyCompletionService::complete(const CompletionRequest& request) {
    request.validate();
    const NgramModel& model = model_for(request.prompt);

    SamplingConfig cfg;
    cfg.typical_tau = request.typical_tau;
    cfg.repetition_penalty = request.repetition_penalty;
    cfg.temperature = request.temperature;
    cfg.max_tokens = request.max_tokens;
    cfg.seed = request.seed ? *request.seed : std::random_device{}();

    // Fresh sentence start: BOS padding only. The prompt selects the model
    // but is not used as n-gram context.
    const TokenSeq context(static_cast<std::size_t>(model.order()) - 1, kBosToken);
    const TokenSeq tokens = generate_sentence(model, context, cfg);

    CompletionResponse response;
    response.finish_reason =
        tokens.size() >= cfg.max_tokens ? FinishReason::kLength : FinishReason::kStop;
    if (!tokens.empty()) {
        response.text = " ";
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            if (i > 0) response.text += " ";
            response.text += tokens[i];
        }
    }
    for (const auto& stop : request.stop) {
        if (stop.empty()) {
            continue;
        }
        const auto pos = response.text.find(stop);
        if (pos != std::string::npos) {
            response.text.resize(pos);
            response.finish_reason = FinishReason::kStop;
        }
    }
    return response;
}

}  // namespace textsynth
