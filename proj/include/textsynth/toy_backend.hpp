#pragma once

#include <map>
#include <optional>
#include <string>

#include "textsynth/client.hpp"
#include "textsynth/corpus.hpp"
#include "textsynth/ngram_lm.hpp"

namespace textsynth {

// In-process completion backend over the toy n-gram LM. Fits one model per
// domain plus a global fallback; the target domain is parsed from the final
// instruction line of the prompt, so an unseen domain (the zero-shot case)
// generates from the global model. Each completion is seeded from the
// request, so calls are stateless and safe to run concurrently.
class ToyCompletionService : public CompletionBackend {
public:
    explicit ToyCompletionService(const Corpus& corpus, int order = 3);

    CompletionResponse complete(const CompletionRequest& request) override;

    // Domain named in the last "Please generate a sentence related to X:"
    // line, lowercased; nullopt when the prompt does not match the template.
    static std::optional<std::string> parse_target_domain(const std::string& prompt);

    const NgramModel& global_model() const { return global_; }

private:
    const NgramModel& model_for(const std::string& prompt) const;

    int order_;
    NgramModel global_;
    std::map<std::string, NgramModel> per_domain_;
};

}  // namespace textsynth
