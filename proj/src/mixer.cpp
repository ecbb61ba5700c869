#include "textsynth/mixer.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "textsynth/rng.hpp"

namespace textsynth {
namespace {

std::string dedup_key(const Utterance& utt) {
    std::string key;
    for (const auto& tok : tokenize(utt.text, TokenizeMode::kMetric)) {
        key += tok;
        key += '\n';
    }
    return key;
}

// Smallest integer >= fraction * n, robust to the fraction*n product landing
// an ulp above an exact integer (0.10 * 1000 -> 100, not 101).
std::size_t ceil_fraction(double fraction, std::size_t n) {
    const double scaled = fraction * static_cast<double>(n);
    const auto k = static_cast<long long>(std::ceil(scaled - 1e-9));
    if (k <= 0) return 0;
    return std::min<std::size_t>(static_cast<std::size_t>(k), n);
}

}  // namespace

Corpus mix(const Corpus& synthetic, const Corpus& source_real, const MixSpec& spec) {
    if (synthetic.empty()) {
        throw std::invalid_argument("mix requires a non-empty synthetic corpus");
    }
    if (!(spec.real_fraction >= 0.0) || spec.real_fraction > 1.0) {
        throw std::invalid_argument("real_fraction must be in [0, 1], got " +
                                    std::to_string(spec.real_fraction));
    }
    Corpus out(synthetic.name() + "+real");
    std::unordered_set<std::string> seen;
    for (const auto& utt : synthetic.utterances()) {
        if (spec.dedup && !seen.insert(dedup_key(utt)).second) {
            continue;
        }
        out.add(utt);
    }
    const std::size_t real_count = ceil_fraction(spec.real_fraction, source_real.size());
    if (real_count > 0) {
        Rng rng(spec.seed);
        for (std::size_t idx : sample_indices(rng, source_real.size(), real_count)) {
            out.add(source_real.at(idx));
        }
    }
    return out;
}

std::string_view to_string(SweepAxis axis) {
    return axis == SweepAxis::kCorpusSize ? "corpus_size" : "num_demonstrations";
}

SweepAxis sweep_axis_from_string(std::string_view s) {
    if (s == "corpus_size") return SweepAxis::kCorpusSize;
    if (s == "num_demonstrations") return SweepAxis::kNumDemonstrations;
    throw std::invalid_argument("unknown sweep axis: \"" + std::string(s) +
                                "\" (expected corpus_size or num_demonstrations)");
}

void SweepPlan::validate() const {
    if (points.empty()) {
        throw std::invalid_argument("sweep plan needs at least one point");
    }
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (points[i] <= points[i - 1]) {
            throw std::invalid_argument("sweep points must be strictly increasing");
        }
    }
    if (repeats < 1) {
        throw std::invalid_argument("sweep repeats must be >= 1");
    }
}

std::vector<SweepRun> plan_sweep(const SweepPlan& plan, uint64_t base_seed) {
    plan.validate();
    std::vector<SweepRun> runs;
    runs.reserve(plan.points.size() * plan.repeats);
    std::size_t index = 0;
    for (std::size_t point : plan.points) {
        for (std::size_t repeat = 0; repeat < plan.repeats; ++repeat) {
            SweepRun run;
            run.index = index;
            run.point = point;
            run.repeat = repeat;
            // splitmix64 is injective, so seeds are distinct across runs.
            run.seed = splitmix64(base_seed + static_cast<uint64_t>(index));
            runs.push_back(run);
            ++index;
        }
    }
    return runs;
}

}  // namespace textsynth
