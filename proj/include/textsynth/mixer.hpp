#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "textsynth/corpus.hpp"

namespace textsynth {

struct MixSpec {
    double real_fraction = 0.10;
    bool dedup = true;
    uint64_t seed = 0;
};

// Adaptation dataset: all synthetic utterances followed by a uniform seeded
// sample of ceil(real_fraction * |source_real|) real utterances. With dedup
// on, synthetic utterances whose normalized token sequence duplicates an
// earlier output entry are dropped; real utterances are never dropped.
Corpus mix(const Corpus& synthetic, const Corpus& source_real, const MixSpec& spec);

enum class SweepAxis { kCorpusSize, kNumDemonstrations };

std::string_view to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(std::string_view s);

struct SweepPlan {
    SweepAxis axis = SweepAxis::kCorpusSize;
    std::vector<std::size_t> points;   // strictly increasing
    std::size_t repeats = 1;

    void validate() const;
};

struct SweepRun {
    std::size_t index = 0;    // position in the emitted list
    std::size_t point = 0;    // corpus size or demonstration count
    std::size_t repeat = 0;   // 0-based repeat number
    uint64_t seed = 0;        // derived, distinct per run
};

// |points| x repeats run configurations, each with a distinct seed derived
// from base_seed.
std::vector<SweepRun> plan_sweep(const SweepPlan& plan, uint64_t base_seed);

}  // namespace textsynth
