#include "textsynth/rng.hpp"

#include <numeric>
#include <stdexcept>

namespace textsynth {

std::vector<std::size_t> sample_indices(Rng& rng, std::size_t n, std::size_t k) {
    if (k > n) {
        throw std::invalid_argument("sample_indices: k (" + std::to_string(k) +
                                    ") exceeds population size (" + std::to_string(n) + ")");
    }
    std::vector<std::size_t> indices(n);
    std::iota(indices.begin(), indices.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(uniform_below(rng, n - i));
        std::swap(indices[i], indices[j]);
    }
    indices.resize(k);
    return indices;
}

}  // namespace textsynth
