#pragma once

#include <cstdint>

#include "galactic/types.hpp"

namespace galactic {

// Three-cluster fixture for smoke runs and end-to-end checks. Each series
// sits at its own baseline level (uniform in [-level_range, level_range]);
// inside [bump_begin, bump_end) the level shifts by 0, +2 or -2 depending on
// the cluster. The class is carried only by that level contrast, so the
// window is the unique discriminative region, while the per-instance
// baseline makes cross-instance block swaps break the contrast.
struct SyntheticSpec {
    int per_cluster = 50;
    int length = 64;
    int bump_begin = 24;
    int bump_end = 40;
    double level_range = 1.0;
    double noise_sd = 0.1;
    std::uint64_t seed = 7;
};

Corpus make_synthetic_corpus(const SyntheticSpec& spec = {});

}  // namespace galactic
