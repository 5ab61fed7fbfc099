#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "galactic/types.hpp"

namespace galactic {

// Reads a UCR-style table: one row per series, first column the label,
// remaining columns the values. The delimiter is detected from the first
// line (tab preferred, else comma). Labels may be arbitrary integers and are
// remapped to 0..K-1 in ascending order.
Corpus load_ucr(const std::string& path);

// Writes a corpus back in the same format (tab-delimited, original labels),
// with enough precision that load_ucr(save_ucr(c)) reproduces the values.
void save_ucr(const Corpus& corpus, const std::string& path);

// Per-series z-score: mean 0, population std 1. A series with std below
// 1e-8 becomes all zeros.
TimeSeries znormalize(const TimeSeries& x);
Corpus znormalize(const Corpus& corpus);

struct SplitResult {
    Corpus train;
    Corpus test;
    std::vector<std::string> warnings;
};

// Stratified split by cluster label, deterministic per seed. Every cluster
// keeps at least one training instance; singleton clusters go entirely to
// train with a warning.
SplitResult split(const Corpus& corpus, double train_frac, std::uint64_t seed);

}  // namespace galactic
