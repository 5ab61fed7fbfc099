#pragma once

#include <cstdint>
#include <vector>

#include "galactic/mdl.hpp"
#include "galactic/rng.hpp"
#include "galactic/surrogate.hpp"
#include "galactic/types.hpp"

namespace testsupport {

// Two linearly separable clusters: one constant near +1, one near -1.
inline galactic::Corpus separable_corpus(int per_cluster = 50, int length = 32,
                                         std::uint64_t seed = 3) {
    galactic::Corpus corpus;
    corpus.name = "separable";
    corpus.num_clusters = 2;
    corpus.label_map = {0, 1};
    galactic::Rng rng(galactic::mix64(seed));
    int id = 0;
    for (int k = 0; k < 2; ++k) {
        double level = k == 0 ? 1.0 : -1.0;
        for (int i = 0; i < per_cluster; ++i) {
            galactic::TimeSeries s;
            s.id = id++;
            for (int t = 0; t < length; ++t) s.values.push_back(level + rng.normal(0.0, 0.05));
            corpus.series.push_back(std::move(s));
            corpus.labels.push_back(k);
        }
    }
    return corpus;
}

inline galactic::SurrogateModel random_model(int input_dim, int hidden, int clusters,
                                             std::uint64_t seed, double scale = 0.8) {
    galactic::SurrogateModel m(input_dim, hidden, clusters);
    galactic::Rng rng(galactic::mix64(seed));
    for (auto& w : m.w1) w = rng.normal(0.0, scale);
    for (auto& w : m.b1) w = rng.normal(0.0, scale);
    for (auto& w : m.w2) w = rng.normal(0.0, scale);
    for (auto& w : m.b2) w = rng.normal(0.0, scale);
    return m;
}

// Random selection-layer instance with the reference cost taken over the
// generated candidates, mirroring how pools cache it.
inline galactic::MdlInstance random_mdl_instance(galactic::Rng& rng, int max_rows = 20,
                                                 int max_cands = 8, double flip_p = -1.0) {
    using galactic::MdlInstance;
    MdlInstance inst;
    int n = 1 + rng.uniform_int(max_rows);
    int m = 1 + rng.uniform_int(max_cands);
    double p = flip_p > 0.0 ? flip_p : 0.15 + 0.5 * rng.uniform01();
    inst.pointer_bits = 64.0;
    for (int i = 0; i < n; ++i) inst.instance_ids.push_back(i);
    inst.mc = 2.0 * inst.pointer_bits;
    for (int j = 0; j < m; ++j) {
        int l0 = 1 + rng.uniform_int(64);
        double l1 = rng.uniform01() * 20.0;
        inst.cand_ids.push_back(j);
        inst.cand_bits.push_back(static_cast<double>(galactic::bits_universal(l0)) +
                                 galactic::log2p1(l1));
        inst.cand_cost.push_back(0.01 + rng.uniform01() * 2.0);
        inst.cand_source_instance.push_back(rng.uniform_int(n));
        inst.cand_source_group.push_back(0);
        std::vector<std::uint8_t> row(static_cast<std::size_t>(n), 0);
        for (int i = 0; i < n; ++i) row[static_cast<std::size_t>(i)] = rng.uniform01() < p ? 1 : 0;
        inst.flips.push_back(std::move(row));
        inst.mc = std::max(inst.mc, inst.cand_bits.back() + 2.0 * inst.pointer_bits);
    }
    return inst;
}

}  // namespace testsupport
