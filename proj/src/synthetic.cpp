#include "galactic/synthetic.hpp"

#include "galactic/rng.hpp"

namespace galactic {

Corpus make_synthetic_corpus(const SyntheticSpec& spec) {
    Corpus corpus;
    corpus.name = "synthetic3";
    corpus.num_clusters = 3;
    corpus.label_map = {0, 1, 2};
    const double heights[3] = {0.0, 2.0, -2.0};

    Rng rng(mix64(spec.seed));
    int id = 0;
    for (int k = 0; k < 3; ++k) {
        for (int i = 0; i < spec.per_cluster; ++i) {
            TimeSeries s;
            s.id = id++;
            s.values.resize(static_cast<std::size_t>(spec.length));
            double level = (2.0 * rng.uniform01() - 1.0) * spec.level_range;
            for (int t = 0; t < spec.length; ++t) {
                double v = level + rng.normal(0.0, spec.noise_sd);
                if (t >= spec.bump_begin && t < spec.bump_end) v += heights[k];
                s.values[static_cast<std::size_t>(t)] = v;
            }
            corpus.series.push_back(std::move(s));
            corpus.labels.push_back(k);
        }
    }
    return corpus;
}

}  // namespace galactic
