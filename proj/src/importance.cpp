#include "galactic/importance.hpp"

#include <algorithm>
#include <cmath>

#include "galactic/error.hpp"
#include "galactic/rng.hpp"
#include "galactic/util.hpp"

namespace galactic {

std::string strategy_name(Strategy s) {
    switch (s) {
        case Strategy::Baseline: return "baseline";
        case Strategy::Source: return "source";
        case Strategy::Target: return "target";
        case Strategy::Combined: return "combined";
    }
    throw Error(errc::config, "unknown strategy");
}

Strategy strategy_from_name(const std::string& name) {
    if (name == "baseline") return Strategy::Baseline;
    if (name == "source") return Strategy::Source;
    if (name == "target") return Strategy::Target;
    if (name == "combined") return Strategy::Combined;
    throw Error(errc::config, "unknown strategy: " + name);
}

int ImportanceMask::active() const {
    int n = 0;
    for (auto v : w) n += v != 0;
    return n;
}

SegmentScores segment_importance(const SurrogateModel& model,
                                 const std::vector<const TimeSeries*>& population,
                                 const std::vector<int>& labels, const Segmentation& seg, int B,
                                 std::uint64_t seed) {
    if (population.empty()) throw Error(errc::precondition, "empty population");
    if (population.size() != labels.size()) {
        throw Error(errc::precondition, "population and labels differ in size");
    }
    if (B < 1) throw Error(errc::precondition, "repetitions must be positive");

    const int n = static_cast<int>(population.size());
    const int M = seg.num_segments();

    SegmentScores out;
    out.repetitions = B;
    out.imp.assign(static_cast<std::size_t>(M), 0.0);

    auto population_accuracy = [&](const std::vector<std::vector<double>>& rows) {
        int hits = 0;
        for (int i = 0; i < n; ++i) {
            if (argmax_lowest(model.predict_proba(rows[static_cast<std::size_t>(i)])) ==
                labels[static_cast<std::size_t>(i)]) {
                ++hits;
            }
        }
        return static_cast<double>(hits) / static_cast<double>(n);
    };

    std::vector<std::vector<double>> rows(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) rows[static_cast<std::size_t>(i)] = population[static_cast<std::size_t>(i)]->values;
    out.baseline_accuracy = population_accuracy(rows);

    if (n < 2) return out;  // nothing to shuffle; caller treats this as a warning

    for (int m = 0; m < M; ++m) {
        int a = seg.breakpoints[static_cast<std::size_t>(m)];
        int b = seg.breakpoints[static_cast<std::size_t>(m) + 1];
        double acc_sum = 0.0;
        for (int rep = 0; rep < B; ++rep) {
            Rng rng(seed ^ static_cast<std::uint64_t>(m * 1000 + rep));
            std::vector<int> perm = rng.derangement(n);
            auto shuffled = rows;
            for (int i = 0; i < n; ++i) {
                const auto& src = rows[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
                std::copy(src.begin() + a, src.begin() + b,
                          shuffled[static_cast<std::size_t>(i)].begin() + a);
            }
            acc_sum += population_accuracy(shuffled);
        }
        out.imp[static_cast<std::size_t>(m)] =
            std::abs(out.baseline_accuracy - acc_sum / static_cast<double>(B));
    }
    return out;
}

ImportanceMask binarize_mask(const std::vector<double>& scores, const std::vector<int>& boundaries,
                             double q, Strategy tag) {
    if (!(q >= 0.0 && q < 1.0)) throw Error(errc::precondition, "quantile must be in [0, 1)");
    if (scores.size() + 1 != boundaries.size()) {
        throw Error(errc::precondition, "scores do not align with boundaries");
    }
    const int T = boundaries.back();
    ImportanceMask mask;
    mask.strategy = tag;
    mask.quantile = q;
    mask.w.assign(static_cast<std::size_t>(T), 0);

    double threshold = quantile_nearest_rank(scores, q);
    bool all_equal = std::all_of(scores.begin(), scores.end(),
                                 [&](double s) { return s == scores.front(); });
    for (std::size_t m = 0; m < scores.size(); ++m) {
        if (!all_equal && scores[m] < threshold) continue;
        for (int t = boundaries[m]; t < boundaries[m + 1]; ++t) {
            mask.w[static_cast<std::size_t>(t)] = 1;
        }
    }
    return mask;
}

ImportanceMask binarize_mask(const SegmentScores& scores, const Segmentation& seg, double q) {
    return binarize_mask(scores.imp, seg.breakpoints, q, Strategy::Source);
}

UnifiedIntervals align_intervals(const std::vector<Segmentation>& segs,
                                 const std::vector<std::vector<double>>& scores) {
    if (segs.empty()) throw Error(errc::precondition, "no segmentations to align");
    if (segs.size() != scores.size()) {
        throw Error(errc::precondition, "scores do not align with segmentations");
    }
    const int T = segs.front().total_length();
    for (std::size_t g = 0; g < segs.size(); ++g) {
        if (segs[g].total_length() != T) {
            throw Error(errc::precondition, "segmentations cover different lengths");
        }
        if (static_cast<int>(scores[g].size()) != segs[g].num_segments()) {
            throw Error(errc::precondition, "score count does not match segment count");
        }
    }

    UnifiedIntervals out;
    for (const auto& s : segs) {
        out.boundaries.insert(out.boundaries.end(), s.breakpoints.begin(), s.breakpoints.end());
    }
    std::sort(out.boundaries.begin(), out.boundaries.end());
    out.boundaries.erase(std::unique(out.boundaries.begin(), out.boundaries.end()),
                         out.boundaries.end());

    const double inv_g = 1.0 / static_cast<double>(segs.size());
    for (std::size_t i = 0; i + 1 < out.boundaries.size(); ++i) {
        int a = out.boundaries[i];
        int b = out.boundaries[i + 1];
        double acc = 0.0;
        for (std::size_t g = 0; g < segs.size(); ++g) {
            const auto& bp = segs[g].breakpoints;
            for (std::size_t m = 0; m + 1 < bp.size(); ++m) {
                int overlap = std::min(b, bp[m + 1]) - std::max(a, bp[m]);
                if (overlap <= 0) continue;
                double len = static_cast<double>(bp[m + 1] - bp[m]);
                acc += scores[g][m] * static_cast<double>(overlap) / len;
            }
        }
        out.imp.push_back(acc * inv_g);
    }
    return out;
}

int StructureIndex::group_of(int corpus_id) const {
    auto it = locate.find(corpus_id);
    if (it == locate.end()) {
        throw Error(errc::unknown_instance, "instance " + std::to_string(corpus_id) +
                                                " is not indexed in the structures");
    }
    const auto& cs = clusters[static_cast<std::size_t>(it->second.first)];
    return cs.subgroups.assignment[static_cast<std::size_t>(it->second.second)];
}

const Segmentation& StructureIndex::instance_pattern(int corpus_id) const {
    auto it = locate.find(corpus_id);
    if (it == locate.end()) {
        throw Error(errc::unknown_instance, "instance " + std::to_string(corpus_id) +
                                                " is not indexed in the structures");
    }
    const auto& cs = clusters[static_cast<std::size_t>(it->second.first)];
    int r = cs.subgroups.assignment[static_cast<std::size_t>(it->second.second)];
    return cs.subgroups.patterns[static_cast<std::size_t>(r)];
}

StructureIndex build_structures(const Corpus& corpus, const SurrogateModel& model, int window,
                                int step, int repetitions, double quantile, std::uint64_t seed) {
    if (corpus.size() == 0) throw Error(errc::empty_corpus, "cannot index an empty corpus");
    const int T = corpus.length();
    int w = window > 0 ? window : default_window(T);
    int st = step > 0 ? step : default_step(T);

    StructureIndex index;
    index.quantile = quantile;
    index.clusters.resize(static_cast<std::size_t>(corpus.num_clusters));

    parallel_for(corpus.num_clusters, [&](int k) {
        auto members = corpus.cluster_members(k);
        if (members.empty()) return;
        std::vector<TimeSeries> series;
        series.reserve(members.size());
        for (int i : members) series.push_back(corpus.series[static_cast<std::size_t>(i)]);

        std::uint64_t cluster_seed = seed ^ static_cast<std::uint64_t>(k);
        ClusterStructure cs;
        cs.subgroups = build_subgroups(series, w, st, cluster_seed);
        cs.subgroups.cluster_id = k;

        for (int r = 0; r < cs.subgroups.num_groups(); ++r) {
            std::vector<const TimeSeries*> group;
            std::vector<int> labels;
            for (std::size_t m = 0; m < series.size(); ++m) {
                if (cs.subgroups.assignment[m] == r) {
                    group.push_back(&series[m]);
                    labels.push_back(k);
                }
            }
            std::uint64_t group_seed = mix64(cluster_seed ^ (static_cast<std::uint64_t>(r) + 1));
            cs.group_scores.push_back(segment_importance(
                model, group, labels, cs.subgroups.patterns[static_cast<std::size_t>(r)],
                repetitions, group_seed));
        }
        index.clusters[static_cast<std::size_t>(k)] = std::move(cs);
    });

    for (int k = 0; k < corpus.num_clusters; ++k) {
        const auto& ids = index.clusters[static_cast<std::size_t>(k)].subgroups.instance_ids;
        for (std::size_t m = 0; m < ids.size(); ++m) {
            index.locate[ids[m]] = {k, static_cast<int>(m)};
        }
    }
    return index;
}

ImportanceMask get_mask(const TimeSeries& x, int source_cluster, std::optional<int> target_cluster,
                        Strategy strategy, const StructureIndex& structures) {
    const int T = x.length();
    const double q = structures.quantile;

    if (strategy == Strategy::Baseline) {
        ImportanceMask mask;
        mask.strategy = Strategy::Baseline;
        mask.quantile = q;
        mask.w.assign(static_cast<std::size_t>(T), 1);
        return mask;
    }
    if ((strategy == Strategy::Target || strategy == Strategy::Combined) && !target_cluster) {
        throw Error(errc::target_unresolved,
                    "the " + strategy_name(strategy) +
                        " strategy needs a target cluster; resolve the target first");
    }

    auto source_pattern = [&]() -> std::pair<const Segmentation*, const SegmentScores*> {
        auto it = structures.locate.find(x.id);
        if (it == structures.locate.end() || it->second.first != source_cluster) {
            throw Error(errc::unknown_instance,
                        "instance " + std::to_string(x.id) + " is not indexed in cluster " +
                            std::to_string(source_cluster));
        }
        const auto& cs = structures.clusters[static_cast<std::size_t>(source_cluster)];
        int r = cs.subgroups.assignment[static_cast<std::size_t>(it->second.second)];
        return {&cs.subgroups.patterns[static_cast<std::size_t>(r)],
                &cs.group_scores[static_cast<std::size_t>(r)]};
    };

    if (strategy == Strategy::Source) {
        auto [seg, scores] = source_pattern();
        ImportanceMask mask = binarize_mask(scores->imp, seg->breakpoints, q, Strategy::Source);
        return mask;
    }

    const auto& target = structures.clusters[static_cast<std::size_t>(*target_cluster)];
    std::vector<Segmentation> segs;
    std::vector<std::vector<double>> scores;
    if (strategy == Strategy::Combined) {
        auto [seg, sc] = source_pattern();
        segs.push_back(*seg);
        scores.push_back(sc->imp);
    }
    for (int r = 0; r < target.subgroups.num_groups(); ++r) {
        segs.push_back(target.subgroups.patterns[static_cast<std::size_t>(r)]);
        scores.push_back(target.group_scores[static_cast<std::size_t>(r)].imp);
    }
    UnifiedIntervals unified = align_intervals(segs, scores);
    return binarize_mask(unified.imp, unified.boundaries, q, strategy);
}

}  // namespace galactic
