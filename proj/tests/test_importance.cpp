#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"

#include "galactic/dataset.hpp"
#include "galactic/error.hpp"
#include "galactic/importance.hpp"
#include "galactic/rng.hpp"
#include "galactic/surrogate.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace galactic;

namespace {

// Bump cluster with per-instance baseline levels: the contrast over
// [24, 40) carries the class, the level does not.
Corpus bump_corpus(int per_cluster = 12) {
    Corpus corpus;
    corpus.name = "bump";
    corpus.num_clusters = 2;
    corpus.label_map = {0, 1};
    int id = 0;
    for (int k = 0; k < 2; ++k) {
        for (int i = 0; i < per_cluster; ++i) {
            double level = -1.0 + 2.0 * i / (per_cluster - 1);
            TimeSeries s;
            s.id = id++;
            for (int t = 0; t < 64; ++t) {
                double v = level;
                if (k == 1 && t >= 24 && t < 40) v += 2.0;
                s.values.push_back(v);
            }
            corpus.series.push_back(std::move(s));
            corpus.labels.push_back(k);
        }
    }
    return corpus;
}

std::vector<const TimeSeries*> cluster_pointers(const Corpus& c, int k, std::vector<int>& labels) {
    std::vector<const TimeSeries*> out;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c.labels[i] == k) {
            out.push_back(&c.series[i]);
            labels.push_back(k);
        }
    }
    return out;
}

// Independent shuffle-importance oracle with its own rng and loop order.
std::vector<double> oracle_importance(const SurrogateModel& model,
                                      const std::vector<const TimeSeries*>& pop, int label,
                                      const Segmentation& seg, int reps, std::uint64_t seed) {
    const int n = static_cast<int>(pop.size());
    auto accuracy = [&](const std::vector<std::vector<double>>& rows) {
        int hits = 0;
        for (const auto& r : rows) hits += model.predict(r) == label;
        return static_cast<double>(hits) / n;
    };
    std::vector<std::vector<double>> base;
    for (auto* p : pop) base.push_back(p->values);
    double a0 = accuracy(base);

    std::vector<double> imp;
    Rng rng(seed);
    for (int m = 0; m < seg.num_segments(); ++m) {
        int a = seg.breakpoints[static_cast<std::size_t>(m)];
        int b = seg.breakpoints[static_cast<std::size_t>(m) + 1];
        double mean_acc = 0.0;
        for (int rep = 0; rep < reps; ++rep) {
            auto perm = rng.derangement(n);
            auto rows = base;
            for (int i = 0; i < n; ++i) {
                for (int t = a; t < b; ++t) {
                    rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] =
                        base[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])]
                            [static_cast<std::size_t>(t)];
                }
            }
            mean_acc += accuracy(rows);
        }
        imp.push_back(std::abs(a0 - mean_acc / reps));
    }
    return imp;
}

// Expected importance over all derangements (exact, small n only).
double exact_expected_importance(const SurrogateModel& model,
                                 const std::vector<std::vector<double>>& rows,
                                 const std::vector<int>& labels, int a, int b) {
    const int n = static_cast<int>(rows.size());
    auto accuracy = [&](const std::vector<std::vector<double>>& r) {
        int hits = 0;
        for (int i = 0; i < n; ++i) hits += model.predict(r[static_cast<std::size_t>(i)]) == labels[static_cast<std::size_t>(i)];
        return static_cast<double>(hits) / n;
    };
    double a0 = accuracy(rows);
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    double sum = 0.0;
    int count = 0;
    do {
        bool derangement = true;
        for (int i = 0; i < n; ++i) {
            if (perm[static_cast<std::size_t>(i)] == i) { derangement = false; break; }
        }
        if (!derangement) continue;
        auto shuffled = rows;
        for (int i = 0; i < n; ++i) {
            for (int t = a; t < b; ++t) {
                shuffled[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] =
                    rows[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])]
                        [static_cast<std::size_t>(t)];
            }
        }
        sum += accuracy(shuffled);
        ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::abs(a0 - sum / count);
}

}  // namespace

TEST_CASE("a segment with identical values across the population scores exactly zero") {
    SurrogateModel model = testsupport::random_model(12, 5, 3, 41);
    std::vector<TimeSeries> series;
    Rng rng(4);
    for (int i = 0; i < 4; ++i) {
        TimeSeries s;
        s.id = i;
        for (int t = 0; t < 12; ++t) {
            s.values.push_back(t < 6 ? 0.5 : rng.normal());  // first half identical
        }
        series.push_back(std::move(s));
    }
    std::vector<const TimeSeries*> pop;
    std::vector<int> labels;
    for (auto& s : series) {
        pop.push_back(&s);
        labels.push_back(model.predict(s));
    }
    Segmentation seg{{0, 6, 12}};
    SegmentScores scores = segment_importance(model, pop, labels, seg, 3, 5);
    CHECK(scores.imp[0] == 0.0);
}

TEST_CASE("segment importance is reproducible for a fixed seed") {
    Corpus c = bump_corpus();
    TrainConfig tc;
    tc.epochs = 60;
    tc.seed = 3;
    SurrogateModel model = SurrogateModel::train(c, tc);
    std::vector<int> labels;
    auto pop = cluster_pointers(c, 1, labels);
    Segmentation seg{{0, 24, 40, 64}};
    SegmentScores a = segment_importance(model, pop, labels, seg, 1, 99);
    SegmentScores b = segment_importance(model, pop, labels, seg, 1, 99);
    CHECK(a.imp == b.imp);
}

TEST_CASE("the class-carrying segment dominates the importance scores") {
    Corpus c = bump_corpus();
    TrainConfig tc;
    tc.epochs = 120;
    tc.seed = 3;
    SurrogateModel model = SurrogateModel::train(c, tc);
    REQUIRE(model.accuracy(c) == 1.0);

    std::vector<int> labels;
    auto pop = cluster_pointers(c, 1, labels);
    Segmentation seg{{0, 24, 40, 64}};

    SegmentScores scores = segment_importance(model, pop, labels, seg, 5, 7);
    auto arg = std::max_element(scores.imp.begin(), scores.imp.end()) - scores.imp.begin();
    CHECK(arg == 1);
    CHECK(scores.imp[1] > 0.0);

    auto oracle = oracle_importance(model, pop, 1, seg, 20, 1234);
    auto oracle_arg = std::max_element(oracle.begin(), oracle.end()) - oracle.begin();
    CHECK(oracle_arg == 1);
}

TEST_CASE("expected importance over all derangements is invariant to relabeling") {
    SurrogateModel model = testsupport::random_model(8, 5, 2, 12, 1.2);
    Rng rng(6);
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (int i = 0; i < 4; ++i) {
        std::vector<double> r(8);
        for (auto& v : r) v = rng.normal();
        labels.push_back(model.predict(r));
        rows.push_back(std::move(r));
    }
    double imp = exact_expected_importance(model, rows, labels, 2, 6);

    // reverse the instance order
    std::vector<std::vector<double>> reversed(rows.rbegin(), rows.rend());
    std::vector<int> rlabels(labels.rbegin(), labels.rend());
    double imp_rev = exact_expected_importance(model, reversed, rlabels, 2, 6);
    CHECK(imp == doctest::Approx(imp_rev).epsilon(1e-15));
}

TEST_CASE("binarize_mask quantile behavior") {
    std::vector<int> bounds{0, 2, 4, 6, 8};

    ImportanceMask spike = binarize_mask({0.0, 0.0, 0.0, 1.0}, bounds, 0.75, Strategy::Source);
    CHECK(spike.w == std::vector<std::uint8_t>{0, 0, 0, 0, 0, 0, 1, 1});

    ImportanceMask equal = binarize_mask({0.4, 0.4, 0.4, 0.4}, bounds, 0.75, Strategy::Source);
    CHECK(equal.active() == 8);

    ImportanceMask zero_q = binarize_mask({0.1, 0.9, 0.5, 0.2}, bounds, 0.0, Strategy::Source);
    CHECK(zero_q.active() == 8);

    CHECK_THROWS_AS(binarize_mask({0.1}, {0, 4}, 1.0, Strategy::Source), Error);
}

TEST_CASE("align_intervals reduces to the input for a single segmentation") {
    Segmentation seg{{0, 5, 12, 20}};
    std::vector<double> scores{0.3, 0.9, 0.1};
    UnifiedIntervals u = align_intervals({seg}, {scores});
    CHECK(u.boundaries == seg.breakpoints);
    for (std::size_t i = 0; i < scores.size(); ++i) {
        CHECK(u.imp[i] == doctest::Approx(scores[i]).epsilon(1e-15));
    }
}

TEST_CASE("align_intervals averages identical segmentations") {
    Segmentation seg{{0, 4, 10}};
    UnifiedIntervals u = align_intervals({seg, seg}, {{1.0, 0.0}, {0.0, 1.0}});
    CHECK(u.imp[0] == doctest::Approx(0.5));
    CHECK(u.imp[1] == doctest::Approx(0.5));
}

TEST_CASE("align_intervals matches the per-timestep accumulation oracle") {
    Segmentation g1{{0, 4, 8}};
    Segmentation g2{{0, 2, 8}};
    std::vector<std::vector<double>> scores{{1.0, 0.0}, {0.0, 1.0}};
    UnifiedIntervals u = align_intervals({g1, g2}, scores);
    CHECK(u.boundaries == std::vector<int>{0, 2, 4, 8});

    auto oracle = testsupport::oracle_aligned_importance({g1, g2}, scores, u.boundaries);
    REQUIRE(oracle.size() == u.imp.size());
    for (std::size_t i = 0; i < oracle.size(); ++i) {
        CHECK(u.imp[i] == doctest::Approx(oracle[i]).epsilon(1e-12));
    }
    // frozen values from the oracle: overlap-weighted group average
    CHECK(u.imp[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(u.imp[1] == doctest::Approx(0.25 + 1.0 / 6.0).epsilon(1e-12));
    CHECK(u.imp[2] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("interval overlaps cover each segment completely") {
    Segmentation g1{{0, 4, 8}};
    Segmentation g2{{0, 2, 8}};
    UnifiedIntervals u = align_intervals({g1, g2}, {{1.0, 1.0}, {1.0, 1.0}});
    for (const auto& seg : {g1, g2}) {
        for (std::size_t m = 0; m + 1 < seg.breakpoints.size(); ++m) {
            int covered = 0;
            for (std::size_t i = 0; i + 1 < u.boundaries.size(); ++i) {
                int lo = std::max(u.boundaries[i], seg.breakpoints[m]);
                int hi = std::min(u.boundaries[i + 1], seg.breakpoints[m + 1]);
                covered += std::max(0, hi - lo);
            }
            CHECK(covered == seg.breakpoints[m + 1] - seg.breakpoints[m]);
        }
    }
}

TEST_CASE("re-expanding aligned importances reproduces the scores for one group") {
    Segmentation seg{{0, 3, 9, 16}};
    std::vector<double> scores{0.2, 0.7, 0.05};
    UnifiedIntervals u = align_intervals({seg}, {scores});
    // average the interval importances back per original segment
    for (std::size_t m = 0; m + 1 < seg.breakpoints.size(); ++m) {
        double acc = 0.0;
        int len = 0;
        for (std::size_t i = 0; i + 1 < u.boundaries.size(); ++i) {
            int lo = std::max(u.boundaries[i], seg.breakpoints[m]);
            int hi = std::min(u.boundaries[i + 1], seg.breakpoints[m + 1]);
            if (hi > lo) {
                acc += u.imp[i] * (hi - lo);
                len += hi - lo;
            }
        }
        CHECK(acc / len == doctest::Approx(scores[m]).epsilon(1e-12));
    }
}

TEST_CASE("get_mask strategies on the bump corpus") {
    Corpus c = bump_corpus();
    TrainConfig tc;
    tc.epochs = 120;
    tc.seed = 3;
    SurrogateModel model = SurrogateModel::train(c, tc);
    StructureIndex idx = build_structures(c, model, 0, 0, 5, 0.75, 11);

    const TimeSeries& x0 = c.series[0];  // cluster 0 member

    ImportanceMask baseline = get_mask(x0, 0, std::nullopt, Strategy::Baseline, idx);
    CHECK(baseline.active() == 64);

    // identical gap vectors per cluster: single subgroup each
    REQUIRE(idx.clusters[1].subgroups.num_groups() == 1);

    // target mask equals the binarized single-pattern scores
    ImportanceMask target = get_mask(x0, 0, 1, Strategy::Target, idx);
    const auto& pattern = idx.clusters[1].subgroups.patterns[0];
    const auto& scores = idx.clusters[1].group_scores[0];
    ImportanceMask direct = binarize_mask(scores.imp, pattern.breakpoints, 0.75, Strategy::Target);
    CHECK(target.w == direct.w);
    CHECK(target.active() >= 1);

    // combined masks cover the bump interior for a cluster-1 instance
    const TimeSeries& x1 = c.series[12];
    ImportanceMask combined = get_mask(x1, 1, 0, Strategy::Combined, idx);
    CHECK(combined.active() >= 1);
    CHECK(combined.active() < 64);
    for (int t = 28; t < 36; ++t) CHECK(combined.w[static_cast<std::size_t>(t)] == 1);

    CHECK_THROWS_AS(get_mask(x0, 0, std::nullopt, Strategy::Target, idx), Error);
    CHECK_THROWS_AS(get_mask(x0, 0, std::nullopt, Strategy::Combined, idx), Error);
}
