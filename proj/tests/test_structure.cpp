#include <algorithm>
#include <cmath>

#include "doctest.h"

#include "galactic/error.hpp"
#include "galactic/rng.hpp"
#include "galactic/structure.hpp"
#include "support/oracles.hpp"

using namespace galactic;

namespace {

// Reference scan of the mean/std dissimilarity score.
std::vector<double> oracle_scores(const std::vector<double>& x, int window) {
    const int T = static_cast<int>(x.size());
    std::vector<double> out;
    for (int t = window; t < T - window; ++t) {
        auto stats = [&](int a, int b) {
            double mean = 0.0;
            for (int i = a; i < b; ++i) mean += x[static_cast<std::size_t>(i)];
            mean /= b - a;
            double var = 0.0;
            for (int i = a; i < b; ++i) {
                var += (x[static_cast<std::size_t>(i)] - mean) * (x[static_cast<std::size_t>(i)] - mean);
            }
            return std::pair<double, double>{mean, std::sqrt(var / (b - a))};
        };
        auto [ml, sl] = stats(t - window, t);
        auto [mr, sr] = stats(t, t + window);
        out.push_back(std::abs(ml - mr) + std::abs(sl - sr));
    }
    return out;
}

}  // namespace

TEST_CASE("a level shift yields exactly one interior breakpoint near its location") {
    const int T = 100;
    std::vector<double> x(T, 0.0);
    for (int t = T / 2; t < T; ++t) x[static_cast<std::size_t>(t)] = 5.0;
    int window = default_window(T);

    Segmentation seg = detect_changepoints(x, window, default_step(T));
    REQUIRE(seg.breakpoints.size() == 3);
    int bp = seg.breakpoints[1];
    CHECK(std::abs(bp - T / 2) <= window);

    // the oracle's argmax must lie within the same window of the midpoint
    auto scores = oracle_scores(x, window);
    int arg = static_cast<int>(std::max_element(scores.begin(), scores.end()) - scores.begin()) +
              window;
    CHECK(std::abs(arg - T / 2) <= window);
    CHECK(seg.valid());
}

TEST_CASE("constant series has no interior breakpoints") {
    std::vector<double> x(80, 3.25);
    Segmentation seg = detect_changepoints(x, default_window(80), default_step(80));
    CHECK(seg.breakpoints == std::vector<int>{0, 80});
}

TEST_CASE("short series fall back to a single segment") {
    std::vector<double> x{1.0, 9.0, 1.0};
    Segmentation seg = detect_changepoints(x, 1, 1);
    CHECK(seg.breakpoints == std::vector<int>{0, 3});
}

TEST_CASE("gap vectors are breakpoint differences") {
    CHECK(gap_vector(Segmentation{{0, 3, 10}}).durations == std::vector<int>{3, 7});
    CHECK(gap_vector(Segmentation{{0, 42}}).durations == std::vector<int>{42});

    Segmentation s{{0, 4, 9, 17, 30}};
    auto gv = gap_vector(s);
    int sum = 0;
    for (int d : gv.durations) sum += d;
    CHECK(sum == 30);
}

TEST_CASE("gap distance zero-pads across lengths") {
    GapVector a{{10, 5}};
    GapVector b{{10}};
    CHECK(gap_distance(a, b) == 5.0);
    CHECK(gap_distance(a, a) == 0.0);
}

TEST_CASE("kmedoids recovers the two-bundle partition found by brute force") {
    std::vector<GapVector> pts{GapVector{{10}}, GapVector{{11}}, GapVector{{50}}, GapVector{{51}}};
    KMedoidsResult km = kmedoids(pts, 2, 9);
    auto oracle = testsupport::oracle_best_pair_partition(pts);
    // compare as partitions (group labels may be swapped)
    CHECK(km.assignment[0] == km.assignment[1]);
    CHECK(km.assignment[2] == km.assignment[3]);
    CHECK(km.assignment[0] != km.assignment[2]);
    CHECK(oracle[0] == oracle[1]);
    CHECK(oracle[2] == oracle[3]);
    CHECK(oracle[0] != oracle[2]);
}

TEST_CASE("kmedoids with k equal to the point count costs zero") {
    std::vector<GapVector> pts{GapVector{{1}}, GapVector{{5}}, GapVector{{20}}};
    KMedoidsResult km = kmedoids(pts, 3, 0);
    CHECK(km.total_cost == 0.0);
    CHECK(km.medoids == std::vector<int>{0, 1, 2});
}

TEST_CASE("duplicated points share an assignment") {
    std::vector<GapVector> pts{GapVector{{7, 3}}, GapVector{{7, 3}}, GapVector{{40, 1}},
                               GapVector{{7, 3}}};
    KMedoidsResult km = kmedoids(pts, 2, 4);
    CHECK(km.assignment[0] == km.assignment[1]);
    CHECK(km.assignment[0] == km.assignment[3]);
    CHECK(km.assignment[0] != km.assignment[2]);
}

TEST_CASE("kmedoids rejects k larger than the point count") {
    std::vector<GapVector> pts{GapVector{{1}}};
    CHECK_THROWS_AS(kmedoids(pts, 2, 0), Error);
}

TEST_CASE("kmedoids is deterministic per seed") {
    Rng rng(55);
    std::vector<GapVector> pts;
    for (int i = 0; i < 25; ++i) {
        pts.push_back(GapVector{{rng.uniform_int(40) + 1, rng.uniform_int(40) + 1}});
    }
    KMedoidsResult a = kmedoids(pts, 3, 123);
    KMedoidsResult b = kmedoids(pts, 3, 123);
    CHECK(a.medoids == b.medoids);
    CHECK(a.assignment == b.assignment);
}

TEST_CASE("silhouette matches the quadratic reference") {
    Rng rng(77);
    for (int rep = 0; rep < 10; ++rep) {
        int n = 6 + rng.uniform_int(24);
        int k = 2 + rng.uniform_int(3);
        std::vector<GapVector> pts;
        std::vector<int> assign;
        for (int i = 0; i < n; ++i) {
            pts.push_back(GapVector{{rng.uniform_int(60) + 1}});
            assign.push_back(rng.uniform_int(k));
        }
        double mine = silhouette_score(pts, assign, k);
        double ref = testsupport::oracle_silhouette(pts, assign, k);
        CHECK(mine == doctest::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("build_subgroups separates two step-position bundles") {
    // two bundles of series whose single step sits at t=20 vs t=50
    std::vector<TimeSeries> cluster;
    Rng rng(5);
    int id = 0;
    for (int b = 0; b < 2; ++b) {
        int pos = b == 0 ? 20 : 50;
        for (int i = 0; i < 6; ++i) {
            TimeSeries s;
            s.id = id++;
            for (int t = 0; t < 80; ++t) {
                s.values.push_back((t >= pos ? 4.0 : 0.0) + rng.normal(0.0, 0.02));
            }
            cluster.push_back(std::move(s));
        }
    }
    SubgroupModel sub = build_subgroups(cluster, default_window(80), default_step(80), 3);
    REQUIRE(sub.num_groups() == 2);
    for (int i = 1; i < 6; ++i) CHECK(sub.assignment[static_cast<std::size_t>(i)] == sub.assignment[0]);
    for (int i = 7; i < 12; ++i) CHECK(sub.assignment[static_cast<std::size_t>(i)] == sub.assignment[6]);
    CHECK(sub.assignment[0] != sub.assignment[6]);

    // exhaustive silhouette over the candidate range confirms K=2 wins
    std::vector<GapVector> gaps;
    for (const auto& seg : sub.instance_segs) gaps.push_back(gap_vector(seg));
    double best = -2.0;
    int best_k = 0;
    for (int k = 2; k <= 3; ++k) {
        KMedoidsResult km = kmedoids(gaps, k, 3 ^ static_cast<std::uint64_t>(k));
        double s = testsupport::oracle_silhouette(gaps, km.assignment, k);
        if (s > best) {
            best = s;
            best_k = k;
        }
    }
    CHECK(best_k == 2);
}

TEST_CASE("degenerate clusters collapse to a single group") {
    TimeSeries lone;
    lone.id = 0;
    lone.values.assign(40, 1.0);
    SubgroupModel single = build_subgroups({lone}, 4, 6, 1);
    CHECK(single.num_groups() == 1);
    CHECK(single.assignment == std::vector<int>{0});

    // identical series give identical gap vectors; silhouette cannot separate
    std::vector<TimeSeries> same;
    for (int i = 0; i < 5; ++i) {
        TimeSeries s;
        s.id = i;
        for (int t = 0; t < 40; ++t) s.values.push_back(t >= 20 ? 2.0 : 0.0);
        same.push_back(std::move(s));
    }
    SubgroupModel flat = build_subgroups(same, 4, 6, 1);
    CHECK(flat.num_groups() == 1);
}

TEST_CASE("build_subgroups is deterministic per seed") {
    std::vector<TimeSeries> cluster;
    Rng rng(8);
    for (int i = 0; i < 10; ++i) {
        TimeSeries s;
        s.id = i;
        int pos = 10 + rng.uniform_int(40);
        for (int t = 0; t < 64; ++t) s.values.push_back((t >= pos ? 3.0 : 0.0) + rng.normal(0.0, 0.05));
        cluster.push_back(std::move(s));
    }
    SubgroupModel a = build_subgroups(cluster, 6, 9, 42);
    SubgroupModel b = build_subgroups(cluster, 6, 9, 42);
    CHECK(a.assignment == b.assignment);
    CHECK(a.num_groups() == b.num_groups());
}
