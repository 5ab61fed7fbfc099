#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"

#include "galactic/dataset.hpp"
#include "galactic/error.hpp"
#include "galactic/synthetic.hpp"

using namespace galactic;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    auto path = (std::filesystem::temp_directory_path() / name).string();
    std::ofstream out(path);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("load_ucr parses a tab-delimited table") {
    auto path = write_temp("gal_basic.tsv", "1\t0.0\t1.0\n2\t1.0\t0.0\n");
    Corpus c = load_ucr(path);
    CHECK(c.size() == 2);
    CHECK(c.length() == 2);
    CHECK(c.num_clusters == 2);
    CHECK(c.labels == std::vector<int>{0, 1});
    CHECK(c.label_map == std::vector<long long>{1, 2});
    CHECK(c.series[0].values == std::vector<double>{0.0, 1.0});
}

TEST_CASE("load_ucr detects commas and remaps arbitrary labels") {
    auto path = write_temp("gal_comma.csv", "7,0.5,0.5\n-3,1.5,2.5\n7,0.0,0.1\n");
    Corpus c = load_ucr(path);
    CHECK(c.num_clusters == 2);
    CHECK(c.label_map == std::vector<long long>{-3, 7});
    CHECK(c.labels == std::vector<int>{1, 0, 1});
}

TEST_CASE("load_ucr error paths") {
    auto empty = write_temp("gal_empty.tsv", "");
    try {
        load_ucr(empty);
        FAIL("expected an empty-corpus error");
    } catch (const Error& e) {
        CHECK(e.code() == std::string(errc::empty_corpus));
    }

    auto ragged = write_temp("gal_ragged.tsv", "1\t0.0\t1.0\n2\t1.0\t0.0\t9.0\n");
    try {
        load_ucr(ragged);
        FAIL("expected a format error");
    } catch (const Error& e) {
        CHECK(e.code() == std::string(errc::format));
        CHECK(std::string(e.what()).find("row 2") != std::string::npos);
    }

    auto bad_cell = write_temp("gal_badcell.tsv", "1\t0.0\tabc\n");
    try {
        load_ucr(bad_cell);
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(e.code() == std::string(errc::parse));
    }
}

TEST_CASE("save then load round-trips values") {
    SyntheticSpec spec;
    spec.per_cluster = 4;
    spec.length = 16;
    Corpus c = make_synthetic_corpus(spec);
    auto path = (std::filesystem::temp_directory_path() / "gal_roundtrip.tsv").string();
    save_ucr(c, path);
    Corpus back = load_ucr(path);
    REQUIRE(back.size() == c.size());
    CHECK(back.num_clusters == c.num_clusters);
    for (std::size_t i = 0; i < c.size(); ++i) {
        CHECK(back.labels[i] == c.labels[i]);
        for (std::size_t t = 0; t < c.series[i].values.size(); ++t) {
            CHECK(back.series[i].values[t] ==
                  doctest::Approx(c.series[i].values[t]).epsilon(1e-12));
        }
    }
}

TEST_CASE("znormalize") {
    TimeSeries x{{1.0, 2.0, 3.0}, 0};
    TimeSeries z = znormalize(x);
    CHECK(z.values[0] == doctest::Approx(-1.2247448713915890).epsilon(1e-12));
    CHECK(z.values[1] == doctest::Approx(0.0));
    CHECK(z.values[2] == doctest::Approx(1.2247448713915890).epsilon(1e-12));

    TimeSeries constant{{5.0, 5.0, 5.0}, 1};
    CHECK(znormalize(constant).values == std::vector<double>{0.0, 0.0, 0.0});

    // idempotence
    TimeSeries zz = znormalize(z);
    for (std::size_t t = 0; t < z.values.size(); ++t) {
        CHECK(zz.values[t] == doctest::Approx(z.values[t]).epsilon(1e-12));
    }

    // moment invariants
    double mean = 0.0, var = 0.0;
    for (double v : z.values) mean += v;
    mean /= 3.0;
    for (double v : z.values) var += (v - mean) * (v - mean);
    CHECK(std::abs(mean) < 1e-10);
    CHECK(std::abs(std::sqrt(var / 3.0) - 1.0) < 1e-10);
}

TEST_CASE("split stratifies and is deterministic") {
    Corpus c;
    c.name = "even";
    c.num_clusters = 2;
    c.label_map = {0, 1};
    for (int i = 0; i < 100; ++i) {
        c.series.push_back(TimeSeries{{static_cast<double>(i)}, i});
        c.labels.push_back(i < 50 ? 0 : 1);
    }
    SplitResult a = split(c, 0.8, 42);
    CHECK(a.train.size() == 80);
    CHECK(a.test.size() == 20);
    CHECK(a.train.cluster_members(0).size() == 40);
    CHECK(a.train.cluster_members(1).size() == 40);
    CHECK(a.test.cluster_members(0).size() == 10);

    SplitResult b = split(c, 0.8, 42);
    for (std::size_t i = 0; i < a.train.size(); ++i) {
        CHECK(a.train.series[i].id == b.train.series[i].id);
    }

    // partition: train ids and test ids are disjoint and exhaustive
    std::vector<bool> seen(c.size(), false);
    for (const auto& s : a.train.series) seen[static_cast<std::size_t>(s.id)] = true;
    for (const auto& s : a.test.series) {
        CHECK_FALSE(seen[static_cast<std::size_t>(s.id)]);
        seen[static_cast<std::size_t>(s.id)] = true;
    }
    CHECK(std::all_of(seen.begin(), seen.end(), [](bool v) { return v; }));
}

TEST_CASE("split keeps singleton clusters in train with a warning") {
    Corpus c;
    c.num_clusters = 2;
    c.label_map = {0, 1};
    for (int i = 0; i < 9; ++i) {
        c.series.push_back(TimeSeries{{static_cast<double>(i)}, i});
        c.labels.push_back(0);
    }
    c.series.push_back(TimeSeries{{9.0}, 9});
    c.labels.push_back(1);

    SplitResult r = split(c, 0.8, 1);
    CHECK(r.train.cluster_members(1).size() == 1);
    CHECK(r.test.cluster_members(1).empty());
    REQUIRE(r.warnings.size() == 1);
    CHECK(r.warnings[0].find("cluster 1") != std::string::npos);
}

TEST_CASE("split rejects out-of-range fractions") {
    Corpus c = make_synthetic_corpus({.per_cluster = 2, .length = 8});
    CHECK_THROWS_AS(split(c, 0.0, 1), Error);
    CHECK_THROWS_AS(split(c, 1.0, 1), Error);
}
