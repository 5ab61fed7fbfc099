#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "doctest.h"

#include "galactic/error.hpp"
#include "galactic/rng.hpp"
#include "galactic/surrogate.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace galactic;

namespace {

// Nearest-centroid oracle confirming the fixture is separable before we
// demand perfect surrogate accuracy on it.
double nearest_centroid_accuracy(const Corpus& c) {
    std::vector<std::vector<double>> centroids(
        static_cast<std::size_t>(c.num_clusters),
        std::vector<double>(static_cast<std::size_t>(c.length()), 0.0));
    std::vector<int> counts(static_cast<std::size_t>(c.num_clusters), 0);
    for (std::size_t i = 0; i < c.size(); ++i) {
        ++counts[static_cast<std::size_t>(c.labels[i])];
        for (int t = 0; t < c.length(); ++t) {
            centroids[static_cast<std::size_t>(c.labels[i])][static_cast<std::size_t>(t)] +=
                c.series[i].values[static_cast<std::size_t>(t)];
        }
    }
    for (int k = 0; k < c.num_clusters; ++k) {
        for (auto& v : centroids[static_cast<std::size_t>(k)]) {
            v /= counts[static_cast<std::size_t>(k)];
        }
    }
    int hits = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        int best = 0;
        double best_d = 0.0;
        for (int k = 0; k < c.num_clusters; ++k) {
            double d = 0.0;
            for (int t = 0; t < c.length(); ++t) {
                double diff = c.series[i].values[static_cast<std::size_t>(t)] -
                              centroids[static_cast<std::size_t>(k)][static_cast<std::size_t>(t)];
                d += diff * diff;
            }
            if (k == 0 || d < best_d) {
                best_d = d;
                best = k;
            }
        }
        hits += best == c.labels[i];
    }
    return static_cast<double>(hits) / static_cast<double>(c.size());
}

bool same_params(const SurrogateModel& a, const SurrogateModel& b) {
    auto eq = [](const std::vector<double>& x, const std::vector<double>& y) {
        return x.size() == y.size() &&
               std::memcmp(x.data(), y.data(), x.size() * sizeof(double)) == 0;
    };
    return eq(a.w1, b.w1) && eq(a.b1, b.b1) && eq(a.w2, b.w2) && eq(a.b2, b.b2);
}

}  // namespace

TEST_CASE("training reaches perfect accuracy on a separable corpus") {
    Corpus c = testsupport::separable_corpus();
    REQUIRE(nearest_centroid_accuracy(c) == 1.0);
    TrainConfig cfg;
    cfg.seed = 11;
    SurrogateModel m = SurrogateModel::train(c, cfg);
    CHECK(m.accuracy(c) == 1.0);
    CHECK(m.train_accuracy() == 1.0);

    // every train instance keeps its own label
    for (std::size_t i = 0; i < c.size(); ++i) {
        CHECK(m.predict(c.series[i]) == c.labels[i]);
    }
}

TEST_CASE("training rejects degenerate inputs") {
    Corpus single;
    single.num_clusters = 1;
    single.label_map = {0};
    single.series.push_back(TimeSeries{{1.0, 2.0}, 0});
    single.labels.push_back(0);
    CHECK_THROWS_AS(SurrogateModel::train(single, TrainConfig{}), Error);

    Corpus empty;
    empty.num_clusters = 2;
    CHECK_THROWS_AS(SurrogateModel::train(empty, TrainConfig{}), Error);
}

TEST_CASE("training is bit-identical per seed") {
    Corpus c = testsupport::separable_corpus(10, 16);
    TrainConfig cfg;
    cfg.epochs = 20;
    cfg.seed = 5;
    SurrogateModel a = SurrogateModel::train(c, cfg);
    SurrogateModel b = SurrogateModel::train(c, cfg);
    CHECK(same_params(a, b));
}

TEST_CASE("predict_proba is a simplex and zero weights give the uniform vector") {
    SurrogateModel zero(8, 4, 5);
    std::vector<double> x(8, 0.7);
    auto p = zero.predict_proba(x);
    for (double v : p) CHECK(v == doctest::Approx(0.2).epsilon(1e-12));

    SurrogateModel random = testsupport::random_model(8, 6, 3, 21);
    Rng rng(9);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> probe(8);
        for (auto& v : probe) v = rng.normal();
        auto probs = random.predict_proba(probe);
        double sum = 0.0;
        for (double v : probs) {
            CHECK(v >= 0.0);
            sum += v;
        }
        CHECK(std::abs(sum - 1.0) < 1e-9);
    }

    CHECK_THROWS_AS(random.predict_proba(std::vector<double>(7, 0.0)), Error);
}

TEST_CASE("input gradients match central finite differences") {
    Rng rng(31);
    double worst = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        int T = 5 + rng.uniform_int(8);
        int K = 2 + rng.uniform_int(3);
        SurrogateModel m = testsupport::random_model(T, 6, K, 100 + rep);
        std::vector<double> x(static_cast<std::size_t>(T));
        for (auto& v : x) v = rng.normal();
        int k = rng.uniform_int(K);
        auto objective = rep % 2 == 0 ? GradientObjective::NegLogProb : GradientObjective::LogProb;

        auto analytic = m.input_gradient(x, k, objective);
        auto fd = testsupport::finite_difference_gradient(
            [&](const std::vector<double>& q) {
                double p = m.predict_proba(q)[static_cast<std::size_t>(k)];
                double v = -std::log(p + SurrogateModel::kProbFloor);
                return objective == GradientObjective::NegLogProb ? v : -v;
            },
            x);
        for (std::size_t t = 0; t < x.size(); ++t) {
            double denom = std::max({std::abs(fd[t]), std::abs(analytic[t]), 1e-8});
            worst = std::max(worst, std::abs(fd[t] - analytic[t]) / denom);
        }
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("log-prob and neg-log-prob gradients are exact negatives") {
    SurrogateModel m = testsupport::random_model(6, 5, 3, 77);
    std::vector<double> x{0.1, -0.4, 0.9, 0.0, 1.2, -2.0};
    auto a = m.input_gradient(x, 1, GradientObjective::NegLogProb);
    auto b = m.input_gradient(x, 1, GradientObjective::LogProb);
    for (std::size_t t = 0; t < x.size(); ++t) CHECK(a[t] == -b[t]);
}

TEST_CASE("zero model has zero gradient") {
    SurrogateModel zero(6, 4, 3);
    std::vector<double> x{1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
    for (double g : zero.input_gradient(x, 2, GradientObjective::NegLogProb)) CHECK(g == 0.0);
}

TEST_CASE("accuracy follows the lowest-index argmax tie rule") {
    SurrogateModel zero(4, 2, 3);  // uniform output; argmax ties to 0
    Corpus all_zero;
    all_zero.num_clusters = 3;
    all_zero.label_map = {0, 1, 2};
    for (int i = 0; i < 5; ++i) {
        all_zero.series.push_back(TimeSeries{{0.0, 0.0, 0.0, 0.0}, i});
        all_zero.labels.push_back(0);
    }
    CHECK(zero.accuracy(all_zero) == 1.0);

    Corpus all_one = all_zero;
    std::fill(all_one.labels.begin(), all_one.labels.end(), 1);
    CHECK(zero.accuracy(all_one) == 0.0);

    Corpus empty;
    CHECK_THROWS_AS(zero.accuracy(empty), Error);
}

TEST_CASE("epoch losses are non-increasing up to minibatch jitter") {
    Corpus c = testsupport::separable_corpus(30, 24);
    TrainConfig cfg;
    cfg.epochs = 60;
    cfg.seed = 17;
    SurrogateModel m = SurrogateModel::train(c, cfg);
    const auto& losses = m.epoch_losses();
    REQUIRE(losses.size() == 60);
    double running_min = losses[0];
    for (std::size_t e = 1; e < losses.size(); ++e) {
        CHECK(losses[e] <= running_min + 1e-6);
        running_min = std::min(running_min, losses[e]);
    }
}

TEST_CASE("model save/load round-trips byte-for-byte") {
    Corpus c = testsupport::separable_corpus(10, 12);
    TrainConfig cfg;
    cfg.epochs = 15;
    cfg.seed = 2;
    SurrogateModel m = SurrogateModel::train(c, cfg);

    auto dir = std::filesystem::temp_directory_path();
    auto p1 = (dir / "gal_model_a.json").string();
    auto p2 = (dir / "gal_model_b.json").string();
    m.save(p1);
    SurrogateModel loaded = SurrogateModel::load(p1);
    CHECK(same_params(m, loaded));
    loaded.save(p2);

    std::ifstream f1(p1), f2(p2);
    std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    CHECK(s1 == s2);

    CHECK_THROWS_AS(SurrogateModel::load((dir / "gal_missing_model.json").string()), Error);
}
