#include "galactic/local_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "galactic/error.hpp"
#include "galactic/rng.hpp"
#include "galactic/util.hpp"

namespace galactic {

std::string target_policy_name(TargetPolicy p) {
    switch (p) {
        case TargetPolicy::SecondPossible: return "second_possible";
        case TargetPolicy::Random: return "random";
        case TargetPolicy::AllRandom: return "all_random";
    }
    throw Error(errc::config, "unknown target policy");
}

TargetPolicy target_policy_from_name(const std::string& name) {
    if (name == "second_possible") return TargetPolicy::SecondPossible;
    if (name == "random") return TargetPolicy::Random;
    if (name == "all_random") return TargetPolicy::AllRandom;
    throw Error(errc::config, "unknown target policy: " + name);
}

void LocalConfig::validate() const {
    if (!(step_size > 0.0) || !(tolerance > 0.0) || !(jitter > 0.0) ||
        !(change_threshold > 0.0)) {
        throw Error(errc::config, "step size, tolerance, jitter and change threshold must be positive");
    }
    if (max_iter < 1 || patience < 1) {
        throw Error(errc::config, "max_iter and patience must be at least 1");
    }
    if (lambda_prox < 0.0 || lambda_flip < 0.0) {
        throw Error(errc::config, "loss weights must be nonnegative");
    }
}

std::optional<int> resolve_target(const TimeSeries& x, const SurrogateModel& model,
                                  TargetPolicy policy, std::uint64_t seed) {
    const int K = model.num_clusters();
    if (K < 2) throw Error(errc::precondition, "target resolution needs at least two clusters");
    auto probs = model.predict_proba(x);
    int source = argmax_lowest(probs);

    switch (policy) {
        case TargetPolicy::SecondPossible: {
            int best = -1;
            for (int c = 0; c < K; ++c) {
                if (c == source) continue;
                if (best < 0 || probs[static_cast<std::size_t>(c)] > probs[static_cast<std::size_t>(best)]) {
                    best = c;
                }
            }
            return best;
        }
        case TargetPolicy::Random: {
            Rng rng(mix64(seed));
            int pick = rng.uniform_int(K - 1);
            return pick >= source ? pick + 1 : pick;
        }
        case TargetPolicy::AllRandom:
            return std::nullopt;
    }
    throw Error(errc::config, "unknown target policy");
}

namespace {

struct AdamVec {
    std::vector<double> m, v;
    long long t = 0;
    static constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;

    explicit AdamVec(std::size_t n) : m(n, 0.0), v(n, 0.0) {}

    void step(std::vector<double>& x, const std::vector<double>& grad, double lr) {
        ++t;
        double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
        double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
        for (std::size_t i = 0; i < x.size(); ++i) {
            m[i] = beta1 * m[i] + (1.0 - beta1) * grad[i];
            v[i] = beta2 * v[i] + (1.0 - beta2) * grad[i] * grad[i];
            x[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps);
        }
    }
};

void fill_stats(Counterfactual& cf, double theta) {
    cf.l0 = 0;
    cf.l1 = 0.0;
    double sq = 0.0;
    for (double d : cf.delta) {
        if (std::abs(d) > theta) ++cf.l0;
        cf.l1 += std::abs(d);
        sq += d * d;
    }
    cf.l2_cost = std::sqrt(sq);
}

}  // namespace

std::optional<Counterfactual> masked_gradient_search(const TimeSeries& x,
                                                     const SurrogateModel& model,
                                                     const ImportanceMask& mask,
                                                     std::optional<int> target,
                                                     const LocalConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    const int T = x.length();
    if (T != model.input_dim()) throw Error(errc::shape, "series length does not match the model");
    if (static_cast<int>(mask.w.size()) != T) throw Error(errc::shape, "mask length does not match");

    const int source = model.predict(x);
    if (target && *target == source) throw Error(errc::precondition, "target equals the source cluster");

    Rng rng(mix64(seed ^ 0x5CA1AB1EULL));
    std::vector<double> xp = x.values;
    for (int t = 0; t < T; ++t) {
        if (mask.w[static_cast<std::size_t>(t)]) {
            xp[static_cast<std::size_t>(t)] += rng.normal(0.0, cfg.jitter);
        }
    }

    AdamVec adam(static_cast<std::size_t>(T));
    std::vector<double> best;
    double loss_min = std::numeric_limits<double>::infinity();
    double loss_prev = 0.0;
    int stagnant = 0;
    int iterations = 0;
    bool found = false;

    std::vector<double> grad(static_cast<std::size_t>(T));
    for (int i = 1; i <= cfg.max_iter; ++i) {
        iterations = i;
        auto probs = model.predict_proba(xp);

        double prox = 0.0;
        for (int t = 0; t < T; ++t) {
            double d = xp[static_cast<std::size_t>(t)] - x.values[static_cast<std::size_t>(t)];
            prox += d * d;
        }
        prox = std::sqrt(prox);

        double flip_term;
        if (target) {
            flip_term = -std::log(probs[static_cast<std::size_t>(*target)] + cfg.prob_floor);
        } else {
            flip_term = std::log(probs[static_cast<std::size_t>(source)] + cfg.prob_floor);
        }
        double loss = cfg.lambda_prox * prox + cfg.lambda_flip * flip_term;

        int assigned = argmax_lowest(probs);
        bool flipped = target ? assigned == *target : assigned != source;
        if (flipped) {
            if (loss < loss_min) {
                best = xp;
                loss_min = loss;
                found = true;
            }
            stagnant = std::abs(loss - loss_prev) < cfg.tolerance ? stagnant + 1 : 0;
        }
        if (stagnant >= cfg.patience) break;

        std::vector<double> flip_grad = model.input_gradient(
            xp, target ? *target : source,
            target ? GradientObjective::NegLogProb : GradientObjective::LogProb);
        for (int t = 0; t < T; ++t) {
            double d = xp[static_cast<std::size_t>(t)] - x.values[static_cast<std::size_t>(t)];
            double prox_grad = prox > 0.0 ? d / prox : 0.0;
            double g = cfg.lambda_prox * prox_grad + cfg.lambda_flip * flip_grad[static_cast<std::size_t>(t)];
            grad[static_cast<std::size_t>(t)] = mask.w[static_cast<std::size_t>(t)] ? g : 0.0;
        }
        adam.step(xp, grad, cfg.step_size);
        loss_prev = loss;
    }

    if (!found) return std::nullopt;

    Counterfactual cf;
    cf.instance_id = x.id;
    cf.source = source;
    cf.target = target;
    cf.mask = mask;
    cf.final_loss = loss_min;
    cf.iterations = iterations;

    std::vector<double> snapped(static_cast<std::size_t>(T));
    std::vector<double> x_snapped = x.values;
    for (int t = 0; t < T; ++t) {
        double d = best[static_cast<std::size_t>(t)] - x.values[static_cast<std::size_t>(t)];
        snapped[static_cast<std::size_t>(t)] = std::abs(d) <= cfg.change_threshold ? 0.0 : d;
        x_snapped[static_cast<std::size_t>(t)] += snapped[static_cast<std::size_t>(t)];
    }
    int assigned_snapped = model.predict(x_snapped);
    bool snap_ok = target ? assigned_snapped == *target : assigned_snapped != source;
    if (snap_ok) {
        cf.x_cf = std::move(x_snapped);
        cf.delta = std::move(snapped);
        cf.achieved = assigned_snapped;
        cf.snap_failed = false;
    } else {
        cf.delta.resize(static_cast<std::size_t>(T));
        for (int t = 0; t < T; ++t) {
            cf.delta[static_cast<std::size_t>(t)] =
                best[static_cast<std::size_t>(t)] - x.values[static_cast<std::size_t>(t)];
        }
        cf.achieved = model.predict(best);
        cf.x_cf = std::move(best);
        cf.snap_failed = true;
    }
    fill_stats(cf, cfg.change_threshold);
    return cf;
}

std::optional<Counterfactual> galactic_l(const TimeSeries& x, const SurrogateModel& model,
                                         const StructureIndex& structures, const LocalConfig& cfg,
                                         std::uint64_t seed) {
    cfg.validate();
    const int source = model.predict(x);
    std::optional<int> target = resolve_target(x, model, cfg.policy, seed);
    if ((cfg.strategy == Strategy::Target || cfg.strategy == Strategy::Combined) && !target) {
        throw Error(errc::target_unresolved,
                    "strategy " + strategy_name(cfg.strategy) + " requires a resolved target; " +
                        "policy " + target_policy_name(cfg.policy) + " returned none");
    }
    ImportanceMask mask = get_mask(x, source, target, cfg.strategy, structures);
    return masked_gradient_search(x, model, mask, target, cfg, seed);
}

std::optional<Counterfactual> knn_counterfactual(const TimeSeries& x, const Corpus& train,
                                                 const SurrogateModel& model, int k,
                                                 double change_threshold) {
    if (train.size() == 0) throw Error(errc::empty_corpus, "empty training set");
    if (k < 1) throw Error(errc::precondition, "k must be at least 1");

    const int source = model.predict(x);
    std::vector<std::pair<double, int>> neighbors;
    for (std::size_t i = 0; i < train.size(); ++i) {
        if (train.labels[i] == source) continue;
        neighbors.emplace_back(l2_distance(train.series[i].values, x.values), static_cast<int>(i));
    }
    std::sort(neighbors.begin(), neighbors.end());
    if (static_cast<int>(neighbors.size()) > k) neighbors.resize(static_cast<std::size_t>(k));

    for (const auto& [dist, idx] : neighbors) {
        const TimeSeries& cand = train.series[static_cast<std::size_t>(idx)];
        if (model.predict(cand) == source) continue;

        Counterfactual cf;
        cf.instance_id = x.id;
        cf.source = source;
        cf.target = std::nullopt;
        cf.iterations = 0;
        cf.final_loss = dist;
        cf.mask.strategy = Strategy::Baseline;
        cf.mask.w.assign(static_cast<std::size_t>(x.length()), 1);

        std::vector<double> snapped(static_cast<std::size_t>(x.length()));
        std::vector<double> x_snapped = x.values;
        for (int t = 0; t < x.length(); ++t) {
            double d = cand.values[static_cast<std::size_t>(t)] - x.values[static_cast<std::size_t>(t)];
            snapped[static_cast<std::size_t>(t)] = std::abs(d) <= change_threshold ? 0.0 : d;
            x_snapped[static_cast<std::size_t>(t)] += snapped[static_cast<std::size_t>(t)];
        }
        if (model.predict(x_snapped) != source) {
            cf.x_cf = std::move(x_snapped);
            cf.delta = std::move(snapped);
            cf.snap_failed = false;
        } else {
            cf.x_cf = cand.values;
            cf.delta.resize(static_cast<std::size_t>(x.length()));
            for (int t = 0; t < x.length(); ++t) {
                cf.delta[static_cast<std::size_t>(t)] =
                    cand.values[static_cast<std::size_t>(t)] - x.values[static_cast<std::size_t>(t)];
            }
            cf.snap_failed = true;
        }
        cf.achieved = model.predict(cf.x_cf);
        fill_stats(cf, change_threshold);
        return cf;
    }
    return std::nullopt;
}

}  // namespace galactic
