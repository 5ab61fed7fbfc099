#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "galactic/importance.hpp"
#include "galactic/surrogate.hpp"
#include "galactic/types.hpp"

namespace galactic {

enum class TargetPolicy { SecondPossible, Random, AllRandom };

std::string target_policy_name(TargetPolicy p);
TargetPolicy target_policy_from_name(const std::string& name);

struct LocalConfig {
    double step_size = 0.01;
    int max_iter = 500;
    double tolerance = 1e-4;
    int patience = 2;
    double jitter = 0.01;
    double lambda_prox = 1.0;
    double lambda_flip = 1.0;
    double prob_floor = 1e-12;
    double change_threshold = 0.005;
    TargetPolicy policy = TargetPolicy::SecondPossible;
    Strategy strategy = Strategy::Combined;

    void validate() const;
};

struct Counterfactual {
    int instance_id = -1;
    int source = -1;
    int achieved = -1;
    std::optional<int> target;
    std::vector<double> x_cf;
    std::vector<double> delta;  // x_cf - x, entries at or below the change threshold snapped to 0
    ImportanceMask mask;
    double final_loss = 0.0;
    int iterations = 0;
    bool snap_failed = false;  // snapping broke the flip; delta kept unsnapped
    int l0 = 0;
    double l1 = 0.0;
    double l2_cost = 0.0;
};

// Target cluster for an instance with source s = argmax g(x):
//   second_possible -> argmax over c != s of g_c(x), ties to the lowest index
//   random          -> uniform over the other clusters
//   all_random      -> none (push away from the source instead)
std::optional<int> resolve_target(const TimeSeries& x, const SurrogateModel& model,
                                  TargetPolicy policy, std::uint64_t seed);

// Core masked-gradient descent: jittered start restricted to the mask,
// loss lambda1*||x'-x||_2 + lambda2*flip-term, gradient multiplied by the
// mask each step, Adam updates, loss-minimal flipped iterate kept.
std::optional<Counterfactual> masked_gradient_search(const TimeSeries& x,
                                                     const SurrogateModel& model,
                                                     const ImportanceMask& mask,
                                                     std::optional<int> target,
                                                     const LocalConfig& cfg, std::uint64_t seed);

// Full instance-level search: resolves the target per policy, derives the
// strategy mask from the structures, then runs the masked descent.
std::optional<Counterfactual> galactic_l(const TimeSeries& x, const SurrogateModel& model,
                                         const StructureIndex& structures, const LocalConfig& cfg,
                                         std::uint64_t seed);

// Retrieval baseline: among the k nearest training series with a stored
// label other than the source, returns the first the surrogate assigns
// outside the source cluster, verbatim.
std::optional<Counterfactual> knn_counterfactual(const TimeSeries& x, const Corpus& train,
                                                 const SurrogateModel& model, int k,
                                                 double change_threshold = 0.005);

}  // namespace galactic
