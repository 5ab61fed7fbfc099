#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "galactic/local_search.hpp"
#include "galactic/mdl.hpp"
#include "galactic/structure.hpp"

namespace galactic {

// Aggregate measurements over a batch of explanation attempts. eff is a
// percentage; the averages exist only when at least one attempt succeeded.
struct EvalReport {
    int attempts = 0;
    int successes = 0;
    double eff = 0.0;
    std::optional<double> afc;  // mean L2 cost over successes
    std::optional<double> acs;  // mean changed segments over successes
    std::optional<double> act;  // mean changed timesteps over successes
    double runtime_s = 0.0;
};

struct LocalResult {
    int instance_id = -1;
    std::optional<Counterfactual> counterfactual;
    const Segmentation* segmentation = nullptr;  // the instance's own pattern
};

int changed_segments(const std::vector<double>& delta, const Segmentation& seg);

EvalReport evaluate_local(const std::vector<LocalResult>& results);

// eff and afc come from the summary; changed-segment and changed-timestep
// averages are recomputed from each covered instance's best-fit delta.
EvalReport evaluate_global(const SummarySet& summary, const CandidatePool& pool,
                           const std::vector<std::pair<int, const Segmentation*>>& segmentations,
                           int cluster_size);

// Mean signed difference of a metric between two policies across datasets.
double gain_loss(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace galactic
