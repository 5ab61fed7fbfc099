#include "galactic/candidates.hpp"

#include <algorithm>

#include "galactic/error.hpp"

namespace galactic {

CandidateGenResult generate_candidates(const Corpus& corpus, int cluster_id,
                                       const StructureIndex& structures,
                                       const SurrogateModel& model, const LocalConfig& local_cfg,
                                       int n_prototypes, int n_criticisms, const MdlParams& params,
                                       std::uint64_t seed) {
    CandidateGenResult result;
    result.pool.cluster_id = cluster_id;

    auto members = corpus.cluster_members(cluster_id);
    if (members.empty()) {
        result.warnings.push_back("cluster " + std::to_string(cluster_id) + " has no instances");
        result.pool.finalize(params.pointer_bits);
        return result;
    }

    std::vector<TimeSeries> series;
    series.reserve(members.size());
    for (int i : members) series.push_back(corpus.series[static_cast<std::size_t>(i)]);

    MmdSelection reps = mmd_critic(series, n_prototypes, n_criticisms);
    if (reps.clamped) {
        result.warnings.push_back("cluster " + std::to_string(cluster_id) +
                                  " is smaller than the requested representative count; clamped");
    }

    std::vector<int> positions = reps.prototypes;
    positions.insert(positions.end(), reps.criticisms.begin(), reps.criticisms.end());

    int next_id = 0;
    for (int pos : positions) {
        const TimeSeries& x = series[static_cast<std::size_t>(pos)];
        result.representative_ids.push_back(x.id);
        if (model.predict(x) != cluster_id) {
            result.warnings.push_back("representative " + std::to_string(x.id) +
                                      " is misclassified by the surrogate; skipped");
            continue;
        }
        ++result.attempted;
        auto cf = galactic_l(x, model, structures, local_cfg,
                             seed ^ static_cast<std::uint64_t>(x.id));
        if (!cf || cf->snap_failed || cf->l0 < 1) continue;
        ++result.succeeded;
        result.pool.items.push_back(Perturbation::from_delta(
            next_id++, cf->delta, local_cfg.change_threshold, x.id, structures.group_of(x.id)));
    }

    if (result.pool.items.empty()) {
        result.warnings.push_back("cluster " + std::to_string(cluster_id) +
                                  ": no local search succeeded; candidate pool is empty");
    }
    result.pool.finalize(params.pointer_bits);
    return result;
}

}  // namespace galactic
