#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "galactic/importance.hpp"
#include "galactic/local_search.hpp"
#include "galactic/mdl.hpp"
#include "galactic/mmd_critic.hpp"
#include "galactic/types.hpp"

namespace galactic {

struct CandidateGenResult {
    CandidatePool pool;
    std::vector<int> representative_ids;  // corpus ids handed to the local search
    int attempted = 0;
    int succeeded = 0;
    std::vector<std::string> warnings;
};

// Runs the local search on the cluster's MMD-Critic prototypes and
// criticisms; successful, snapped deltas with at least one surviving entry
// form the candidate pool. Per-representative seeds are seed ^ instance id.
CandidateGenResult generate_candidates(const Corpus& corpus, int cluster_id,
                                       const StructureIndex& structures,
                                       const SurrogateModel& model, const LocalConfig& local_cfg,
                                       int n_prototypes, int n_criticisms, const MdlParams& params,
                                       std::uint64_t seed);

}  // namespace galactic
