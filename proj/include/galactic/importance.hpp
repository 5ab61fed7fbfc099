#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "galactic/structure.hpp"
#include "galactic/surrogate.hpp"
#include "galactic/types.hpp"

namespace galactic {

enum class Strategy { Baseline, Source, Target, Combined };

std::string strategy_name(Strategy s);
Strategy strategy_from_name(const std::string& name);

struct SegmentScores {
    std::vector<double> imp;       // one per segment, >= 0
    double baseline_accuracy = 0;  // accuracy on the unpermuted population
    int repetitions = 0;
};

struct ImportanceMask {
    std::vector<std::uint8_t> w;  // 0/1 per timestep
    Strategy strategy = Strategy::Baseline;
    double quantile = 0.75;

    int active() const;
};

// Permutation importance of each segment of `seg` over a population of series
// sharing one cluster label: for every repetition, the segment's value block
// is deranged across the population rows and the accuracy drop is measured.
// Repetition (m, b) draws from the substream seed ^ (m*1000 + b).
// A single-instance population yields all-zero scores.
SegmentScores segment_importance(const SurrogateModel& model,
                                 const std::vector<const TimeSeries*>& population,
                                 const std::vector<int>& labels, const Segmentation& seg, int B,
                                 std::uint64_t seed);

// w_t = 1 iff the part containing t scores at or above the q-quantile of all
// part scores. Equal scores everywhere give the all-ones mask.
ImportanceMask binarize_mask(const std::vector<double>& scores, const std::vector<int>& boundaries,
                             double q, Strategy tag);
ImportanceMask binarize_mask(const SegmentScores& scores, const Segmentation& seg, double q);

struct UnifiedIntervals {
    std::vector<int> boundaries;  // union of all breakpoints
    std::vector<double> imp;      // one per interval
};

// Aligns several segmentations into the partition induced by the union of
// their breakpoints; each interval averages, over groups, the importance of
// the overlapping segments weighted by |[a,b) ∩ I| / |I|.
UnifiedIntervals align_intervals(const std::vector<Segmentation>& segs,
                                 const std::vector<std::vector<double>>& scores);

// Structural index over a corpus: per-cluster subgroups plus per-subgroup
// permutation-importance scores over the medoid patterns.
struct ClusterStructure {
    SubgroupModel subgroups;
    std::vector<SegmentScores> group_scores;  // aligned with subgroups.patterns
};

struct StructureIndex {
    std::vector<ClusterStructure> clusters;
    std::unordered_map<int, std::pair<int, int>> locate;  // corpus id -> (cluster, member idx)
    double quantile = 0.75;

    int group_of(int corpus_id) const;
    const Segmentation& instance_pattern(int corpus_id) const;
};

StructureIndex build_structures(const Corpus& corpus, const SurrogateModel& model, int window,
                                int step, int repetitions, double quantile, std::uint64_t seed);

// Mask for instance x under a weighting strategy:
//   baseline  -> all ones
//   source    -> binarized scores of x's own subgroup pattern
//   target    -> binarized aligned importances over the target's subgroups
//   combined  -> aligned importances over {x's subgroup} ∪ target subgroups
ImportanceMask get_mask(const TimeSeries& x, int source_cluster, std::optional<int> target_cluster,
                        Strategy strategy, const StructureIndex& structures);

}  // namespace galactic
