#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "galactic/surrogate.hpp"
#include "galactic/types.hpp"

namespace galactic {

// Elias-gamma code for positive integers: floor(log2 n) zeros followed by
// the binary digits of n. Length is 2*floor(log2 n) + 1.
long long bits_universal(long long n);
std::string elias_gamma_encode(long long n);
long long elias_gamma_decode(const std::string& bits, std::size_t* consumed = nullptr);

// log2(v + 1); maps 0 to 0 and keeps magnitudes monotone and nonnegative.
double log2p1(double v);

struct MdlParams {
    double pointer_bits = 64.0;
    int budget = 3;
    double change_threshold = 0.005;
    long long optimal_cap = 2'000'000;
};

struct Perturbation {
    int id = -1;
    std::vector<double> delta;  // entries at or below the change threshold are exactly 0
    int source_instance = -1;
    int source_group = -1;
    int l0 = 0;
    double l1 = 0.0;
    double l2_cost = 0.0;

    static Perturbation from_delta(int id, std::vector<double> delta, double change_threshold,
                                   int source_instance, int source_group);

    double description_bits() const;  // bits(l0) + log2p1(l1)
};

struct CandidatePool {
    int cluster_id = -1;
    std::vector<Perturbation> items;
    int ref_index = -1;  // position of the maximal-description perturbation
    double mc = 0.0;     // bits(l0*) + log2p1(l1*) + 2 * pointer_bits

    // Computes ref_index and mc; an empty pool gets mc = 2 * pointer_bits.
    void finalize(double pointer_bits);
};

// Exact coverage of a perturbation set over a population: x is covered when
// some delta moves its argmax; the best candidate is the flipping delta of
// minimal L2 cost (ties to the lowest candidate position).
struct CoverageResult {
    std::vector<int> covered;         // positions into `instances`, ascending
    std::vector<int> best_candidate;  // aligned with covered, positions into S
    std::vector<double> cost_flip;    // aligned with covered
};
CoverageResult coverage(std::span<const TimeSeries> instances, std::span<const Perturbation> S,
                        const SurrogateModel& model);

double model_length(std::span<const Perturbation> S, int covered_count, const MdlParams& params);
double data_length(int uncovered_count, double mc);

// Selection-layer view of one cluster: per-candidate statistics plus the
// memoized flip matrix. Selection variants only do set algebra on it.
struct MdlInstance {
    std::vector<int> instance_ids;  // external ids per row
    std::vector<int> cand_ids;      // external ids per candidate, ascending
    std::vector<double> cand_bits;  // description bits per candidate
    std::vector<double> cand_cost;  // L2 cost per candidate
    std::vector<int> cand_source_instance;
    std::vector<int> cand_source_group;
    std::vector<std::vector<std::uint8_t>> flips;  // [candidate][row]
    double mc = 0.0;
    double pointer_bits = 64.0;

    int rows() const { return static_cast<int>(instance_ids.size()); }
    int cands() const { return static_cast<int>(cand_ids.size()); }

    MdlInstance restrict_rows(const std::vector<int>& row_positions) const;
    MdlInstance restrict_cands(const std::vector<int>& cand_positions) const;
};

MdlInstance build_mdl_instance(std::span<const TimeSeries> instances, const CandidatePool& pool,
                               const SurrogateModel& model, const MdlParams& params);

struct SummarySet {
    int cluster_id = -1;
    std::string algorithm;
    int mu = 0;
    std::vector<int> selected;        // external candidate ids
    std::vector<int> covered;         // external instance ids, ascending
    std::vector<int> best_candidate;  // aligned with covered, external candidate ids
    std::vector<double> cost_flip;    // aligned with covered
    double model_bits = 0.0;
    double data_bits = 0.0;
    double total_bits = 0.0;
    double reduction = 0.0;  // description length saved versus the empty set
    double eff = 0.0;        // covered fraction of the cluster
    std::optional<double> afc;
    double runtime_ms = 0.0;
};

// Full accounting for a given subset (candidate positions into `inst`).
SummarySet evaluate_subset(const MdlInstance& inst, const std::vector<int>& selected_positions);

// Closed-form total increment of adding candidate `pos` to a set whose
// coverage is `covered_rows` (0/1 per row).
double mdl_increment(const MdlInstance& inst, const std::vector<std::uint8_t>& covered_rows,
                     int pos);

// Exhaustive minimization over all subsets of size <= mu (plus the empty
// set). Ties prefer smaller sets, then lexicographically smaller id lists.
// Refuses to run when sum_{i<=mu} C(m, i) exceeds the cap.
SummarySet select_optimal(const MdlInstance& inst, int mu, long long cap = 2'000'000);

// Iteratively adds the admissible candidate with the lowest resulting total
// length; stops at the budget, when nothing is admissible, or when the best
// addition no longer strictly decreases the total.
SummarySet select_greedy(const MdlInstance& inst, int mu);

// Candidates sourced from one group; falls back to the full pool when the
// group sourced none.
struct PermFilter {
    std::vector<int> positions;
    bool fallback = false;
};
PermFilter get_perm(const MdlInstance& inst, int group);

enum class InnerAlgorithm { Optimal, Greedy };

struct HierarchicalResult {
    SummarySet summary;
    std::vector<int> fallback_groups;
    std::vector<std::vector<int>> phase1_selected;  // external ids per group
};

// Two-phase selection: per-group selection with proportional budgets
// mu_r = ceil((|G_r|/|C|) * mu) * R, then refinement over the pooled
// winners with the cluster budget.
HierarchicalResult select_hierarchical(const MdlInstance& inst,
                                       const std::vector<int>& group_of_row, int num_groups,
                                       int mu, InnerAlgorithm inner, long long cap = 2'000'000);

}  // namespace galactic
