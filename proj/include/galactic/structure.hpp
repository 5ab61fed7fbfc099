#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "galactic/types.hpp"

namespace galactic {

// Contiguous partition of [0, T) by strictly increasing breakpoints
// 0 = b_0 < b_1 < ... < b_M = T. Segment m spans [b_m, b_{m+1}).
struct Segmentation {
    std::vector<int> breakpoints;

    int num_segments() const { return static_cast<int>(breakpoints.size()) - 1; }
    int total_length() const { return breakpoints.empty() ? 0 : breakpoints.back(); }
    int segment_of(int t) const;
    bool valid() const;
};

struct GapVector {
    std::vector<int> durations;
};

int default_window(int length);  // floor(T/10), at least 2
int default_step(int length);    // floor(T/6.67), at least 1

// Breakpoints at non-maximum-suppressed local maxima of a sliding-window
// mean/std dissimilarity score, thresholded at the score's 75th percentile.
// Series shorter than 4 fall back to the single segment {0, T}.
Segmentation detect_changepoints(std::span<const double> x, int window, int step);
Segmentation detect_changepoints(const TimeSeries& x, int window, int step);

GapVector gap_vector(const Segmentation& seg);

// L1 distance after zero-padding the shorter vector.
double gap_distance(const GapVector& a, const GapVector& b);

struct KMedoidsResult {
    std::vector<int> assignment;  // point -> position in `medoids`
    std::vector<int> medoids;     // point indices, ascending
    double total_cost = 0.0;
};

// PAM-style swap refinement from a seeded greedy-farthest initialization.
KMedoidsResult kmedoids(const std::vector<GapVector>& points, int k, std::uint64_t seed);

// Mean silhouette over all points; singleton groups score 0.
double silhouette_score(const std::vector<GapVector>& points, const std::vector<int>& assignment,
                        int k);

// Per-cluster structural summary: medoid segmentation patterns and the
// subgroup each instance belongs to. `instance_ids` carries the corpus ids
// of the cluster members, aligned with `assignment` and `instance_segs`.
struct SubgroupModel {
    int cluster_id = -1;
    std::vector<int> instance_ids;
    std::vector<Segmentation> instance_segs;
    std::vector<Segmentation> patterns;
    std::vector<int> assignment;
    std::vector<int> group_sizes;

    int num_groups() const { return static_cast<int>(patterns.size()); }
};

// Segments every member, clusters the gap vectors with k-medoids for
// K_seg in {2..min(6, n-1)}, and keeps the silhouette-maximal partition
// among those whose groups all have two or more members (falling back to
// the overall silhouette maximum, then to a single group).
SubgroupModel build_subgroups(const std::vector<TimeSeries>& cluster_series, int window, int step,
                              std::uint64_t seed);

}  // namespace galactic
