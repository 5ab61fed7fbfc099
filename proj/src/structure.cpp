#include "galactic/structure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "galactic/error.hpp"
#include "galactic/rng.hpp"
#include "galactic/util.hpp"

namespace galactic {

int Segmentation::segment_of(int t) const {
    for (int m = 0; m + 1 < static_cast<int>(breakpoints.size()); ++m) {
        if (t >= breakpoints[static_cast<std::size_t>(m)] &&
            t < breakpoints[static_cast<std::size_t>(m) + 1]) {
            return m;
        }
    }
    throw Error(errc::precondition, "timestep outside segmentation range");
}

bool Segmentation::valid() const {
    if (breakpoints.size() < 2 || breakpoints.front() != 0) return false;
    for (std::size_t i = 1; i < breakpoints.size(); ++i) {
        if (breakpoints[i] <= breakpoints[i - 1]) return false;
    }
    return true;
}

int default_window(int length) { return std::max(2, length / 10); }

int default_step(int length) {
    return std::max(1, static_cast<int>(std::floor(static_cast<double>(length) / 6.67)));
}

namespace {

struct WindowStats {
    double mean;
    double sd;
};

WindowStats window_stats(std::span<const double> x, int begin, int end) {
    double mean = 0.0;
    for (int i = begin; i < end; ++i) mean += x[static_cast<std::size_t>(i)];
    mean /= static_cast<double>(end - begin);
    double var = 0.0;
    for (int i = begin; i < end; ++i) {
        double d = x[static_cast<std::size_t>(i)] - mean;
        var += d * d;
    }
    return {mean, std::sqrt(var / static_cast<double>(end - begin))};
}

}  // namespace

Segmentation detect_changepoints(std::span<const double> x, int window, int step) {
    const int T = static_cast<int>(x.size());
    if (T < 4) return Segmentation{{0, T}};
    if (window < 1 || window > T) throw Error(errc::precondition, "window out of range");
    if (step < 1 || step > T) throw Error(errc::precondition, "step out of range");

    // Candidates need a full window on both sides.
    const int lo = window;
    const int hi = T - window;
    if (lo >= hi) return Segmentation{{0, T}};

    std::vector<double> score(static_cast<std::size_t>(hi - lo), 0.0);
    for (int t = lo; t < hi; ++t) {
        WindowStats left = window_stats(x, t - window, t);
        WindowStats right = window_stats(x, t, t + window);
        score[static_cast<std::size_t>(t - lo)] =
            std::abs(left.mean - right.mean) + std::abs(left.sd - right.sd);
    }

    double threshold = quantile_nearest_rank(score, 0.75);

    // Local maxima strictly above the threshold.
    std::vector<int> peaks;
    for (int i = 0; i < static_cast<int>(score.size()); ++i) {
        double s = score[static_cast<std::size_t>(i)];
        if (!(s > threshold)) continue;
        double prev = i > 0 ? score[static_cast<std::size_t>(i) - 1]
                            : -std::numeric_limits<double>::infinity();
        double next = i + 1 < static_cast<int>(score.size())
                          ? score[static_cast<std::size_t>(i) + 1]
                          : -std::numeric_limits<double>::infinity();
        if (s > prev && s >= next) peaks.push_back(i);
    }

    // Greedy suppression: strongest first, no two accepted within `window`.
    std::sort(peaks.begin(), peaks.end(), [&](int a, int b) {
        double sa = score[static_cast<std::size_t>(a)];
        double sb = score[static_cast<std::size_t>(b)];
        if (sa != sb) return sa > sb;
        return a < b;
    });
    std::vector<int> accepted;
    for (int i : peaks) {
        int t = lo + i;
        bool blocked = false;
        for (int a : accepted) {
            if (std::abs(a - t) < window) { blocked = true; break; }
        }
        if (!blocked) accepted.push_back(t);
    }
    std::sort(accepted.begin(), accepted.end());

    Segmentation seg;
    seg.breakpoints.push_back(0);
    for (int t : accepted) seg.breakpoints.push_back(t);
    seg.breakpoints.push_back(T);
    return seg;
}

Segmentation detect_changepoints(const TimeSeries& x, int window, int step) {
    return detect_changepoints(std::span<const double>(x.values), window, step);
}

GapVector gap_vector(const Segmentation& seg) {
    GapVector gv;
    for (std::size_t i = 1; i < seg.breakpoints.size(); ++i) {
        gv.durations.push_back(seg.breakpoints[i] - seg.breakpoints[i - 1]);
    }
    return gv;
}

double gap_distance(const GapVector& a, const GapVector& b) {
    std::size_t n = std::max(a.durations.size(), b.durations.size());
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        int av = i < a.durations.size() ? a.durations[i] : 0;
        int bv = i < b.durations.size() ? b.durations[i] : 0;
        d += std::abs(av - bv);
    }
    return d;
}

namespace {

std::vector<std::vector<double>> distance_matrix(const std::vector<GapVector>& points) {
    const std::size_t n = points.size();
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            d[i][j] = d[j][i] = gap_distance(points[i], points[j]);
        }
    }
    return d;
}

double assign_to_medoids(const std::vector<std::vector<double>>& d, const std::vector<int>& medoids,
                         std::vector<int>& assignment) {
    double cost = 0.0;
    assignment.assign(d.size(), 0);
    for (std::size_t i = 0; i < d.size(); ++i) {
        int best = 0;
        double best_d = d[i][static_cast<std::size_t>(medoids[0])];
        for (int m = 1; m < static_cast<int>(medoids.size()); ++m) {
            double dist = d[i][static_cast<std::size_t>(medoids[static_cast<std::size_t>(m)])];
            if (dist < best_d) { best_d = dist; best = m; }
        }
        assignment[i] = best;
        cost += best_d;
    }
    return cost;
}

}  // namespace

KMedoidsResult kmedoids(const std::vector<GapVector>& points, int k, std::uint64_t seed) {
    const int n = static_cast<int>(points.size());
    if (k < 1) throw Error(errc::precondition, "k must be positive");
    if (k > n) throw Error(errc::precondition, "k exceeds the number of points");

    auto d = distance_matrix(points);

    // Greedy-farthest initialization from a seeded start point.
    Rng rng(mix64(seed));
    std::vector<int> medoids{rng.uniform_int(n)};
    std::vector<bool> chosen(static_cast<std::size_t>(n), false);
    chosen[static_cast<std::size_t>(medoids[0])] = true;
    while (static_cast<int>(medoids.size()) < k) {
        int far = -1;
        double far_d = -1.0;
        for (int i = 0; i < n; ++i) {
            if (chosen[static_cast<std::size_t>(i)]) continue;
            double nearest = std::numeric_limits<double>::infinity();
            for (int m : medoids) {
                nearest = std::min(nearest, d[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)]);
            }
            if (nearest > far_d) { far_d = nearest; far = i; }
        }
        medoids.push_back(far);
        chosen[static_cast<std::size_t>(far)] = true;
    }

    std::vector<int> assignment;
    double cost = assign_to_medoids(d, medoids, assignment);

    // PAM: apply the best strictly improving single swap until none exists.
    while (true) {
        double best_cost = cost;
        int best_m = -1, best_p = -1;
        std::vector<int> trial = medoids;
        for (int mi = 0; mi < k; ++mi) {
            for (int p = 0; p < n; ++p) {
                if (chosen[static_cast<std::size_t>(p)]) continue;
                trial[static_cast<std::size_t>(mi)] = p;
                std::vector<int> tmp_assign;
                double c = assign_to_medoids(d, trial, tmp_assign);
                if (c < best_cost) {
                    best_cost = c;
                    best_m = mi;
                    best_p = p;
                }
                trial[static_cast<std::size_t>(mi)] = medoids[static_cast<std::size_t>(mi)];
            }
        }
        if (best_m < 0) break;
        chosen[static_cast<std::size_t>(medoids[static_cast<std::size_t>(best_m)])] = false;
        chosen[static_cast<std::size_t>(best_p)] = true;
        medoids[static_cast<std::size_t>(best_m)] = best_p;
        cost = assign_to_medoids(d, medoids, assignment);
    }

    // Canonical order: medoids ascending, assignments re-indexed to match.
    std::sort(medoids.begin(), medoids.end());
    KMedoidsResult result;
    result.medoids = medoids;
    result.total_cost = assign_to_medoids(d, medoids, result.assignment);
    return result;
}

double silhouette_score(const std::vector<GapVector>& points, const std::vector<int>& assignment,
                        int k) {
    const std::size_t n = points.size();
    if (n == 0) throw Error(errc::precondition, "silhouette of an empty set");
    auto d = distance_matrix(points);
    std::vector<int> sizes(static_cast<std::size_t>(k), 0);
    for (int a : assignment) ++sizes[static_cast<std::size_t>(a)];

    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        int gi = assignment[i];
        if (sizes[static_cast<std::size_t>(gi)] <= 1) continue;  // s(i) = 0
        double a_sum = 0.0;
        std::vector<double> b_sum(static_cast<std::size_t>(k), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            if (assignment[j] == gi) a_sum += d[i][j];
            else b_sum[static_cast<std::size_t>(assignment[j])] += d[i][j];
        }
        double a = a_sum / static_cast<double>(sizes[static_cast<std::size_t>(gi)] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (int g = 0; g < k; ++g) {
            if (g == gi || sizes[static_cast<std::size_t>(g)] == 0) continue;
            b = std::min(b, b_sum[static_cast<std::size_t>(g)] /
                                static_cast<double>(sizes[static_cast<std::size_t>(g)]));
        }
        if (!std::isfinite(b)) continue;
        double denom = std::max(a, b);
        total += denom > 0.0 ? (b - a) / denom : 0.0;
    }
    return total / static_cast<double>(n);
}

SubgroupModel build_subgroups(const std::vector<TimeSeries>& cluster_series, int window, int step,
                              std::uint64_t seed) {
    if (cluster_series.empty()) throw Error(errc::precondition, "empty cluster");
    const int n = static_cast<int>(cluster_series.size());

    SubgroupModel model;
    model.instance_ids.reserve(static_cast<std::size_t>(n));
    model.instance_segs.reserve(static_cast<std::size_t>(n));
    std::vector<GapVector> gaps;
    gaps.reserve(static_cast<std::size_t>(n));
    for (const auto& s : cluster_series) {
        model.instance_ids.push_back(s.id);
        model.instance_segs.push_back(detect_changepoints(s, window, step));
        gaps.push_back(gap_vector(model.instance_segs.back()));
    }

    auto single_group = [&]() {
        int medoid = n == 1 ? 0 : kmedoids(gaps, 1, seed).medoids.front();
        model.patterns = {model.instance_segs[static_cast<std::size_t>(medoid)]};
        model.assignment.assign(static_cast<std::size_t>(n), 0);
        model.group_sizes = {n};
        return model;
    };
    if (n <= 2) return single_group();

    struct Candidate {
        int k;
        KMedoidsResult km;
        double silhouette;
        bool all_pairs;
    };
    std::vector<Candidate> candidates;
    int k_max = std::min(6, n - 1);
    for (int k = 2; k <= k_max; ++k) {
        KMedoidsResult km = kmedoids(gaps, k, seed ^ static_cast<std::uint64_t>(k));
        double sil = silhouette_score(gaps, km.assignment, k);
        std::vector<int> sizes(static_cast<std::size_t>(k), 0);
        for (int a : km.assignment) ++sizes[static_cast<std::size_t>(a)];
        bool all_pairs = std::all_of(sizes.begin(), sizes.end(), [](int s) { return s >= 2; });
        candidates.push_back({k, std::move(km), sil, all_pairs});
    }

    const Candidate* best = nullptr;
    for (const auto& c : candidates) {
        if (!c.all_pairs) continue;
        if (best == nullptr || c.silhouette > best->silhouette) best = &c;
    }
    if (best == nullptr) {
        for (const auto& c : candidates) {
            if (best == nullptr || c.silhouette > best->silhouette) best = &c;
        }
    }
    if (best == nullptr || !(best->silhouette > 0.0)) return single_group();

    model.assignment = best->km.assignment;
    model.group_sizes.assign(static_cast<std::size_t>(best->k), 0);
    for (int a : model.assignment) ++model.group_sizes[static_cast<std::size_t>(a)];
    model.patterns.reserve(static_cast<std::size_t>(best->k));
    for (int m : best->km.medoids) {
        model.patterns.push_back(model.instance_segs[static_cast<std::size_t>(m)]);
    }
    return model;
}

}  // namespace galactic
