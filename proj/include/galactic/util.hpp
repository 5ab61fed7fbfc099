#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "galactic/error.hpp"

namespace galactic {

inline double l2_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

inline double l2_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

inline int argmax_lowest(std::span<const double> v) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(v.size()); ++i) {
        if (v[static_cast<std::size_t>(i)] > v[static_cast<std::size_t>(best)]) best = i;
    }
    return best;
}

// Nearest-rank quantile pinned so that q=0.75 over 4 values selects the top
// one: 0-based index ceil(q*n), clamped to [0, n-1], on the ascending sort.
inline double quantile_nearest_rank(std::vector<double> values, double q) {
    if (values.empty()) throw Error(errc::precondition, "quantile of empty set");
    std::sort(values.begin(), values.end());
    auto idx = static_cast<long long>(std::ceil(q * static_cast<double>(values.size())));
    idx = std::clamp<long long>(idx, 0, static_cast<long long>(values.size()) - 1);
    return values[static_cast<std::size_t>(idx)];
}

// Thread cap from GALACTIC_THREADS; 0 means "no explicit cap".
int env_thread_cap();

// Runs fn(i) for i in [0, n). Each index must write only its own slot so the
// result is identical for any thread count.
void parallel_for(int n, const std::function<void(int)>& fn, int max_threads = 0);

}  // namespace galactic
