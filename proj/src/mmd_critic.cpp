#include "galactic/mmd_critic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "galactic/error.hpp"
#include "galactic/util.hpp"

namespace galactic {

namespace {

// log det of the kernel submatrix via Cholesky; -inf when not positive
// definite (duplicate criticisms), which the diversity term then rejects.
double logdet(const std::vector<std::vector<double>>& K, const std::vector<int>& idx) {
    const int n = static_cast<int>(idx.size());
    std::vector<std::vector<double>> L(static_cast<std::size_t>(n),
                                       std::vector<double>(static_cast<std::size_t>(n), 0.0));
    double ld = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double sum = K[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])]
                          [static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
            for (int k = 0; k < j; ++k) {
                sum -= L[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] *
                       L[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
            }
            if (i == j) {
                if (sum <= 1e-12) return -std::numeric_limits<double>::infinity();
                L[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = std::sqrt(sum);
                ld += 2.0 * std::log(L[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
            } else {
                L[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    sum / L[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)];
            }
        }
    }
    return ld;
}

}  // namespace

MmdSelection mmd_critic(const std::vector<TimeSeries>& cluster, int n_prototypes,
                        int n_criticisms) {
    if (cluster.empty()) throw Error(errc::precondition, "empty cluster");
    if (n_prototypes < 1) throw Error(errc::precondition, "at least one prototype is required");
    if (n_criticisms < 0) throw Error(errc::precondition, "criticism count must be nonnegative");

    const int n = static_cast<int>(cluster.size());
    MmdSelection sel;
    if (n_prototypes + n_criticisms > n) {
        sel.clamped = true;
        n_prototypes = std::min(n_prototypes, n);
        n_criticisms = std::min(n_criticisms, n - n_prototypes);
    }

    // Median pairwise distance bandwidth.
    std::vector<double> dists;
    dists.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            dists.push_back(l2_distance(cluster[static_cast<std::size_t>(i)].values,
                                        cluster[static_cast<std::size_t>(j)].values));
        }
    }
    double sigma = 1.0;
    if (!dists.empty()) {
        std::sort(dists.begin(), dists.end());
        double med = dists[(dists.size() - 1) / 2];
        if (med > 0.0) sigma = med;
    }
    sel.sigma = sigma;

    std::vector<std::vector<double>> K(static_cast<std::size_t>(n),
                                       std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            double d = l2_distance(cluster[static_cast<std::size_t>(i)].values,
                                   cluster[static_cast<std::size_t>(j)].values);
            double k = std::exp(-(d * d) / (2.0 * sigma * sigma));
            K[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = k;
            K[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = k;
        }
    }

    std::vector<double> mean_kernel(static_cast<std::size_t>(n), 0.0);  // (1/n) sum_i K[x][i]
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += K[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        mean_kernel[static_cast<std::size_t>(i)] = s / static_cast<double>(n);
    }
    double term1 = 0.0;
    for (int i = 0; i < n; ++i) term1 += mean_kernel[static_cast<std::size_t>(i)];
    term1 /= static_cast<double>(n);

    // Greedy prototypes: minimize MMD^2(cluster, S) after each addition.
    std::vector<bool> is_proto(static_cast<std::size_t>(n), false);
    auto mmd2_with = [&](const std::vector<int>& protos, int extra) {
        double m = static_cast<double>(protos.size()) + 1.0;
        double cross = mean_kernel[static_cast<std::size_t>(extra)];
        double within = K[static_cast<std::size_t>(extra)][static_cast<std::size_t>(extra)];
        for (int p : protos) {
            cross += mean_kernel[static_cast<std::size_t>(p)];
            within += K[static_cast<std::size_t>(p)][static_cast<std::size_t>(p)];
            within += 2.0 * K[static_cast<std::size_t>(p)][static_cast<std::size_t>(extra)];
        }
        for (std::size_t a = 0; a < protos.size(); ++a) {
            for (std::size_t b = a + 1; b < protos.size(); ++b) {
                within += 2.0 * K[static_cast<std::size_t>(protos[a])][static_cast<std::size_t>(protos[b])];
            }
        }
        return term1 - 2.0 * cross / m + within / (m * m);
    };

    for (int step = 0; step < n_prototypes; ++step) {
        int best = -1;
        double best_v = 0.0;
        for (int c = 0; c < n; ++c) {
            if (is_proto[static_cast<std::size_t>(c)]) continue;
            double v = mmd2_with(sel.prototypes, c);
            if (best < 0 || v < best_v) {
                best = c;
                best_v = v;
            }
        }
        sel.prototypes.push_back(best);
        is_proto[static_cast<std::size_t>(best)] = true;
        sel.mmd2_trace.push_back(best_v);
    }

    // Witness against the prototype set.
    std::vector<double> witness(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        double proto_mean = 0.0;
        for (int p : sel.prototypes) {
            proto_mean += K[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)];
        }
        proto_mean /= static_cast<double>(sel.prototypes.size());
        witness[static_cast<std::size_t>(i)] = mean_kernel[static_cast<std::size_t>(i)] - proto_mean;
    }

    std::vector<int> crit;
    for (int step = 0; step < n_criticisms; ++step) {
        double base_ld = crit.empty() ? 0.0 : logdet(K, crit);
        int best = -1;
        double best_v = 0.0;
        for (int c = 0; c < n; ++c) {
            if (is_proto[static_cast<std::size_t>(c)]) continue;
            if (std::find(crit.begin(), crit.end(), c) != crit.end()) continue;
            std::vector<int> trial = crit;
            trial.push_back(c);
            double gain = logdet(K, trial);
            double diversity = std::isfinite(gain) && std::isfinite(base_ld) ? gain - base_ld
                                                                             : -1e100;
            double v = std::abs(witness[static_cast<std::size_t>(c)]) + diversity;
            if (best < 0 || v > best_v) {
                best = c;
                best_v = v;
            }
        }
        if (best < 0) break;
        crit.push_back(best);
    }
    sel.criticisms = std::move(crit);
    return sel;
}

}  // namespace galactic
