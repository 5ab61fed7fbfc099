#include "galactic/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "galactic/error.hpp"

namespace galactic {

int changed_segments(const std::vector<double>& delta, const Segmentation& seg) {
    int count = 0;
    for (int m = 0; m < seg.num_segments(); ++m) {
        int a = seg.breakpoints[static_cast<std::size_t>(m)];
        int b = seg.breakpoints[static_cast<std::size_t>(m) + 1];
        for (int t = a; t < b; ++t) {
            if (delta[static_cast<std::size_t>(t)] != 0.0) {
                ++count;
                break;
            }
        }
    }
    return count;
}

EvalReport evaluate_local(const std::vector<LocalResult>& results) {
    if (results.empty()) throw Error(errc::precondition, "no explanation attempts to evaluate");

    EvalReport report;
    report.attempts = static_cast<int>(results.size());
    double cost_sum = 0.0, act_sum = 0.0, acs_sum = 0.0;
    for (const auto& r : results) {
        if (!r.counterfactual) continue;
        const Counterfactual& cf = *r.counterfactual;
        if (cf.l0 < 1) {
            throw Error(errc::precondition,
                        "a success record must change at least one timestep");
        }
        ++report.successes;
        cost_sum += cf.l2_cost;
        act_sum += cf.l0;
        if (r.segmentation == nullptr) {
            throw Error(errc::precondition, "missing segmentation for a successful instance");
        }
        acs_sum += changed_segments(cf.delta, *r.segmentation);
    }
    report.eff = 100.0 * static_cast<double>(report.successes) /
                 static_cast<double>(report.attempts);
    if (report.successes > 0) {
        double inv = 1.0 / static_cast<double>(report.successes);
        report.afc = cost_sum * inv;
        report.act = act_sum * inv;
        report.acs = acs_sum * inv;
    }
    return report;
}

EvalReport evaluate_global(const SummarySet& summary, const CandidatePool& pool,
                           const std::vector<std::pair<int, const Segmentation*>>& segmentations,
                           int cluster_size) {
    EvalReport report;
    report.attempts = cluster_size;
    report.successes = static_cast<int>(summary.covered.size());
    report.eff = 100.0 * summary.eff;
    report.afc = summary.afc;
    report.runtime_s = summary.runtime_ms / 1000.0;
    if (summary.covered.empty()) return report;

    auto find_delta = [&](int cand_id) -> const Perturbation& {
        for (const auto& p : pool.items) {
            if (p.id == cand_id) return p;
        }
        throw Error(errc::precondition, "summary references an unknown candidate id");
    };
    auto find_seg = [&](int instance_id) -> const Segmentation& {
        for (const auto& [id, seg] : segmentations) {
            if (id == instance_id) return *seg;
        }
        throw Error(errc::precondition, "missing segmentation for a covered instance");
    };

    double act_sum = 0.0, acs_sum = 0.0;
    for (std::size_t i = 0; i < summary.covered.size(); ++i) {
        const Perturbation& p = find_delta(summary.best_candidate[i]);
        act_sum += p.l0;
        acs_sum += changed_segments(p.delta, find_seg(summary.covered[i]));
    }
    double inv = 1.0 / static_cast<double>(summary.covered.size());
    report.act = act_sum * inv;
    report.acs = acs_sum * inv;
    return report;
}

double gain_loss(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.empty() || x.size() != y.size()) {
        throw Error(errc::precondition, "gain/loss needs two metric vectors of equal length");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) sum += y[i] - x[i];
    return sum / static_cast<double>(x.size());
}

}  // namespace galactic
