#include "galactic/mdl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "galactic/error.hpp"
#include "galactic/util.hpp"

namespace galactic {

long long bits_universal(long long n) {
    if (n <= 0) throw Error(errc::precondition, "universal code is defined for positive integers");
    long long floor_log2 = 0;
    while ((1LL << (floor_log2 + 1)) <= n) ++floor_log2;
    return 2 * floor_log2 + 1;
}

std::string elias_gamma_encode(long long n) {
    if (n <= 0) throw Error(errc::precondition, "universal code is defined for positive integers");
    long long floor_log2 = 0;
    while ((1LL << (floor_log2 + 1)) <= n) ++floor_log2;
    std::string out(static_cast<std::size_t>(floor_log2), '0');
    for (long long b = floor_log2; b >= 0; --b) {
        out.push_back(((n >> b) & 1) ? '1' : '0');
    }
    return out;
}

long long elias_gamma_decode(const std::string& bits, std::size_t* consumed) {
    std::size_t zeros = 0;
    while (zeros < bits.size() && bits[zeros] == '0') ++zeros;
    if (zeros >= bits.size() || bits.size() < 2 * zeros + 1) {
        throw Error(errc::format, "truncated universal code");
    }
    long long value = 0;
    for (std::size_t i = zeros; i < 2 * zeros + 1; ++i) {
        value = (value << 1) | (bits[i] == '1' ? 1 : 0);
    }
    if (consumed != nullptr) *consumed = 2 * zeros + 1;
    return value;
}

double log2p1(double v) {
    if (v < 0.0) throw Error(errc::precondition, "log2p1 requires a nonnegative value");
    return std::log2(v + 1.0);
}

Perturbation Perturbation::from_delta(int id, std::vector<double> delta, double change_threshold,
                                      int source_instance, int source_group) {
    Perturbation p;
    p.id = id;
    p.source_instance = source_instance;
    p.source_group = source_group;
    double sq = 0.0;
    for (double& d : delta) {
        if (std::abs(d) <= change_threshold) d = 0.0;
        if (d != 0.0) ++p.l0;
        p.l1 += std::abs(d);
        sq += d * d;
    }
    p.l2_cost = std::sqrt(sq);
    p.delta = std::move(delta);
    return p;
}

double Perturbation::description_bits() const {
    return static_cast<double>(bits_universal(l0)) + log2p1(l1);
}

void CandidatePool::finalize(double pointer_bits) {
    ref_index = -1;
    mc = 2.0 * pointer_bits;
    for (int i = 0; i < static_cast<int>(items.size()); ++i) {
        double c = items[static_cast<std::size_t>(i)].description_bits() + 2.0 * pointer_bits;
        if (ref_index < 0 || c > mc) {
            mc = c;
            ref_index = i;
        }
    }
}

CoverageResult coverage(std::span<const TimeSeries> instances, std::span<const Perturbation> S,
                        const SurrogateModel& model) {
    CoverageResult result;
    std::vector<double> shifted;
    for (int i = 0; i < static_cast<int>(instances.size()); ++i) {
        const auto& x = instances[static_cast<std::size_t>(i)].values;
        int original = model.predict(x);
        int best = -1;
        double best_cost = 0.0;
        for (int j = 0; j < static_cast<int>(S.size()); ++j) {
            const auto& delta = S[static_cast<std::size_t>(j)].delta;
            shifted = x;
            for (std::size_t t = 0; t < shifted.size(); ++t) shifted[t] += delta[t];
            if (model.predict(shifted) != original) {
                double c = S[static_cast<std::size_t>(j)].l2_cost;
                if (best < 0 || c < best_cost) {
                    best = j;
                    best_cost = c;
                }
            }
        }
        if (best >= 0) {
            result.covered.push_back(i);
            result.best_candidate.push_back(best);
            result.cost_flip.push_back(best_cost);
        }
    }
    return result;
}

double model_length(std::span<const Perturbation> S, int covered_count, const MdlParams& params) {
    double bits = 0.0;
    for (const auto& p : S) bits += p.description_bits();
    return bits + (static_cast<double>(covered_count) + static_cast<double>(S.size())) *
                      params.pointer_bits;
}

double data_length(int uncovered_count, double mc) {
    return static_cast<double>(uncovered_count) * mc;
}

MdlInstance MdlInstance::restrict_rows(const std::vector<int>& row_positions) const {
    MdlInstance out;
    out.cand_ids = cand_ids;
    out.cand_bits = cand_bits;
    out.cand_cost = cand_cost;
    out.cand_source_instance = cand_source_instance;
    out.cand_source_group = cand_source_group;
    out.mc = mc;
    out.pointer_bits = pointer_bits;
    out.instance_ids.reserve(row_positions.size());
    for (int r : row_positions) out.instance_ids.push_back(instance_ids[static_cast<std::size_t>(r)]);
    out.flips.resize(flips.size());
    for (std::size_t j = 0; j < flips.size(); ++j) {
        out.flips[j].reserve(row_positions.size());
        for (int r : row_positions) out.flips[j].push_back(flips[j][static_cast<std::size_t>(r)]);
    }
    return out;
}

MdlInstance MdlInstance::restrict_cands(const std::vector<int>& cand_positions) const {
    MdlInstance out;
    out.instance_ids = instance_ids;
    out.mc = mc;
    out.pointer_bits = pointer_bits;
    for (int j : cand_positions) {
        auto js = static_cast<std::size_t>(j);
        out.cand_ids.push_back(cand_ids[js]);
        out.cand_bits.push_back(cand_bits[js]);
        out.cand_cost.push_back(cand_cost[js]);
        out.cand_source_instance.push_back(cand_source_instance[js]);
        out.cand_source_group.push_back(cand_source_group[js]);
        out.flips.push_back(flips[js]);
    }
    return out;
}

MdlInstance build_mdl_instance(std::span<const TimeSeries> instances, const CandidatePool& pool,
                               const SurrogateModel& model, const MdlParams& params) {
    MdlInstance inst;
    inst.mc = pool.mc;
    inst.pointer_bits = params.pointer_bits;
    inst.instance_ids.reserve(instances.size());
    for (const auto& s : instances) inst.instance_ids.push_back(s.id);

    const int n = static_cast<int>(instances.size());
    const int m = static_cast<int>(pool.items.size());
    std::vector<int> originals(static_cast<std::size_t>(n));
    parallel_for(n, [&](int i) {
        originals[static_cast<std::size_t>(i)] = model.predict(instances[static_cast<std::size_t>(i)].values);
    });

    inst.flips.assign(static_cast<std::size_t>(m),
                      std::vector<std::uint8_t>(static_cast<std::size_t>(n), 0));
    for (int j = 0; j < m; ++j) {
        const auto& p = pool.items[static_cast<std::size_t>(j)];
        inst.cand_ids.push_back(p.id);
        inst.cand_bits.push_back(p.description_bits());
        inst.cand_cost.push_back(p.l2_cost);
        inst.cand_source_instance.push_back(p.source_instance);
        inst.cand_source_group.push_back(p.source_group);
    }
    parallel_for(n, [&](int i) {
        std::vector<double> shifted(instances[static_cast<std::size_t>(i)].values.size());
        for (int j = 0; j < m; ++j) {
            const auto& x = instances[static_cast<std::size_t>(i)].values;
            const auto& delta = pool.items[static_cast<std::size_t>(j)].delta;
            for (std::size_t t = 0; t < x.size(); ++t) shifted[t] = x[t] + delta[t];
            inst.flips[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
                model.predict(shifted) != originals[static_cast<std::size_t>(i)] ? 1 : 0;
        }
    });
    return inst;
}

namespace {

SummarySet accounted(const MdlInstance& inst, const std::vector<int>& positions) {
    const int n = inst.rows();
    SummarySet s;
    s.selected.reserve(positions.size());
    for (int p : positions) s.selected.push_back(inst.cand_ids[static_cast<std::size_t>(p)]);

    double cand_bits = 0.0;
    for (int p : positions) cand_bits += inst.cand_bits[static_cast<std::size_t>(p)];

    int covered_count = 0;
    for (int i = 0; i < n; ++i) {
        int best = -1;
        double best_cost = 0.0;
        for (int p : positions) {
            if (!inst.flips[static_cast<std::size_t>(p)][static_cast<std::size_t>(i)]) continue;
            double c = inst.cand_cost[static_cast<std::size_t>(p)];
            if (best < 0 || c < best_cost ||
                (c == best_cost && inst.cand_ids[static_cast<std::size_t>(p)] <
                                       inst.cand_ids[static_cast<std::size_t>(best)])) {
                best = p;
                best_cost = c;
            }
        }
        if (best >= 0) {
            ++covered_count;
            s.covered.push_back(inst.instance_ids[static_cast<std::size_t>(i)]);
            s.best_candidate.push_back(inst.cand_ids[static_cast<std::size_t>(best)]);
            s.cost_flip.push_back(best_cost);
        }
    }

    s.model_bits = cand_bits + (static_cast<double>(covered_count) +
                                static_cast<double>(positions.size())) *
                                   inst.pointer_bits;
    s.data_bits = static_cast<double>(n - covered_count) * inst.mc;
    s.total_bits = s.model_bits + s.data_bits;
    s.reduction = static_cast<double>(n) * inst.mc - s.total_bits;
    s.eff = n > 0 ? static_cast<double>(covered_count) / static_cast<double>(n) : 0.0;
    if (covered_count > 0) {
        double sum = 0.0;
        for (double c : s.cost_flip) sum += c;
        s.afc = sum / static_cast<double>(covered_count);
    }
    return s;
}

int new_coverage(const MdlInstance& inst, const std::vector<std::uint8_t>& covered_rows, int pos) {
    int gain = 0;
    const auto& row = inst.flips[static_cast<std::size_t>(pos)];
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (row[i] && !covered_rows[i]) ++gain;
    }
    return gain;
}

long long subset_count(int m, int mu) {
    long long total = 0;
    long long binom = 1;
    for (int i = 1; i <= std::min(mu, m); ++i) {
        binom = binom * (m - i + 1) / i;
        total += binom;
        if (total > (1LL << 62) / 2) break;
    }
    return total;
}

}  // namespace

SummarySet evaluate_subset(const MdlInstance& inst, const std::vector<int>& selected_positions) {
    return accounted(inst, selected_positions);
}

double mdl_increment(const MdlInstance& inst, const std::vector<std::uint8_t>& covered_rows,
                     int pos) {
    double gamma = static_cast<double>(new_coverage(inst, covered_rows, pos));
    return inst.cand_bits[static_cast<std::size_t>(pos)] + inst.pointer_bits +
           gamma * (inst.pointer_bits - inst.mc);
}

SummarySet select_optimal(const MdlInstance& inst, int mu, long long cap) {
    const int m = inst.cands();
    if (mu < 0) throw Error(errc::precondition, "budget must be nonnegative");
    long long evals = subset_count(m, mu);
    if (evals > cap) {
        throw Error(errc::cap_exceeded,
                    "exhaustive search needs " + std::to_string(evals) + " evaluations (cap " +
                        std::to_string(cap) + "); use the greedy algorithm");
    }

    std::vector<int> best_positions;  // empty set is the baseline hypothesis
    SummarySet best = accounted(inst, best_positions);

    std::vector<int> combo;
    auto consider = [&](const std::vector<int>& positions) {
        SummarySet s = accounted(inst, positions);
        bool better = s.total_bits < best.total_bits;
        if (!better && s.total_bits == best.total_bits) {
            if (positions.size() < best_positions.size()) {
                better = true;
            } else if (positions.size() == best_positions.size()) {
                better = std::lexicographical_compare(
                    positions.begin(), positions.end(), best_positions.begin(),
                    best_positions.end());
            }
        }
        if (better) {
            best = std::move(s);
            best_positions = positions;
        }
    };

    // Sizes ascending; combinations in lexicographic candidate order.
    for (int size = 1; size <= std::min(mu, m); ++size) {
        combo.assign(static_cast<std::size_t>(size), 0);
        for (int i = 0; i < size; ++i) combo[static_cast<std::size_t>(i)] = i;
        while (true) {
            consider(combo);
            int i = size - 1;
            while (i >= 0 && combo[static_cast<std::size_t>(i)] == m - size + i) --i;
            if (i < 0) break;
            ++combo[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < size; ++j) {
                combo[static_cast<std::size_t>(j)] = combo[static_cast<std::size_t>(j) - 1] + 1;
            }
        }
    }
    best.algorithm = "optimal";
    best.mu = mu;
    return best;
}

SummarySet select_greedy(const MdlInstance& inst, int mu) {
    if (mu < 0) throw Error(errc::precondition, "budget must be nonnegative");
    const int m = inst.cands();
    std::vector<int> selected;
    std::vector<std::uint8_t> covered(static_cast<std::size_t>(inst.rows()), 0);
    double current_total = accounted(inst, selected).total_bits;

    while (static_cast<int>(selected.size()) < mu) {
        int best_pos = -1;
        double best_total = 0.0;
        for (int p = 0; p < m; ++p) {
            if (std::find(selected.begin(), selected.end(), p) != selected.end()) continue;
            if (new_coverage(inst, covered, p) < 1) continue;  // admissible additions only
            double total = current_total + mdl_increment(inst, covered, p);
            if (best_pos < 0 || total < best_total) {
                best_pos = p;
                best_total = total;
            }
        }
        if (best_pos < 0) break;
        if (!(best_total < current_total)) break;
        selected.push_back(best_pos);
        const auto& row = inst.flips[static_cast<std::size_t>(best_pos)];
        for (std::size_t i = 0; i < row.size(); ++i) covered[i] |= row[i];
        current_total = accounted(inst, selected).total_bits;
    }

    std::sort(selected.begin(), selected.end());
    SummarySet s = accounted(inst, selected);
    s.algorithm = "greedy";
    s.mu = mu;
    return s;
}

PermFilter get_perm(const MdlInstance& inst, int group) {
    PermFilter f;
    for (int p = 0; p < inst.cands(); ++p) {
        if (inst.cand_source_group[static_cast<std::size_t>(p)] == group) f.positions.push_back(p);
    }
    if (f.positions.empty()) {
        f.fallback = true;
        f.positions.resize(static_cast<std::size_t>(inst.cands()));
        for (int p = 0; p < inst.cands(); ++p) f.positions[static_cast<std::size_t>(p)] = p;
    }
    return f;
}

HierarchicalResult select_hierarchical(const MdlInstance& inst,
                                       const std::vector<int>& group_of_row, int num_groups,
                                       int mu, InnerAlgorithm inner, long long cap) {
    if (static_cast<int>(group_of_row.size()) != inst.rows()) {
        throw Error(errc::precondition, "group assignment does not match instance rows");
    }
    const int n = inst.rows();
    auto run_inner = [&](const MdlInstance& sub, int budget) {
        return inner == InnerAlgorithm::Optimal ? select_optimal(sub, budget, cap)
                                                : select_greedy(sub, budget);
    };

    HierarchicalResult result;
    std::set<int> winner_ids;
    for (int r = 0; r < num_groups; ++r) {
        std::vector<int> rows;
        for (int i = 0; i < n; ++i) {
            if (group_of_row[static_cast<std::size_t>(i)] == r) rows.push_back(i);
        }
        if (rows.empty()) {
            result.phase1_selected.emplace_back();
            continue;
        }
        PermFilter filter = get_perm(inst, r);
        if (filter.fallback) result.fallback_groups.push_back(r);

        int mu_r = static_cast<int>(std::ceil(static_cast<double>(rows.size()) /
                                              static_cast<double>(n) * static_cast<double>(mu))) *
                   num_groups;
        MdlInstance sub = inst.restrict_cands(filter.positions).restrict_rows(rows);
        SummarySet group_summary = run_inner(sub, mu_r);
        result.phase1_selected.push_back(group_summary.selected);
        winner_ids.insert(group_summary.selected.begin(), group_summary.selected.end());
    }

    std::vector<int> winner_positions;
    for (int p = 0; p < inst.cands(); ++p) {
        if (winner_ids.count(inst.cand_ids[static_cast<std::size_t>(p)]) > 0) {
            winner_positions.push_back(p);
        }
    }
    MdlInstance refined = inst.restrict_cands(winner_positions);
    result.summary = run_inner(refined, mu);
    result.summary.algorithm =
        inner == InnerAlgorithm::Optimal ? "hierarchical_optimal" : "hierarchical_greedy";
    result.summary.mu = mu;
    return result;
}

}  // namespace galactic
