#include "galactic/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "galactic/candidates.hpp"
#include "galactic/dataset.hpp"
#include "galactic/error.hpp"
#include "galactic/importance.hpp"
#include "galactic/metrics.hpp"
#include "galactic/rng.hpp"
#include "galactic/util.hpp"

namespace galactic {

namespace {

namespace fs = std::filesystem;

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        if (allowed.count(key) == 0) {
            throw Error(errc::config, "unknown key '" + key + "' in " + where);
        }
    }
}

template <typename T>
void read_key(const json& obj, const char* key, T& out) {
    if (obj.contains(key)) out = obj.at(key).get<T>();
}

double now_ms() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

void write_text(const std::string& path, const std::string& content) {
    fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(path);
    if (!out) throw Error(errc::io, "cannot write: " + path);
    out << content;
    if (!out) throw Error(errc::io, "write failed: " + path);
}

json optional_number(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

std::string metric_cell(const json& v) {
    if (v.is_null()) return "-";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6f", v.get<double>());
    return buf;
}

json report_metrics(const EvalReport& r) {
    json m;
    m["attempts"] = r.attempts;
    m["successes"] = r.successes;
    m["eff"] = r.eff;
    m["afc"] = optional_number(r.afc);
    m["acs"] = optional_number(r.acs);
    m["act"] = optional_number(r.act);
    m["runtime_s"] = r.runtime_s;
    return m;
}

struct LoadedData {
    Corpus full;
    SplitResult split_result;
};

LoadedData load_and_split(const RunConfig& cfg) {
    if (cfg.dataset.empty()) throw Error(errc::config, "config has no dataset path");
    LoadedData data;
    data.full = load_ucr(cfg.dataset);
    if (cfg.normalize) data.full = znormalize(data.full);
    data.split_result = split(data.full, cfg.train_frac, cfg.seed);
    return data;
}

SurrogateModel load_model_artifact(const PipelineIO& io) {
    fs::path path = fs::path(io.out_dir) / "model.json";
    if (!fs::exists(path)) {
        throw Error(errc::missing_artifact,
                    "model artifact not found at " + path.string() + "; run `train` first");
    }
    return SurrogateModel::load(path.string());
}

}  // namespace

RunConfig config_from_json(const json& j) {
    check_keys(j, {"version", "dataset", "seed", "train_frac", "normalize", "surrogate",
                   "segmentation", "importance", "local", "global", "sample_fraction",
                   "output_dir"},
               "config");
    if (!j.contains("version") || j.at("version") != kConfigVersion) {
        throw Error(errc::config, std::string("config version must be \"") + kConfigVersion + "\"");
    }

    RunConfig cfg;
    read_key(j, "dataset", cfg.dataset);
    read_key(j, "seed", cfg.seed);
    read_key(j, "train_frac", cfg.train_frac);
    read_key(j, "normalize", cfg.normalize);
    read_key(j, "sample_fraction", cfg.sample_fraction);
    read_key(j, "output_dir", cfg.output_dir);

    if (j.contains("surrogate")) {
        const json& s = j.at("surrogate");
        check_keys(s, {"hidden", "epochs", "learning_rate", "batch_size", "l2_penalty"},
                   "config.surrogate");
        read_key(s, "hidden", cfg.surrogate.hidden);
        read_key(s, "epochs", cfg.surrogate.epochs);
        read_key(s, "learning_rate", cfg.surrogate.learning_rate);
        read_key(s, "batch_size", cfg.surrogate.batch_size);
        read_key(s, "l2_penalty", cfg.surrogate.l2_penalty);
    }
    if (j.contains("segmentation")) {
        const json& s = j.at("segmentation");
        check_keys(s, {"window", "step"}, "config.segmentation");
        read_key(s, "window", cfg.window);
        read_key(s, "step", cfg.step);
    }
    if (j.contains("importance")) {
        const json& s = j.at("importance");
        check_keys(s, {"quantile", "repetitions"}, "config.importance");
        read_key(s, "quantile", cfg.quantile);
        read_key(s, "repetitions", cfg.repetitions);
    }
    if (j.contains("local")) {
        const json& s = j.at("local");
        check_keys(s, {"step_size", "max_iter", "tolerance", "patience", "jitter", "lambda_prox",
                       "lambda_flip", "change_threshold", "target_policy", "strategy"},
                   "config.local");
        read_key(s, "step_size", cfg.local.step_size);
        read_key(s, "max_iter", cfg.local.max_iter);
        read_key(s, "tolerance", cfg.local.tolerance);
        read_key(s, "patience", cfg.local.patience);
        read_key(s, "jitter", cfg.local.jitter);
        read_key(s, "lambda_prox", cfg.local.lambda_prox);
        read_key(s, "lambda_flip", cfg.local.lambda_flip);
        read_key(s, "change_threshold", cfg.local.change_threshold);
        if (s.contains("target_policy")) {
            cfg.local.policy = target_policy_from_name(s.at("target_policy").get<std::string>());
        }
        if (s.contains("strategy")) {
            cfg.local.strategy = strategy_from_name(s.at("strategy").get<std::string>());
        }
        cfg.local.validate();
    }
    if (j.contains("global")) {
        const json& s = j.at("global");
        check_keys(s, {"pointer_bits", "budget", "n_prototypes", "n_criticisms", "algorithm",
                       "optimal_cap"},
                   "config.global");
        read_key(s, "pointer_bits", cfg.global.pointer_bits);
        read_key(s, "budget", cfg.global.budget);
        read_key(s, "optimal_cap", cfg.global.optimal_cap);
        read_key(s, "n_prototypes", cfg.n_prototypes);
        read_key(s, "n_criticisms", cfg.n_criticisms);
        read_key(s, "algorithm", cfg.algorithm);
        if (cfg.global.pointer_bits < 1.0 || cfg.global.budget < 1) {
            throw Error(errc::config, "pointer_bits and budget must be at least 1");
        }
    }
    cfg.global.change_threshold = cfg.local.change_threshold;
    if (cfg.algorithm != "optimal" && cfg.algorithm != "greedy" &&
        cfg.algorithm != "hierarchical_optimal" && cfg.algorithm != "hierarchical_greedy") {
        throw Error(errc::config, "unknown selection algorithm: " + cfg.algorithm);
    }
    return cfg;
}

json config_to_json(const RunConfig& cfg) {
    json j;
    j["version"] = kConfigVersion;
    j["dataset"] = cfg.dataset;
    j["seed"] = cfg.seed;
    j["train_frac"] = cfg.train_frac;
    j["normalize"] = cfg.normalize;
    j["surrogate"] = {{"hidden", cfg.surrogate.hidden},
                      {"epochs", cfg.surrogate.epochs},
                      {"learning_rate", cfg.surrogate.learning_rate},
                      {"batch_size", cfg.surrogate.batch_size},
                      {"l2_penalty", cfg.surrogate.l2_penalty}};
    j["segmentation"] = {{"window", cfg.window}, {"step", cfg.step}};
    j["importance"] = {{"quantile", cfg.quantile}, {"repetitions", cfg.repetitions}};
    j["local"] = {{"step_size", cfg.local.step_size},
                  {"max_iter", cfg.local.max_iter},
                  {"tolerance", cfg.local.tolerance},
                  {"patience", cfg.local.patience},
                  {"jitter", cfg.local.jitter},
                  {"lambda_prox", cfg.local.lambda_prox},
                  {"lambda_flip", cfg.local.lambda_flip},
                  {"change_threshold", cfg.local.change_threshold},
                  {"target_policy", target_policy_name(cfg.local.policy)},
                  {"strategy", strategy_name(cfg.local.strategy)}};
    j["global"] = {{"pointer_bits", cfg.global.pointer_bits},
                   {"budget", cfg.global.budget},
                   {"n_prototypes", cfg.n_prototypes},
                   {"n_criticisms", cfg.n_criticisms},
                   {"algorithm", cfg.algorithm},
                   {"optimal_cap", cfg.global.optimal_cap}};
    j["sample_fraction"] = cfg.sample_fraction;
    j["output_dir"] = cfg.output_dir;
    return j;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(errc::io, "cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw Error(errc::parse, "config " + path + ": " + e.what());
    }
    return config_from_json(j);
}

json counterfactual_to_json(const Counterfactual& cf) {
    json sparse = json::array();
    for (std::size_t t = 0; t < cf.delta.size(); ++t) {
        if (cf.delta[t] != 0.0) sparse.push_back({static_cast<int>(t), cf.delta[t]});
    }
    json j;
    j["instance_id"] = cf.instance_id;
    j["success"] = true;
    j["source"] = cf.source;
    j["achieved"] = cf.achieved;
    j["target"] = cf.target ? json(*cf.target) : json(nullptr);
    j["strategy"] = strategy_name(cf.mask.strategy);
    j["delta"] = sparse;
    j["l0"] = cf.l0;
    j["l1"] = cf.l1;
    j["l2_cost"] = cf.l2_cost;
    j["iterations"] = cf.iterations;
    j["snap_failed"] = cf.snap_failed;
    return j;
}

json mask_to_json(const ImportanceMask& mask, const std::vector<double>& segment_scores) {
    json j;
    j["strategy"] = strategy_name(mask.strategy);
    j["q"] = mask.quantile;
    j["w"] = mask.w;
    j["segment_scores"] = segment_scores;
    return j;
}

json summary_to_json(const SummarySet& summary, const CandidatePool& pool) {
    json selected = json::array();
    for (int id : summary.selected) {
        const Perturbation* p = nullptr;
        for (const auto& item : pool.items) {
            if (item.id == id) { p = &item; break; }
        }
        json rec;
        rec["id"] = id;
        if (p != nullptr) {
            json sparse = json::array();
            for (std::size_t t = 0; t < p->delta.size(); ++t) {
                if (p->delta[t] != 0.0) sparse.push_back({static_cast<int>(t), p->delta[t]});
            }
            rec["source_instance"] = p->source_instance;
            rec["source_group"] = p->source_group;
            rec["l0"] = p->l0;
            rec["l1"] = p->l1;
            rec["l2_cost"] = p->l2_cost;
            rec["delta"] = sparse;
        }
        selected.push_back(rec);
    }
    json j;
    j["cluster_id"] = summary.cluster_id;
    j["algorithm"] = summary.algorithm;
    j["mu"] = summary.mu;
    j["selected"] = selected;
    j["model_bits"] = summary.model_bits;
    j["data_bits"] = summary.data_bits;
    j["total_bits"] = summary.total_bits;
    j["reduction"] = summary.reduction;
    j["eff"] = summary.eff;
    j["afc"] = optional_number(summary.afc);
    j["covered_ids"] = summary.covered;
    j["runtime_ms"] = summary.runtime_ms;
    return j;
}

json run_train(const RunConfig& cfg, const PipelineIO& io) {
    LoadedData data = load_and_split(cfg);
    TrainConfig tc = cfg.surrogate;
    tc.seed = cfg.seed;
    double t0 = now_ms();
    SurrogateModel model = SurrogateModel::train(data.split_result.train, tc);
    double elapsed = now_ms() - t0;

    model.save((fs::path(io.out_dir) / "model.json").string());

    json corpus_info;
    corpus_info["name"] = data.full.name;
    corpus_info["T"] = data.full.length();
    corpus_info["K"] = data.full.num_clusters;
    corpus_info["label_map"] = data.full.label_map;
    corpus_info["n_train"] = data.split_result.train.size();
    corpus_info["n_test"] = data.split_result.test.size();
    corpus_info["warnings"] = data.split_result.warnings;
    write_text((fs::path(io.out_dir) / "corpus.json").string(), corpus_info.dump(2) + "\n");

    json out;
    out["model_path"] = (fs::path(io.out_dir) / "model.json").string();
    out["train_accuracy"] = model.accuracy(data.split_result.train);
    out["test_accuracy"] = data.split_result.test.size() > 0
                               ? json(model.accuracy(data.split_result.test))
                               : json(nullptr);
    out["corpus"] = corpus_info;
    out["runtime_s"] = io.strip_timing ? 0.0 : elapsed / 1000.0;
    write_text((fs::path(io.out_dir) / "train_report.json").string(), out.dump(2) + "\n");
    return out;
}

json run_segment(const RunConfig& cfg, const PipelineIO& io) {
    LoadedData data = load_and_split(cfg);
    const Corpus& train = data.split_result.train;
    const int T = train.length();
    int w = cfg.window > 0 ? cfg.window : default_window(T);
    int st = cfg.step > 0 ? cfg.step : default_step(T);

    json clusters = json::array();
    for (int k = 0; k < train.num_clusters; ++k) {
        auto members = train.cluster_members(k);
        if (members.empty()) continue;
        std::vector<TimeSeries> series;
        for (int i : members) series.push_back(train.series[static_cast<std::size_t>(i)]);
        SubgroupModel sub = build_subgroups(series, w, st, cfg.seed ^ static_cast<std::uint64_t>(k));

        json medoids = json::array();
        for (const auto& p : sub.patterns) medoids.push_back(p.breakpoints);
        json assignment = json::array();
        for (std::size_t m = 0; m < sub.instance_ids.size(); ++m) {
            assignment.push_back({sub.instance_ids[m], sub.assignment[m]});
        }
        json c;
        c["cluster_id"] = k;
        c["R"] = sub.num_groups();
        c["medoid_breakpoints"] = medoids;
        c["assignment"] = assignment;
        clusters.push_back(c);
    }
    json out;
    out["window"] = w;
    out["step"] = st;
    out["clusters"] = clusters;
    write_text((fs::path(io.out_dir) / "structures.json").string(), out.dump(2) + "\n");
    return out;
}

json run_explain_local(const RunConfig& cfg, const PipelineIO& io) {
    if (!(cfg.sample_fraction > 0.0)) {
        throw Error(errc::config, "sample_fraction must be positive");
    }
    LoadedData data = load_and_split(cfg);
    const Corpus& train = data.split_result.train;
    SurrogateModel model = load_model_artifact(io);

    double t0 = now_ms();
    StructureIndex structures = build_structures(train, model, cfg.window, cfg.step,
                                                 cfg.repetitions, cfg.quantile, cfg.seed);

    std::vector<int> selected_positions;
    std::vector<std::string> warnings;
    for (int k = 0; k < train.num_clusters; ++k) {
        std::vector<int> eligible;
        for (int pos : train.cluster_members(k)) {
            if (model.predict(train.series[static_cast<std::size_t>(pos)]) == k) {
                eligible.push_back(pos);
            }
        }
        if (eligible.empty()) {
            warnings.push_back("cluster " + std::to_string(k) +
                               ": no correctly classified instance to explain");
            continue;
        }
        auto count = static_cast<int>(std::llround(cfg.sample_fraction *
                                                   static_cast<double>(eligible.size())));
        count = std::clamp(count, 1, static_cast<int>(eligible.size()));
        Rng rng(mix64(cfg.seed ^ (0xC0FFEEULL + static_cast<std::uint64_t>(k))));
        rng.shuffle(eligible);
        eligible.resize(static_cast<std::size_t>(count));
        std::sort(eligible.begin(), eligible.end());
        selected_positions.insert(selected_positions.end(), eligible.begin(), eligible.end());
    }
    std::sort(selected_positions.begin(), selected_positions.end());

    const int n = static_cast<int>(selected_positions.size());
    if (n == 0) throw Error(errc::precondition, "no instances selected for explanation");

    std::vector<std::optional<Counterfactual>> cfs(static_cast<std::size_t>(n));
    parallel_for(n, [&](int i) {
        const TimeSeries& x =
            train.series[static_cast<std::size_t>(selected_positions[static_cast<std::size_t>(i)])];
        cfs[static_cast<std::size_t>(i)] =
            galactic_l(x, model, structures, cfg.local,
                       cfg.seed ^ static_cast<std::uint64_t>(x.id));
    });

    std::vector<LocalResult> results;
    json instances = json::array();
    for (int i = 0; i < n; ++i) {
        const TimeSeries& x =
            train.series[static_cast<std::size_t>(selected_positions[static_cast<std::size_t>(i)])];
        LocalResult r;
        r.instance_id = x.id;
        r.counterfactual = cfs[static_cast<std::size_t>(i)];
        r.segmentation = &structures.instance_pattern(x.id);
        results.push_back(std::move(r));
        if (cfs[static_cast<std::size_t>(i)]) {
            json rec = counterfactual_to_json(*cfs[static_cast<std::size_t>(i)]);
            rec["target_policy"] = target_policy_name(cfg.local.policy);
            instances.push_back(rec);
        } else {
            instances.push_back({{"instance_id", x.id},
                                 {"success", false},
                                 {"target_policy", target_policy_name(cfg.local.policy)},
                                 {"strategy", strategy_name(cfg.local.strategy)}});
        }
    }

    EvalReport report = evaluate_local(results);
    report.runtime_s = io.strip_timing ? 0.0 : (now_ms() - t0) / 1000.0;

    json out;
    out["label"] = "local:" + target_policy_name(cfg.local.policy) + "+" +
                   strategy_name(cfg.local.strategy);
    out["policy"] = target_policy_name(cfg.local.policy);
    out["strategy"] = strategy_name(cfg.local.strategy);
    out["metrics"] = report_metrics(report);
    out["warnings"] = warnings;
    out["instances"] = instances;
    write_text((fs::path(io.out_dir) / "local_report.json").string(), out.dump(2) + "\n");
    return out;
}

json run_explain_global(const RunConfig& cfg, const PipelineIO& io) {
    LoadedData data = load_and_split(cfg);
    const Corpus& train = data.split_result.train;
    SurrogateModel model = load_model_artifact(io);

    StructureIndex structures = build_structures(train, model, cfg.window, cfg.step,
                                                 cfg.repetitions, cfg.quantile, cfg.seed);

    json clusters = json::array();
    int total_attempts = 0, total_successes = 0;
    double pooled_cost = 0.0, pooled_act = 0.0, pooled_acs = 0.0, total_runtime_s = 0.0;

    for (int k = 0; k < train.num_clusters; ++k) {
        auto members = train.cluster_members(k);
        if (members.empty()) continue;
        std::vector<TimeSeries> series;
        for (int i : members) series.push_back(train.series[static_cast<std::size_t>(i)]);

        double t_cand = now_ms();
        CandidateGenResult gen =
            generate_candidates(train, k, structures, model, cfg.local, cfg.n_prototypes,
                                cfg.n_criticisms, cfg.global, cfg.seed);
        double cand_ms = now_ms() - t_cand;

        double t_sel = now_ms();
        MdlInstance inst = build_mdl_instance(series, gen.pool, model, cfg.global);
        SummarySet summary;
        std::vector<int> fallback_groups;
        if (cfg.algorithm == "optimal") {
            summary = select_optimal(inst, cfg.global.budget, cfg.global.optimal_cap);
        } else if (cfg.algorithm == "greedy") {
            summary = select_greedy(inst, cfg.global.budget);
        } else {
            const auto& sub = structures.clusters[static_cast<std::size_t>(k)].subgroups;
            std::vector<int> group_of_row(series.size());
            for (std::size_t i = 0; i < series.size(); ++i) {
                group_of_row[i] = structures.group_of(series[i].id);
            }
            InnerAlgorithm inner = cfg.algorithm == "hierarchical_optimal"
                                       ? InnerAlgorithm::Optimal
                                       : InnerAlgorithm::Greedy;
            HierarchicalResult hr = select_hierarchical(inst, group_of_row, sub.num_groups(),
                                                        cfg.global.budget, inner,
                                                        cfg.global.optimal_cap);
            summary = std::move(hr.summary);
            fallback_groups = std::move(hr.fallback_groups);
        }
        double sel_ms = now_ms() - t_sel;
        summary.cluster_id = k;
        summary.runtime_ms = io.strip_timing ? 0.0 : cand_ms + sel_ms;

        std::vector<std::pair<int, const Segmentation*>> segs;
        for (int id : summary.covered) segs.emplace_back(id, &structures.instance_pattern(id));
        EvalReport metrics = evaluate_global(summary, gen.pool, segs,
                                             static_cast<int>(series.size()));
        metrics.runtime_s = io.strip_timing ? 0.0 : (cand_ms + sel_ms) / 1000.0;

        total_attempts += metrics.attempts;
        total_successes += metrics.successes;
        if (metrics.successes > 0) {
            pooled_cost += *metrics.afc * metrics.successes;
            pooled_act += *metrics.act * metrics.successes;
            pooled_acs += *metrics.acs * metrics.successes;
        }
        total_runtime_s += metrics.runtime_s;

        json c = summary_to_json(summary, gen.pool);
        c["metrics"] = report_metrics(metrics);
        c["pool_size"] = gen.pool.items.size();
        c["representatives"] = gen.representative_ids;
        c["warnings"] = gen.warnings;
        c["fallback_groups"] = fallback_groups;
        c["stage_runtime_ms"] = {{"candidates", io.strip_timing ? 0.0 : cand_ms},
                                 {"selection", io.strip_timing ? 0.0 : sel_ms}};
        clusters.push_back(c);
    }

    EvalReport aggregate;
    aggregate.attempts = total_attempts;
    aggregate.successes = total_successes;
    aggregate.eff = total_attempts > 0
                        ? 100.0 * static_cast<double>(total_successes) /
                              static_cast<double>(total_attempts)
                        : 0.0;
    if (total_successes > 0) {
        aggregate.afc = pooled_cost / total_successes;
        aggregate.act = pooled_act / total_successes;
        aggregate.acs = pooled_acs / total_successes;
    }
    aggregate.runtime_s = total_runtime_s;

    json out;
    out["label"] = "global:" + cfg.algorithm;
    out["algorithm"] = cfg.algorithm;
    out["mu"] = cfg.global.budget;
    out["metrics"] = report_metrics(aggregate);
    out["clusters"] = clusters;
    write_text((fs::path(io.out_dir) / "global_report.json").string(), out.dump(2) + "\n");
    return out;
}

json run_evaluate(const std::vector<std::string>& report_paths, const PipelineIO& io) {
    if (report_paths.empty()) throw Error(errc::precondition, "no reports to evaluate");

    struct Row {
        std::string label;
        json metrics;
    };
    std::vector<Row> rows;
    for (const auto& path : report_paths) {
        std::ifstream in(path);
        if (!in) throw Error(errc::io, "cannot open report: " + path);
        json j;
        try {
            in >> j;
        } catch (const std::exception& e) {
            throw Error(errc::parse, "report " + path + ": " + e.what());
        }
        if (!j.contains("metrics")) throw Error(errc::format, "report lacks metrics: " + path);
        rows.push_back({j.value("label", path), j.at("metrics")});
    }

    const char* metric_keys[] = {"eff", "afc", "acs", "act", "runtime_s"};
    std::ostringstream csv;
    csv << "report,eff,afc,acs,act,RT\n";
    for (const auto& row : rows) {
        csv << row.label;
        for (const char* key : metric_keys) {
            csv << ',' << metric_cell(row.metrics.value(key, json(nullptr)));
        }
        csv << '\n';
    }

    json deltas = json::array();
    for (std::size_t a = 0; a < rows.size(); ++a) {
        for (std::size_t b = a + 1; b < rows.size(); ++b) {
            json d;
            d["pair"] = rows[b].label + " - " + rows[a].label;
            csv << "delta(" << rows[b].label << " - " << rows[a].label << ")";
            for (const char* key : metric_keys) {
                json va = rows[a].metrics.value(key, json(nullptr));
                json vb = rows[b].metrics.value(key, json(nullptr));
                if (va.is_null() || vb.is_null()) {
                    d[key] = nullptr;
                    csv << ",-";
                } else {
                    double diff = gain_loss({va.get<double>()}, {vb.get<double>()});
                    d[key] = diff;
                    csv << ',' << metric_cell(json(diff));
                }
            }
            csv << '\n';
            deltas.push_back(d);
        }
    }

    json out;
    json table = json::array();
    for (const auto& row : rows) table.push_back({{"label", row.label}, {"metrics", row.metrics}});
    out["reports"] = table;
    out["deltas"] = deltas;
    write_text((fs::path(io.out_dir) / "evaluation.csv").string(), csv.str());
    write_text((fs::path(io.out_dir) / "evaluation.json").string(), out.dump(2) + "\n");
    return out;
}

}  // namespace galactic
