#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "galactic/local_search.hpp"
#include "galactic/mdl.hpp"
#include "galactic/surrogate.hpp"

namespace galactic {

using nlohmann::json;

// Configuration for an end-to-end run. Serialized as strict JSON: unknown
// keys are rejected so typos in experiment files fail loudly.
struct RunConfig {
    std::string dataset;
    std::uint64_t seed = 0;
    double train_frac = 0.8;
    bool normalize = true;
    TrainConfig surrogate;
    int window = 0;  // 0 selects the length-based default
    int step = 0;
    double quantile = 0.75;
    int repetitions = 5;
    LocalConfig local;
    MdlParams global;
    int n_prototypes = 4;
    int n_criticisms = 2;
    std::string algorithm = "greedy";
    double sample_fraction = 0.30;
    std::string output_dir = "out";
};

inline constexpr const char* kConfigVersion = "galactic-config-v1";

RunConfig config_from_json(const json& j);
json config_to_json(const RunConfig& cfg);
RunConfig load_config(const std::string& path);

struct PipelineIO {
    std::string out_dir;
    bool strip_timing = false;
};

json counterfactual_to_json(const Counterfactual& cf);
json summary_to_json(const SummarySet& summary, const CandidatePool& pool);
json mask_to_json(const ImportanceMask& mask, const std::vector<double>& segment_scores);

json run_train(const RunConfig& cfg, const PipelineIO& io);
json run_segment(const RunConfig& cfg, const PipelineIO& io);
json run_explain_local(const RunConfig& cfg, const PipelineIO& io);
json run_explain_global(const RunConfig& cfg, const PipelineIO& io);
json run_evaluate(const std::vector<std::string>& report_paths, const PipelineIO& io);

}  // namespace galactic
