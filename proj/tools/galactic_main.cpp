#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "galactic/dataset.hpp"
#include "galactic/error.hpp"
#include "galactic/pipeline.hpp"
#include "galactic/synthetic.hpp"

namespace {

using galactic::PipelineIO;
using galactic::RunConfig;

struct CommonArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    bool strip_timing = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required = true) {
    auto* opt = cmd->add_option("--config", args.config_path, "run configuration (JSON)");
    if (config_required) opt->required();
    cmd->add_option("--seed", args.seed, "override the config seed");
    cmd->add_option("--out", args.out_dir, "override the output directory");
    cmd->add_flag("--strip-timing", args.strip_timing, "zero runtime fields in emitted reports");
}

std::pair<RunConfig, PipelineIO> resolve(const CommonArgs& args) {
    RunConfig cfg = galactic::load_config(args.config_path);
    if (args.seed) cfg.seed = *args.seed;
    PipelineIO io;
    io.out_dir = args.out_dir.empty() ? cfg.output_dir : args.out_dir;
    io.strip_timing = args.strip_timing;
    return {cfg, io};
}

int run_selftest(const std::string& out_dir, bool strip_timing) {
    namespace fs = std::filesystem;
    fs::path dir = out_dir.empty() ? fs::path("selftest_out") : fs::path(out_dir);
    fs::create_directories(dir);

    galactic::SyntheticSpec spec;
    spec.per_cluster = 20;
    galactic::Corpus corpus = galactic::make_synthetic_corpus(spec);
    std::string dataset = (dir / "synthetic.tsv").string();
    galactic::save_ucr(corpus, dataset);
    std::printf("[ok] wrote fixture %s (N=%zu, T=%d, K=%d)\n", dataset.c_str(), corpus.size(),
                corpus.length(), corpus.num_clusters);

    RunConfig cfg;
    cfg.dataset = dataset;
    cfg.seed = 7;
    cfg.normalize = false;  // the fixture is already on a unit scale
    cfg.surrogate.epochs = 120;
    cfg.local.lambda_flip = 4.0;  // the small surrogate's gradients are mild
    cfg.n_prototypes = 3;
    cfg.n_criticisms = 1;
    cfg.output_dir = (dir / "out").string();

    std::ofstream(dir / "config.json") << galactic::config_to_json(cfg).dump(2) << "\n";

    PipelineIO io{cfg.output_dir, strip_timing};
    auto train = galactic::run_train(cfg, io);
    double acc = train.at("train_accuracy").get<double>();
    std::printf("[%s] train: accuracy %.3f\n", acc >= 0.95 ? "ok" : "FAIL", acc);

    galactic::run_segment(cfg, io);
    std::printf("[ok] segment: structures.json written\n");

    auto local = galactic::run_explain_local(cfg, io);
    double eff = local.at("metrics").at("eff").get<double>();
    std::printf("[%s] explain-local: eff %.1f%%\n", eff >= 90.0 ? "ok" : "FAIL", eff);

    auto global = galactic::run_explain_global(cfg, io);
    double geff = global.at("metrics").at("eff").get<double>();
    std::printf("[ok] explain-global: eff %.1f%%\n", geff);

    std::vector<std::string> reports = {
        (fs::path(cfg.output_dir) / "local_report.json").string(),
        (fs::path(cfg.output_dir) / "global_report.json").string()};
    galactic::run_evaluate(reports, io);
    std::printf("[ok] evaluate: evaluation.csv written\n");

    bool pass = acc >= 0.95 && eff >= 90.0;
    std::printf("%s\n", pass ? "selftest passed" : "selftest FAILED");
    return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"counterfactual explanations for time-series clusterings"};
    app.require_subcommand(1);

    CommonArgs train_args, segment_args, local_args, global_args, eval_args;
    std::vector<std::string> report_paths;
    std::string selftest_out;
    bool selftest_strip = false;

    auto* cmd_train = app.add_subcommand("train", "fit and store the surrogate classifier");
    add_common(cmd_train, train_args);

    auto* cmd_segment = app.add_subcommand("segment", "emit per-cluster subgroup structures");
    add_common(cmd_segment, segment_args);

    auto* cmd_local = app.add_subcommand("explain-local", "per-instance counterfactual search");
    add_common(cmd_local, local_args);

    auto* cmd_global = app.add_subcommand("explain-global", "per-cluster summary selection");
    add_common(cmd_global, global_args);

    auto* cmd_eval = app.add_subcommand("evaluate", "join reports into a comparison table");
    add_common(cmd_eval, eval_args, /*config_required=*/false);
    cmd_eval->add_option("reports", report_paths, "report JSON files")->required();

    auto* cmd_selftest = app.add_subcommand("selftest", "end-to-end run on a synthetic fixture");
    cmd_selftest->add_option("--out", selftest_out, "directory for the fixture and outputs");
    cmd_selftest->add_flag("--strip-timing", selftest_strip, "zero runtime fields");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_train->parsed()) {
            auto [cfg, io] = resolve(train_args);
            auto out = galactic::run_train(cfg, io);
            std::printf("trained: accuracy %.4f, model at %s\n",
                        out.at("train_accuracy").get<double>(),
                        out.at("model_path").get<std::string>().c_str());
        } else if (cmd_segment->parsed()) {
            auto [cfg, io] = resolve(segment_args);
            auto out = galactic::run_segment(cfg, io);
            std::printf("segmented %zu clusters\n", out.at("clusters").size());
        } else if (cmd_local->parsed()) {
            auto [cfg, io] = resolve(local_args);
            auto out = galactic::run_explain_local(cfg, io);
            std::printf("explain-local: eff %.2f%% over %d instances\n",
                        out.at("metrics").at("eff").get<double>(),
                        out.at("metrics").at("attempts").get<int>());
        } else if (cmd_global->parsed()) {
            auto [cfg, io] = resolve(global_args);
            auto out = galactic::run_explain_global(cfg, io);
            std::printf("explain-global: eff %.2f%% across %zu clusters\n",
                        out.at("metrics").at("eff").get<double>(), out.at("clusters").size());
        } else if (cmd_eval->parsed()) {
            PipelineIO io;
            if (!eval_args.config_path.empty()) {
                RunConfig cfg = galactic::load_config(eval_args.config_path);
                io.out_dir = cfg.output_dir;
            }
            if (!eval_args.out_dir.empty()) io.out_dir = eval_args.out_dir;
            if (io.out_dir.empty()) io.out_dir = ".";
            io.strip_timing = eval_args.strip_timing;
            galactic::run_evaluate(report_paths, io);
            std::printf("evaluation written to %s\n", io.out_dir.c_str());
        } else if (cmd_selftest->parsed()) {
            return run_selftest(selftest_out, selftest_strip);
        }
    } catch (const galactic::Error& e) {
        std::cerr << "error[" << e.code() << "]: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error[internal]: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
