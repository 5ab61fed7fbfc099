#include "galactic/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "galactic/error.hpp"
#include "galactic/rng.hpp"
#include "galactic/util.hpp"

namespace galactic {

namespace {

using nlohmann::json;

struct AdamState {
    std::vector<double> m, v;
    double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    long long t = 0;

    explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}

    void step(std::vector<double>& params, const std::vector<double>& grad, double lr) {
        ++t;
        double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
        double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
        for (std::size_t i = 0; i < params.size(); ++i) {
            m[i] = beta1 * m[i] + (1.0 - beta1) * grad[i];
            v[i] = beta2 * v[i] + (1.0 - beta2) * grad[i] * grad[i];
            params[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps);
        }
    }
};

void softmax_inplace(std::vector<double>& z) {
    double mx = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (double& v : z) {
        v = std::exp(v - mx);
        sum += v;
    }
    for (double& v : z) v /= sum;
}

}  // namespace

SurrogateModel::SurrogateModel(int input_dim, int hidden, int clusters)
    : input_dim_(input_dim), hidden_(hidden), clusters_(clusters) {
    w1.assign(static_cast<std::size_t>(hidden) * static_cast<std::size_t>(input_dim), 0.0);
    b1.assign(static_cast<std::size_t>(hidden), 0.0);
    w2.assign(static_cast<std::size_t>(clusters) * static_cast<std::size_t>(hidden), 0.0);
    b2.assign(static_cast<std::size_t>(clusters), 0.0);
}

void SurrogateModel::forward(std::span<const double> x, std::vector<double>& hidden_out,
                             std::vector<double>& probs) const {
    hidden_out.assign(static_cast<std::size_t>(hidden_), 0.0);
    for (int h = 0; h < hidden_; ++h) {
        double z = b1[static_cast<std::size_t>(h)];
        const double* row = &w1[static_cast<std::size_t>(h) * static_cast<std::size_t>(input_dim_)];
        for (int t = 0; t < input_dim_; ++t) z += row[t] * x[static_cast<std::size_t>(t)];
        hidden_out[static_cast<std::size_t>(h)] = std::tanh(z);
    }
    probs.assign(static_cast<std::size_t>(clusters_), 0.0);
    for (int k = 0; k < clusters_; ++k) {
        double z = b2[static_cast<std::size_t>(k)];
        const double* row = &w2[static_cast<std::size_t>(k) * static_cast<std::size_t>(hidden_)];
        for (int h = 0; h < hidden_; ++h) z += row[h] * hidden_out[static_cast<std::size_t>(h)];
        probs[static_cast<std::size_t>(k)] = z;
    }
    softmax_inplace(probs);
}

std::vector<double> SurrogateModel::predict_proba(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != input_dim_) {
        throw Error(errc::shape, "series length " + std::to_string(x.size()) +
                                     " does not match model input dimension " +
                                     std::to_string(input_dim_));
    }
    std::vector<double> h, p;
    forward(x, h, p);
    return p;
}

int SurrogateModel::predict(std::span<const double> x) const {
    auto p = predict_proba(x);
    return argmax_lowest(p);
}

std::vector<double> SurrogateModel::input_gradient(std::span<const double> x, int cluster,
                                                   GradientObjective objective) const {
    if (static_cast<int>(x.size()) != input_dim_) {
        throw Error(errc::shape, "series length does not match model input dimension");
    }
    if (cluster < 0 || cluster >= clusters_) {
        throw Error(errc::precondition, "cluster index out of range");
    }
    std::vector<double> h, p;
    forward(x, h, p);

    // d(-log(p_k + zeta))/dz2 = -(p_k / (p_k + zeta)) * (e_k - p)
    double scale = p[static_cast<std::size_t>(cluster)] /
                   (p[static_cast<std::size_t>(cluster)] + kProbFloor);
    if (objective == GradientObjective::LogProb) scale = -scale;

    std::vector<double> dz2(static_cast<std::size_t>(clusters_));
    for (int k = 0; k < clusters_; ++k) {
        double ek = (k == cluster) ? 1.0 : 0.0;
        dz2[static_cast<std::size_t>(k)] = -scale * (ek - p[static_cast<std::size_t>(k)]);
    }

    std::vector<double> dh(static_cast<std::size_t>(hidden_), 0.0);
    for (int k = 0; k < clusters_; ++k) {
        const double* row = &w2[static_cast<std::size_t>(k) * static_cast<std::size_t>(hidden_)];
        for (int hh = 0; hh < hidden_; ++hh) {
            dh[static_cast<std::size_t>(hh)] += dz2[static_cast<std::size_t>(k)] * row[hh];
        }
    }
    for (int hh = 0; hh < hidden_; ++hh) {
        double th = h[static_cast<std::size_t>(hh)];
        dh[static_cast<std::size_t>(hh)] *= (1.0 - th * th);
    }

    std::vector<double> dx(static_cast<std::size_t>(input_dim_), 0.0);
    for (int hh = 0; hh < hidden_; ++hh) {
        const double* row = &w1[static_cast<std::size_t>(hh) * static_cast<std::size_t>(input_dim_)];
        double g = dh[static_cast<std::size_t>(hh)];
        for (int t = 0; t < input_dim_; ++t) dx[static_cast<std::size_t>(t)] += g * row[t];
    }
    return dx;
}

double SurrogateModel::accuracy(const Corpus& corpus) const {
    if (corpus.size() == 0) throw Error(errc::empty_corpus, "accuracy over an empty corpus");
    int hits = 0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        if (predict(corpus.series[i]) == corpus.labels[i]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(corpus.size());
}

SurrogateModel SurrogateModel::train(const Corpus& corpus, const TrainConfig& cfg) {
    if (corpus.size() == 0) throw Error(errc::empty_corpus, "cannot train on an empty corpus");
    if (corpus.num_clusters < 2) {
        throw Error(errc::precondition, "training requires at least two clusters");
    }
    if (cfg.hidden < 1 || cfg.epochs < 1 || cfg.batch_size < 1 ||
        !(cfg.learning_rate > 0.0) || cfg.l2_penalty < 0.0) {
        throw Error(errc::config, "invalid training configuration");
    }

    const int T = corpus.length();
    const int H = cfg.hidden;
    const int K = corpus.num_clusters;
    const auto n = static_cast<int>(corpus.size());

    SurrogateModel model(T, H, K);
    Rng rng(mix64(cfg.seed));
    double r1 = 1.0 / std::sqrt(static_cast<double>(T));
    double r2 = 1.0 / std::sqrt(static_cast<double>(H));
    for (double& w : model.w1) w = (2.0 * rng.uniform01() - 1.0) * r1;
    for (double& w : model.w2) w = (2.0 * rng.uniform01() - 1.0) * r2;

    AdamState adam_w1(model.w1.size());
    AdamState adam_b1(model.b1.size());
    AdamState adam_w2(model.w2.size());
    AdamState adam_b2(model.b2.size());

    std::vector<double> gw1(model.w1.size()), gb1(model.b1.size());
    std::vector<double> gw2(model.w2.size()), gb2(model.b2.size());
    std::vector<double> h, p;

    auto full_batch_loss = [&]() {
        double loss = 0.0;
        for (int i = 0; i < n; ++i) {
            model.forward(corpus.series[static_cast<std::size_t>(i)].values, h, p);
            double pk = p[static_cast<std::size_t>(corpus.labels[static_cast<std::size_t>(i)])];
            loss -= std::log(std::max(pk, kProbFloor));
        }
        loss /= static_cast<double>(n);
        double reg = 0.0;
        for (double w : model.w1) reg += w * w;
        for (double w : model.w2) reg += w * w;
        return loss + 0.5 * cfg.l2_penalty * reg;
    };

    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;

    model.epoch_losses_.reserve(static_cast<std::size_t>(cfg.epochs));
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(order);
        for (int start = 0; start < n; start += cfg.batch_size) {
            int end = std::min(start + cfg.batch_size, n);
            int bs = end - start;
            std::fill(gw1.begin(), gw1.end(), 0.0);
            std::fill(gb1.begin(), gb1.end(), 0.0);
            std::fill(gw2.begin(), gw2.end(), 0.0);
            std::fill(gb2.begin(), gb2.end(), 0.0);

            for (int bi = start; bi < end; ++bi) {
                int i = order[static_cast<std::size_t>(bi)];
                const auto& x = corpus.series[static_cast<std::size_t>(i)].values;
                int label = corpus.labels[static_cast<std::size_t>(i)];
                model.forward(x, h, p);

                // dCE/dz2 = p - onehot(label)
                for (int k = 0; k < K; ++k) {
                    double dz = p[static_cast<std::size_t>(k)] - (k == label ? 1.0 : 0.0);
                    gb2[static_cast<std::size_t>(k)] += dz;
                    double* row = &gw2[static_cast<std::size_t>(k) * static_cast<std::size_t>(H)];
                    for (int hh = 0; hh < H; ++hh) row[hh] += dz * h[static_cast<std::size_t>(hh)];
                }
                for (int hh = 0; hh < H; ++hh) {
                    double acc = 0.0;
                    for (int k = 0; k < K; ++k) {
                        double dz = p[static_cast<std::size_t>(k)] - (k == label ? 1.0 : 0.0);
                        acc += dz * model.w2[static_cast<std::size_t>(k) * static_cast<std::size_t>(H) +
                                             static_cast<std::size_t>(hh)];
                    }
                    double th = h[static_cast<std::size_t>(hh)];
                    double dz1 = acc * (1.0 - th * th);
                    gb1[static_cast<std::size_t>(hh)] += dz1;
                    double* row = &gw1[static_cast<std::size_t>(hh) * static_cast<std::size_t>(T)];
                    for (int t = 0; t < T; ++t) row[t] += dz1 * x[static_cast<std::size_t>(t)];
                }
            }

            double inv = 1.0 / static_cast<double>(bs);
            for (std::size_t j = 0; j < gw1.size(); ++j) gw1[j] = gw1[j] * inv + cfg.l2_penalty * model.w1[j];
            for (std::size_t j = 0; j < gb1.size(); ++j) gb1[j] *= inv;
            for (std::size_t j = 0; j < gw2.size(); ++j) gw2[j] = gw2[j] * inv + cfg.l2_penalty * model.w2[j];
            for (std::size_t j = 0; j < gb2.size(); ++j) gb2[j] *= inv;

            adam_w1.step(model.w1, gw1, cfg.learning_rate);
            adam_b1.step(model.b1, gb1, cfg.learning_rate);
            adam_w2.step(model.w2, gw2, cfg.learning_rate);
            adam_b2.step(model.b2, gb2, cfg.learning_rate);
        }
        double loss = full_batch_loss();
        if (!std::isfinite(loss)) {
            throw Error(errc::training,
                        "non-finite training loss at epoch " + std::to_string(epoch + 1) +
                            "; consider lowering the learning rate");
        }
        model.epoch_losses_.push_back(loss);
    }

    model.epochs_trained_ = cfg.epochs;
    model.train_accuracy_ = model.accuracy(corpus);
    return model;
}

std::string SurrogateModel::to_json_string() const {
    json j;
    j["version"] = "surrogate-v1";
    j["input_dim"] = input_dim_;
    j["hidden"] = hidden_;
    j["clusters"] = clusters_;
    j["w1"] = w1;
    j["b1"] = b1;
    j["w2"] = w2;
    j["b2"] = b2;
    j["epochs"] = epochs_trained_;
    j["train_accuracy"] = train_accuracy_;
    return j.dump(2);
}

SurrogateModel SurrogateModel::from_json_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw Error(errc::parse, std::string("invalid model JSON: ") + e.what());
    }
    if (!j.contains("version") || j["version"] != "surrogate-v1") {
        throw Error(errc::format, "unsupported model version");
    }
    SurrogateModel m(j.at("input_dim").get<int>(), j.at("hidden").get<int>(),
                     j.at("clusters").get<int>());
    m.w1 = j.at("w1").get<std::vector<double>>();
    m.b1 = j.at("b1").get<std::vector<double>>();
    m.w2 = j.at("w2").get<std::vector<double>>();
    m.b2 = j.at("b2").get<std::vector<double>>();
    m.epochs_trained_ = j.at("epochs").get<int>();
    m.train_accuracy_ = j.at("train_accuracy").get<double>();
    auto expect = [](std::size_t got, std::size_t want, const char* name) {
        if (got != want) throw Error(errc::format, std::string("bad shape for ") + name);
    };
    expect(m.w1.size(), static_cast<std::size_t>(m.hidden_) * static_cast<std::size_t>(m.input_dim_), "w1");
    expect(m.b1.size(), static_cast<std::size_t>(m.hidden_), "b1");
    expect(m.w2.size(), static_cast<std::size_t>(m.clusters_) * static_cast<std::size_t>(m.hidden_), "w2");
    expect(m.b2.size(), static_cast<std::size_t>(m.clusters_), "b2");
    for (const auto& v : {std::cref(m.w1), std::cref(m.b1), std::cref(m.w2), std::cref(m.b2)}) {
        for (double w : v.get()) {
            if (!std::isfinite(w)) throw Error(errc::format, "non-finite model parameter");
        }
    }
    return m;
}

void SurrogateModel::save(const std::string& path) const {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path);
    if (!out) throw Error(errc::io, "cannot write model file: " + path);
    out << to_json_string() << '\n';
    if (!out) throw Error(errc::io, "write failed: " + path);
}

SurrogateModel SurrogateModel::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(errc::missing_artifact, "cannot open model file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_string(ss.str());
}

}  // namespace galactic
