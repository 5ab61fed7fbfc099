#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "galactic/types.hpp"

namespace galactic {

struct TrainConfig {
    int hidden = 64;
    int epochs = 200;
    double learning_rate = 1e-3;
    int batch_size = 32;
    std::uint64_t seed = 0;
    double l2_penalty = 1e-4;
};

enum class GradientObjective { NegLogProb, LogProb };

// Dense network T -> H -> K with tanh hidden layer and softmax output,
// trained by hand-rolled backprop with Adam. Immutable after training;
// predict/gradient calls are safe from multiple threads.
class SurrogateModel {
public:
    SurrogateModel() = default;
    SurrogateModel(int input_dim, int hidden, int clusters);  // zero weights

    static SurrogateModel train(const Corpus& corpus, const TrainConfig& cfg);

    std::vector<double> predict_proba(std::span<const double> x) const;
    std::vector<double> predict_proba(const TimeSeries& x) const { return predict_proba(std::span<const double>(x.values)); }

    // argmax of predict_proba, ties to the lowest cluster index.
    int predict(std::span<const double> x) const;
    int predict(const TimeSeries& x) const { return predict(std::span<const double>(x.values)); }

    // Analytic gradient of +/- log(g_k(x) + zeta) with respect to x.
    std::vector<double> input_gradient(std::span<const double> x, int cluster,
                                       GradientObjective objective) const;

    double accuracy(const Corpus& corpus) const;

    std::string to_json_string() const;
    static SurrogateModel from_json_string(const std::string& text);
    void save(const std::string& path) const;
    static SurrogateModel load(const std::string& path);

    int input_dim() const { return input_dim_; }
    int hidden() const { return hidden_; }
    int num_clusters() const { return clusters_; }
    int epochs_trained() const { return epochs_trained_; }
    double train_accuracy() const { return train_accuracy_; }
    const std::vector<double>& epoch_losses() const { return epoch_losses_; }

    // Parameters are exposed for tests and serialization. w1 is H x T
    // row-major, w2 is K x H row-major.
    std::vector<double> w1, b1, w2, b2;

    static constexpr double kProbFloor = 1e-12;

private:
    int input_dim_ = 0;
    int hidden_ = 0;
    int clusters_ = 0;
    int epochs_trained_ = 0;
    double train_accuracy_ = 0.0;
    std::vector<double> epoch_losses_;

    void forward(std::span<const double> x, std::vector<double>& hidden_out,
                 std::vector<double>& probs) const;
};

}  // namespace galactic
