#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pfedgame/dataset.hpp"
#include "pfedgame/param_vector.hpp"

namespace pfedgame {

enum class ModelKind { softmax_regression, mlp_1hidden };

std::string to_string(ModelKind k);
ModelKind model_kind_from_string(const std::string& s);

/// Architecture descriptor. Two models with equal specs have parameter
/// vectors of equal layout, which is what makes them aggregation-compatible.
struct ModelSpec {
    ModelKind kind = ModelKind::softmax_regression;
    std::size_t input_dim = 0;
    std::size_t hidden_dim = 0;  // mlp_1hidden only; activation is ReLU
    std::size_t num_classes = 0;

    void validate() const;
    std::vector<TensorShape> layout() const;
    bool operator==(const ModelSpec&) const = default;
};

struct Model {
    ModelSpec spec;
    ParamVector params;
};

/// Mini-batch SGD settings for one train_local call. The simulator derives
/// the seed per (node, round); standalone callers set it directly.
struct TrainConfig {
    std::size_t epochs = 1;
    double learning_rate = 0.1;
    std::size_t batch_size = 32;
    std::uint64_t seed = 0;

    /// Config-boundary validation: rejects learning_rate <= 0. The training
    /// routine itself accepts 0 (the no-op step-size limit).
    void validate() const;
};

/// Parameters drawn uniformly from [-s, s] with s = sqrt(6/(fan_in+fan_out))
/// per weight tensor; biases zero. Deterministic for a fixed (spec, seed).
Model init_model(const ModelSpec& spec, std::uint64_t seed);

/// Mini-batch SGD on softmax cross-entropy, continuing from the input
/// parameters (never re-initializing). Deterministic for fixed inputs.
Model train_local(const Model& model, const Dataset& data, const TrainConfig& cfg);

/// Predicted class per row; argmax over logits, lowest class index on ties.
std::vector<int> predict(const Model& model, const Dataset& data);

/// Fraction of rows predicted correctly. Errors on an empty dataset.
double evaluate_accuracy(const Model& model, const Dataset& data);

/// Mean softmax cross-entropy over the dataset.
double cross_entropy_loss(const Model& model, const Dataset& data);

/// Analytic full-batch gradient of cross_entropy_loss w.r.t. the parameters.
ParamVector loss_gradient(const Model& model, const Dataset& data);

/// Element-wise weighted sum of parameter vectors. Requires equal specs,
/// non-negative weights, and sum(weights) == 1 within 1e-9.
Model aggregate(const std::vector<Model>& models, const std::vector<double>& weights);

/// FedAvg weights n_k / n. Errors when all sizes are zero.
std::vector<double> fedavg_weights(const std::vector<std::int64_t>& sizes);

}  // namespace pfedgame
