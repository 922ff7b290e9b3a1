#include "pfedgame/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pfedgame/kernels.hpp"
#include "pfedgame/rng.hpp"

namespace pfedgame {

std::string to_string(ModelKind k) {
    switch (k) {
        case ModelKind::softmax_regression: return "softmax-regression";
        case ModelKind::mlp_1hidden: return "mlp-1hidden";
    }
    throw std::invalid_argument("unknown model kind");
}

ModelKind model_kind_from_string(const std::string& s) {
    if (s == "softmax-regression") return ModelKind::softmax_regression;
    if (s == "mlp-1hidden") return ModelKind::mlp_1hidden;
    throw std::invalid_argument("unknown model kind '" + s + "'");
}

void ModelSpec::validate() const {
    if (input_dim < 1) throw std::invalid_argument("model.input_dim: must be positive");
    if (num_classes < 2) throw std::invalid_argument("model.num_classes: must be >= 2");
    if (kind == ModelKind::mlp_1hidden && hidden_dim < 1) {
        throw std::invalid_argument("model.hidden_dim: must be positive for mlp-1hidden");
    }
}

std::vector<TensorShape> ModelSpec::layout() const {
    validate();
    if (kind == ModelKind::softmax_regression) {
        return {{"W", {input_dim, num_classes}}, {"b", {num_classes}}};
    }
    return {{"W1", {input_dim, hidden_dim}},
            {"b1", {hidden_dim}},
            {"W2", {hidden_dim, num_classes}},
            {"b2", {num_classes}}};
}

void TrainConfig::validate() const {
    if (epochs < 1) throw std::invalid_argument("train.epochs: must be >= 1");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("train.learning_rate: must be > 0");
    if (batch_size < 1) throw std::invalid_argument("train.batch_size: must be >= 1");
}

Model init_model(const ModelSpec& spec, std::uint64_t seed) {
    const auto layout = spec.layout();
    Model m;
    m.spec = spec;
    m.params.layout = layout;
    m.params.values.resize(layout_element_count(layout), 0.0);

    Rng rng(derive_seed(seed, 0x696e6974ULL));
    std::size_t off = 0;
    for (const auto& t : layout) {
        const std::size_t count = t.element_count();
        if (t.dims.size() == 2) {
            const double fan = double(t.dims[0] + t.dims[1]);
            const double s = std::sqrt(6.0 / fan);
            for (std::size_t i = 0; i < count; ++i) m.params.values[off + i] = rng.uniform(-s, s);
        }
        // 1-d tensors are biases and stay zero
        off += count;
    }
    m.params.validate();
    return m;
}

namespace {

struct Offsets {
    std::size_t w1 = 0, b1 = 0, w2 = 0, b2 = 0;
};

Offsets param_offsets(const ModelSpec& s) {
    Offsets o;
    if (s.kind == ModelKind::softmax_regression) {
        o.w1 = 0;
        o.b1 = s.input_dim * s.num_classes;
    } else {
        o.w1 = 0;
        o.b1 = s.input_dim * s.hidden_dim;
        o.w2 = o.b1 + s.hidden_dim;
        o.b2 = o.w2 + s.hidden_dim * s.num_classes;
    }
    return o;
}

void check_data_compat(const ModelSpec& spec, const Dataset& data, const char* op) {
    data.validate();
    if (data.dim != spec.input_dim) {
        throw std::invalid_argument(std::string(op) + ": dataset dim " +
                                    std::to_string(data.dim) + " != model input_dim " +
                                    std::to_string(spec.input_dim));
    }
    if (data.num_classes != spec.num_classes) {
        throw std::invalid_argument(std::string(op) + ": dataset classes " +
                                    std::to_string(data.num_classes) + " != model classes " +
                                    std::to_string(spec.num_classes));
    }
}

// logits for the whole matrix X[n x d]
std::vector<double> forward_logits(const Model& m, const double* x, std::size_t n) {
    const auto& s = m.spec;
    const auto o = param_offsets(s);
    const double* p = m.params.values.data();
    std::vector<double> logits(n * s.num_classes);
    if (s.kind == ModelKind::softmax_regression) {
        kernels::matmul_bias(x, n, s.input_dim, p + o.w1, p + o.b1, s.num_classes, logits.data());
        return logits;
    }
    std::vector<double> hidden(n * s.hidden_dim);
    kernels::matmul_bias(x, n, s.input_dim, p + o.w1, p + o.b1, s.hidden_dim, hidden.data());
    for (double& v : hidden) v = std::max(0.0, v);
    kernels::matmul_bias(hidden.data(), n, s.hidden_dim, p + o.w2, p + o.b2, s.num_classes,
                         logits.data());
    return logits;
}

void col_sums_scaled(const double* m, std::size_t n, std::size_t c, double scale, double* out) {
    for (std::size_t k = 0; k < c; ++k) out[k] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < c; ++k) out[k] += m[i * c + k];
    }
    for (std::size_t k = 0; k < c; ++k) out[k] *= scale;
}

// Mean cross-entropy gradient over (x, y), written into grad (same layout as
// the parameter vector).
void batch_gradient(const ModelSpec& s, const double* params, const double* x, const int* y,
                    std::size_t n, double* grad) {
    const auto o = param_offsets(s);
    const double inv_n = 1.0 / double(n);

    if (s.kind == ModelKind::softmax_regression) {
        std::vector<double> logits(n * s.num_classes);
        kernels::matmul_bias(x, n, s.input_dim, params + o.w1, params + o.b1, s.num_classes,
                             logits.data());
        std::vector<double> gz(n * s.num_classes);
        kernels::softmax_xent_grad(logits.data(), n, s.num_classes, y, gz.data());
        kernels::matmul_at_b(x, n, s.input_dim, gz.data(), s.num_classes, inv_n, grad + o.w1);
        col_sums_scaled(gz.data(), n, s.num_classes, inv_n, grad + o.b1);
        return;
    }

    std::vector<double> z1(n * s.hidden_dim);
    kernels::matmul_bias(x, n, s.input_dim, params + o.w1, params + o.b1, s.hidden_dim, z1.data());
    std::vector<double> a1(z1);
    for (double& v : a1) v = std::max(0.0, v);

    std::vector<double> logits(n * s.num_classes);
    kernels::matmul_bias(a1.data(), n, s.hidden_dim, params + o.w2, params + o.b2, s.num_classes,
                         logits.data());
    std::vector<double> gz2(n * s.num_classes);
    kernels::softmax_xent_grad(logits.data(), n, s.num_classes, y, gz2.data());

    kernels::matmul_at_b(a1.data(), n, s.hidden_dim, gz2.data(), s.num_classes, inv_n,
                         grad + o.w2);
    col_sums_scaled(gz2.data(), n, s.num_classes, inv_n, grad + o.b2);

    std::vector<double> gz1(n * s.hidden_dim);
    kernels::matmul_a_bt(gz2.data(), n, s.num_classes, params + o.w2, s.hidden_dim, gz1.data());
    for (std::size_t i = 0; i < gz1.size(); ++i) {
        if (z1[i] <= 0.0) gz1[i] = 0.0;
    }
    kernels::matmul_at_b(x, n, s.input_dim, gz1.data(), s.hidden_dim, inv_n, grad + o.w1);
    col_sums_scaled(gz1.data(), n, s.hidden_dim, inv_n, grad + o.b1);
}

}  // namespace

Model train_local(const Model& model, const Dataset& data, const TrainConfig& cfg) {
    check_data_compat(model.spec, data, "train_local");
    if (data.n() == 0) throw std::invalid_argument("train_local: empty dataset");
    if (cfg.learning_rate < 0.0) throw std::invalid_argument("train_local: negative learning rate");
    if (cfg.batch_size < 1) throw std::invalid_argument("train_local: batch_size must be >= 1");
    model.params.validate();

    Model out = model;
    const std::size_t n = data.n();
    const std::size_t d = data.dim;
    const std::size_t nparams = out.params.size();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(derive_seed(cfg.seed, 0x73676400ULL));

    std::vector<double> xb(cfg.batch_size * d);
    std::vector<int> yb(cfg.batch_size);
    std::vector<double> grad(nparams);

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t start = 0; start < n; start += cfg.batch_size) {
            const std::size_t b = std::min(cfg.batch_size, n - start);
            for (std::size_t i = 0; i < b; ++i) {
                const std::size_t r = order[start + i];
                std::copy_n(data.row(r), d, xb.data() + i * d);
                yb[i] = data.labels[r];
            }
            batch_gradient(out.spec, out.params.values.data(), xb.data(), yb.data(), b,
                           grad.data());
            for (std::size_t j = 0; j < nparams; ++j) {
                out.params.values[j] -= cfg.learning_rate * grad[j];
            }
        }
    }
    out.params.validate();
    return out;
}

std::vector<int> predict(const Model& model, const Dataset& data) {
    check_data_compat(model.spec, data, "predict");
    const std::size_t c = model.spec.num_classes;
    const auto logits = forward_logits(model, data.features.data(), data.n());
    std::vector<int> out(data.n());
    for (std::size_t i = 0; i < data.n(); ++i) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < c; ++k) {
            if (logits[i * c + k] > logits[i * c + best]) best = k;
        }
        out[i] = static_cast<int>(best);
    }
    return out;
}

double evaluate_accuracy(const Model& model, const Dataset& data) {
    check_data_compat(model.spec, data, "evaluate_accuracy");
    if (data.n() == 0) {
        throw std::invalid_argument("evaluate_accuracy: empty dataset");
    }
    const auto logits = forward_logits(model, data.features.data(), data.n());
    const std::size_t correct =
        kernels::count_correct(logits.data(), data.n(), model.spec.num_classes,
                               data.labels.data());
    return double(correct) / double(data.n());
}

double cross_entropy_loss(const Model& model, const Dataset& data) {
    check_data_compat(model.spec, data, "cross_entropy_loss");
    if (data.n() == 0) throw std::invalid_argument("cross_entropy_loss: empty dataset");
    const std::size_t c = model.spec.num_classes;
    const auto logits = forward_logits(model, data.features.data(), data.n());
    double total = 0.0;
    for (std::size_t i = 0; i < data.n(); ++i) {
        const double* z = logits.data() + i * c;
        double m = z[0];
        for (std::size_t k = 1; k < c; ++k) m = std::max(m, z[k]);
        double sum = 0.0;
        for (std::size_t k = 0; k < c; ++k) sum += std::exp(z[k] - m);
        total += (std::log(sum) + m) - z[static_cast<std::size_t>(data.labels[i])];
    }
    return total / double(data.n());
}

ParamVector loss_gradient(const Model& model, const Dataset& data) {
    check_data_compat(model.spec, data, "loss_gradient");
    if (data.n() == 0) throw std::invalid_argument("loss_gradient: empty dataset");
    ParamVector g;
    g.layout = model.params.layout;
    g.values.resize(model.params.size());
    batch_gradient(model.spec, model.params.values.data(), data.features.data(),
                   data.labels.data(), data.n(), g.values.data());
    return g;
}

Model aggregate(const std::vector<Model>& models, const std::vector<double>& weights) {
    if (models.empty()) throw std::invalid_argument("aggregate: no models");
    if (models.size() != weights.size()) {
        throw std::invalid_argument("aggregate: weights length != models length");
    }
    for (const auto& m : models) {
        if (!(m.spec == models[0].spec)) {
            throw std::invalid_argument("aggregate: model spec mismatch");
        }
        m.params.validate();
    }
    double sum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw std::invalid_argument("aggregate: negative weight");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("aggregate: weights sum to " + std::to_string(sum) +
                                    ", expected 1");
    }

    std::vector<const double*> srcs;
    srcs.reserve(models.size());
    for (const auto& m : models) srcs.push_back(m.params.values.data());

    Model out;
    out.spec = models[0].spec;
    out.params.layout = models[0].params.layout;
    out.params.values.resize(models[0].params.size());
    kernels::convex_combine(srcs, weights, out.params.size(), out.params.values.data());
    out.params.validate();
    return out;
}

std::vector<double> fedavg_weights(const std::vector<std::int64_t>& sizes) {
    if (sizes.empty()) throw std::invalid_argument("fedavg_weights: no sizes");
    std::int64_t total = 0;
    for (std::int64_t s : sizes) {
        if (s < 0) throw std::invalid_argument("fedavg_weights: negative size");
        total += s;
    }
    if (total < 1) throw std::invalid_argument("fedavg_weights: all sizes are zero");
    std::vector<double> w(sizes.size());
    for (std::size_t i = 0; i < sizes.size(); ++i) w[i] = double(sizes[i]) / double(total);
    return w;
}

}  // namespace pfedgame
