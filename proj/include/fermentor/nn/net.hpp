#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace fermentor::nn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

class NnError : public std::runtime_error {
  public:
    explicit NnError(const std::string& what) : std::runtime_error(what) {}
};

enum class Activation { Identity, Tanh, Sigmoid, Tanh01 };

inline std::string activation_name(Activation a) {
    switch (a) {
        case Activation::Identity: return "identity";
        case Activation::Tanh: return "tanh";
        case Activation::Sigmoid: return "sigmoid";
        default: return "tanh01";
    }
}

inline Activation activation_from_name(const std::string& name) {
    if (name == "identity") return Activation::Identity;
    if (name == "tanh") return Activation::Tanh;
    if (name == "sigmoid") return Activation::Sigmoid;
    if (name == "tanh01") return Activation::Tanh01;
    throw NnError("unknown activation: " + name);
}

struct LayerSpec {
    int in_dim = 0;
    int out_dim = 0;
    Activation activation = Activation::Identity;
    bool batch_norm = false;
};

struct LayerParams {
    Matrix weights;  // out_dim x in_dim
    Vector bias;     // out_dim
    Vector bn_gamma, bn_beta, running_mean, running_var;  // out_dim when batch_norm
};

struct DenseNet {
    std::vector<LayerSpec> spec;
    std::vector<LayerParams> layers;
    std::uint64_t rng_seed = 0;

    int in_dim() const { return spec.front().in_dim; }
    int out_dim() const { return spec.back().out_dim; }
};

inline constexpr double kBnEpsilon = 1e-5;
inline constexpr double kBnMomentum = 0.1;

/// Weights plus biases, summed over the layer chain.
inline std::int64_t parameter_count(const std::vector<LayerSpec>& spec) {
    std::int64_t n = 0;
    for (const auto& l : spec) n += static_cast<std::int64_t>(l.in_dim) * l.out_dim + l.out_dim;
    return n;
}

inline void validate_spec(const std::vector<LayerSpec>& spec) {
    if (spec.empty()) throw NnError("network needs at least one layer");
    for (std::size_t i = 0; i < spec.size(); ++i) {
        if (spec[i].in_dim < 1 || spec[i].out_dim < 1)
            throw NnError("layer " + std::to_string(i) + ": dimensions must be >= 1");
        if (i > 0 && spec[i].in_dim != spec[i - 1].out_dim)
            throw NnError("layer " + std::to_string(i) + ": input dimension does not chain");
    }
}

/// Uniform(-a, a) init with a = sqrt(6 / (in + out)); biases zero, batch-norm
/// scale one and shift zero. The same seed reproduces the same parameters.
inline DenseNet init(const std::vector<LayerSpec>& spec, std::uint64_t seed) {
    validate_spec(spec);
    DenseNet net;
    net.spec = spec;
    net.rng_seed = seed;
    std::mt19937_64 rng(seed);
    for (const auto& l : spec) {
        double a = std::sqrt(6.0 / (l.in_dim + l.out_dim));
        std::uniform_real_distribution<double> dist(-a, a);
        LayerParams p;
        p.weights = Matrix::NullaryExpr(l.out_dim, l.in_dim, [&]() { return dist(rng); });
        p.bias = Vector::Zero(l.out_dim);
        if (l.batch_norm) {
            p.bn_gamma = Vector::Ones(l.out_dim);
            p.bn_beta = Vector::Zero(l.out_dim);
            p.running_mean = Vector::Zero(l.out_dim);
            p.running_var = Vector::Ones(l.out_dim);
        }
        net.layers.push_back(std::move(p));
    }
    return net;
}

namespace detail {

inline Matrix activate(const Matrix& z, Activation a) {
    switch (a) {
        case Activation::Identity: return z;
        case Activation::Tanh: return z.array().tanh().matrix();
        case Activation::Sigmoid: return (1.0 / (1.0 + (-z.array()).exp())).matrix();
        default: return ((z.array().tanh() + 1.0) / 2.0).matrix();
    }
}

// derivative expressed through the activation value
inline Matrix activate_grad(const Matrix& value, Activation a) {
    switch (a) {
        case Activation::Identity: return Matrix::Ones(value.rows(), value.cols());
        case Activation::Tanh: return (1.0 - value.array().square()).matrix();
        case Activation::Sigmoid: return (value.array() * (1.0 - value.array())).matrix();
        default: {
            Eigen::ArrayXXd t = 2.0 * value.array() - 1.0;  // tanh(z)
            return ((1.0 - t.square()) / 2.0).matrix();
        }
    }
}

}  // namespace detail

struct LayerCache {
    Matrix input;       // n x in_dim
    Matrix pre_norm;    // n x out_dim, affine output
    Matrix normalized;  // n x out_dim, (z - mu)/sqrt(var+eps), batch_norm only
    Vector mean, var;   // batch statistics, batch_norm only
    Matrix activated;   // n x out_dim, layer output
};

struct ForwardResult {
    Matrix output;  // n x out_dim
    std::vector<LayerCache> cache;
};

enum class Mode { Train, Infer };

/// Row-per-sample forward pass. Training mode normalizes with batch
/// statistics (n >= 2 required) and caches everything backward needs;
/// inference uses the stored running statistics. The net itself is not
/// modified - running-average updates are applied by the train loop.
inline ForwardResult forward(const DenseNet& net, const Matrix& batch, Mode mode) {
    if (batch.cols() != net.in_dim())
        throw NnError("forward: expected " + std::to_string(net.in_dim()) + " columns, got " +
                      std::to_string(batch.cols()));
    ForwardResult r;
    r.cache.reserve(net.layers.size());
    Matrix x = batch;
    for (std::size_t i = 0; i < net.layers.size(); ++i) {
        const auto& spec = net.spec[i];
        const auto& p = net.layers[i];
        LayerCache c;
        c.input = x;
        Matrix z = (x * p.weights.transpose()).rowwise() + p.bias.transpose();
        c.pre_norm = z;
        if (spec.batch_norm) {
            if (mode == Mode::Train) {
                if (batch.rows() < 2) throw NnError("forward: batch norm needs at least 2 rows in training mode");
                c.mean = z.colwise().mean();
                Matrix centered = z.rowwise() - c.mean.transpose();
                c.var = centered.array().square().colwise().mean();
                Matrix denom = (c.var.array() + kBnEpsilon).sqrt().matrix().transpose().replicate(z.rows(), 1);
                c.normalized = centered.array() / denom.array();
            } else {
                Matrix centered = z.rowwise() - p.running_mean.transpose();
                Matrix denom = (p.running_var.array() + kBnEpsilon).sqrt().matrix().transpose().replicate(z.rows(), 1);
                c.normalized = centered.array() / denom.array();
            }
            z = (c.normalized.array().rowwise() * p.bn_gamma.transpose().array()).matrix().rowwise() +
                p.bn_beta.transpose();
        }
        c.activated = detail::activate(z, spec.activation);
        x = c.activated;
        r.cache.push_back(std::move(c));
    }
    if (!x.allFinite()) throw NnError("forward: non-finite output");
    r.output = x;
    return r;
}

struct Gradients {
    std::vector<Matrix> weights;
    std::vector<Vector> bias;
    std::vector<Vector> bn_gamma, bn_beta;
    Matrix input;  // dLoss/dInput of the whole net
};

/// Reverse-mode gradients for every parameter given dLoss/dOutput. The cache
/// must come from a training-mode forward over the same batch.
inline Gradients backward(const DenseNet& net, const ForwardResult& fwd, const Matrix& output_grad) {
    if (fwd.cache.size() != net.layers.size()) throw NnError("backward: stale forward cache");
    const auto n = fwd.output.rows();
    if (output_grad.rows() != n || output_grad.cols() != fwd.output.cols())
        throw NnError("backward: gradient shape mismatch");

    Gradients g;
    g.weights.resize(net.layers.size());
    g.bias.resize(net.layers.size());
    g.bn_gamma.resize(net.layers.size());
    g.bn_beta.resize(net.layers.size());

    Matrix delta = output_grad;
    for (int i = static_cast<int>(net.layers.size()) - 1; i >= 0; --i) {
        const auto& spec = net.spec[i];
        const auto& p = net.layers[i];
        const auto& c = fwd.cache[i];

        delta = (delta.array() * detail::activate_grad(c.activated, spec.activation).array()).matrix();

        if (spec.batch_norm) {
            // gradients through y = gamma * xhat + beta with batch statistics
            g.bn_gamma[i] = (delta.array() * c.normalized.array()).colwise().sum();
            g.bn_beta[i] = delta.colwise().sum();
            Matrix dxhat = delta.array().rowwise() * p.bn_gamma.transpose().array();
            const double m = static_cast<double>(c.pre_norm.rows());
            Eigen::ArrayXd inv_std = 1.0 / (c.var.array() + kBnEpsilon).sqrt();
            Matrix centered = c.pre_norm.rowwise() - c.mean.transpose();
            Eigen::ArrayXd dvar =
                (dxhat.array() * centered.array()).colwise().sum().transpose() * -0.5 * inv_std.pow(3);
            Eigen::ArrayXd dmean = (dxhat.array().rowwise() * (-inv_std).transpose()).colwise().sum().transpose() +
                                   dvar * (-2.0 / m) * centered.array().colwise().sum().transpose();
            delta = ((dxhat.array().rowwise() * inv_std.transpose()) +
                     (centered.array().rowwise() * (dvar * 2.0 / m).transpose())).matrix();
            delta.array().rowwise() += (dmean / m).transpose();
        }

        g.weights[i] = delta.transpose() * c.input;
        g.bias[i] = delta.colwise().sum();
        delta = delta * p.weights;
    }
    g.input = delta;
    return g;
}

/// Mean of squared differences.
inline double mse(const Eigen::Ref<const Vector>& pred, const Eigen::Ref<const Vector>& target) {
    if (pred.size() != target.size()) throw NnError("mse: length mismatch");
    if (pred.size() == 0) throw NnError("mse: empty input");
    return (pred - target).squaredNorm() / static_cast<double>(pred.size());
}

struct TrainConfig {
    double learning_rate = 0.01;
    double loss_threshold = 1e-8;
    int max_epochs = 1000;
    int batch_size = 16;
    std::uint64_t seed = 0;
};

struct TrainResult {
    DenseNet net;
    std::vector<double> loss_trace;  // epoch-mean loss
};

inline void sgd_step(DenseNet& net, const Gradients& g, double lr) {
    for (std::size_t i = 0; i < net.layers.size(); ++i) {
        net.layers[i].weights -= lr * g.weights[i];
        net.layers[i].bias -= lr * g.bias[i];
        if (net.spec[i].batch_norm) {
            net.layers[i].bn_gamma -= lr * g.bn_gamma[i];
            net.layers[i].bn_beta -= lr * g.bn_beta[i];
        }
    }
}

inline void update_running_stats(DenseNet& net, const ForwardResult& fwd) {
    for (std::size_t i = 0; i < net.layers.size(); ++i) {
        if (!net.spec[i].batch_norm) continue;
        auto& p = net.layers[i];
        p.running_mean = (1.0 - kBnMomentum) * p.running_mean + kBnMomentum * fwd.cache[i].mean;
        p.running_var = (1.0 - kBnMomentum) * p.running_var + kBnMomentum * fwd.cache[i].var;
    }
}

/// Epoch loop of minibatch gradient descent on the squared-error loss.
/// Stops when the epoch-mean loss drops to the threshold or the epoch budget
/// runs out. Seeded shuffling keeps the whole run reproducible. When batch
/// normalization is present a trailing single-row batch is folded into its
/// predecessor.
inline TrainResult train(const DenseNet& start, const Matrix& inputs, const Matrix& targets,
                         const TrainConfig& cfg) {
    if (inputs.rows() == 0) throw NnError("train: empty dataset");
    if (inputs.rows() != targets.rows()) throw NnError("train: row count mismatch");
    if (cfg.learning_rate <= 0) throw NnError("train: learning rate must be positive");
    if (cfg.batch_size < 1) throw NnError("train: batch size must be >= 1");

    TrainResult result{start, {}};
    if (cfg.max_epochs <= 0) return result;

    const auto n = inputs.rows();
    bool any_bn = false;
    for (const auto& l : start.spec) any_bn |= l.batch_norm;

    std::mt19937_64 rng(cfg.seed);
    std::vector<Eigen::Index> order(n);
    for (Eigen::Index i = 0; i < n; ++i) order[i] = i;

    for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double sq_sum = 0.0;
        Eigen::Index pos = 0;
        while (pos < n) {
            Eigen::Index len = std::min<Eigen::Index>(cfg.batch_size, n - pos);
            if (any_bn && n - pos - len == 1) len += 1;  // avoid a 1-row tail
            if (any_bn && len == 1 && n >= 2) break;     // n==1 rejected by forward

            Matrix bx(len, inputs.cols()), by(len, targets.cols());
            for (Eigen::Index r = 0; r < len; ++r) {
                bx.row(r) = inputs.row(order[pos + r]);
                by.row(r) = targets.row(order[pos + r]);
            }
            auto fwd = forward(result.net, bx, Mode::Train);
            Matrix diff = fwd.output - by;
            sq_sum += diff.squaredNorm();
            Matrix grad = 2.0 * diff / static_cast<double>(len * targets.cols());
            auto g = backward(result.net, fwd, grad);
            sgd_step(result.net, g, cfg.learning_rate);
            update_running_stats(result.net, fwd);
            pos += len;
        }
        double epoch_loss = sq_sum / static_cast<double>(n * targets.cols());
        if (!std::isfinite(epoch_loss))
            throw NnError("train: loss diverged at epoch " + std::to_string(epoch));
        result.loss_trace.push_back(epoch_loss);
        if (epoch_loss <= cfg.loss_threshold) break;
    }
    return result;
}

}  // namespace fermentor::nn
