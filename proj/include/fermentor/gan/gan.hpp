#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "fermentor/data/scaler.hpp"
#include "fermentor/nn/net.hpp"

namespace fermentor::gan {

using nn::Activation;
using nn::DenseNet;
using nn::LayerSpec;
using nn::Matrix;

class GanError : public std::runtime_error {
  public:
    explicit GanError(const std::string& what) : std::runtime_error(what) {}
};

struct GanConfig {
    int noise_dim = 5;
    std::vector<LayerSpec> gen_spec{{5, 32, Activation::Tanh, false},
                                    {32, 32, Activation::Tanh, false},
                                    {32, 5, Activation::Tanh01, false}};
    std::vector<LayerSpec> disc_spec{{5, 32, Activation::Tanh, false},
                                     {32, 1, Activation::Sigmoid, false}};
    int adversarial_epochs = 200;
    int rounds = 5;
    double threshold = 0.15;
    int target_count = 1077;
    double gen_learning_rate = 0.05;
    double disc_learning_rate = 0.05;
    int sample_batch = 256;
    int max_candidates_per_round = 20000;
    double jitter_sigma = 0.0;  // optional Gaussian jitter on the real rows
    std::uint64_t seed = 0;
};

struct GanHistory {
    std::vector<double> disc_loss;
    std::vector<double> gen_loss;
    std::vector<double> disc_accuracy;  // real-vs-fake separation, drifts toward 0.5
};

struct TrainedGan {
    DenseNet generator;
    DenseNet discriminator;
    GanHistory history;
};

namespace detail {

inline Matrix sample_noise(int rows, int dim, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return Matrix::NullaryExpr(rows, dim, [&]() { return u(rng); });
}

inline double clamp_p(double p) { return std::min(1.0 - 1e-7, std::max(1e-7, p)); }

}  // namespace detail

/// Alternating adversarial training on normalized rows. The discriminator
/// ascends log D(x) + log(1 - D(G(z))); the generator descends the
/// non-saturating objective -log D(G(z)). Noise is uniform on [-1,1].
inline TrainedGan train_gan(const Matrix& real, const GanConfig& cfg) {
    if (real.rows() < 2) throw GanError("train_gan: need at least 2 real samples");
    if (real.cols() != 5) throw GanError("train_gan: expected 5 columns");
    if (cfg.gen_spec.front().in_dim != cfg.noise_dim)
        throw GanError("train_gan: generator input must match noise_dim");
    if (cfg.gen_spec.back().out_dim != cfg.disc_spec.front().in_dim)
        throw GanError("train_gan: generator output must match discriminator input");
    if (cfg.disc_spec.back().out_dim != 1)
        throw GanError("train_gan: discriminator output must be one unit");

    TrainedGan out;
    out.generator = nn::init(cfg.gen_spec, cfg.seed);
    out.discriminator = nn::init(cfg.disc_spec, cfg.seed + 1);
    std::mt19937_64 rng(cfg.seed + 2);
    const auto n = real.rows();

    for (int epoch = 0; epoch < cfg.adversarial_epochs; ++epoch) {
        // discriminator step: real rows toward 1, generated rows toward 0
        auto fwd_real = nn::forward(out.discriminator, real, nn::Mode::Train);
        Matrix grad_real(n, 1);
        double d_loss = 0.0;
        int correct = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            double p = detail::clamp_p(fwd_real.output(i, 0));
            d_loss += -std::log(p);
            grad_real(i, 0) = -1.0 / (p * static_cast<double>(2 * n));
            if (p > 0.5) ++correct;
        }
        auto g_real = nn::backward(out.discriminator, fwd_real, grad_real);
        nn::sgd_step(out.discriminator, g_real, cfg.disc_learning_rate);

        Matrix z = detail::sample_noise(static_cast<int>(n), cfg.noise_dim, rng);
        Matrix fake = nn::forward(out.generator, z, nn::Mode::Infer).output;
        auto fwd_fake = nn::forward(out.discriminator, fake, nn::Mode::Train);
        Matrix grad_fake(n, 1);
        for (Eigen::Index i = 0; i < n; ++i) {
            double p = detail::clamp_p(fwd_fake.output(i, 0));
            d_loss += -std::log(1.0 - p);
            grad_fake(i, 0) = 1.0 / ((1.0 - p) * static_cast<double>(2 * n));
            if (p < 0.5) ++correct;
        }
        auto g_fake = nn::backward(out.discriminator, fwd_fake, grad_fake);
        nn::sgd_step(out.discriminator, g_fake, cfg.disc_learning_rate);
        d_loss /= static_cast<double>(2 * n);

        // generator step through the frozen discriminator
        Matrix z2 = detail::sample_noise(static_cast<int>(n), cfg.noise_dim, rng);
        auto fwd_gen = nn::forward(out.generator, z2, nn::Mode::Train);
        auto fwd_judge = nn::forward(out.discriminator, fwd_gen.output, nn::Mode::Train);
        Matrix grad_judge(n, 1);
        double g_loss = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            double p = detail::clamp_p(fwd_judge.output(i, 0));
            g_loss += -std::log(p);
            grad_judge(i, 0) = -1.0 / (p * static_cast<double>(n));
        }
        g_loss /= static_cast<double>(n);
        auto g_judge = nn::backward(out.discriminator, fwd_judge, grad_judge);
        auto g_gen = nn::backward(out.generator, fwd_gen, g_judge.input);
        nn::sgd_step(out.generator, g_gen, cfg.gen_learning_rate);

        if (!std::isfinite(d_loss) || !std::isfinite(g_loss))
            throw GanError("train_gan: loss diverged at epoch " + std::to_string(epoch));
        out.history.disc_loss.push_back(d_loss);
        out.history.gen_loss.push_back(g_loss);
        out.history.disc_accuracy.push_back(static_cast<double>(correct) /
                                            static_cast<double>(2 * n));
    }
    return out;
}

/// Mean of squared differences across the five coordinates of one pair.
inline double pair_mse(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) {
    return (a - b).squaredNorm() / static_cast<double>(a.size());
}

struct GeneratedSet {
    Matrix samples{0, 5};  // accepted rows, normalized
    struct Provenance {
        int round = 0;
        Eigen::Index real_index = 0;
        double mse = 0.0;
    };
    std::vector<Provenance> provenance;

    Eigen::Index size() const { return samples.rows(); }
};

/// Keeps each candidate whose error against some real row is within the
/// threshold: rows are scanned in order and the first close-enough match is
/// recorded. Candidates with no match are dropped. Order-preserving.
inline GeneratedSet mse_filter(const Matrix& candidates, const Matrix& real, double threshold,
                               int round = 0) {
    if (candidates.cols() != 5 || real.cols() != 5)
        throw GanError("mse_filter: rows must have 5 coordinates");
    GeneratedSet out;
    std::vector<Eigen::Index> keep;
    for (Eigen::Index c = 0; c < candidates.rows(); ++c) {
        for (Eigen::Index r = 0; r < real.rows(); ++r) {
            double err = pair_mse(candidates.row(c), real.row(r));
            if (err <= threshold) {
                keep.push_back(c);
                out.provenance.push_back({round, r, err});
                break;
            }
        }
    }
    out.samples.resize(static_cast<Eigen::Index>(keep.size()), 5);
    for (std::size_t i = 0; i < keep.size(); ++i)
        out.samples.row(static_cast<Eigen::Index>(i)) = candidates.row(keep[i]);
    return out;
}

struct AugmentResult {
    GeneratedSet set;
    std::vector<double> round_acceptance;  // accepted / candidates, per round
    std::vector<GanHistory> histories;
    bool target_reached = false;
};

/// Full augmentation loop: per round, train a fresh adversarial pair on the
/// normalized real rows, sample the generator in batches, filter, and
/// accumulate until the target count is reached or the per-round sampling
/// cap runs out. A missed target is reported, not hidden.
inline AugmentResult augment(const Matrix& real_normalized, const GanConfig& cfg) {
    if (real_normalized.rows() < 2) throw GanError("augment: need at least 2 real samples");
    AugmentResult result;
    std::vector<Matrix> accepted;
    Eigen::Index total = 0;

    Matrix real = real_normalized;
    if (cfg.jitter_sigma > 0) {
        std::mt19937_64 jit(cfg.seed ^ 0x9e3779b97f4a7c15ull);
        std::normal_distribution<double> g(0.0, cfg.jitter_sigma);
        for (Eigen::Index i = 0; i < real.size(); ++i)
            real(i) = std::min(1.0, std::max(0.0, real(i) + g(jit)));
    }

    for (int round = 0; round < cfg.rounds && total < cfg.target_count; ++round) {
        GanConfig round_cfg = cfg;
        round_cfg.seed = cfg.seed + 1000ull * static_cast<unsigned long long>(round) + 17ull;
        auto gan = train_gan(real, round_cfg);
        result.histories.push_back(gan.history);

        std::mt19937_64 rng(round_cfg.seed + 3);
        Eigen::Index round_candidates = 0, round_accepted = 0;
        while (total < cfg.target_count && round_candidates < cfg.max_candidates_per_round) {
            Matrix z = detail::sample_noise(cfg.sample_batch, cfg.noise_dim, rng);
            Matrix cand = nn::forward(gan.generator, z, nn::Mode::Infer).output;
            round_candidates += cand.rows();
            auto kept = mse_filter(cand, real_normalized, cfg.threshold, round);
            round_accepted += kept.size();
            if (kept.size() > 0) {
                Eigen::Index take = std::min<Eigen::Index>(kept.size(), cfg.target_count - total);
                accepted.push_back(kept.samples.topRows(take));
                for (Eigen::Index i = 0; i < take; ++i)
                    result.set.provenance.push_back(kept.provenance[static_cast<std::size_t>(i)]);
                total += take;
            }
        }
        result.round_acceptance.push_back(
            round_candidates == 0 ? 0.0
                                  : static_cast<double>(round_accepted) /
                                        static_cast<double>(round_candidates));
    }

    result.set.samples.resize(total, 5);
    Eigen::Index at = 0;
    for (const auto& block : accepted) {
        result.set.samples.middleRows(at, block.rows()) = block;
        at += block.rows();
    }
    result.target_reached = total >= cfg.target_count;
    return result;
}

}  // namespace fermentor::gan
