#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "fermentor/data/sample.hpp"

namespace fermentor::data {

/// Seeded shuffle, then the first ceil(4n/7) records train and the rest test.
inline std::pair<std::vector<Sample>, std::vector<Sample>> split(const std::vector<Sample>& samples,
                                                                 std::uint64_t seed) {
    if (samples.size() < 7) throw DataError("split: need at least 7 samples for a 4:3 split");
    std::vector<Sample> shuffled = samples;
    std::mt19937_64 rng(seed);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    std::size_t train_n = (4 * samples.size() + 6) / 7;  // ceil(4n/7)
    std::vector<Sample> train(shuffled.begin(), shuffled.begin() + train_n);
    std::vector<Sample> test(shuffled.begin() + train_n, shuffled.end());
    return {std::move(train), std::move(test)};
}

struct SynthConfig {
    int n = 34;
    double noise = 0.25;
    std::uint64_t seed = 0;
};

/// Desk-scale stand-in dataset from a fixed nonlinear ground truth:
///   alc = 20 + 0.4 c - 0.05 (c - 41)^2 + 0.1 h + 0.2 s - 3 a + eps
/// with c in [39,44], h in [44,47], s in [33,36], a in [1.3,1.8] and
/// eps ~ N(0, noise^2). The coefficients are an arbitrary fixture, chosen so
/// the yield depends nonlinearly on the cellar temperature.
inline double synth_ground_truth(double c, double h, double s, double a) {
    return 20.0 + 0.4 * c - 0.05 * (c - 41.0) * (c - 41.0) + 0.1 * h + 0.2 * s - 3.0 * a;
}

inline std::vector<Sample> synth(const SynthConfig& cfg) {
    if (cfg.n < 1) throw DataError("synth: need n >= 1");
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> c(39.0, 44.0), h(44.0, 47.0), s(33.0, 36.0),
        a(1.3, 1.8);
    std::normal_distribution<double> eps(0.0, 1.0);
    std::vector<Sample> out;
    out.reserve(static_cast<std::size_t>(cfg.n));
    for (int i = 0; i < cfg.n; ++i) {
        Sample x;
        x.cellar_temp = c(rng);
        x.humidity = h(rng);
        x.starch = s(rng);
        x.acidity = a(rng);
        double noise = cfg.noise > 0 ? cfg.noise * eps(rng) : 0.0;
        x.alcohol = synth_ground_truth(x.cellar_temp, x.humidity, x.starch, x.acidity) + noise;
        out.push_back(x);
    }
    return out;
}

}  // namespace fermentor::data
