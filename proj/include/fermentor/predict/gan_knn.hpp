#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "fermentor/data/scaler.hpp"
#include "fermentor/predict/mlr.hpp"

namespace fermentor::predict {

/// Nearest-neighbour read-out over a generated sample set: the k rows closest
/// to the query in normalized parameter space vote with the mean of their
/// yield coordinate.
inline double predict_gan_nn(const Eigen::MatrixXd& generated_normalized,
                             const data::ScalerParams& scaler, double c, double h, double s,
                             double a, int k = 5) {
    if (generated_normalized.rows() == 0) throw PredictError("predict_gan_nn: empty generated set");
    if (generated_normalized.cols() != 5) throw PredictError("predict_gan_nn: expected 5 columns");
    if (k < 1) throw PredictError("predict_gan_nn: k must be >= 1");

    Eigen::RowVector4d q(data::scale_one(scaler, 0, c), data::scale_one(scaler, 1, h),
                         data::scale_one(scaler, 2, s), data::scale_one(scaler, 3, a));
    const auto n = generated_normalized.rows();
    std::vector<double> dist(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        dist[static_cast<std::size_t>(i)] =
            (generated_normalized.row(i).leftCols(4) - q).squaredNorm();

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    auto take = std::min<std::size_t>(static_cast<std::size_t>(k), order.size());
    std::partial_sort(order.begin(), order.begin() + take, order.end(),
                      [&](Eigen::Index x, Eigen::Index y) {
                          auto dx = dist[static_cast<std::size_t>(x)];
                          auto dy = dist[static_cast<std::size_t>(y)];
                          return dx != dy ? dx < dy : x < y;
                      });
    double mean = 0.0;
    for (std::size_t i = 0; i < take; ++i) mean += generated_normalized(order[i], 4);
    mean /= static_cast<double>(take);
    return data::unscale_one(scaler, 4, mean);
}

}  // namespace fermentor::predict
