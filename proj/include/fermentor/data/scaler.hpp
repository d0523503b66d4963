#pragma once

#include <Eigen/Dense>

#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

#include "fermentor/data/sample.hpp"

namespace fermentor::data {

/// Per-column min/max affine map onto [0,1]. Values outside the fitted range
/// pass through (mapping outside the unit interval); rejecting them is the
/// caller's decision.
struct ScalerParams {
    Eigen::VectorXd min;
    Eigen::VectorXd max;

    Eigen::Index dims() const { return min.size(); }
};

inline ScalerParams fit_scaler(const Eigen::MatrixXd& samples) {
    if (samples.rows() < 2) throw DataError("fit_scaler: need at least 2 samples");
    ScalerParams p;
    p.min = samples.colwise().minCoeff();
    p.max = samples.colwise().maxCoeff();
    for (Eigen::Index d = 0; d < p.dims(); ++d)
        if (p.max(d) <= p.min(d))
            throw DataError("fit_scaler: column " + std::to_string(d) +
                            " is constant; its range cannot be normalized");
    return p;
}

inline Eigen::MatrixXd scale(const ScalerParams& p, const Eigen::MatrixXd& raw) {
    if (raw.cols() != p.dims()) throw DataError("scale: column count mismatch");
    Eigen::MatrixXd out = raw;
    for (Eigen::Index d = 0; d < p.dims(); ++d)
        out.col(d) = (raw.col(d).array() - p.min(d)) / (p.max(d) - p.min(d));
    return out;
}

inline Eigen::MatrixXd unscale(const ScalerParams& p, const Eigen::MatrixXd& normalized) {
    if (normalized.cols() != p.dims()) throw DataError("unscale: column count mismatch");
    Eigen::MatrixXd out = normalized;
    for (Eigen::Index d = 0; d < p.dims(); ++d)
        out.col(d) = normalized.col(d).array() * (p.max(d) - p.min(d)) + p.min(d);
    return out;
}

inline double scale_one(const ScalerParams& p, Eigen::Index dim, double v) {
    return (v - p.min(dim)) / (p.max(dim) - p.min(dim));
}

inline double unscale_one(const ScalerParams& p, Eigen::Index dim, double v) {
    return v * (p.max(dim) - p.min(dim)) + p.min(dim);
}

inline void save_scaler(std::ostream& out, const ScalerParams& p) {
    out << "scaler " << p.dims() << '\n';
    char buf[32];
    for (Eigen::Index d = 0; d < p.dims(); ++d) {
        std::snprintf(buf, sizeof(buf), "%.17g", p.min(d));
        out << buf << ' ';
        std::snprintf(buf, sizeof(buf), "%.17g", p.max(d));
        out << buf << '\n';
    }
}

inline ScalerParams load_scaler(std::istream& in) {
    std::string word;
    Eigen::Index dims = 0;
    in >> word >> dims;
    if (word != "scaler" || dims < 1) throw DataError("model file: missing scaler block");
    ScalerParams p;
    p.min.resize(dims);
    p.max.resize(dims);
    for (Eigen::Index d = 0; d < dims; ++d)
        if (!(in >> p.min(d) >> p.max(d))) throw DataError("model file: short scaler block");
    return p;
}

}  // namespace fermentor::data
