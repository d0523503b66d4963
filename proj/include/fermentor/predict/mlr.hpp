#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace fermentor::predict {

class PredictError : public std::runtime_error {
  public:
    explicit PredictError(const std::string& what) : std::runtime_error(what) {}
};

/// Ordinary least squares over the four process parameters plus intercept.
struct LinearModel {
    Eigen::VectorXd beta;  // [intercept, c, h, s, a]
};

/// QR-based fit; a singular design falls back to ridge-regularized normal
/// equations with lambda = 1e-8.
inline LinearModel fit_mlr(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets) {
    const auto n = inputs.rows();
    if (inputs.cols() != 4) throw PredictError("fit_mlr: expected 4 input columns");
    if (targets.size() != n) throw PredictError("fit_mlr: target length mismatch");
    if (n < 5) throw PredictError("fit_mlr: need at least 5 rows for 5 coefficients");

    Eigen::MatrixXd design(n, 5);
    design.col(0).setOnes();
    design.rightCols(4) = inputs;

    auto qr = design.colPivHouseholderQr();
    LinearModel model;
    if (qr.rank() == 5) {
        model.beta = qr.solve(targets);
    } else {
        Eigen::MatrixXd gram = design.transpose() * design;
        gram.diagonal().array() += 1e-8;
        model.beta = gram.ldlt().solve(design.transpose() * targets);
    }
    if (!model.beta.allFinite()) throw PredictError("fit_mlr: solve produced non-finite coefficients");
    return model;
}

inline double predict_mlr(const LinearModel& model, double c, double h, double s, double a) {
    return model.beta(0) + model.beta(1) * c + model.beta(2) * h + model.beta(3) * s +
           model.beta(4) * a;
}

inline Eigen::VectorXd predict_mlr(const LinearModel& model, const Eigen::MatrixXd& inputs) {
    if (inputs.cols() != 4) throw PredictError("predict_mlr: expected 4 input columns");
    return (inputs * model.beta.tail(4)).array() + model.beta(0);
}

}  // namespace fermentor::predict
