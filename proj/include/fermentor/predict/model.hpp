#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fermentor/data/sample.hpp"
#include "fermentor/data/scaler.hpp"
#include "fermentor/nn/io.hpp"
#include "fermentor/nn/net.hpp"
#include "fermentor/predict/mlr.hpp"

namespace fermentor::predict {

/// Dense regression net bundled with the min-max scaler it was trained under.
/// The scaler covers all five record columns; inputs are normalized before
/// the forward pass and the network's unit-interval output is mapped back to
/// the yield range.
struct PredictorModel {
    nn::DenseNet net;
    data::ScalerParams scaler;
};

/// "4,64,128,256,128,1" -> tanh hidden layers with batch normalization and a
/// unit-interval output layer.
inline std::vector<nn::LayerSpec> parse_arch(const std::string& text) {
    std::vector<int> dims;
    std::stringstream in(text);
    std::string part;
    while (std::getline(in, part, ',')) {
        try {
            dims.push_back(std::stoi(part));
        } catch (const std::exception&) {
            throw PredictError("bad architecture element: '" + part + "'");
        }
    }
    if (dims.size() < 2) throw PredictError("architecture needs at least two dimensions");
    std::vector<nn::LayerSpec> spec;
    for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
        bool last = i + 2 == dims.size();
        spec.push_back({dims[i], dims[i + 1],
                        last ? nn::Activation::Tanh01 : nn::Activation::Tanh, !last});
    }
    return spec;
}

inline constexpr const char* kDefaultArch = "4,64,128,256,128,1";

/// Trains the yield predictor on full records. By default the scaler is
/// fitted on exactly the rows given here and stored with the model; a
/// pre-fitted scaler can be supplied instead.
inline PredictorModel train_predictor(const std::vector<data::Sample>& train,
                                      const std::vector<nn::LayerSpec>& arch,
                                      const nn::TrainConfig& cfg,
                                      std::vector<double>* loss_trace = nullptr,
                                      const data::ScalerParams* scaler = nullptr) {
    if (train.empty()) throw PredictError("train_predictor: empty training set");
    if (arch.front().in_dim != 4 || arch.back().out_dim != 1)
        throw PredictError("train_predictor: architecture must map 4 inputs to 1 output");

    Eigen::MatrixXd raw = data::to_matrix(train);
    PredictorModel model;
    model.scaler = scaler ? *scaler : data::fit_scaler(raw);
    Eigen::MatrixXd normalized = data::scale(model.scaler, raw);

    auto result = nn::train(nn::init(arch, cfg.seed), normalized.leftCols(4),
                            normalized.rightCols(1), cfg);
    model.net = std::move(result.net);
    if (loss_trace) *loss_trace = std::move(result.loss_trace);
    return model;
}

inline double predict(const PredictorModel& model, double c, double h, double s, double a) {
    Eigen::MatrixXd in(1, 4);
    in << data::scale_one(model.scaler, 0, c), data::scale_one(model.scaler, 1, h),
        data::scale_one(model.scaler, 2, s), data::scale_one(model.scaler, 3, a);
    double y = nn::forward(model.net, in, nn::Mode::Infer).output(0, 0);
    return data::unscale_one(model.scaler, 4, y);
}

/// Batch prediction over raw (unscaled) inputs, one row per query.
inline Eigen::VectorXd predict_batch(const PredictorModel& model, const Eigen::MatrixXd& raw_inputs) {
    if (raw_inputs.cols() != 4) throw PredictError("predict_batch: expected 4 input columns");
    Eigen::MatrixXd in = raw_inputs;
    for (Eigen::Index d = 0; d < 4; ++d)
        in.col(d) = (raw_inputs.col(d).array() - model.scaler.min(d)) /
                    (model.scaler.max(d) - model.scaler.min(d));
    Eigen::VectorXd y = nn::forward(model.net, in, nn::Mode::Infer).output.col(0);
    return (y.array() * (model.scaler.max(4) - model.scaler.min(4)) + model.scaler.min(4)).matrix();
}

/// Test-set error on the yield in its raw units.
inline double evaluate(const PredictorModel& model, const std::vector<data::Sample>& samples) {
    if (samples.empty()) throw PredictError("evaluate: empty sample set");
    Eigen::MatrixXd m = data::to_matrix(samples);
    Eigen::VectorXd pred = predict_batch(model, m.leftCols(4));
    return nn::mse(pred, m.col(4));
}

inline void save_model(std::ostream& out, const PredictorModel& model) {
    nn::save(out, model.net);
    data::save_scaler(out, model.scaler);
}

inline PredictorModel load_model(std::istream& in) {
    PredictorModel model;
    model.net = nn::load(in);
    model.scaler = data::load_scaler(in);
    if (model.scaler.dims() != 5) throw PredictError("model file: scaler must cover 5 columns");
    return model;
}

}  // namespace fermentor::predict
