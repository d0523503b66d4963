#pragma once

#include <chrono>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "fermentor/data/dataset.hpp"
#include "fermentor/gan/gan.hpp"
#include "fermentor/predict/gan_knn.hpp"
#include "fermentor/predict/model.hpp"

namespace fermentor::predict {

struct ExperimentConfig {
    std::string arch = kDefaultArch;
    nn::TrainConfig train;
    gan::GanConfig gan;
    bool augment_training = true;  // train FCNN and MLR on real + generated rows
    int knn_k = 5;
    bool scaler_on_all = false;    // fit the scaler on train+test instead of train only
    std::vector<int> bench_sizes{34, 429, 750, 1077};
};

struct ExperimentReport {
    double fcnn_mse = 0, mlr_mse = 0, gan_mse = 0;
    Eigen::Index generated_count = 0;
    bool augmentation_target_reached = true;
    std::vector<int> sizes;
    std::vector<double> fcnn_seconds, mlr_seconds, gan_seconds;
    nlohmann::json config_echo;
};

namespace detail {

inline double time_seconds(const std::function<void()>& fn) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline Eigen::MatrixXd tile_rows(const Eigen::MatrixXd& base, int rows) {
    Eigen::MatrixXd out(rows, base.cols());
    for (int i = 0; i < rows; ++i) out.row(i) = base.row(i % base.rows());
    return out;
}

}  // namespace detail

/// Trains all three predictors and scores them on the held-out test records:
/// the dense net and the linear baseline fit the training rows (optionally
/// together with the generated rows), the nearest-neighbour read-out answers
/// straight from the generated set. Reported errors are on the yield in its
/// raw units; prediction wall time is measured over growing query sets tiled
/// from the test rows.
inline ExperimentReport run_experiment(const std::vector<data::Sample>& train,
                                       const std::vector<data::Sample>& test,
                                       const ExperimentConfig& cfg) {
    if (train.size() < 2) throw PredictError("run_experiment: need at least 2 training rows");
    if (test.empty()) throw PredictError("run_experiment: empty test set");

    ExperimentReport report;
    Eigen::MatrixXd train_raw = data::to_matrix(train);
    data::ScalerParams scaler;
    if (cfg.scaler_on_all) {
        std::vector<data::Sample> all = train;
        all.insert(all.end(), test.begin(), test.end());
        scaler = data::fit_scaler(data::to_matrix(all));
    } else {
        scaler = data::fit_scaler(train_raw);
    }

    auto aug = gan::augment(data::scale(scaler, train_raw), cfg.gan);
    report.generated_count = aug.set.size();
    report.augmentation_target_reached = aug.target_reached;

    std::vector<data::Sample> fit_rows = train;
    if (cfg.augment_training && aug.set.size() > 0) {
        auto generated = data::from_matrix(data::unscale(scaler, aug.set.samples));
        fit_rows.insert(fit_rows.end(), generated.begin(), generated.end());
    }

    auto arch = parse_arch(cfg.arch);
    PredictorModel fcnn = train_predictor(fit_rows, arch, cfg.train, nullptr, &scaler);

    Eigen::MatrixXd fit_raw = data::to_matrix(fit_rows);
    LinearModel mlr = fit_mlr(fit_raw.leftCols(4), fit_raw.col(4));

    Eigen::MatrixXd test_raw = data::to_matrix(test);
    report.fcnn_mse = nn::mse(predict_batch(fcnn, test_raw.leftCols(4)), test_raw.col(4));
    report.mlr_mse = nn::mse(predict_mlr(mlr, test_raw.leftCols(4)), test_raw.col(4));

    Eigen::VectorXd gan_pred(test_raw.rows());
    for (Eigen::Index i = 0; i < test_raw.rows(); ++i)
        gan_pred(i) = predict_gan_nn(aug.set.samples, scaler, test_raw(i, 0), test_raw(i, 1),
                                     test_raw(i, 2), test_raw(i, 3), cfg.knn_k);
    report.gan_mse = nn::mse(gan_pred, test_raw.col(4));

    for (int size : cfg.bench_sizes) {
        Eigen::MatrixXd queries = detail::tile_rows(test_raw.leftCols(4), size);
        report.sizes.push_back(size);
        double sink = 0;
        report.fcnn_seconds.push_back(
            detail::time_seconds([&] { sink += predict_batch(fcnn, queries).sum(); }));
        report.mlr_seconds.push_back(
            detail::time_seconds([&] { sink += predict_mlr(mlr, queries).sum(); }));
        report.gan_seconds.push_back(detail::time_seconds([&] {
            for (Eigen::Index i = 0; i < queries.rows(); ++i)
                sink += predict_gan_nn(aug.set.samples, scaler, queries(i, 0), queries(i, 1),
                                       queries(i, 2), queries(i, 3), cfg.knn_k);
        }));
        if (!std::isfinite(sink)) throw PredictError("run_experiment: non-finite prediction");
    }
    return report;
}

inline std::string report_text(const ExperimentReport& r) {
    std::ostringstream out;
    out << "generated rows: " << r.generated_count
        << (r.augmentation_target_reached ? "" : " (target not reached)") << "\n";
    out << "test MSE (raw yield units)\n";
    char line[128];
    std::snprintf(line, sizeof(line), "  %-16s %12.6f\n", "FCNN", r.fcnn_mse);
    out << line;
    std::snprintf(line, sizeof(line), "  %-16s %12.6f\n", "MLR", r.mlr_mse);
    out << line;
    std::snprintf(line, sizeof(line), "  %-16s %12.6f\n", "GAN-prediction", r.gan_mse);
    out << line;
    if (!r.sizes.empty()) {
        out << "prediction wall time [s] (growth vs smallest size)\n";
        out << "  size        FCNN              MLR               GAN-prediction\n";
        for (std::size_t i = 0; i < r.sizes.size(); ++i) {
            auto pct = [&](const std::vector<double>& v) {
                return v[0] > 0 ? 100.0 * (v[i] - v[0]) / v[0] : 0.0;
            };
            std::snprintf(line, sizeof(line), "  %-6d %.6f (%+7.1f%%)  %.6f (%+7.1f%%)  %.6f (%+7.1f%%)\n",
                          r.sizes[i], r.fcnn_seconds[i], pct(r.fcnn_seconds), r.mlr_seconds[i],
                          pct(r.mlr_seconds), r.gan_seconds[i], pct(r.gan_seconds));
            out << line;
        }
    }
    return out.str();
}

inline nlohmann::json report_json(const ExperimentReport& r) {
    nlohmann::json j;
    j["mse"] = {{"fcnn", r.fcnn_mse}, {"mlr", r.mlr_mse}, {"gan_prediction", r.gan_mse}};
    j["generated_rows"] = r.generated_count;
    j["augmentation_target_reached"] = r.augmentation_target_reached;
    j["timing"] = nlohmann::json::array();
    for (std::size_t i = 0; i < r.sizes.size(); ++i) {
        j["timing"].push_back({{"size", r.sizes[i]},
                               {"fcnn_seconds", r.fcnn_seconds[i]},
                               {"mlr_seconds", r.mlr_seconds[i]},
                               {"gan_seconds", r.gan_seconds[i]}});
    }
    if (!r.config_echo.is_null()) j["config"] = r.config_echo;
    return j;
}

/// Plot-friendly CSV: one row per (size, method).
inline std::string report_plot_csv(const ExperimentReport& r) {
    std::ostringstream out;
    out << "size,method,seconds,pct_growth\n";
    auto emit = [&](const char* method, const std::vector<double>& v) {
        for (std::size_t i = 0; i < r.sizes.size(); ++i) {
            double pct = v[0] > 0 ? 100.0 * (v[i] - v[0]) / v[0] : 0.0;
            char line[96];
            std::snprintf(line, sizeof(line), "%d,%s,%.9f,%.3f\n", r.sizes[i], method, v[i], pct);
            out << line;
        }
    };
    emit("fcnn", r.fcnn_seconds);
    emit("mlr", r.mlr_seconds);
    emit("gan_prediction", r.gan_seconds);
    return out.str();
}

}  // namespace fermentor::predict
