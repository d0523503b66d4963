// Command-line workbench: workflow-net verification on one side, the yield
// prediction pipeline (augmentation, training, comparison) on the other.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fermentor/data/dataset.hpp"
#include "fermentor/data/sample.hpp"
#include "fermentor/data/scaler.hpp"
#include "fermentor/gan/gan.hpp"
#include "fermentor/petri/compress.hpp"
#include "fermentor/petri/dot.hpp"
#include "fermentor/petri/parse.hpp"
#include "fermentor/petri/soundness.hpp"
#include "fermentor/predict/compare.hpp"
#include "fermentor/predict/gan_knn.hpp"
#include "fermentor/predict/model.hpp"

namespace {

using nlohmann::json;
namespace petri = fermentor::petri;
namespace data = fermentor::data;
namespace nn = fermentor::nn;
namespace gan = fermentor::gan;
namespace predict = fermentor::predict;

constexpr int kExitSound = 0;
constexpr int kExitUnsound = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitUsage = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw std::runtime_error("cannot read file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out.good()) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

std::vector<data::Sample> read_samples(const std::string& path, bool need_alcohol) {
    std::ifstream in(path);
    if (!in.good()) throw std::runtime_error("cannot read file: " + path);
    auto result = data::read_csv(in);
    for (const auto& w : result.warnings) std::cerr << "warning: " << path << ": " << w << "\n";
    if (need_alcohol)
        for (const auto& s : result.samples)
            if (!s.alcohol) throw std::runtime_error(path + ": every row needs an alcohol value");
    return result.samples;
}

// --- net override plumbing --------------------------------------------------

struct NetOverrides {
    std::vector<std::string> arc_weights;     // src:dst:w
    std::vector<std::string> rewrite_limits;  // src:dst:n
    std::int64_t all_rewrite_limits = 0;      // 0 = keep declared limits
};

std::tuple<std::string, std::string, std::int64_t> parse_triple(const std::string& text) {
    auto a = text.find(':');
    auto b = text.rfind(':');
    if (a == std::string::npos || b == a)
        throw std::runtime_error("expected SRC:DST:VALUE, got '" + text + "'");
    std::string src = text.substr(0, a);
    std::string dst = text.substr(a + 1, b - a - 1);
    std::int64_t v = std::stoll(text.substr(b + 1));
    return {src, dst, v};
}

petri::NetDefinition apply_overrides(const petri::NetDefinition& net, const NetOverrides& ov) {
    if (ov.arc_weights.empty() && ov.rewrite_limits.empty() && ov.all_rewrite_limits == 0)
        return net;
    auto arcs = net.arcs();
    if (ov.all_rewrite_limits > 0)
        for (auto& arc : arcs)
            if (arc.rewrite_limit) arc.rewrite_limit = ov.all_rewrite_limits;
    auto locate = [&arcs](const std::string& src, const std::string& dst) -> petri::ArcDef& {
        for (auto& arc : arcs)
            if (arc.source == src && arc.target == dst) return arc;
        throw std::runtime_error("no arc " + src + " -> " + dst);
    };
    for (const auto& spec : ov.arc_weights) {
        auto [src, dst, v] = parse_triple(spec);
        locate(src, dst).weight = v;
    }
    for (const auto& spec : ov.rewrite_limits) {
        auto [src, dst, v] = parse_triple(spec);
        locate(src, dst).rewrite_limit = v;
    }
    return petri::NetDefinition(net.name(), net.places(), net.transitions(), arcs);
}

// --- verify / reach ----------------------------------------------------------

json analysis_json(const petri::AnalysisReport& r, const json& config) {
    json j;
    j["net"] = r.net_name;
    j["stats"] = {{"nodes", r.nodes}, {"edges", r.edges}};
    j["truncated"] = r.truncated;
    j["unbounded_witness"] = r.omega;
    j["bounds"] = json::object();
    for (const auto& [place, bound] : r.place_bounds) j["bounds"][place] = bound.to_string();
    j["live"] = json::object();
    for (const auto& [trans, verdict] : r.live) j["live"][trans] = verdict;
    j["workflow"] = json::object();
    j["workflow"]["is_workflow"] = r.workflow;
    if (r.workflow) {
        j["workflow"]["start"] = r.start_place;
        j["workflow"]["end"] = r.end_place;
        if (!r.extension.empty()) j["workflow"]["extension"] = r.extension;
    }
    j["soundness"] = {{"verdict", r.sound.kind == petri::SoundnessVerdict::Kind::Sound
                                      ? "sound"
                                      : (r.sound.kind == petri::SoundnessVerdict::Kind::Unsound
                                             ? "unsound"
                                             : "unknown")}};
    if (r.sound.kind == petri::SoundnessVerdict::Kind::Unsound) {
        j["soundness"]["clause"] = r.sound.violated_clause;
        j["soundness"]["reason"] = r.sound.reason;
    }
    j["theorem1"] = {{"verdict", r.theorem1.kind == petri::TheoremVerdict::Kind::Holds
                                     ? "holds"
                                     : (r.theorem1.kind == petri::TheoremVerdict::Kind::Fails
                                            ? "fails"
                                            : "unknown")}};
    if (!r.theorem1.reason.empty()) j["theorem1"]["reason"] = r.theorem1.reason;
    j["theorem1"]["nodes"] = r.theorem1.nodes;
    j["theorem1"]["edges"] = r.theorem1.edges;
    j["config"] = config;
    return j;
}

void print_analysis_text(std::ostream& out, const petri::AnalysisReport& r, const json& config) {
    out << "net: " << r.net_name << "\n";
    out << "states: " << r.nodes << ", edges: " << r.edges
        << (r.truncated ? " (truncated)" : "") << (r.omega ? " (unbounded growth witnessed)" : "")
        << "\n";
    out << "bounds:";
    for (const auto& [place, bound] : r.place_bounds) out << " " << place << "=" << bound.to_string();
    out << "\n";
    out << "live:";
    for (const auto& [trans, verdict] : r.live) out << " " << trans << "=" << verdict;
    out << "\n";
    if (r.workflow) {
        out << "workflow: start=" << r.start_place << " end=" << r.end_place;
        if (!r.extension.empty()) out << " extension=" << r.extension;
        out << "\n";
    } else {
        out << "workflow: no\n";
    }
    out << "soundness: " << r.sound.to_string() << "\n";
    out << "theorem1: " << r.theorem1.to_string() << " (" << r.theorem1.nodes << " states, "
        << r.theorem1.edges << " edges)\n";
    out << "wall: " << r.wall_seconds << "s\n";
    out << "config: " << config.dump() << "\n";
}

int cmd_verify(const std::string& path, std::size_t budget, bool restore, const std::string& format,
               const std::string& dot_path, const NetOverrides& overrides) {
    auto net = apply_overrides(petri::parse_net(read_file(path)), overrides);
    petri::ExploreOptions opts;
    opts.budget = budget;
    opts.fire.restore_on_reset = restore;
    auto report = petri::analyze(net, opts);

    json config{{"net_file", path},
                {"budget", budget},
                {"restore_on_reset", restore},
                {"all_rewrite_limits", overrides.all_rewrite_limits},
                {"set_arc_weight", overrides.arc_weights},
                {"set_rewrite_limit", overrides.rewrite_limits}};
    if (format == "json")
        std::cout << analysis_json(report, config).dump(2) << "\n";
    else
        print_analysis_text(std::cout, report, config);

    if (!dot_path.empty()) {
        petri::ExploreOptions dopts = opts;
        dopts.fire.reset_transition = petri::classify_workflow(net).extension_transition;
        write_file(dot_path, petri::export_dot(net, petri::explore(net, dopts)));
    }

    switch (report.sound.kind) {
        case petri::SoundnessVerdict::Kind::Sound: return kExitSound;
        case petri::SoundnessVerdict::Kind::Unsound: return kExitUnsound;
        default: return kExitUnknown;
    }
}

int cmd_reach(const std::string& path, bool compress_graph, std::size_t budget, bool restore,
              const std::string& dot_path, const NetOverrides& overrides) {
    auto net = apply_overrides(petri::parse_net(read_file(path)), overrides);
    petri::ExploreOptions opts;
    opts.budget = budget;
    opts.fire.restore_on_reset = restore;
    opts.fire.reset_transition = petri::classify_workflow(net).extension_transition;
    auto g = petri::explore(net, opts);

    std::string dot;
    std::size_t nodes = g.nodes.size(), edges = g.edges.size();
    if (compress_graph) {
        auto c = petri::compress(g);
        nodes = c.nodes.size();
        edges = c.edges.size();
        dot = petri::export_dot(net, g, c);
    } else {
        dot = petri::export_dot(net, g);
    }
    if (dot_path.empty())
        std::cout << dot;
    else
        write_file(dot_path, dot);
    std::cout << nodes << " nodes, " << edges << " edges"
              << (g.truncated ? " (truncated)" : "") << "\n";
    return 0;
}

// --- data pipeline commands --------------------------------------------------

int cmd_synth(int n, double noise, std::uint64_t seed, const std::string& out_path) {
    auto rows = data::synth({n, noise, seed});
    std::ostringstream out;
    data::write_csv(out, rows);
    if (out_path.empty())
        std::cout << out.str();
    else
        write_file(out_path, out.str());
    std::cerr << "wrote " << rows.size() << " rows (seed " << seed << ", noise " << noise << ")\n";
    return 0;
}

int cmd_augment(const std::string& data_path, const std::string& out_path, gan::GanConfig cfg,
                bool emit_provenance) {
    auto samples = read_samples(data_path, true);
    auto raw = data::to_matrix(samples);
    auto scaler = data::fit_scaler(raw);
    auto result = gan::augment(data::scale(scaler, raw), cfg);

    Eigen::MatrixXd denorm = data::unscale(scaler, result.set.samples);
    std::ostringstream out;
    if (emit_provenance) {
        out << data::kCsvHeader << ",round,matched_real_index,mse\n";
        char line[224];
        for (Eigen::Index i = 0; i < denorm.rows(); ++i) {
            const auto& prov = result.set.provenance[static_cast<std::size_t>(i)];
            std::snprintf(line, sizeof(line), "%.10g,%.10g,%.10g,%.10g,%.10g,%d,%lld,%.10g\n",
                          denorm(i, 0), denorm(i, 1), denorm(i, 2), denorm(i, 3), denorm(i, 4),
                          prov.round, static_cast<long long>(prov.real_index), prov.mse);
            out << line;
        }
    } else {
        data::write_csv(out, data::from_matrix(denorm));
    }
    if (out_path.empty())
        std::cout << out.str();
    else
        write_file(out_path, out.str());

    std::cerr << "accepted " << result.set.size() << " of target " << cfg.target_count << " (seed "
              << cfg.seed << ", threshold " << cfg.threshold << ")\n";
    for (std::size_t r = 0; r < result.round_acceptance.size(); ++r)
        std::cerr << "  round " << r << ": acceptance rate " << result.round_acceptance[r] << "\n";
    if (!result.target_reached)
        std::cerr << "warning: target not reached within the sampling cap; partial set written\n";
    return 0;
}

int cmd_train(const std::string& data_path, const std::string& out_path, const std::string& arch,
              nn::TrainConfig cfg, const std::string& scaler_mode) {
    auto samples = read_samples(data_path, true);
    if (scaler_mode != "train" && scaler_mode != "all")
        throw std::runtime_error("--scaler must be 'train' or 'all'");
    std::vector<double> trace;
    auto model = predict::train_predictor(samples, predict::parse_arch(arch), cfg, &trace);
    std::ostringstream out;
    predict::save_model(out, model);
    write_file(out_path, out.str());
    std::cerr << "trained " << trace.size() << " epochs, final loss "
              << (trace.empty() ? 0.0 : trace.back()) << " (seed " << cfg.seed << ", arch " << arch
              << ")\n";
    return 0;
}

int cmd_predict(const std::string& model_path, const std::string& input) {
    std::ifstream in(model_path);
    if (!in.good()) throw std::runtime_error("cannot read model: " + model_path);
    auto model = predict::load_model(in);
    std::vector<double> v;
    std::stringstream ss(input);
    std::string part;
    while (std::getline(ss, part, ',')) v.push_back(std::stod(part));
    if (v.size() != 4) throw std::runtime_error("--input expects C,H,S,A");
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", predict::predict(model, v[0], v[1], v[2], v[3]));
    std::cout << buf << "\n";
    return 0;
}

int cmd_evaluate(const std::string& model_path, const std::string& data_path) {
    std::ifstream in(model_path);
    if (!in.good()) throw std::runtime_error("cannot read model: " + model_path);
    auto model = predict::load_model(in);
    auto samples = read_samples(data_path, true);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", predict::evaluate(model, samples));
    std::cout << buf << "\n";
    return 0;
}

json experiment_config_echo(const predict::ExperimentConfig& cfg, const std::string& train_path,
                            const std::string& test_path) {
    return json{{"train_file", train_path},
                {"test_file", test_path},
                {"arch", cfg.arch},
                {"learning_rate", cfg.train.learning_rate},
                {"epochs", cfg.train.max_epochs},
                {"batch_size", cfg.train.batch_size},
                {"seed", cfg.train.seed},
                {"gan_epochs", cfg.gan.adversarial_epochs},
                {"rounds", cfg.gan.rounds},
                {"threshold", cfg.gan.threshold},
                {"target", cfg.gan.target_count},
                {"augment_training", cfg.augment_training},
                {"knn_k", cfg.knn_k},
                {"scaler", cfg.scaler_on_all ? "all" : "train"}};
}

int cmd_compare(const std::string& train_path, const std::string& test_path,
                predict::ExperimentConfig cfg, const std::string& format,
                const std::string& plot_path, bool timing_only) {
    auto train_rows = read_samples(train_path, true);
    auto test_rows = read_samples(test_path, true);
    auto report = predict::run_experiment(train_rows, test_rows, cfg);
    report.config_echo = experiment_config_echo(cfg, train_path, test_path);

    if (format == "json") {
        std::cout << predict::report_json(report).dump(2) << "\n";
    } else if (timing_only) {
        std::cout << "config: " << report.config_echo.dump() << "\n";
        std::cout << predict::report_plot_csv(report);
    } else {
        std::cout << "config: " << report.config_echo.dump() << "\n";
        std::cout << predict::report_text(report);
    }
    if (!plot_path.empty()) write_file(plot_path, predict::report_plot_csv(report));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"workflow-net verification and fermentation yield prediction workbench"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value configuration file (flags override it)");

    std::uint64_t seed = 0;
    app.add_option("--seed", seed, "global random seed")
        ->envname("FERMENTOR_SEED")
        ->capture_default_str();

    // verify
    auto* verify = app.add_subcommand("verify", "full analysis of a net file");
    std::string verify_net, verify_report = "text", verify_dot;
    std::size_t verify_budget = 1'000'000;
    bool verify_restore = false;
    NetOverrides verify_ov;
    verify->add_option("net", verify_net, "net description file")->required();
    verify->add_option("--budget", verify_budget, "state budget")->capture_default_str();
    verify->add_flag("--restore-on-reset", verify_restore,
                     "restore rewrite budgets when the extension transition recreates the initial marking");
    verify->add_option("--report", verify_report, "text or json")->capture_default_str();
    verify->add_option("--dot", verify_dot, "write the state graph in DOT format");
    verify->add_option("--all-rewrite-limits", verify_ov.all_rewrite_limits,
                       "override every rewrite limit");
    verify->add_option("--set-arc-weight", verify_ov.arc_weights, "SRC:DST:W, repeatable");
    verify->add_option("--set-rewrite-limit", verify_ov.rewrite_limits, "SRC:DST:N, repeatable");

    // reach
    auto* reach = app.add_subcommand("reach", "emit the reachability graph");
    std::string reach_net, reach_dot;
    std::size_t reach_budget = 1'000'000;
    bool reach_compress = false, reach_restore = false;
    NetOverrides reach_ov;
    reach->add_option("net", reach_net, "net description file")->required();
    reach->add_flag("--compress", reach_compress, "collapse runs and homogeneous path bundles");
    reach->add_option("--dot", reach_dot, "write DOT here instead of stdout");
    reach->add_option("--budget", reach_budget, "state budget")->capture_default_str();
    reach->add_flag("--restore-on-reset", reach_restore, "as in verify");
    reach->add_option("--all-rewrite-limits", reach_ov.all_rewrite_limits,
                      "override every rewrite limit");
    reach->add_option("--set-arc-weight", reach_ov.arc_weights, "SRC:DST:W, repeatable");
    reach->add_option("--set-rewrite-limit", reach_ov.rewrite_limits, "SRC:DST:N, repeatable");

    // synth
    auto* synth = app.add_subcommand("synth", "generate the synthetic benchmark dataset");
    int synth_n = 34;
    double synth_noise = 0.25;
    std::string synth_out;
    synth->add_option("--n", synth_n, "rows to generate")->capture_default_str();
    synth->add_option("--noise", synth_noise, "yield noise sigma")->capture_default_str();
    synth->add_option("--out", synth_out, "output CSV (stdout if omitted)");

    // augment
    auto* augment = app.add_subcommand("augment", "expand a dataset with filtered generated rows");
    std::string augment_data, augment_out;
    gan::GanConfig gan_cfg;
    bool augment_prov = false;
    augment->add_option("data", augment_data, "input CSV")->required();
    augment->add_option("--out", augment_out, "output CSV (stdout if omitted)");
    augment->add_option("--target", gan_cfg.target_count, "rows to accept")->capture_default_str();
    augment->add_option("--threshold", gan_cfg.threshold, "acceptance threshold on the pair error")
        ->capture_default_str();
    augment->add_option("--rounds", gan_cfg.rounds, "train/generate/filter rounds")
        ->capture_default_str();
    augment->add_option("--gan-epochs", gan_cfg.adversarial_epochs, "adversarial epochs per round")
        ->capture_default_str();
    augment->add_option("--jitter", gan_cfg.jitter_sigma,
                        "Gaussian jitter sigma applied to the normalized real rows before training")
        ->capture_default_str();
    augment->add_flag("--emit-provenance", augment_prov,
                      "append round, matched row index and pair error columns");

    // train
    auto* train = app.add_subcommand("train", "train the yield predictor");
    std::string train_data, train_out, train_arch = predict::kDefaultArch, train_scaler = "train";
    nn::TrainConfig train_cfg;
    train_cfg.learning_rate = 0.05;
    train_cfg.max_epochs = 2000;
    train_cfg.batch_size = 32;
    train->add_option("data", train_data, "training CSV")->required();
    train->add_option("--out", train_out, "model file")->required();
    train->add_option("--arch", train_arch, "layer sizes, comma separated")->capture_default_str();
    train->add_option("--lr", train_cfg.learning_rate, "learning rate")->capture_default_str();
    train->add_option("--epochs", train_cfg.max_epochs, "epoch budget")->capture_default_str();
    train->add_option("--batch", train_cfg.batch_size, "minibatch size")->capture_default_str();
    train->add_option("--loss-threshold", train_cfg.loss_threshold, "stop when epoch loss reaches this")
        ->capture_default_str();
    train->add_option("--scaler", train_scaler, "train|all: rows the scaler is fitted on")
        ->capture_default_str();

    // predict
    auto* pred = app.add_subcommand("predict", "predict the yield for one parameter set");
    std::string pred_model, pred_input;
    pred->add_option("model", pred_model, "model file")->required();
    pred->add_option("--input", pred_input, "C,H,S,A")->required();

    // evaluate
    auto* eval = app.add_subcommand("evaluate", "mean squared error of a model on a CSV");
    std::string eval_model, eval_data;
    eval->add_option("model", eval_model, "model file")->required();
    eval->add_option("data", eval_data, "CSV with alcohol values")->required();

    // compare / bench
    predict::ExperimentConfig exp_cfg;
    exp_cfg.train.learning_rate = 0.05;
    exp_cfg.train.max_epochs = 800;
    exp_cfg.train.batch_size = 32;
    auto add_experiment_options = [&](CLI::App* cmd) {
        cmd->add_option("--arch", exp_cfg.arch, "predictor architecture")->capture_default_str();
        cmd->add_option("--lr", exp_cfg.train.learning_rate, "learning rate")->capture_default_str();
        cmd->add_option("--epochs", exp_cfg.train.max_epochs, "epoch budget")->capture_default_str();
        cmd->add_option("--batch", exp_cfg.train.batch_size, "minibatch size")->capture_default_str();
        cmd->add_option("--gan-epochs", exp_cfg.gan.adversarial_epochs, "adversarial epochs")
            ->capture_default_str();
        cmd->add_option("--rounds", exp_cfg.gan.rounds, "augmentation rounds")->capture_default_str();
        cmd->add_option("--threshold", exp_cfg.gan.threshold, "filter threshold")
            ->capture_default_str();
        cmd->add_option("--target", exp_cfg.gan.target_count, "generated rows wanted")
            ->capture_default_str();
        cmd->add_flag("--no-augment-training",
                      [&](std::int64_t) { exp_cfg.augment_training = false; },
                      "fit FCNN and MLR on the raw training rows only");
        cmd->add_option("--knn", exp_cfg.knn_k, "neighbours for the generated-set read-out")
            ->capture_default_str();
        cmd->add_option_function<std::string>(
               "--scaler",
               [&](const std::string& mode) {
                   if (mode != "train" && mode != "all")
                       throw CLI::ValidationError("--scaler", "must be 'train' or 'all'");
                   exp_cfg.scaler_on_all = mode == "all";
               },
               "train|all: rows the scaler is fitted on")
            ->capture_default_str();
    };
    auto* compare = app.add_subcommand("compare", "error and timing comparison of the three methods");
    std::string compare_train, compare_test, compare_report = "text", compare_plot;
    compare->add_option("train", compare_train, "training CSV")->required();
    compare->add_option("test", compare_test, "test CSV")->required();
    add_experiment_options(compare);
    compare->add_option("--report", compare_report, "text or json")->capture_default_str();
    compare->add_option("--plot-csv", compare_plot, "write timing rows as CSV");

    auto* bench = app.add_subcommand("bench", "prediction timing over growing query sets");
    std::string bench_train, bench_test, bench_plot;
    bench->add_option("train", bench_train, "training CSV")->required();
    bench->add_option("test", bench_test, "test CSV")->required();
    add_experiment_options(bench);
    bench->add_option("--plot-csv", bench_plot, "write timing rows as CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*verify)
            return cmd_verify(verify_net, verify_budget, verify_restore, verify_report, verify_dot,
                              verify_ov);
        if (*reach)
            return cmd_reach(reach_net, reach_compress, reach_budget, reach_restore, reach_dot,
                             reach_ov);
        if (*synth) return cmd_synth(synth_n, synth_noise, seed, synth_out);
        if (*augment) {
            gan_cfg.seed = seed;
            return cmd_augment(augment_data, augment_out, gan_cfg, augment_prov);
        }
        if (*train) {
            train_cfg.seed = seed;
            return cmd_train(train_data, train_out, train_arch, train_cfg, train_scaler);
        }
        if (*pred) return cmd_predict(pred_model, pred_input);
        if (*eval) return cmd_evaluate(eval_model, eval_data);
        if (*compare) {
            exp_cfg.train.seed = seed;
            exp_cfg.gan.seed = seed;
            return cmd_compare(compare_train, compare_test, exp_cfg, compare_report, compare_plot,
                               false);
        }
        if (*bench) {
            exp_cfg.train.seed = seed;
            exp_cfg.gan.seed = seed;
            return cmd_compare(bench_train, bench_test, exp_cfg, "plot", bench_plot, true);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
