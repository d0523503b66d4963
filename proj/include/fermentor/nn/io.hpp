#pragma once

#include <cinttypes>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "fermentor/nn/net.hpp"

namespace fermentor::nn {

inline constexpr const char* kModelMagic = "fermentor-net v1";

namespace detail {

// %.17g round-trips IEEE doubles exactly through text
inline void write_value(std::ostream& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf;
}

inline void write_row(std::ostream& out, const char* tag, const double* data, Eigen::Index n) {
    out << tag;
    for (Eigen::Index i = 0; i < n; ++i) {
        out << ' ';
        write_value(out, data[i]);
    }
    out << '\n';
}

inline void read_row(std::istream& in, const std::string& tag, double* data, Eigen::Index n) {
    std::string line;
    if (!std::getline(in, line)) throw NnError("model file: unexpected end of file, wanted " + tag);
    std::istringstream row(line);
    std::string got;
    row >> got;
    if (got != tag) throw NnError("model file: expected '" + tag + "', found '" + got + "'");
    for (Eigen::Index i = 0; i < n; ++i)
        if (!(row >> data[i])) throw NnError("model file: short row for " + tag);
}

}  // namespace detail

inline void save(std::ostream& out, const DenseNet& net) {
    out << kModelMagic << '\n';
    out << "seed " << net.rng_seed << '\n';
    out << "layers " << net.spec.size() << '\n';
    for (const auto& l : net.spec)
        out << "layer " << l.in_dim << ' ' << l.out_dim << ' ' << activation_name(l.activation)
            << ' ' << (l.batch_norm ? 1 : 0) << '\n';
    for (std::size_t i = 0; i < net.layers.size(); ++i) {
        const auto& p = net.layers[i];
        detail::write_row(out, "W", p.weights.data(), p.weights.size());
        detail::write_row(out, "b", p.bias.data(), p.bias.size());
        if (net.spec[i].batch_norm) {
            detail::write_row(out, "bn_gamma", p.bn_gamma.data(), p.bn_gamma.size());
            detail::write_row(out, "bn_beta", p.bn_beta.data(), p.bn_beta.size());
            detail::write_row(out, "bn_mean", p.running_mean.data(), p.running_mean.size());
            detail::write_row(out, "bn_var", p.running_var.data(), p.running_var.size());
        }
    }
}

inline DenseNet load(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kModelMagic)
        throw NnError("model file: bad or missing magic line");

    std::string word;
    DenseNet net;
    in >> word;
    if (word != "seed" || !(in >> net.rng_seed)) throw NnError("model file: missing seed");
    std::size_t count = 0;
    in >> word;
    if (word != "layers" || !(in >> count) || count == 0) throw NnError("model file: missing layer count");
    for (std::size_t i = 0; i < count; ++i) {
        LayerSpec l;
        std::string act;
        int bn = 0;
        in >> word >> l.in_dim >> l.out_dim >> act >> bn;
        if (word != "layer" || !in) throw NnError("model file: malformed layer line");
        l.activation = activation_from_name(act);
        l.batch_norm = bn != 0;
        net.spec.push_back(l);
    }
    std::getline(in, line);  // finish the last header line
    validate_spec(net.spec);

    for (const auto& l : net.spec) {
        LayerParams p;
        p.weights.resize(l.out_dim, l.in_dim);
        p.bias.resize(l.out_dim);
        detail::read_row(in, "W", p.weights.data(), p.weights.size());
        detail::read_row(in, "b", p.bias.data(), p.bias.size());
        if (l.batch_norm) {
            p.bn_gamma.resize(l.out_dim);
            p.bn_beta.resize(l.out_dim);
            p.running_mean.resize(l.out_dim);
            p.running_var.resize(l.out_dim);
            detail::read_row(in, "bn_gamma", p.bn_gamma.data(), p.bn_gamma.size());
            detail::read_row(in, "bn_beta", p.bn_beta.data(), p.bn_beta.size());
            detail::read_row(in, "bn_mean", p.running_mean.data(), p.running_mean.size());
            detail::read_row(in, "bn_var", p.running_var.data(), p.running_var.size());
        }
        net.layers.push_back(std::move(p));
    }
    return net;
}

inline std::string to_string(const DenseNet& net) {
    std::ostringstream out;
    save(out, net);
    return out.str();
}

inline DenseNet from_string(const std::string& text) {
    std::istringstream in(text);
    return load(in);
}

}  // namespace fermentor::nn
