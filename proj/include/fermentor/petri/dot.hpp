#pragma once

#include <sstream>
#include <string>

#include "fermentor/petri/compress.hpp"
#include "fermentor/petri/explore.hpp"
#include "fermentor/petri/net.hpp"

namespace fermentor::petri {

namespace detail {

inline std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

inline std::string node_label(const NetDefinition& net, const NetState& s) {
    std::ostringstream out;
    bool first = true;
    for (std::size_t p = 0; p < net.place_count(); ++p) {
        if (s.marking.tokens[p] == 0) continue;
        if (!first) out << " ";
        out << net.places()[p].id << ":" << s.marking.tokens[p];
        first = false;
    }
    if (first) out << "0";
    return out.str();
}

}  // namespace detail

/// Deterministic DOT rendering: nodes in index order labeled with their
/// nonzero marking entries, edges in stored order labeled by transition.
inline std::string export_dot(const NetDefinition& net, const ReachGraph& g) {
    std::ostringstream out;
    out << "digraph \"" << detail::dot_escape(net.name()) << "\" {\n";
    out << "  rankdir=LR;\n";
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        out << "  n" << i << " [label=\"" << detail::dot_escape(detail::node_label(net, g.nodes[i]))
            << "\"";
        if (i == g.root) out << " shape=doublecircle";
        out << "];\n";
    }
    for (const auto& e : g.edges) {
        out << "  n" << e.from << " -> n" << e.to << " [label=\""
            << detail::dot_escape(net.transitions()[e.transition].id) << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

inline std::string export_dot(const NetDefinition& net, const ReachGraph& g,
                              const CompressedGraph& c) {
    std::ostringstream out;
    out << "digraph \"" << detail::dot_escape(net.name()) << "\" {\n";
    out << "  rankdir=LR;\n";
    for (auto i : c.nodes) {
        out << "  n" << i << " [label=\"" << detail::dot_escape(detail::node_label(net, g.nodes[i]))
            << "\"";
        if (i == c.root) out << " shape=doublecircle";
        out << "];\n";
    }
    for (const auto& e : c.edges) {
        out << "  n" << e.from << " -> n" << e.to << " [label=\""
            << detail::dot_escape(e.label.to_string(net)) << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace fermentor::petri
