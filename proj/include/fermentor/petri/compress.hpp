#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "fermentor/petri/explore.hpp"
#include "fermentor/petri/net.hpp"

namespace fermentor::petri {

/// Label of a compressed edge: a plain transition, a maximal repetition
/// `t*` (with the collapsed run length kept for bookkeeping), or a class of
/// homogeneous paths identified by shared occurrence counts.
struct EdgeLabel {
    enum class Kind { Single, Star, Parikh } kind = Kind::Single;
    std::size_t transition = 0;
    std::int64_t count = 1;
    std::vector<std::pair<std::size_t, std::int64_t>> parikh;  // sorted by transition index

    std::vector<std::pair<std::size_t, std::int64_t>> occurrences() const {
        if (kind == Kind::Parikh) return parikh;
        return {{transition, kind == Kind::Star ? count : 1}};
    }

    std::string to_string(const NetDefinition& net) const {
        switch (kind) {
            case Kind::Single:
                return net.transitions()[transition].id;
            case Kind::Star:
                return net.transitions()[transition].id + "*";
            default: {
                std::ostringstream out;
                out << "(";
                for (std::size_t i = 0; i < parikh.size(); ++i) {
                    if (i) out << " ";
                    out << net.transitions()[parikh[i].first].id;
                    if (parikh[i].second > 1) out << "^" << parikh[i].second;
                }
                out << ")";
                return out.str();
            }
        }
    }
};

struct CompressedEdge {
    std::size_t from = 0;
    std::size_t to = 0;
    EdgeLabel label;
};

/// Result of compression. Node ids refer to the original reachability graph;
/// `nodes` lists the survivors in ascending order.
struct CompressedGraph {
    std::vector<std::size_t> nodes;
    std::vector<CompressedEdge> edges;
    std::size_t root = 0;
};

namespace detail {

struct WorkEdge {
    std::size_t from, to;
    EdgeLabel label;
    bool alive = true;
};

inline std::vector<std::pair<std::size_t, std::int64_t>> add_parikh(
    const std::vector<std::pair<std::size_t, std::int64_t>>& a, const EdgeLabel& label) {
    std::map<std::size_t, std::int64_t> acc(a.begin(), a.end());
    for (auto [t, c] : label.occurrences()) acc[t] += c;
    return {acc.begin(), acc.end()};
}

}  // namespace detail

/// Two-pass compression of a complete reachability graph.
///
/// Pass one collapses maximal same-label chains through interior nodes of
/// in/out degree one into a starred edge. Pass two finds bundles of paths
/// between the same node pair whose interiors are isolated (degree one in and
/// out) and whose transition occurrence counts agree, and replaces each
/// bundle with a single class edge. Reachability between surviving nodes is
/// preserved; the root always survives.
inline CompressedGraph compress(const ReachGraph& g) {
    if (g.truncated) throw NetError("compress: graph is truncated");

    std::vector<detail::WorkEdge> edges;
    edges.reserve(g.edges.size());
    for (const auto& e : g.edges)
        edges.push_back({e.from, e.to, EdgeLabel{EdgeLabel::Kind::Single, e.transition, 1, {}}, true});
    std::vector<bool> alive(g.nodes.size(), true);

    auto degrees = [&](std::vector<int>& in, std::vector<int>& out,
                       std::vector<std::size_t>& in_edge, std::vector<std::size_t>& out_edge) {
        in.assign(g.nodes.size(), 0);
        out.assign(g.nodes.size(), 0);
        in_edge.assign(g.nodes.size(), 0);
        out_edge.assign(g.nodes.size(), 0);
        for (std::size_t i = 0; i < edges.size(); ++i) {
            if (!edges[i].alive) continue;
            out[edges[i].from]++;
            out_edge[edges[i].from] = i;
            in[edges[i].to]++;
            in_edge[edges[i].to] = i;
        }
    };

    // pass one: splice v when its only in-edge and only out-edge carry the
    // same transition, folding the pair into a star
    bool changed = true;
    std::vector<int> in, out;
    std::vector<std::size_t> in_edge, out_edge;
    while (changed) {
        changed = false;
        degrees(in, out, in_edge, out_edge);
        for (std::size_t v = 0; v < g.nodes.size(); ++v) {
            if (!alive[v] || v == g.root) continue;
            if (in[v] != 1 || out[v] != 1) continue;
            auto& ein = edges[in_edge[v]];
            auto& eout = edges[out_edge[v]];
            if (&ein == &eout) continue;  // self loop
            if (ein.from == v || eout.to == v) continue;
            if (ein.label.kind == EdgeLabel::Kind::Parikh || eout.label.kind == EdgeLabel::Kind::Parikh)
                continue;
            if (ein.label.transition != eout.label.transition) continue;
            EdgeLabel merged;
            merged.kind = EdgeLabel::Kind::Star;
            merged.transition = ein.label.transition;
            merged.count = ein.label.count + eout.label.count;
            std::size_t from = ein.from, to = eout.to;
            ein.alive = false;
            eout.alive = false;
            alive[v] = false;
            edges.push_back({from, to, merged, true});
            changed = true;
            degrees(in, out, in_edge, out_edge);
        }
    }

    // pass two: bundle homogeneous corridors
    degrees(in, out, in_edge, out_edge);
    struct Corridor {
        std::size_t from, to;
        std::vector<std::pair<std::size_t, std::int64_t>> parikh;
        std::vector<std::size_t> edge_ids;
        std::vector<std::size_t> interior;
    };
    std::vector<Corridor> corridors;
    for (std::size_t ei = 0; ei < edges.size(); ++ei) {
        if (!edges[ei].alive) continue;
        std::size_t u = edges[ei].from;
        // start corridors only at non-interior nodes so each is walked once
        bool u_interior = alive[u] && u != g.root && in[u] == 1 && out[u] == 1;
        if (u_interior) continue;
        Corridor c;
        c.from = u;
        c.parikh = detail::add_parikh({}, edges[ei].label);
        c.edge_ids.push_back(ei);
        std::size_t w = edges[ei].to;
        while (w != u && w != g.root && alive[w] && in[w] == 1 && out[w] == 1) {
            std::size_t next_edge = out_edge[w];
            c.interior.push_back(w);
            c.parikh = detail::add_parikh(c.parikh, edges[next_edge].label);
            c.edge_ids.push_back(next_edge);
            w = edges[next_edge].to;
        }
        if (w == u) continue;  // cycle back to the origin, leave untouched
        c.to = w;
        corridors.push_back(std::move(c));
    }

    std::map<std::tuple<std::size_t, std::size_t, std::vector<std::pair<std::size_t, std::int64_t>>>,
             std::vector<std::size_t>>
        groups;
    for (std::size_t i = 0; i < corridors.size(); ++i)
        groups[{corridors[i].from, corridors[i].to, corridors[i].parikh}].push_back(i);

    for (const auto& [key, members] : groups) {
        if (members.size() < 2) continue;
        for (auto ci : members) {
            for (auto ei : corridors[ci].edge_ids) edges[ei].alive = false;
            for (auto v : corridors[ci].interior) alive[v] = false;
        }
        EdgeLabel label;
        label.kind = EdgeLabel::Kind::Parikh;
        label.parikh = std::get<2>(key);
        edges.push_back({std::get<0>(key), std::get<1>(key), label, true});
    }

    CompressedGraph out_graph;
    out_graph.root = g.root;
    for (std::size_t v = 0; v < g.nodes.size(); ++v)
        if (alive[v]) out_graph.nodes.push_back(v);
    std::vector<CompressedEdge> final_edges;
    for (const auto& e : edges)
        if (e.alive) final_edges.push_back({e.from, e.to, e.label});
    std::stable_sort(final_edges.begin(), final_edges.end(),
                     [](const CompressedEdge& a, const CompressedEdge& b) {
                         return std::tie(a.from, a.to) < std::tie(b.from, b.to);
                     });
    out_graph.edges = std::move(final_edges);
    return out_graph;
}

/// Reachability closure restricted to the compressed graph's own edges.
inline std::vector<char> compressed_reachable(const CompressedGraph& g, std::size_t from,
                                              std::size_t node_count) {
    std::vector<std::vector<std::size_t>> adj(node_count);
    for (const auto& e : g.edges) adj[e.from].push_back(e.to);
    std::vector<char> seen(node_count, 0);
    std::vector<std::size_t> stack{from};
    seen[from] = 1;
    while (!stack.empty()) {
        auto u = stack.back();
        stack.pop_back();
        for (auto v : adj[u])
            if (!seen[v]) {
                seen[v] = 1;
                stack.push_back(v);
            }
    }
    return seen;
}

}  // namespace fermentor::petri
