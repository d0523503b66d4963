#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "fermentor/petri/net.hpp"

namespace fermentor::petri {

struct ReachEdge {
    std::size_t from = 0;
    std::size_t transition = 0;
    std::size_t to = 0;
};

/// Evidence of unbounded growth: `smaller` is an ancestor of `larger` on the
/// BFS tree path, residuals equal, marking strictly dominated, and every
/// growing place unbounded by capacity.
struct OmegaWitness {
    std::size_t smaller = 0;
    std::size_t larger = 0;
    std::vector<std::size_t> growing_places;
};

struct ReachGraph {
    std::vector<NetState> nodes;
    std::vector<ReachEdge> edges;
    std::size_t root = 0;
    bool truncated = false;
    std::optional<OmegaWitness> omega_witness;

    std::vector<std::vector<std::size_t>> out_edges;  // node -> edge indices
};

struct ExploreOptions {
    std::size_t budget = 1'000'000;
    FireOptions fire;
};

/// Breadth-first construction of the state space. Node numbering is
/// deterministic: BFS order with transitions tried in declaration order.
/// When the budget is exceeded, `truncated` is set and the node set is the
/// first `budget` states discovered.
inline ReachGraph explore(const NetDefinition& net, const ExploreOptions& opts = {}) {
    if (opts.budget < 1) throw NetError("explore: budget must be >= 1");

    ReachGraph g;
    std::unordered_map<NetState, std::size_t, NetStateHash> index;
    std::vector<std::optional<std::size_t>> parent;  // BFS tree, for domination checks

    NetState init = initial_state(net);
    index.emplace(init, 0);
    g.nodes.push_back(std::move(init));
    parent.push_back(std::nullopt);
    g.out_edges.emplace_back();

    std::deque<std::size_t> frontier{0};
    while (!frontier.empty()) {
        std::size_t u = frontier.front();
        frontier.pop_front();
        for (std::size_t t = 0; t < net.transition_count(); ++t) {
            if (!enabled(net, g.nodes[u], t)) continue;
            NetState next = step(net, g.nodes[u], t, opts.fire);
            auto it = index.find(next);
            std::size_t v;
            if (it != index.end()) {
                v = it->second;
            } else {
                if (g.nodes.size() >= opts.budget) {
                    g.truncated = true;
                    continue;
                }
                v = g.nodes.size();
                index.emplace(next, v);
                g.nodes.push_back(std::move(next));
                parent.push_back(u);
                g.out_edges.emplace_back();
                frontier.push_back(v);

                if (!g.omega_witness) {
                    const NetState& fresh = g.nodes[v];
                    std::optional<std::size_t> a = u;
                    while (a) {
                        const NetState& anc = g.nodes[*a];
                        if (anc.residual == fresh.residual) {
                            bool geq = true, strict = false, uncapped = true;
                            for (std::size_t p = 0; p < fresh.marking.tokens.size(); ++p) {
                                if (fresh.marking.tokens[p] < anc.marking.tokens[p]) {
                                    geq = false;
                                    break;
                                }
                                if (fresh.marking.tokens[p] > anc.marking.tokens[p]) {
                                    strict = true;
                                    if (net.places()[p].bounded()) uncapped = false;
                                }
                            }
                            if (geq && strict && uncapped) {
                                OmegaWitness w;
                                w.smaller = *a;
                                w.larger = v;
                                for (std::size_t p = 0; p < fresh.marking.tokens.size(); ++p)
                                    if (fresh.marking.tokens[p] > anc.marking.tokens[p])
                                        w.growing_places.push_back(p);
                                g.omega_witness = std::move(w);
                                break;
                            }
                        }
                        a = parent[*a];
                    }
                }
            }
            g.out_edges[u].push_back(g.edges.size());
            g.edges.push_back({u, t, v});
        }
    }
    return g;
}

/// Bound of a place, or one of the "unknown"/"unbounded" verdicts.
struct PlaceBound {
    enum class Kind { Exact, Unbounded, Unknown } kind = Kind::Unknown;
    std::int64_t value = 0;

    static PlaceBound exact(std::int64_t v) { return {Kind::Exact, v}; }
    static PlaceBound unbounded() { return {Kind::Unbounded, 0}; }
    static PlaceBound unknown() { return {Kind::Unknown, 0}; }

    std::string to_string() const {
        switch (kind) {
            case Kind::Exact: return std::to_string(value);
            case Kind::Unbounded: return "unbounded";
            default: return "unknown";
        }
    }
};

/// Per-place token maxima over the explored graph. On a complete graph the
/// result is exact. On a truncated graph nothing definite is known, except
/// that places named by an omega witness grow without bound.
inline std::vector<PlaceBound> bounds(const NetDefinition& net, const ReachGraph& g) {
    std::vector<PlaceBound> out(net.place_count(), PlaceBound::unknown());
    if (g.truncated) {
        if (g.omega_witness)
            for (auto p : g.omega_witness->growing_places) out[p] = PlaceBound::unbounded();
        return out;
    }
    std::vector<std::int64_t> mx(net.place_count(), 0);
    for (const auto& node : g.nodes)
        for (std::size_t p = 0; p < mx.size(); ++p)
            mx[p] = std::max(mx[p], node.marking.tokens[p]);
    for (std::size_t p = 0; p < mx.size(); ++p) out[p] = PlaceBound::exact(mx[p]);
    return out;
}

/// Liveness per transition on a complete graph: from every node some node
/// enabling t must be forward-reachable, computed by reverse reachability
/// from the nodes with a t-labeled out-edge. Throws on truncated graphs;
/// callers are expected to report "unknown" instead.
inline std::vector<bool> liveness(const NetDefinition& net, const ReachGraph& g) {
    if (g.truncated) throw NetError("liveness: graph is truncated");

    std::vector<std::vector<std::size_t>> rev(g.nodes.size());
    for (const auto& e : g.edges) rev[e.to].push_back(e.from);

    std::vector<bool> result(net.transition_count(), false);
    std::vector<char> mark(g.nodes.size(), 0);
    for (std::size_t t = 0; t < net.transition_count(); ++t) {
        std::fill(mark.begin(), mark.end(), 0);
        std::deque<std::size_t> queue;
        for (const auto& e : g.edges) {
            if (e.transition == t && !mark[e.from]) {
                mark[e.from] = 1;
                queue.push_back(e.from);
            }
        }
        while (!queue.empty()) {
            std::size_t v = queue.front();
            queue.pop_front();
            for (auto u : rev[v]) {
                if (!mark[u]) {
                    mark[u] = 1;
                    queue.push_back(u);
                }
            }
        }
        result[t] = std::all_of(mark.begin(), mark.end(), [](char c) { return c != 0; });
    }
    return result;
}

/// Forward-reachable node set from `from` (including itself).
inline std::vector<char> reachable_set(const ReachGraph& g, std::size_t from) {
    std::vector<char> seen(g.nodes.size(), 0);
    std::deque<std::size_t> queue{from};
    seen[from] = 1;
    while (!queue.empty()) {
        std::size_t u = queue.front();
        queue.pop_front();
        for (auto ei : g.out_edges[u]) {
            std::size_t v = g.edges[ei].to;
            if (!seen[v]) {
                seen[v] = 1;
                queue.push_back(v);
            }
        }
    }
    return seen;
}

}  // namespace fermentor::petri
