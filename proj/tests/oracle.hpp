// Brute-force reference simulator used as an independent oracle. It shares no
// code with the library: nets are re-read into name-keyed maps and the firing
// rules are evaluated directly on those maps, saturating the reachable set by
// trying every transition from every discovered state.
#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "fermentor/petri/net.hpp"

namespace oracle {

struct OState {
    std::map<std::string, long> tokens;
    std::map<std::string, long> residual;  // key "src->dst"

    bool operator<(const OState& o) const {
        if (tokens != o.tokens) return tokens < o.tokens;
        return residual < o.residual;
    }
    bool operator==(const OState& o) const {
        return tokens == o.tokens && residual == o.residual;
    }
};

struct ONet {
    struct Arc {
        std::string place;
        bool into_transition;
        long weight;
        long limit;  // 0 = not rewritable
        std::string key;
    };
    std::map<std::string, long> capacity;  // -1 = unbounded
    std::map<std::string, long> init;
    std::vector<std::string> transition_order;
    std::map<std::string, std::vector<Arc>> arcs;  // per transition
};

inline ONet load(const fermentor::petri::NetDefinition& net) {
    ONet o;
    for (const auto& p : net.places()) {
        o.capacity[p.id] = p.bounded() ? p.capacity : -1;
        o.init[p.id] = p.initial_tokens;
    }
    for (const auto& t : net.transitions()) {
        o.transition_order.push_back(t.id);
        o.arcs[t.id] = {};
    }
    for (const auto& a : net.arcs()) {
        bool into = net.has_place(a.source);
        ONet::Arc arc;
        arc.place = into ? a.source : a.target;
        arc.into_transition = into;
        arc.weight = a.weight;
        arc.limit = a.rewrite_limit.value_or(0);
        arc.key = a.source + "->" + a.target;
        o.arcs[into ? a.target : a.source].push_back(arc);
    }
    return o;
}

inline OState start(const ONet& net) {
    OState s;
    s.tokens = net.init;
    for (const auto& [t, arcs] : net.arcs)
        for (const auto& a : arcs)
            if (a.limit > 0) s.residual[a.key] = a.limit;
    return s;
}

inline bool arc_alive(const OState& s, const ONet::Arc& a) {
    if (a.limit == 0) return true;
    return s.residual.at(a.key) > 0;
}

inline bool can_fire(const ONet& net, const OState& s, const std::string& t) {
    const auto& arcs = net.arcs.at(t);
    for (const auto& a : arcs) {
        if (!arc_alive(s, a)) continue;
        if (a.into_transition && s.tokens.at(a.place) < a.weight) return false;
    }
    for (const auto& a : arcs) {
        if (!arc_alive(s, a) || a.into_transition) continue;
        long cap = net.capacity.at(a.place);
        if (cap < 0) continue;
        long after = s.tokens.at(a.place) + a.weight;
        for (const auto& b : arcs)
            if (b.into_transition && b.place == a.place && arc_alive(s, b)) after -= b.weight;
        if (after > cap) return false;
    }
    return true;
}

inline OState apply(const ONet& net, const OState& s, const std::string& t) {
    OState next = s;
    for (const auto& a : net.arcs.at(t)) {
        if (!arc_alive(s, a)) continue;
        next.tokens[a.place] += a.into_transition ? -a.weight : a.weight;
    }
    for (const auto& a : net.arcs.at(t))
        if (a.limit > 0 && next.residual[a.key] > 0) next.residual[a.key] -= 1;
    return next;
}

/// Saturates the reachable set, trying every transition from every state.
/// Returns the full set, or an empty set if `max_states` is exceeded.
inline std::set<OState> reachable(const ONet& net, std::size_t max_states = 200000) {
    std::set<OState> seen;
    std::vector<OState> work{start(net)};
    seen.insert(work[0]);
    while (!work.empty()) {
        OState s = work.back();
        work.pop_back();
        for (const auto& t : net.transition_order) {
            if (!can_fire(net, s, t)) continue;
            OState n = apply(net, s, t);
            if (seen.insert(n).second) {
                if (seen.size() > max_states) return {};
                work.push_back(n);
            }
        }
    }
    return seen;
}

// Converts a library state into the oracle's representation for comparison.
inline OState convert(const fermentor::petri::NetDefinition& net,
                      const fermentor::petri::NetState& s) {
    OState o;
    for (std::size_t p = 0; p < net.place_count(); ++p)
        o.tokens[net.places()[p].id] = s.marking.tokens[p];
    for (std::size_t i = 0; i < net.rewritable_arcs().size(); ++i) {
        const auto& arc = net.resolved_arcs()[net.rewritable_arcs()[i]];
        std::string src = arc.place_to_transition ? net.places()[arc.place].id
                                                  : net.transitions()[arc.transition].id;
        std::string dst = arc.place_to_transition ? net.transitions()[arc.transition].id
                                                  : net.places()[arc.place].id;
        o.residual[src + "->" + dst] = s.residual[i];
    }
    return o;
}

}  // namespace oracle
