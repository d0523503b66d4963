#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fermentor::petri {

/// Sentinel for places without a declared capacity.
inline constexpr std::int64_t kUnboundedCapacity = std::numeric_limits<std::int64_t>::max();

struct PlaceDef {
    std::string id;
    std::int64_t capacity = kUnboundedCapacity;
    std::int64_t initial_tokens = 0;
    std::string label;

    bool bounded() const { return capacity != kUnboundedCapacity; }
};

struct TransitionDef {
    std::string id;
    std::string label;
};

struct ArcDef {
    std::string source;
    std::string target;
    std::int64_t weight = 1;
    std::optional<std::int64_t> rewrite_limit;  // present only for rewritable arcs
};

class NetError : public std::runtime_error {
  public:
    explicit NetError(const std::string& what) : std::runtime_error(what) {}
};

// Indexed view of an arc after name resolution. `place`/`transition` index into
// the owning net's declaration vectors; `place_to_transition` gives direction.
struct ResolvedArc {
    std::size_t place = 0;
    std::size_t transition = 0;
    bool place_to_transition = true;
    std::int64_t weight = 1;
    std::int64_t rewrite_limit = 0;   // 0 when the arc is not rewritable
    int rewritable_index = -1;        // position in the net's rewritable-arc list
};

/// Structure of an edge-rewritable net. Immutable after construction; the
/// token game masks arcs through residual counters instead of mutating F.
class NetDefinition {
  public:
    NetDefinition() = default;

    NetDefinition(std::string name, std::vector<PlaceDef> places,
                  std::vector<TransitionDef> transitions, std::vector<ArcDef> arcs)
        : name_(std::move(name)),
          places_(std::move(places)),
          transitions_(std::move(transitions)),
          arcs_(std::move(arcs)) {
        build_index();
    }

    const std::string& name() const { return name_; }
    const std::vector<PlaceDef>& places() const { return places_; }
    const std::vector<TransitionDef>& transitions() const { return transitions_; }
    const std::vector<ArcDef>& arcs() const { return arcs_; }
    const std::vector<ResolvedArc>& resolved_arcs() const { return resolved_; }

    std::size_t place_count() const { return places_.size(); }
    std::size_t transition_count() const { return transitions_.size(); }
    std::size_t rewritable_count() const { return rewritable_arcs_.size(); }

    /// Indices into resolved_arcs() of the rewritable arcs, in declaration order.
    const std::vector<std::size_t>& rewritable_arcs() const { return rewritable_arcs_; }

    /// Arcs incident to a transition, in arc declaration order.
    const std::vector<std::size_t>& arcs_of_transition(std::size_t t) const {
        return by_transition_.at(t);
    }

    std::size_t place_index(const std::string& id) const {
        auto it = place_ids_.find(id);
        if (it == place_ids_.end()) throw NetError("unknown place id: " + id);
        return it->second;
    }

    std::size_t transition_index(const std::string& id) const {
        auto it = transition_ids_.find(id);
        if (it == transition_ids_.end()) throw NetError("unknown transition id: " + id);
        return it->second;
    }

    bool has_place(const std::string& id) const { return place_ids_.count(id) > 0; }
    bool has_transition(const std::string& id) const { return transition_ids_.count(id) > 0; }

  private:
    void build_index() {
        for (std::size_t i = 0; i < places_.size(); ++i) {
            const auto& p = places_[i];
            if (p.capacity < 0) throw NetError("place " + p.id + ": negative capacity");
            if (p.initial_tokens < 0) throw NetError("place " + p.id + ": negative initial tokens");
            if (p.bounded() && p.initial_tokens > p.capacity)
                throw NetError("place " + p.id + ": initial tokens exceed capacity");
            if (!place_ids_.emplace(p.id, i).second)
                throw NetError("duplicate place id: " + p.id);
        }
        for (std::size_t i = 0; i < transitions_.size(); ++i) {
            const auto& t = transitions_[i];
            if (place_ids_.count(t.id))
                throw NetError("id used for both a place and a transition: " + t.id);
            if (!transition_ids_.emplace(t.id, i).second)
                throw NetError("duplicate transition id: " + t.id);
        }

        by_transition_.assign(transitions_.size(), {});
        std::map<std::pair<std::string, std::string>, int> seen;
        for (const auto& arc : arcs_) {
            if (arc.weight < 1) throw NetError("arc " + arc.source + " -> " + arc.target + ": weight must be positive");
            if (arc.rewrite_limit && *arc.rewrite_limit < 1)
                throw NetError("arc " + arc.source + " -> " + arc.target + ": rewrite limit must be >= 1");
            if (!seen.emplace(std::make_pair(arc.source, arc.target), 1).second)
                throw NetError("duplicate arc: " + arc.source + " -> " + arc.target);

            const bool src_place = place_ids_.count(arc.source) > 0;
            const bool src_trans = transition_ids_.count(arc.source) > 0;
            const bool dst_place = place_ids_.count(arc.target) > 0;
            const bool dst_trans = transition_ids_.count(arc.target) > 0;
            if (!src_place && !src_trans) throw NetError("arc references undeclared node: " + arc.source);
            if (!dst_place && !dst_trans) throw NetError("arc references undeclared node: " + arc.target);
            if (src_place && dst_place)
                throw NetError("arc " + arc.source + " -> " + arc.target + ": place-to-place arcs are not allowed");
            if (src_trans && dst_trans)
                throw NetError("arc " + arc.source + " -> " + arc.target + ": transition-to-transition arcs are not allowed");

            ResolvedArc r;
            r.place_to_transition = src_place;
            r.place = place_ids_.at(src_place ? arc.source : arc.target);
            r.transition = transition_ids_.at(src_place ? arc.target : arc.source);
            r.weight = arc.weight;
            if (arc.rewrite_limit) {
                r.rewrite_limit = *arc.rewrite_limit;
                r.rewritable_index = static_cast<int>(rewritable_arcs_.size());
                rewritable_arcs_.push_back(resolved_.size());
            }
            by_transition_[r.transition].push_back(resolved_.size());
            resolved_.push_back(r);
        }
    }

    std::string name_;
    std::vector<PlaceDef> places_;
    std::vector<TransitionDef> transitions_;
    std::vector<ArcDef> arcs_;
    std::vector<ResolvedArc> resolved_;
    std::vector<std::size_t> rewritable_arcs_;
    std::vector<std::vector<std::size_t>> by_transition_;
    std::map<std::string, std::size_t> place_ids_;
    std::map<std::string, std::size_t> transition_ids_;
};

struct Marking {
    std::vector<std::int64_t> tokens;  // indexed by place declaration order

    bool operator==(const Marking&) const = default;
    auto operator<=>(const Marking&) const = default;
};

/// Dynamic state: marking plus the remaining firing budget of every
/// rewritable arc (indexed per NetDefinition::rewritable_arcs). A counter of
/// zero means the arc has been removed from the live arc set.
struct NetState {
    Marking marking;
    std::vector<std::int64_t> residual;

    bool operator==(const NetState&) const = default;
    auto operator<=>(const NetState&) const = default;
};

struct NetStateHash {
    std::size_t operator()(const NetState& s) const {
        std::size_t h = 1469598103934665603ull;
        auto mix = [&h](std::int64_t v) {
            h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        };
        for (auto v : s.marking.tokens) mix(v);
        for (auto v : s.residual) mix(v ^ 0x517cc1b727220a95ll);
        return h;
    }
};

inline bool arc_live(const ResolvedArc& arc, const NetState& state) {
    return arc.rewritable_index < 0 || state.residual[static_cast<std::size_t>(arc.rewritable_index)] > 0;
}

inline NetState initial_state(const NetDefinition& net) {
    NetState s;
    s.marking.tokens.reserve(net.place_count());
    for (const auto& p : net.places()) s.marking.tokens.push_back(p.initial_tokens);
    s.residual.reserve(net.rewritable_count());
    for (auto idx : net.rewritable_arcs()) s.residual.push_back(net.resolved_arcs()[idx].rewrite_limit);
    return s;
}

/// Enabling test over the live arc set. Input places need weight-many tokens;
/// bounded output places must be able to hold the post-firing count, where a
/// self-loop place is charged its input weight before its output weight.
inline bool enabled(const NetDefinition& net, const NetState& state, std::size_t t) {
    if (t >= net.transition_count()) throw NetError("unknown transition index");
    for (auto ai : net.arcs_of_transition(t)) {
        const auto& arc = net.resolved_arcs()[ai];
        if (!arc_live(arc, state)) continue;
        if (arc.place_to_transition) {
            if (state.marking.tokens[arc.place] < arc.weight) return false;
        } else {
            const auto& place = net.places()[arc.place];
            if (!place.bounded()) continue;
            std::int64_t after = state.marking.tokens[arc.place] + arc.weight;
            // self-loop: the matching input arc is consumed first
            for (auto aj : net.arcs_of_transition(t)) {
                const auto& in = net.resolved_arcs()[aj];
                if (in.place_to_transition && in.place == arc.place && arc_live(in, state)) {
                    after -= in.weight;
                    break;
                }
            }
            if (after > place.capacity) return false;
        }
    }
    return true;
}

inline bool enabled(const NetDefinition& net, const NetState& state, const std::string& transition_id) {
    return enabled(net, state, net.transition_index(transition_id));
}

/// Fires `t`, returning the successor state. Pure: the input state is not
/// touched. Every live rewritable arc whose transition endpoint is `t` has its
/// residual decremented; hitting zero removes the arc from later firings.
inline NetState fire(const NetDefinition& net, const NetState& state, std::size_t t) {
    if (!enabled(net, state, t))
        throw NetError("fire: transition '" + net.transitions()[t].id + "' is not enabled");
    NetState next = state;
    for (auto ai : net.arcs_of_transition(t)) {
        const auto& arc = net.resolved_arcs()[ai];
        if (!arc_live(arc, state)) continue;
        if (arc.place_to_transition)
            next.marking.tokens[arc.place] -= arc.weight;
        else
            next.marking.tokens[arc.place] += arc.weight;
    }
    for (auto ai : net.arcs_of_transition(t)) {
        const auto& arc = net.resolved_arcs()[ai];
        if (arc.rewritable_index >= 0) {
            auto& budget = next.residual[static_cast<std::size_t>(arc.rewritable_index)];
            if (budget > 0) --budget;
        }
    }
    return next;
}

inline NetState fire(const NetDefinition& net, const NetState& state, const std::string& transition_id) {
    return fire(net, state, net.transition_index(transition_id));
}

/// Optional post-firing rule used by exploration: when `reset_transition`
/// fires and the marking lands back on the initial marking, all residual
/// counters are restored to their declared limits.
struct FireOptions {
    bool restore_on_reset = false;
    std::optional<std::size_t> reset_transition;
};

inline NetState step(const NetDefinition& net, const NetState& state, std::size_t t,
                     const FireOptions& opts) {
    NetState next = fire(net, state, t);
    if (opts.restore_on_reset && opts.reset_transition && *opts.reset_transition == t) {
        const NetState init = initial_state(net);
        if (next.marking == init.marking) next.residual = init.residual;
    }
    return next;
}

struct WorkflowInfo {
    std::optional<std::size_t> start_place;
    std::optional<std::size_t> end_place;
    bool is_workflow = false;
    std::optional<std::size_t> extension_transition;
};

namespace detail {

// Sources/sinks of the structural arc set, optionally ignoring one transition.
inline void sources_and_sinks(const NetDefinition& net, std::optional<std::size_t> skip_transition,
                              std::vector<std::size_t>& sources, std::vector<std::size_t>& sinks) {
    std::vector<bool> has_in(net.place_count(), false), has_out(net.place_count(), false);
    for (const auto& arc : net.resolved_arcs()) {
        if (skip_transition && arc.transition == *skip_transition) continue;
        if (arc.place_to_transition)
            has_out[arc.place] = true;
        else
            has_in[arc.place] = true;
    }
    sources.clear();
    sinks.clear();
    for (std::size_t p = 0; p < net.place_count(); ++p) {
        if (!has_in[p]) sources.push_back(p);
        if (!has_out[p]) sinks.push_back(p);
    }
}

}  // namespace detail

/// Identifies the workflow shape: a unique source place and a unique distinct
/// sink place. A net whose only deviation is one transition cycling the sink
/// back to the source is classified as an extended workflow, with that
/// transition reported; the first matching transition in declaration order
/// wins if several qualify.
inline WorkflowInfo classify_workflow(const NetDefinition& net) {
    WorkflowInfo info;
    std::vector<std::size_t> sources, sinks;
    detail::sources_and_sinks(net, std::nullopt, sources, sinks);
    if (sources.size() == 1 && sinks.size() == 1 && sources[0] != sinks[0]) {
        info.is_workflow = true;
        info.start_place = sources[0];
        info.end_place = sinks[0];
        return info;
    }

    for (std::size_t t = 0; t < net.transition_count(); ++t) {
        std::vector<std::size_t> preset, postset;
        for (auto ai : net.arcs_of_transition(t)) {
            const auto& arc = net.resolved_arcs()[ai];
            (arc.place_to_transition ? preset : postset).push_back(arc.place);
        }
        if (preset.size() != 1 || postset.size() != 1 || preset[0] == postset[0]) continue;
        detail::sources_and_sinks(net, t, sources, sinks);
        if (sources.size() == 1 && sinks.size() == 1 && sources[0] == postset[0] &&
            sinks[0] == preset[0]) {
            info.is_workflow = true;
            info.start_place = sources[0];
            info.end_place = sinks[0];
            info.extension_transition = t;
            return info;
        }
    }
    return info;
}

/// Adds the cycling transition that makes a workflow strongly connected:
/// one fresh transition consuming from the end place and producing into the
/// start place, both arcs weight 1.
inline NetDefinition extend_workflow(const NetDefinition& net) {
    WorkflowInfo info = classify_workflow(net);
    if (!info.is_workflow) throw NetError("extend_workflow: net is not a workflow");
    if (info.extension_transition)
        throw NetError("extend_workflow: extension transition already present: " +
                       net.transitions()[*info.extension_transition].id);

    std::string fresh = "t_ext";
    for (int n = 2; net.has_transition(fresh) || net.has_place(fresh); ++n)
        fresh = "t_ext" + std::to_string(n);

    auto transitions = net.transitions();
    transitions.push_back({fresh, "cycle end back to start"});
    auto arcs = net.arcs();
    arcs.push_back({net.places()[*info.end_place].id, fresh, 1, std::nullopt});
    arcs.push_back({fresh, net.places()[*info.start_place].id, 1, std::nullopt});
    return NetDefinition(net.name(), net.places(), std::move(transitions), std::move(arcs));
}

/// Copy of the net without the given transition and its arcs. Used to analyse
/// the plain workflow underneath an extended one.
inline NetDefinition without_transition(const NetDefinition& net, std::size_t t) {
    const std::string& id = net.transitions()[t].id;
    std::vector<TransitionDef> transitions;
    for (std::size_t i = 0; i < net.transition_count(); ++i)
        if (i != t) transitions.push_back(net.transitions()[i]);
    std::vector<ArcDef> arcs;
    for (const auto& arc : net.arcs())
        if (arc.source != id && arc.target != id) arcs.push_back(arc);
    return NetDefinition(net.name(), net.places(), std::move(transitions), std::move(arcs));
}

}  // namespace fermentor::petri
