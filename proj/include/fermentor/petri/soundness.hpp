#pragma once

#include <chrono>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fermentor/petri/explore.hpp"
#include "fermentor/petri/net.hpp"

namespace fermentor::petri {

struct SoundnessVerdict {
    enum class Kind { Sound, Unsound, Unknown } kind = Kind::Unknown;
    int violated_clause = 0;          // 1, 2 or 3 when unsound
    std::string reason;
    std::optional<NetState> witness;  // offending state for clauses 1 and 2

    bool sound() const { return kind == Kind::Sound; }
    std::string to_string() const {
        switch (kind) {
            case Kind::Sound: return "sound";
            case Kind::Unsound: return "unsound(" + reason + ")";
            default: return "unknown(" + reason + ")";
        }
    }
};

namespace detail {

inline std::string describe_marking(const NetDefinition& net, const NetState& s) {
    std::ostringstream out;
    bool first = true;
    for (std::size_t p = 0; p < net.place_count(); ++p) {
        if (s.marking.tokens[p] == 0) continue;
        if (!first) out << ",";
        out << net.places()[p].id << ":" << s.marking.tokens[p];
        first = false;
    }
    if (first) out << "(empty)";
    for (std::size_t i = 0; i < s.residual.size(); ++i) {
        const auto& arc = net.resolved_arcs()[net.rewritable_arcs()[i]];
        if (s.residual[i] == arc.rewrite_limit) continue;
        std::string src = arc.place_to_transition ? net.places()[arc.place].id
                                                  : net.transitions()[arc.transition].id;
        std::string dst = arc.place_to_transition ? net.transitions()[arc.transition].id
                                                  : net.places()[arc.place].id;
        out << ";" << src << "->" << dst << "@" << s.residual[i];
    }
    return out.str();
}

}  // namespace detail

/// Proper-completion check over the graph of the plain (unextended) workflow.
/// The clean end marking is one token on the end place and zero elsewhere.
///
///   clause 1: from every reachable state, some state marking the end place
///             is reachable (the option to complete);
///   clause 2: any reachable marking that covers the end marking equals it
///             (completion leaves nothing behind);
///   clause 3: every transition labels at least one edge of the graph.
///
/// The first violated clause, with a witness, is reported.
inline SoundnessVerdict soundness(const NetDefinition& net, const WorkflowInfo& workflow,
                                  const ReachGraph& graph) {
    if (!workflow.is_workflow) throw NetError("soundness: net is not a workflow");
    if (graph.truncated) return {SoundnessVerdict::Kind::Unknown, 0, "state space truncated", std::nullopt};

    const std::size_t end = *workflow.end_place;

    // clause 1: reverse reachability from the end-marked states
    std::vector<std::vector<std::size_t>> rev(graph.nodes.size());
    for (const auto& e : graph.edges) rev[e.to].push_back(e.from);
    std::vector<char> can_finish(graph.nodes.size(), 0);
    std::deque<std::size_t> queue;
    for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
        if (graph.nodes[i].marking.tokens[end] >= 1) {
            can_finish[i] = 1;
            queue.push_back(i);
        }
    }
    while (!queue.empty()) {
        std::size_t v = queue.front();
        queue.pop_front();
        for (auto u : rev[v])
            if (!can_finish[u]) {
                can_finish[u] = 1;
                queue.push_back(u);
            }
    }
    for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
        if (!can_finish[i]) {
            return {SoundnessVerdict::Kind::Unsound, 1,
                    "clause 1: end place unreachable from state {" +
                        detail::describe_marking(net, graph.nodes[i]) + "}",
                    graph.nodes[i]};
        }
    }

    // clause 2: any marking covering the end marking must equal it
    for (const auto& node : graph.nodes) {
        if (node.marking.tokens[end] < 1) continue;
        bool extra = node.marking.tokens[end] > 1;
        for (std::size_t p = 0; p < net.place_count() && !extra; ++p)
            if (p != end && node.marking.tokens[p] > 0) extra = true;
        if (extra) {
            return {SoundnessVerdict::Kind::Unsound, 2,
                    "clause 2: tokens left behind in end-marked state {" +
                        detail::describe_marking(net, node) + "}",
                    node};
        }
    }

    // clause 3: no transition is dead
    std::vector<char> fired(net.transition_count(), 0);
    for (const auto& e : graph.edges) fired[e.transition] = 1;
    for (std::size_t t = 0; t < net.transition_count(); ++t) {
        if (!fired[t]) {
            return {SoundnessVerdict::Kind::Unsound, 3,
                    "clause 3: transition '" + net.transitions()[t].id + "' never fires",
                    std::nullopt};
        }
    }
    return {SoundnessVerdict::Kind::Sound, 0, "", std::nullopt};
}

struct TheoremVerdict {
    enum class Kind { Holds, Fails, Unknown } kind = Kind::Unknown;
    std::string reason;
    std::size_t nodes = 0;
    std::size_t edges = 0;

    bool holds() const { return kind == Kind::Holds; }
    std::string to_string() const {
        switch (kind) {
            case Kind::Holds: return "holds";
            case Kind::Fails: return "fails(" + reason + ")";
            default: return "unknown(" + reason + ")";
        }
    }
};

/// The liveness-and-boundedness route: extend the workflow (or keep the
/// extension it already has), explore, and accept when every transition is
/// live and every place bounded.
inline TheoremVerdict soundness_via_theorem1(const NetDefinition& net, const WorkflowInfo& workflow,
                                             const ExploreOptions& opts = {}) {
    if (!workflow.is_workflow) throw NetError("soundness_via_theorem1: net is not a workflow");

    NetDefinition extended = workflow.extension_transition ? net : extend_workflow(net);
    WorkflowInfo info = workflow.extension_transition
                            ? workflow
                            : classify_workflow(extended);

    ExploreOptions run = opts;
    run.fire.reset_transition = info.extension_transition;
    ReachGraph g = explore(extended, run);

    TheoremVerdict v;
    v.nodes = g.nodes.size();
    v.edges = g.edges.size();
    if (g.omega_witness) {
        v.kind = TheoremVerdict::Kind::Fails;
        v.reason = "place '" + extended.places()[g.omega_witness->growing_places.front()].id +
                   "' grows without bound";
        return v;
    }
    if (g.truncated) {
        v.kind = TheoremVerdict::Kind::Unknown;
        v.reason = "state space truncated";
        return v;
    }
    auto live = liveness(extended, g);
    for (std::size_t t = 0; t < live.size(); ++t) {
        if (!live[t]) {
            v.kind = TheoremVerdict::Kind::Fails;
            v.reason = "transition '" + extended.transitions()[t].id + "' is not live in the extension";
            return v;
        }
    }
    v.kind = TheoremVerdict::Kind::Holds;
    return v;
}

/// Everything the `verify` command reports for one net.
struct AnalysisReport {
    std::string net_name;
    std::size_t nodes = 0;
    std::size_t edges = 0;
    bool truncated = false;
    bool omega = false;
    std::vector<std::pair<std::string, PlaceBound>> place_bounds;
    std::vector<std::pair<std::string, std::string>> live;  // id -> "true"/"false"/"unknown"
    bool workflow = false;
    std::string start_place, end_place, extension;
    SoundnessVerdict sound;
    TheoremVerdict theorem1;
    double wall_seconds = 0.0;
};

/// Full analysis pipeline: explore the net as given, judge bounds and
/// liveness on that graph, then run the soundness checks on the plain
/// workflow underneath (stripping an existing extension transition first).
inline AnalysisReport analyze(const NetDefinition& net, const ExploreOptions& opts = {}) {
    auto t0 = std::chrono::steady_clock::now();
    AnalysisReport report;
    report.net_name = net.name();

    WorkflowInfo wf = classify_workflow(net);
    ExploreOptions run = opts;
    run.fire.reset_transition = wf.extension_transition;
    ReachGraph g = explore(net, run);
    report.nodes = g.nodes.size();
    report.edges = g.edges.size();
    report.truncated = g.truncated;
    report.omega = g.omega_witness.has_value();

    auto bnds = bounds(net, g);
    for (std::size_t p = 0; p < net.place_count(); ++p)
        report.place_bounds.emplace_back(net.places()[p].id, bnds[p]);

    if (!g.truncated) {
        auto live = liveness(net, g);
        for (std::size_t t = 0; t < net.transition_count(); ++t)
            report.live.emplace_back(net.transitions()[t].id, live[t] ? "true" : "false");
    } else {
        for (const auto& t : net.transitions()) report.live.emplace_back(t.id, "unknown");
    }

    report.workflow = wf.is_workflow;
    if (wf.is_workflow) {
        report.start_place = net.places()[*wf.start_place].id;
        report.end_place = net.places()[*wf.end_place].id;
        if (wf.extension_transition)
            report.extension = net.transitions()[*wf.extension_transition].id;

        if (wf.extension_transition) {
            NetDefinition plain = without_transition(net, *wf.extension_transition);
            WorkflowInfo plain_wf = classify_workflow(plain);
            ExploreOptions plain_opts = opts;
            plain_opts.fire = {};
            report.sound = soundness(plain, plain_wf, explore(plain, plain_opts));
        } else {
            ExploreOptions plain_opts = opts;
            plain_opts.fire = {};
            report.sound = soundness(net, wf, g.truncated ? explore(net, plain_opts) : g);
        }
        report.theorem1 = soundness_via_theorem1(net, wf, opts);
    } else {
        report.sound = {SoundnessVerdict::Kind::Unknown, 0, "not a workflow", std::nullopt};
        report.theorem1 = {TheoremVerdict::Kind::Unknown, "not a workflow", 0, 0};
    }

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

}  // namespace fermentor::petri
