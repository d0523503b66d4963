// Seeded net builders shared by the unit tests and the acceptance suite.
#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fermentor/petri/net.hpp"

namespace netgen {

using fermentor::petri::ArcDef;
using fermentor::petri::NetDefinition;
using fermentor::petri::PlaceDef;
using fermentor::petri::TransitionDef;

/// Random net within the oracle-friendly envelope: up to 5 places, up to 4
/// transitions, weights <= 2, capacities <= 3 or unbounded, rewrite limits
/// <= 2, initial tokens <= 2.
inline NetDefinition random_net(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto pick = [&rng](int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(rng);
    };

    int np = pick(1, 5), nt = pick(1, 4);
    std::vector<PlaceDef> places;
    for (int i = 0; i < np; ++i) {
        PlaceDef p;
        p.id = "p" + std::to_string(i);
        if (pick(0, 2) == 0) p.capacity = pick(1, 3);
        p.initial_tokens = pick(0, 2);
        if (p.bounded() && p.initial_tokens > p.capacity) p.initial_tokens = p.capacity;
        places.push_back(p);
    }
    std::vector<TransitionDef> transitions;
    for (int i = 0; i < nt; ++i) transitions.push_back({"t" + std::to_string(i), ""});

    std::vector<ArcDef> arcs;
    for (int p = 0; p < np; ++p) {
        for (int t = 0; t < nt; ++t) {
            if (pick(0, 99) < 35) {
                ArcDef a{"p" + std::to_string(p), "t" + std::to_string(t),
                         static_cast<std::int64_t>(pick(1, 2)), std::nullopt};
                if (pick(0, 99) < 25) a.rewrite_limit = pick(1, 2);
                arcs.push_back(a);
            }
            if (pick(0, 99) < 35) {
                ArcDef a{"t" + std::to_string(t), "p" + std::to_string(p),
                         static_cast<std::int64_t>(pick(1, 2)), std::nullopt};
                if (pick(0, 99) < 25) a.rewrite_limit = pick(1, 2);
                arcs.push_back(a);
            }
        }
    }
    if (arcs.empty()) arcs.push_back({"p0", "t0", 1, std::nullopt});
    return NetDefinition("rand" + std::to_string(seed), places, transitions, arcs);
}

/// start -> t -> end
inline NetDefinition chain() {
    return NetDefinition(
        "chain",
        {{"start", fermentor::petri::kUnboundedCapacity, 1, ""}, {"end", fermentor::petri::kUnboundedCapacity, 0, ""}},
        {{"t", ""}},
        {{"start", "t", 1, std::nullopt}, {"t", "end", 1, std::nullopt}});
}

/// Sound sequential workflow with an intermediate stage.
inline NetDefinition sequential() {
    return NetDefinition("sequential",
                         {{"start", fermentor::petri::kUnboundedCapacity, 1, ""},
                          {"mid", fermentor::petri::kUnboundedCapacity, 0, ""},
                          {"end", fermentor::petri::kUnboundedCapacity, 0, ""}},
                         {{"t1", ""}, {"t2", ""}},
                         {{"start", "t1", 1, std::nullopt},
                          {"t1", "mid", 1, std::nullopt},
                          {"mid", "t2", 1, std::nullopt},
                          {"t2", "end", 1, std::nullopt}});
}

/// Sound parallel split/join.
inline NetDefinition parallel_sync() {
    return NetDefinition("parallel_sync",
                         {{"start", fermentor::petri::kUnboundedCapacity, 1, ""},
                          {"p1", fermentor::petri::kUnboundedCapacity, 0, ""},
                          {"p2", fermentor::petri::kUnboundedCapacity, 0, ""},
                          {"q1", fermentor::petri::kUnboundedCapacity, 0, ""},
                          {"q2", fermentor::petri::kUnboundedCapacity, 0, ""},
                          {"end", fermentor::petri::kUnboundedCapacity, 0, ""}},
                         {{"t_split", ""}, {"t_a", ""}, {"t_b", ""}, {"t_join", ""}},
                         {{"start", "t_split", 1, std::nullopt},
                          {"t_split", "p1", 1, std::nullopt},
                          {"t_split", "p2", 1, std::nullopt},
                          {"p1", "t_a", 1, std::nullopt},
                          {"t_a", "q1", 1, std::nullopt},
                          {"p2", "t_b", 1, std::nullopt},
                          {"t_b", "q2", 1, std::nullopt},
                          {"q1", "t_join", 1, std::nullopt},
                          {"q2", "t_join", 1, std::nullopt},
                          {"t_join", "end", 1, std::nullopt}});
}

/// AND split feeding an XOR join: classic unsound pattern, a token stays
/// behind when either join branch completes.
inline NetDefinition broken_xor() {
    return NetDefinition("broken_xor",
                         {{"start", fermentor::petri::kUnboundedCapacity, 1, ""},
                          {"p1", fermentor::petri::kUnboundedCapacity, 0, ""},
                          {"p2", fermentor::petri::kUnboundedCapacity, 0, ""},
                          {"q", fermentor::petri::kUnboundedCapacity, 0, ""},
                          {"end", fermentor::petri::kUnboundedCapacity, 0, ""}},
                         {{"t_split", ""}, {"t_j1", ""}, {"t_j2", ""}, {"t_end", ""}},
                         {{"start", "t_split", 1, std::nullopt},
                          {"t_split", "p1", 1, std::nullopt},
                          {"t_split", "p2", 1, std::nullopt},
                          {"p1", "t_j1", 1, std::nullopt},
                          {"t_j1", "q", 1, std::nullopt},
                          {"p2", "t_j2", 1, std::nullopt},
                          {"t_j2", "q", 1, std::nullopt},
                          {"q", "t_end", 1, std::nullopt},
                          {"t_end", "end", 1, std::nullopt}});
}

/// Workflow with a transition whose input weight can never be met.
inline NetDefinition dead_transition() {
    return NetDefinition("dead_transition",
                         {{"start", fermentor::petri::kUnboundedCapacity, 1, ""},
                          {"end", fermentor::petri::kUnboundedCapacity, 0, ""}},
                         {{"t_a", ""}, {"t_dead", ""}},
                         {{"start", "t_a", 1, std::nullopt},
                          {"t_a", "end", 1, std::nullopt},
                          {"start", "t_dead", 2, std::nullopt},
                          {"t_dead", "end", 1, std::nullopt}});
}

/// Random workflow-shaped net: a seeded mix of sequence, parallel and choice
/// stages between unique start and end places. Some are sound, some are not.
inline NetDefinition random_workflow(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto pick = [&rng](int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(rng);
    };
    std::vector<PlaceDef> places{{"start", fermentor::petri::kUnboundedCapacity, 1, ""}};
    std::vector<TransitionDef> transitions;
    std::vector<ArcDef> arcs;
    int place_id = 0, trans_id = 0;
    auto fresh_place = [&]() {
        std::string id = "w" + std::to_string(place_id++);
        places.push_back({id, fermentor::petri::kUnboundedCapacity, 0, ""});
        return id;
    };
    auto fresh_trans = [&]() {
        std::string id = "u" + std::to_string(trans_id++);
        transitions.push_back({id, ""});
        return id;
    };

    std::string current = "start";
    int stages = pick(1, 3);
    for (int s = 0; s < stages; ++s) {
        int kind = pick(0, 3);
        if (kind == 0) {  // sequence
            auto t = fresh_trans();
            auto p = fresh_place();
            arcs.push_back({current, t, 1, std::nullopt});
            arcs.push_back({t, p, 1, std::nullopt});
            current = p;
        } else if (kind == 1) {  // parallel split + join
            auto split = fresh_trans();
            auto a = fresh_place();
            auto b = fresh_place();
            arcs.push_back({current, split, 1, std::nullopt});
            arcs.push_back({split, a, 1, std::nullopt});
            arcs.push_back({split, b, 1, std::nullopt});
            auto join = fresh_trans();
            auto p = fresh_place();
            arcs.push_back({a, join, 1, std::nullopt});
            arcs.push_back({b, join, 1, std::nullopt});
            arcs.push_back({join, p, 1, std::nullopt});
            current = p;
        } else if (kind == 2) {  // exclusive choice, both branches rejoin
            auto a = fresh_trans();
            auto b = fresh_trans();
            auto p = fresh_place();
            arcs.push_back({current, a, 1, std::nullopt});
            arcs.push_back({current, b, 1, std::nullopt});
            arcs.push_back({a, p, 1, std::nullopt});
            arcs.push_back({b, p, 1, std::nullopt});
            current = p;
        } else {  // parallel split joined exclusively: unsound stage
            auto split = fresh_trans();
            auto a = fresh_place();
            auto b = fresh_place();
            auto j1 = fresh_trans();
            auto j2 = fresh_trans();
            auto p = fresh_place();
            arcs.push_back({current, split, 1, std::nullopt});
            arcs.push_back({split, a, 1, std::nullopt});
            arcs.push_back({split, b, 1, std::nullopt});
            arcs.push_back({a, j1, 1, std::nullopt});
            arcs.push_back({j1, p, 1, std::nullopt});
            arcs.push_back({b, j2, 1, std::nullopt});
            arcs.push_back({j2, p, 1, std::nullopt});
            current = p;
        }
    }
    auto t = fresh_trans();
    places.push_back({"end", fermentor::petri::kUnboundedCapacity, 0, ""});
    arcs.push_back({current, t, 1, std::nullopt});
    arcs.push_back({t, "end", 1, std::nullopt});
    return NetDefinition("wf" + std::to_string(seed), places, transitions, arcs);
}

}  // namespace netgen
