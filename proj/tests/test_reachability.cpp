#include <catch2/catch_amalgamated.hpp>

#include "fermentor/petri/explore.hpp"
#include "fermentor/petri/parse.hpp"
#include "netgen.hpp"
#include "oracle.hpp"

using namespace fermentor::petri;

TEST_CASE("explore enumerates a chain") {
    auto net = netgen::chain();
    auto g = explore(net);
    CHECK(g.nodes.size() == 2);
    CHECK(g.edges.size() == 1);
    CHECK(g.root == 0);
    CHECK_FALSE(g.truncated);
}

TEST_CASE("explore walks a rewritable feedback loop through its budget") {
    auto net = parse_net(
        "net loop\n"
        "place p init 1\n"
        "trans t\n"
        "arc p -> t\n"
        "arc t -> p rewritable 2\n");
    auto g = explore(net);
    // residual 2, 1, 0 with the token, then the drained state
    CHECK(g.nodes.size() == 4);
    CHECK(g.edges.size() == 3);
}

TEST_CASE("explore flags unbounded producers") {
    auto net = parse_net(
        "net pump\n"
        "place p\n"
        "trans t\n"
        "arc t -> p\n");
    ExploreOptions opts;
    opts.budget = 50;
    auto g = explore(net, opts);
    CHECK(g.truncated);
    REQUIRE(g.omega_witness.has_value());
    CHECK(g.omega_witness->growing_places == std::vector<std::size_t>{0});

    auto b = bounds(net, g);
    CHECK(b[0].kind == PlaceBound::Kind::Unbounded);
}

TEST_CASE("explore rejects a zero budget") {
    CHECK_THROWS_AS(explore(netgen::chain(), ExploreOptions{0, {}}), NetError);
}

TEST_CASE("explore numbering is deterministic") {
    for (std::uint64_t seed : {3u, 17u, 99u}) {
        auto net = netgen::random_net(seed);
        auto a = explore(net);
        auto b = explore(net);
        REQUIRE(a.nodes.size() == b.nodes.size());
        for (std::size_t i = 0; i < a.nodes.size(); ++i) CHECK(a.nodes[i] == b.nodes[i]);
        REQUIRE(a.edges.size() == b.edges.size());
        for (std::size_t i = 0; i < a.edges.size(); ++i) {
            CHECK(a.edges[i].from == b.edges[i].from);
            CHECK(a.edges[i].transition == b.edges[i].transition);
            CHECK(a.edges[i].to == b.edges[i].to);
        }
    }
}

TEST_CASE("bounds are exact on complete graphs") {
    auto net = netgen::chain();
    auto g = explore(net);
    auto b = bounds(net, g);
    REQUIRE(b.size() == 2);
    CHECK(b[0].kind == PlaceBound::Kind::Exact);
    CHECK(b[0].value == 1);
    CHECK(b[1].value == 1);

    // fork: two producers into one place can stack two tokens
    auto fork = parse_net(
        "net fork\n"
        "place a init 1\n"
        "place b init 1\n"
        "place c\n"
        "trans t1\n"
        "trans t2\n"
        "arc a -> t1\n"
        "arc t1 -> c\n"
        "arc b -> t2\n"
        "arc t2 -> c\n");
    auto bg = explore(fork);
    auto fb = bounds(fork, bg);
    CHECK(fb[2].value == 2);
}

TEST_CASE("bounds are unknown when truncated") {
    auto net = netgen::parallel_sync();
    ExploreOptions opts;
    opts.budget = 2;
    auto g = explore(net, opts);
    REQUIRE(g.truncated);
    auto b = bounds(net, g);
    for (const auto& pb : b) CHECK(pb.kind != PlaceBound::Kind::Exact);
}

TEST_CASE("liveness distinguishes cyclic from terminating workflows") {
    auto chain = netgen::chain();
    auto ext = extend_workflow(chain);
    auto live = liveness(ext, explore(ext));
    CHECK(std::all_of(live.begin(), live.end(), [](bool b) { return b; }));

    auto plain = liveness(chain, explore(chain));
    CHECK_FALSE(plain[0]);  // t is dead once end is reached

    auto dead = netgen::dead_transition();
    auto dl = liveness(dead, explore(dead));
    CHECK_FALSE(dl[1]);

    ExploreOptions tiny;
    tiny.budget = 1;
    auto trunc = explore(netgen::parallel_sync(), tiny);
    CHECK_THROWS_AS(liveness(netgen::parallel_sync(), trunc), NetError);
}

TEST_CASE("explore matches the brute-force simulator on random nets") {
    for (std::uint64_t seed = 1000; seed < 1040; ++seed) {
        auto net = netgen::random_net(seed);
        ExploreOptions opts;
        opts.budget = 60000;
        auto g = explore(net, opts);
        if (g.truncated) continue;

        auto onet = oracle::load(net);
        auto expected = oracle::reachable(onet);
        REQUIRE(!expected.empty());
        REQUIRE(g.nodes.size() == expected.size());
        for (const auto& node : g.nodes)
            CHECK(expected.count(oracle::convert(net, node)) == 1);
    }
}

TEST_CASE("bounds agree with the oracle's maxima") {
    for (std::uint64_t seed = 2000; seed < 2020; ++seed) {
        auto net = netgen::random_net(seed);
        ExploreOptions opts;
        opts.budget = 60000;
        auto g = explore(net, opts);
        if (g.truncated) continue;
        auto onet = oracle::load(net);
        auto states = oracle::reachable(onet);
        REQUIRE(!states.empty());
        auto b = bounds(net, g);
        for (std::size_t p = 0; p < net.place_count(); ++p) {
            long mx = 0;
            for (const auto& s : states) mx = std::max(mx, s.tokens.at(net.places()[p].id));
            REQUIRE(b[p].kind == PlaceBound::Kind::Exact);
            CHECK(b[p].value == mx);
        }
    }
}
