#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "fermentor/petri/net.hpp"
#include "fermentor/petri/parse.hpp"
#include "netgen.hpp"

using namespace fermentor::petri;

static std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

TEST_CASE("parse_net builds a minimal chain") {
    auto net = parse_net(
        "net tiny\n"
        "place a init 1\n"
        "place b\n"
        "trans t\n"
        "arc a -> t\n"
        "arc t -> b\n");
    CHECK(net.name() == "tiny");
    CHECK(net.place_count() == 2);
    CHECK(net.transition_count() == 1);
    CHECK(net.arcs().size() == 2);
    CHECK(net.rewritable_count() == 0);
}

TEST_CASE("parse_net reads the bundled fermentation net") {
    auto net = parse_net(read_file(std::string(FERMENTOR_SOURCE_DIR) + "/examples/ssf.net"));
    CHECK(net.place_count() == 16);
    CHECK(net.transition_count() == 17);
    CHECK(net.rewritable_count() == 9);
    for (auto idx : net.rewritable_arcs()) CHECK(net.resolved_arcs()[idx].rewrite_limit == 2);
}

TEST_CASE("parse_net rejects malformed input") {
    CHECK_THROWS_AS(parse_net("net n\nplace a\nplace b\narc a -> b\n"), ParseError);
    CHECK_THROWS_AS(parse_net("net n\nplace a\nplace a\ntrans t\narc a -> t\n"), ParseError);
    CHECK_THROWS_AS(parse_net("net n\nplace a\ntrans t\narc a -> missing\n"), ParseError);
    CHECK_THROWS_AS(parse_net("net n\nplace a capacity 1 init 2\ntrans t\narc a -> t\n"), ParseError);
    CHECK_THROWS_AS(parse_net("place a\n"), ParseError);
    CHECK_THROWS_AS(parse_net("net n\nbogus x\n"), ParseError);

    try {
        parse_net("net n\nplace a\ntrans t\narc a => t\n");
        FAIL("expected parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 4);
        CHECK(e.column > 1);
    }
}

TEST_CASE("parse_net rejects duplicate arcs") {
    CHECK_THROWS_AS(parse_net("net n\nplace a\ntrans t\narc a -> t\narc a -> t weight 2\n"),
                    ParseError);
}

TEST_CASE("initial_state mirrors declarations") {
    auto net = netgen::chain();
    auto s = initial_state(net);
    CHECK(s.marking.tokens == std::vector<std::int64_t>{1, 0});
    CHECK(s.residual.empty());

    auto rw = parse_net(
        "net loop\n"
        "place p init 1\n"
        "trans t\n"
        "arc p -> t\n"
        "arc t -> p rewritable 3\n");
    auto s2 = initial_state(rw);
    REQUIRE(s2.residual.size() == 1);
    CHECK(s2.residual[0] == 3);
}

TEST_CASE("enabled follows weights and capacities") {
    auto net = parse_net(
        "net en\n"
        "place p1 init 1\n"
        "place p2 capacity 1 init 1\n"
        "trans t\n"
        "trans u\n"
        "arc p1 -> t\n"
        "arc u -> p2\n");
    auto s = initial_state(net);
    CHECK(enabled(net, s, "t"));
    s.marking.tokens[0] = 0;
    CHECK_FALSE(enabled(net, s, "t"));
    // u would push p2 to 2 > capacity 1
    CHECK_FALSE(enabled(net, s, "u"));
    s.marking.tokens[1] = 0;
    CHECK(enabled(net, s, "u"));
    CHECK_THROWS_AS(enabled(net, s, "nope"), NetError);
}

TEST_CASE("fire moves tokens and respects the self-loop rule") {
    auto net = netgen::chain();
    auto s = initial_state(net);
    auto s2 = fire(net, s, "t");
    CHECK(s2.marking.tokens == std::vector<std::int64_t>{0, 1});
    CHECK(s.marking.tokens == std::vector<std::int64_t>{1, 0});  // input untouched
    CHECK_THROWS_AS(fire(net, s2, "t"), NetError);

    // self loop: consume 2, produce 1
    auto loop = parse_net(
        "net sl\n"
        "place p init 2\n"
        "trans t\n"
        "arc p -> t weight 2\n"
        "arc t -> p weight 1\n");
    auto l0 = initial_state(loop);
    auto l1 = fire(loop, l0, "t");
    CHECK(l1.marking.tokens[0] == 1);
}

TEST_CASE("rewritable return arc disappears after its budget") {
    auto net = parse_net(
        "net fb\n"
        "place p init 1\n"
        "trans t\n"
        "arc p -> t\n"
        "arc t -> p rewritable 2\n");
    auto s0 = initial_state(net);
    auto s1 = fire(net, s0, "t");
    CHECK(s1.marking.tokens[0] == 1);
    CHECK(s1.residual[0] == 1);
    auto s2 = fire(net, s1, "t");
    CHECK(s2.marking.tokens[0] == 1);
    CHECK(s2.residual[0] == 0);
    // third firing sees no output arc: the token is consumed outright
    REQUIRE(enabled(net, s2, "t"));
    auto s3 = fire(net, s2, "t");
    CHECK(s3.marking.tokens[0] == 0);
    CHECK(s3.residual[0] == 0);
    CHECK_FALSE(enabled(net, s3, "t"));
}

TEST_CASE("classify_workflow finds start, end, and extensions") {
    auto wf = classify_workflow(netgen::chain());
    CHECK(wf.is_workflow);
    CHECK_FALSE(wf.extension_transition.has_value());

    auto two_sources = parse_net(
        "net ts\n"
        "place a init 1\n"
        "place b init 1\n"
        "place c\n"
        "trans t\n"
        "arc a -> t\n"
        "arc b -> t\n"
        "arc t -> c\n");
    CHECK_FALSE(classify_workflow(two_sources).is_workflow);

    auto ssf = parse_net(read_file(std::string(FERMENTOR_SOURCE_DIR) + "/examples/ssf.net"));
    auto info = classify_workflow(ssf);
    REQUIRE(info.is_workflow);
    REQUIRE(info.extension_transition.has_value());
    CHECK(ssf.transitions()[*info.extension_transition].id == "t16");
    CHECK(ssf.places()[*info.start_place].id == "p_start");
    CHECK(ssf.places()[*info.end_place].id == "p_1");
}

TEST_CASE("extend_workflow adds the cycling transition") {
    auto net = netgen::chain();
    auto ext = extend_workflow(net);
    CHECK(ext.transition_count() == net.transition_count() + 1);
    auto info = classify_workflow(ext);
    CHECK(info.is_workflow);
    REQUIRE(info.extension_transition.has_value());
    CHECK_THROWS_AS(extend_workflow(ext), NetError);
    CHECK_THROWS_AS(extend_workflow(parse_net("net x\nplace a init 1\nplace b init 1\nplace c\n"
                                              "trans t\narc a -> t\narc b -> t\narc t -> c\n")),
                    NetError);
}

TEST_CASE("extending the stripped bundled net recovers its shape") {
    auto ssf = parse_net(read_file(std::string(FERMENTOR_SOURCE_DIR) + "/examples/ssf.net"));
    auto info = classify_workflow(ssf);
    REQUIRE(info.extension_transition.has_value());
    auto plain = without_transition(ssf, *info.extension_transition);
    auto re = extend_workflow(plain);
    CHECK(re.place_count() == ssf.place_count());
    CHECK(re.transition_count() == ssf.transition_count());
    CHECK(re.arcs().size() == ssf.arcs().size());
    auto again = classify_workflow(re);
    CHECK(again.is_workflow);
    CHECK(again.extension_transition.has_value());
}

// --- randomized properties ------------------------------------------------

namespace {

// random walk helper: picks enabled transitions deterministically from `rng`
template <typename F>
void random_walk(const NetDefinition& net, std::mt19937_64& rng, int max_steps, F&& visit) {
    NetState s = initial_state(net);
    for (int step = 0; step < max_steps; ++step) {
        std::vector<std::size_t> options;
        for (std::size_t t = 0; t < net.transition_count(); ++t)
            if (enabled(net, s, t)) options.push_back(t);
        if (options.empty()) return;
        std::size_t t = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
        NetState next = fire(net, s, t);
        visit(s, t, next);
        s = std::move(next);
    }
}

}  // namespace

TEST_CASE("fire is pure and repeatable") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        auto net = netgen::random_net(seed);
        std::mt19937_64 rng(seed * 31 + 7);
        random_walk(net, rng, 20, [&](const NetState& s, std::size_t t, const NetState& next) {
            NetState again = fire(net, s, t);
            CHECK(again == next);
        });
    }
}

TEST_CASE("token deltas follow the live-arc update rule") {
    for (std::uint64_t seed = 100; seed < 160; ++seed) {
        auto net = netgen::random_net(seed);
        std::mt19937_64 rng(seed);
        random_walk(net, rng, 25, [&](const NetState& s, std::size_t t, const NetState& next) {
            std::vector<std::int64_t> delta(net.place_count(), 0);
            for (auto ai : net.arcs_of_transition(t)) {
                const auto& arc = net.resolved_arcs()[ai];
                if (!arc_live(arc, s)) continue;
                delta[arc.place] += arc.place_to_transition ? -arc.weight : arc.weight;
            }
            for (std::size_t p = 0; p < net.place_count(); ++p)
                CHECK(next.marking.tokens[p] - s.marking.tokens[p] == delta[p]);
        });
    }
}

TEST_CASE("capacity safety and monotone removal along random walks") {
    for (std::uint64_t seed = 200; seed < 260; ++seed) {
        auto net = netgen::random_net(seed);
        std::mt19937_64 rng(seed ^ 0xabcd);
        random_walk(net, rng, 30, [&](const NetState& s, std::size_t, const NetState& next) {
            for (std::size_t p = 0; p < net.place_count(); ++p) {
                CHECK(next.marking.tokens[p] >= 0);
                if (net.places()[p].bounded())
                    CHECK(next.marking.tokens[p] <= net.places()[p].capacity);
            }
            for (std::size_t i = 0; i < next.residual.size(); ++i) {
                CHECK(next.residual[i] <= s.residual[i]);
                CHECK(next.residual[i] >= 0);
            }
        });
    }
}

TEST_CASE("residuals equal the firing-count law") {
    for (std::uint64_t seed = 300; seed < 350; ++seed) {
        auto net = netgen::random_net(seed);
        std::mt19937_64 rng(seed + 1);
        std::map<std::size_t, std::int64_t> fired;  // transition -> occurrences
        random_walk(net, rng, 40, [&](const NetState&, std::size_t t, const NetState& next) {
            fired[t] += 1;
            for (std::size_t i = 0; i < net.rewritable_arcs().size(); ++i) {
                const auto& arc = net.resolved_arcs()[net.rewritable_arcs()[i]];
                std::int64_t occurrences = fired.count(arc.transition) ? fired[arc.transition] : 0;
                CHECK(next.residual[i] == std::max<std::int64_t>(0, arc.rewrite_limit - occurrences));
            }
        });
    }
}
