#include <catch2/catch_amalgamated.hpp>

#include <cctype>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "fermentor/petri/compress.hpp"
#include "fermentor/petri/dot.hpp"
#include "fermentor/petri/parse.hpp"
#include "netgen.hpp"

using namespace fermentor::petri;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Reachability among surviving nodes must be unchanged by compression.
void check_preservation(const ReachGraph& g, const CompressedGraph& c) {
    for (auto u : c.nodes) {
        auto orig = reachable_set(g, u);
        auto comp = compressed_reachable(c, u, g.nodes.size());
        for (auto v : c.nodes) {
            INFO("pair " << u << " -> " << v);
            CHECK((orig[v] != 0) == (comp[v] != 0));
        }
    }
}

// Minimal structural check of the DOT output: one digraph block, node
// statements before use, balanced braces, quoted labels.
void check_dot_syntax(const std::string& dot) {
    std::istringstream in(dot);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line.rfind("digraph ", 0) == 0);
    CHECK(line.back() == '{');
    std::set<std::string> declared;
    bool closed = false;
    while (std::getline(in, line)) {
        if (line == "}") {
            closed = true;
            break;
        }
        if (line.rfind("  rankdir", 0) == 0) continue;
        auto arrow = line.find(" -> ");
        if (arrow == std::string::npos) {
            auto sp = line.find(" [");
            REQUIRE(sp != std::string::npos);
            std::string id = line.substr(2, sp - 2);
            CHECK(!id.empty());
            declared.insert(id);
            CHECK(line.find("label=\"") != std::string::npos);
            CHECK(line.back() == ';');
        } else {
            std::string from = line.substr(2, arrow - 2);
            auto rest = line.substr(arrow + 4);
            std::string to = rest.substr(0, rest.find(' '));
            CHECK(declared.count(from) == 1);
            CHECK(declared.count(to) == 1);
            CHECK(line.back() == ';');
        }
    }
    CHECK(closed);
}

}  // namespace

TEST_CASE("same-label chains collapse to a starred edge") {
    // p holds 3 tokens that t moves one at a time: 4 states in a line
    auto net = parse_net(
        "net stars\n"
        "place p init 3\n"
        "place q\n"
        "trans t\n"
        "arc p -> t\n"
        "arc t -> q\n");
    auto g = explore(net);
    REQUIRE(g.nodes.size() == 4);
    auto c = compress(g);
    CHECK(c.nodes.size() == 2);
    REQUIRE(c.edges.size() == 1);
    CHECK(c.edges[0].label.kind == EdgeLabel::Kind::Star);
    CHECK(c.edges[0].label.count == 3);
    CHECK(c.edges[0].label.to_string(net) == "t*");
    check_preservation(g, c);
}

TEST_CASE("interleaving diamonds with equal occurrence counts merge") {
    auto net = parse_net(
        "net diamond\n"
        "place p1 init 1\n"
        "place p2 init 1\n"
        "place q1\n"
        "place q2\n"
        "trans t1\n"
        "trans t2\n"
        "arc p1 -> t1\n"
        "arc t1 -> q1\n"
        "arc p2 -> t2\n"
        "arc t2 -> q2\n");
    auto g = explore(net);
    REQUIRE(g.nodes.size() == 4);
    auto c = compress(g);
    CHECK(c.nodes.size() == 2);
    REQUIRE(c.edges.size() == 1);
    CHECK(c.edges[0].label.kind == EdgeLabel::Kind::Parikh);
    REQUIRE(c.edges[0].label.parikh.size() == 2);
    CHECK(c.edges[0].label.parikh[0].second == 1);
    CHECK(c.edges[0].label.parikh[1].second == 1);
    CHECK(c.edges[0].label.to_string(net) == "(t1 t2)");
    check_preservation(g, c);
}

TEST_CASE("unequal occurrence counts do not merge") {
    // two routes from start to done: one fires t_a once, the other t_b twice
    auto net = parse_net(
        "net uneq\n"
        "place start init 2\n"
        "place done\n"
        "trans t_a\n"
        "trans t_b\n"
        "arc start -> t_a weight 2\n"
        "arc t_a -> done weight 2\n"
        "arc start -> t_b\n"
        "arc t_b -> done\n");
    auto g = explore(net);
    auto c = compress(g);
    // the two-step t_b corridor stars, but it must not merge with the t_a edge
    for (const auto& e : c.edges) CHECK(e.label.kind != EdgeLabel::Kind::Parikh);
    check_preservation(g, c);
}

TEST_CASE("compress rejects truncated graphs") {
    ExploreOptions tiny;
    tiny.budget = 2;
    auto g = explore(netgen::parallel_sync(), tiny);
    REQUIRE(g.truncated);
    CHECK_THROWS_AS(compress(g), NetError);
}

TEST_CASE("compression preserves reachability on assorted graphs") {
    std::vector<NetDefinition> nets;
    nets.push_back(netgen::sequential());
    nets.push_back(netgen::parallel_sync());
    nets.push_back(netgen::broken_xor());
    for (std::uint64_t seed = 4000; seed < 4030; ++seed) nets.push_back(netgen::random_net(seed));
    for (const auto& net : nets) {
        ExploreOptions opts;
        opts.budget = 500;
        auto g = explore(net, opts);
        if (g.truncated) continue;
        INFO("net " << net.name());
        check_preservation(g, compress(g));
    }
}

TEST_CASE("dot export is deterministic and well formed") {
    auto net = netgen::chain();
    auto g = explore(net);
    auto once = export_dot(net, g);
    auto twice = export_dot(net, g);
    CHECK(once == twice);
    CHECK(once.find("n0") != std::string::npos);
    CHECK(once.find("label=\"t\"") != std::string::npos);
    check_dot_syntax(once);
}

TEST_CASE("bundled net's compressed graph exports cleanly") {
    auto golden = nlohmann::json::parse(
        read_file(std::string(FERMENTOR_SOURCE_DIR) + "/tests/golden/ssf_expected.json"));
    auto ssf = parse_net(read_file(std::string(FERMENTOR_SOURCE_DIR) + "/examples/ssf.net"));
    auto wf = classify_workflow(ssf);
    REQUIRE(wf.extension_transition.has_value());
    auto plain = without_transition(ssf, *wf.extension_transition);
    auto g = explore(plain);
    auto c = compress(g);
    CHECK(c.nodes.size() == golden["compressed_plain"]["nodes"].get<std::size_t>());
    CHECK(c.edges.size() == golden["compressed_plain"]["edges"].get<std::size_t>());
    check_preservation(g, c);
    check_dot_syntax(export_dot(plain, g, c));
}
