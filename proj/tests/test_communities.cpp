#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "fieldlens/communities.hpp"
#include "fieldlens/errors.hpp"
#include "oracles.hpp"
#include "testutil.hpp"

using namespace fieldlens;

namespace {

CitationGraph two_cliques() {
    // two directed 3-cliques joined by a single edge
    CitationGraph::Builder builder(Scope::Merged);
    for (const char* doi : {"p0", "p1", "p2", "q0", "q1", "q2"})
        builder.add_node({doi, true, true, true});
    auto clique = [&](const char* a, const char* b, const char* c) {
        builder.add_edge(a, b);
        builder.add_edge(b, c);
        builder.add_edge(c, a);
    };
    clique("p0", "p1", "p2");
    clique("q0", "q1", "q2");
    builder.add_edge("p0", "q0");
    return builder.build();
}

std::vector<int> as_vector(const CitationGraph& g, const Partition& p) {
    std::vector<int> comm;
    comm.reserve(g.node_count());
    for (const auto& n : g.nodes()) comm.push_back(p.assignment.at(n.doi));
    return comm;
}

}  // namespace

TEST_CASE("a single isolated node is one community with modularity zero") {
    CitationGraph::Builder builder(Scope::Merged);
    builder.add_node({"only", true, true, true});
    auto part = louvain(builder.build(), 1.0, 1);
    CHECK(part.assignment.size() == 1);
    CHECK(part.assignment.at("only") == 0);
    CHECK(part.modularity == 0.0);
}

TEST_CASE("two cliques split into their natural communities") {
    auto g = two_cliques();
    auto part = louvain(g, 1.0, 42);
    std::set<int> p_ids = {part.assignment.at("p0"), part.assignment.at("p1"),
                           part.assignment.at("p2")};
    std::set<int> q_ids = {part.assignment.at("q0"), part.assignment.at("q1"),
                           part.assignment.at("q2")};
    CHECK(p_ids.size() == 1);
    CHECK(q_ids.size() == 1);
    CHECK(*p_ids.begin() != *q_ids.begin());
    // matches the exhaustive optimum
    CHECK(part.modularity ==
          doctest::Approx(oracles::best_partition_modularity(g)).epsilon(1e-9));
}

TEST_CASE("disjoint components never share a community id") {
    std::mt19937 rng(31);
    for (int round = 0; round < 15; ++round) {
        // two islands built from independent random graphs
        auto g1 = testutil::random_plain_graph(rng, 8);
        CitationGraph::Builder builder(Scope::Merged);
        for (const auto& n : g1.nodes()) builder.add_node(n);
        for (const auto& [u, v] : g1.edges()) builder.add_edge(g1.node(u).doi, g1.node(v).doi);
        builder.add_node({"island/x", true, true, true});
        builder.add_node({"island/y", true, true, true});
        builder.add_edge("island/x", "island/y");
        auto g = builder.build();
        auto part = louvain(g, 1.0, 5);
        std::set<int> island_ids = {part.assignment.at("island/x"),
                                    part.assignment.at("island/y")};
        for (const auto& n : g1.nodes())
            CHECK_FALSE(island_ids.count(part.assignment.at(n.doi)));
    }
}

TEST_CASE("community ids are dense and start at zero") {
    std::mt19937 rng(32);
    for (int round = 0; round < 20; ++round) {
        auto g = testutil::random_plain_graph(rng, 12);
        auto part = louvain(g, 1.0, round);
        std::set<int> ids;
        for (const auto& [doi, c] : part.assignment) ids.insert(c);
        REQUIRE(!ids.empty());
        CHECK(*ids.begin() == 0);
        CHECK(*ids.rbegin() == static_cast<int>(ids.size()) - 1);
    }
}

TEST_CASE("returned modularity beats the singleton and one-community baselines") {
    std::mt19937 rng(33);
    for (int round = 0; round < 30; ++round) {
        auto g = testutil::random_plain_graph(rng, 10);
        auto part = louvain(g, 1.0, round);
        std::vector<int> singleton(g.node_count());
        std::iota(singleton.begin(), singleton.end(), 0);
        std::vector<int> lumped(g.node_count(), 0);
        CHECK(part.modularity >= oracles::modularity(g, singleton) - 1e-12);
        CHECK(part.modularity >= oracles::modularity(g, lumped) - 1e-12);
    }
}

TEST_CASE("level modularity never decreases across aggregation passes") {
    std::mt19937 rng(34);
    for (int round = 0; round < 20; ++round) {
        auto g = testutil::random_plain_graph(rng, 20, 0.2);
        auto part = louvain(g, 1.0, round);
        for (std::size_t i = 1; i < part.level_modularity.size(); ++i)
            CHECK(part.level_modularity[i] >= part.level_modularity[i - 1] - 1e-12);
    }
}

TEST_CASE("same seed, same partition; the partition matches oracle modularity") {
    std::mt19937 rng(35);
    for (int round = 0; round < 10; ++round) {
        auto g = testutil::random_plain_graph(rng, 15, 0.25);
        auto p1 = louvain(g, 1.0, 99);
        auto p2 = louvain(g, 1.0, 99);
        CHECK(p1.assignment == p2.assignment);
        CHECK(p1.modularity == p2.modularity);
        CHECK(p1.modularity ==
              doctest::Approx(oracles::modularity(g, as_vector(g, p1))).epsilon(1e-9));
    }
}

TEST_CASE("small graphs reach at least 97 percent of the exhaustive optimum") {
    std::mt19937 rng(36);
    for (int round = 0; round < 40; ++round) {
        auto g = testutil::random_plain_graph(rng, 8);
        auto part = louvain(g, 1.0, round);
        double best = oracles::best_partition_modularity(g);
        CHECK(part.modularity >= 0.97 * best - 1e-12);
    }
}

TEST_CASE("louvain rejects an empty graph") {
    CitationGraph::Builder builder(Scope::Merged);
    CHECK_THROWS_AS(louvain(builder.build(), 1.0, 0), EmptyGraph);
}

TEST_CASE("resolution parameter shifts community granularity monotonically") {
    auto g = two_cliques();
    auto coarse = louvain(g, 0.1, 7);
    auto fine = louvain(g, 4.0, 7);
    CHECK(coarse.community_count() <= fine.community_count());
}

TEST_CASE("components of the FIXTURE-1 boundary-triggered subnetwork") {
    // 3 nodes, 2 edges, all weakly connected
    CitationGraph::Builder builder(Scope::Merged);
    builder.add_node({"a1", true, false, true});
    builder.add_node({"c1", false, true, true});
    builder.add_node({"b1", true, true, true});
    builder.add_edge("a1", "b1");
    builder.add_edge("c1", "b1");
    auto report = components(builder.build());
    CHECK(report.component_count == 1);
    REQUIRE(report.sizes.size() == 1);
    CHECK(report.sizes[0] == std::pair<std::size_t, std::size_t>{3, 2});
}

TEST_CASE("two disjoint edges are two components") {
    CitationGraph::Builder builder(Scope::Merged);
    for (const char* doi : {"w", "x", "y", "z"}) builder.add_node({doi, true, true, true});
    builder.add_edge("w", "x");
    builder.add_edge("y", "z");
    auto report = components(builder.build());
    CHECK(report.component_count == 2);
}

TEST_CASE("empty graph has zero components") {
    CitationGraph::Builder builder(Scope::Merged);
    auto report = components(builder.build());
    CHECK(report.component_count == 0);
    CHECK(report.sizes.empty());
}

TEST_CASE("component sizes sum to the graph totals, descending") {
    std::mt19937 rng(37);
    for (int round = 0; round < 20; ++round) {
        auto g = testutil::random_plain_graph(rng, 20, 0.08);
        auto report = components(g);
        std::size_t nodes = 0, edges = 0;
        for (auto [n, e] : report.sizes) {
            nodes += n;
            edges += e;
        }
        CHECK(nodes == g.node_count());
        CHECK(edges == g.edge_count());
        for (std::size_t i = 1; i < report.sizes.size(); ++i)
            CHECK(report.sizes[i - 1] >= report.sizes[i]);
    }
}
