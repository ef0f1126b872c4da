#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>

#include "fieldlens/errors.hpp"
#include "fieldlens/motifs.hpp"
#include "oracles.hpp"
#include "testutil.hpp"

using namespace fieldlens;

TEST_CASE("FIXTURE-1 census finds exactly the three expected instances") {
    testutil::Fixture1 fx;
    auto merged = merge_graphs(fx.a, fx.b, fx.corpus);
    auto c = census(merged);
    REQUIRE(c.total() == 3);
    CHECK(c.counts.at(MotifKind::BoundaryTriggered) == 1);
    CHECK(c.counts.at(MotifKind::InterDiffusionA2B) == 1);
    CHECK(c.counts.at(MotifKind::CircularB) == 1);
    CHECK(c.counts.at(MotifKind::CrossFertilization) == 0);
    CHECK(c.counts.at(MotifKind::InterdisciplinaryEmergence) == 0);
    for (MotifKind k :
         {MotifKind::BoundaryTriggered, MotifKind::InterDiffusionA2B, MotifKind::CircularB})
        CHECK(c.shares.at(k) == doctest::Approx(1.0 / 3.0));
    // every instance pivots on b1
    for (const auto& inst : c.instances) CHECK(inst.pivot == "b1");
    // and the boundary-triggered pair is (a1->b1, c1->b1)
    auto bt = std::find_if(c.instances.begin(), c.instances.end(), [](const MotifInstance& m) {
        return m.kind == MotifKind::BoundaryTriggered;
    });
    REQUIRE(bt != c.instances.end());
    CHECK(bt->edge_in == DoiEdge{"a1", "b1"});
    CHECK(bt->edge_out == DoiEdge{"c1", "b1"});
}

TEST_CASE("a lone boundary-to-boundary edge is one emergence instance") {
    CitationGraph::Builder builder(Scope::Merged);
    builder.add_node({"b1", true, true, true});
    builder.add_node({"b2", true, true, true});
    builder.add_edge("b1", "b2");
    auto c = census(builder.build());
    REQUIRE(c.total() == 1);
    CHECK(c.counts.at(MotifKind::InterdisciplinaryEmergence) == 1);
    CHECK(c.instances[0].pivot == "b1");  // the citing paper
    CHECK_FALSE(c.instances[0].edge_in.has_value());
    CHECK(c.instances[0].edge_out == DoiEdge{"b1", "b2"});
}

TEST_CASE("graph without boundary nodes yields an empty census") {
    CitationGraph::Builder builder(Scope::Merged);
    builder.add_node({"x", true, false, true});
    builder.add_node({"y", false, true, true});
    builder.add_edge("x", "y");
    auto c = census(builder.build());
    CHECK(c.total() == 0);
    for (const auto& [kind, share] : c.shares) CHECK(share == 0.0);
}

TEST_CASE("census requires a merged graph") {
    testutil::Fixture1 fx;
    CHECK_THROWS_AS(census(fx.a), ScopeError);
}

TEST_CASE("census equals the brute-force oracle on random graphs") {
    std::mt19937 rng(777);
    for (int round = 0; round < 60; ++round) {
        auto g = testutil::random_merged_graph(rng, 40);
        auto c = census(g);
        auto expected = oracles::motif_counts(g);
        for (MotifKind k : all_motif_kinds()) CHECK(c.counts.at(k) == expected.at(k));
        if (c.total() > 0) {
            double sum = 0;
            for (const auto& [kind, share] : c.shares) sum += share;
            CHECK(sum == doctest::Approx(1.0));
        }
    }
}

TEST_CASE("diffusion and circular counts conserve the non-boundary pair total") {
    std::mt19937 rng(778);
    for (int round = 0; round < 30; ++round) {
        auto g = testutil::random_merged_graph(rng, 30);
        auto c = census(g);
        std::size_t pair_total = 0;
        for (std::uint32_t p = 0; p < g.node_count(); ++p) {
            if (!g.node(p).is_boundary()) continue;
            std::size_t ins = 0, outs = 0;
            for (auto u : g.in_neighbors(p))
                if (!g.node(u).is_boundary()) ++ins;
            for (auto v : g.out_neighbors(p))
                if (!g.node(v).is_boundary()) ++outs;
            pair_total += ins * outs;
        }
        std::size_t motif_total = c.counts.at(MotifKind::InterDiffusionA2B) +
                                  c.counts.at(MotifKind::InterDiffusionB2A) +
                                  c.counts.at(MotifKind::CircularA) +
                                  c.counts.at(MotifKind::CircularB);
        CHECK(motif_total == pair_total);
    }
}

TEST_CASE("census is invariant under node relabeling") {
    std::mt19937 rng(779);
    for (int round = 0; round < 20; ++round) {
        auto g = testutil::random_merged_graph(rng, 25);
        auto c = census(g);

        // permute DOIs
        std::vector<std::string> names;
        for (const auto& n : g.nodes()) names.push_back(n.doi);
        std::vector<std::string> renamed = names;
        std::shuffle(renamed.begin(), renamed.end(), rng);
        std::map<std::string, std::string> rename;
        for (std::size_t i = 0; i < names.size(); ++i) rename[names[i]] = "z/" + renamed[i];

        CitationGraph::Builder builder(Scope::Merged);
        for (const auto& n : g.nodes())
            builder.add_node({rename.at(n.doi), n.in_field_a, n.in_field_b, n.seeded});
        for (const auto& [u, v] : g.edges())
            builder.add_edge(rename.at(g.node(u).doi), rename.at(g.node(v).doi));
        auto c2 = census(builder.build());
        for (MotifKind k : all_motif_kinds()) CHECK(c.counts.at(k) == c2.counts.at(k));
    }
}

TEST_CASE("FIXTURE-1 boundary-triggered subnetwork") {
    testutil::Fixture1 fx;
    auto merged = merge_graphs(fx.a, fx.b, fx.corpus);
    auto c = census(merged);
    auto sub = motif_subnetwork(c, MotifGroup::BoundaryTriggered, merged);
    CHECK(sub.node_count() == 3);
    CHECK(sub.edge_count() == 2);
    CHECK(sub.has_edge("a1", "b1"));
    CHECK(sub.has_edge("c1", "b1"));
}

TEST_CASE("empty census group produces an empty graph") {
    testutil::Fixture1 fx;
    auto merged = merge_graphs(fx.a, fx.b, fx.corpus);
    auto c = census(merged);
    auto sub = motif_subnetwork(c, MotifGroup::InterdisciplinaryEmergence, merged);
    CHECK(sub.empty());
}

TEST_CASE("emergence subnetwork of the two-boundary example") {
    CitationGraph::Builder builder(Scope::Merged);
    builder.add_node({"b1", true, true, true});
    builder.add_node({"b2", true, true, true});
    builder.add_edge("b1", "b2");
    auto g = builder.build();
    auto sub = motif_subnetwork(census(g), MotifGroup::InterdisciplinaryEmergence, g);
    CHECK(sub.node_count() == 2);
    CHECK(sub.edge_count() == 1);
}

TEST_CASE("participation counts distinct pivots per group") {
    testutil::Fixture1 fx;
    auto merged = merge_graphs(fx.a, fx.b, fx.corpus);
    auto summary = participation_summary(census(merged));
    CHECK(summary.at(MotifGroup::BoundaryTriggered) == 1);
    CHECK(summary.at(MotifGroup::Diffusion) == 1);
    CHECK(summary.at(MotifGroup::Circular) == 1);
    CHECK(summary.at(MotifGroup::CrossFertilization) == 0);
    CHECK(summary.at(MotifGroup::InterdisciplinaryEmergence) == 0);
}

TEST_CASE("empty census participation is all zeros") {
    CitationGraph::Builder builder(Scope::Merged);
    builder.add_node({"x", true, false, true});
    auto summary = participation_summary(census(builder.build()));
    for (const auto& [group, count] : summary) CHECK(count == 0);
}

TEST_CASE("group name parsing rejects unknown kinds") {
    CHECK(parse_motif_group("diffusion") == MotifGroup::Diffusion);
    CHECK_THROWS_AS(parse_motif_group("sideways_osmosis"), UnknownKind);
    CHECK_THROWS_AS(parse_motif_kind("NOT_A_KIND"), UnknownKind);
}
