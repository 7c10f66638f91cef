#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "admg/graph.hpp"
#include "fixtures.hpp"

#include <random>

using namespace admg;
using testfix::verma_admg;

TEST_CASE("construction validates CADMG invariants") {
    CHECK_THROWS_AS(MixedGraph({"a"}, {}, {{"a", "a"}}, {}), std::invalid_argument);          // self loop
    CHECK_THROWS_AS(MixedGraph({"a", "b"}, {}, {{"a", "b"}, {"b", "a"}}, {}), std::invalid_argument);  // cycle
    CHECK_THROWS_AS(MixedGraph({"a"}, {"w"}, {{"a", "w"}}, {}), std::invalid_argument);       // head into W
    CHECK_THROWS_AS(MixedGraph({"a"}, {"w"}, {}, {{"a", "w"}}), std::invalid_argument);       // bidirected at W
    CHECK_THROWS_AS(MixedGraph({"a", "a"}, {}, {}, {}), std::invalid_argument);               // duplicate
    CHECK_THROWS_AS(MixedGraph({"a b"}, {}, {}, {}), std::invalid_argument);                  // bad name
    // directed and bidirected edges may coexist between the same pair
    MixedGraph g({"a", "b"}, {}, {{"a", "b"}}, {{"a", "b"}});
    CHECK(g.has_directed("a", "b"));
    CHECK(g.has_bidirected("b", "a"));
}

TEST_CASE("parents on the Verma graph") {
    MixedGraph g = verma_admg();
    CHECK(g.parents({"x3"}) == VertexSet{"x1", "x2"});
    CHECK(g.parents({}) == VertexSet{});
    CHECK(g.parents({"x2", "x4"}) == VertexSet{"x1", "x3"});
    CHECK_THROWS_AS(g.parents({"nope"}), std::invalid_argument);
}

TEST_CASE("ancestors, descendants, non-descendants") {
    MixedGraph g = verma_admg();
    CHECK(g.ancestors({"x4"}) == VertexSet{"x1", "x2", "x3", "x4"});
    CHECK(g.descendants({"x4"}) == VertexSet{"x4"});
    CHECK(g.ancestors(g.vertices()) == g.vertices());
    CHECK(g.non_descendants({"x4"}) == VertexSet{"x1", "x2", "x3"});
    CHECK_THROWS_AS(g.ancestors({"zz"}), std::invalid_argument);
}

TEST_CASE("topological order is deterministic with name tie-break") {
    CHECK(verma_admg().topological_order() == std::vector<VertexId>{"x1", "x2", "x3", "x4"});
    MixedGraph single({"v"}, {}, {}, {});
    CHECK(single.topological_order() == std::vector<VertexId>{"v"});
    MixedGraph edgeless({"b", "a"}, {}, {}, {});
    CHECK(edgeless.topological_order() == std::vector<VertexId>{"a", "b"});
}

TEST_CASE("districts partition the random vertices") {
    MixedGraph g = verma_admg();
    std::vector<VertexSet> ds = g.districts();
    REQUIRE(ds.size() == 3);
    CHECK(ds[0] == VertexSet{"x1"});
    CHECK(ds[1] == VertexSet{"x2", "x4"});
    CHECK(ds[2] == VertexSet{"x3"});

    // §4.3 example: districts of the induced subgraph on {x1,x3,x4}
    MixedGraph sub = g.induced_subgraph({"x1", "x3", "x4"});
    std::vector<VertexSet> dsub = sub.districts();
    REQUIRE(dsub.size() == 3);
    for (const auto& d : dsub) CHECK(d.size() == 1);

    // DAGs have singleton districts
    MixedGraph dag({"a", "b", "c"}, {}, {{"a", "b"}, {"b", "c"}}, {});
    CHECK(dag.districts().size() == 3);
}

TEST_CASE("induced subgraph preserves status and filters edges") {
    MixedGraph g = verma_admg();
    MixedGraph sub = g.induced_subgraph({"x1", "x2"});
    CHECK(sub.directed_edges() == std::set<DirectedEdge>{{"x1", "x2"}});
    CHECK(sub.bidirected_edges().empty());
    CHECK(g.induced_subgraph(g.vertices()) == g);
    CHECK_THROWS_AS(g.induced_subgraph({"zz"}), std::invalid_argument);
}

TEST_CASE("ancestral sets") {
    MixedGraph g = verma_admg();
    CHECK(g.is_ancestral({"x1", "x2", "x3"}));
    CHECK_FALSE(g.is_ancestral({"x4"}));
    CHECK(g.is_ancestral({}));
}

TEST_CASE("markov blanket") {
    MixedGraph g = verma_admg();
    CHECK(g.markov_blanket("x4") == VertexSet{"x1", "x2", "x3"});
    CHECK(g.markov_blanket("x1") == VertexSet{});
    MixedGraph iso({"v"}, {}, {}, {});
    CHECK(iso.markov_blanket("v") == VertexSet{});
    CHECK_THROWS_AS(g.markov_blanket("zz"), std::invalid_argument);
    MixedGraph cadmg({"a"}, {"w"}, {{"w", "a"}}, {});
    CHECK_THROWS_AS(cadmg.markov_blanket("w"), std::invalid_argument);
}

TEST_CASE("district partition and monotone genealogy on random graphs") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 2 + static_cast<int>(rng() % 5);
        std::vector<VertexId> names;
        for (int i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
        std::vector<DirectedEdge> de;
        std::vector<BidirectedEdge> be;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                if (rng() % 2) de.push_back({names[i], names[j]});
                if (rng() % 2) be.push_back({names[i], names[j]});
            }
        MixedGraph g(names, {}, de, be);

        VertexSet all;
        for (const auto& d : g.districts()) {
            for (const auto& v : d) {
                CHECK(!all.count(v));
                all.insert(v);
            }
        }
        CHECK(all == g.random());

        // monotonicity: A ⊆ B ⇒ an(A) ⊆ an(B)
        VertexSet a{names[0]};
        VertexSet b{names[0], names[1]};
        VertexSet an_a = g.ancestors(a), an_b = g.ancestors(b);
        CHECK(std::includes(an_b.begin(), an_b.end(), an_a.begin(), an_a.end()));

        // prop:mb(i): mb(t) ⊆ D ∪ pa(D) for t ∈ D
        for (const auto& v : g.random()) {
            VertexSet d = g.district_of(v);
            VertexSet bound = d;
            for (const auto& p : g.parents(d)) bound.insert(p);
            VertexSet mb = g.markov_blanket(v);
            CHECK(std::includes(bound.begin(), bound.end(), mb.begin(), mb.end()));
        }

        // determinism
        CHECK(g.topological_order() == g.topological_order());
    }
}
