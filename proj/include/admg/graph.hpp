#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace admg {

/// Vertex names are non-empty tokens over [A-Za-z0-9_], unique within a graph.
using VertexId = std::string;

/// Name-sorted vertex set; the canonical form for every set-valued result.
using VertexSet = std::set<VertexId>;

using DirectedEdge = std::pair<VertexId, VertexId>;   // (tail, head)
using BidirectedEdge = std::pair<VertexId, VertexId>; // stored with first < second

bool valid_vertex_name(const std::string& name);

/// A conditional acyclic directed mixed graph G(V, W, E): random vertices V,
/// fixed vertices W, directed and bidirected edges. An ADMG is the W = ∅
/// case. Immutable after construction; construction validates every CADMG
/// invariant (acyclicity, no edge heads into W, no bidirected edge at W,
/// no self-loops). A directed and a bidirected edge may coexist between the
/// same pair of vertices.
class MixedGraph {
public:
    MixedGraph(std::vector<VertexId> random_vertices,
               std::vector<VertexId> fixed_vertices,
               std::vector<DirectedEdge> directed,
               std::vector<BidirectedEdge> bidirected,
               std::vector<VertexId> latent_marks = {});

    const std::vector<VertexId>& insertion_order() const { return order_; }
    VertexSet random() const;
    VertexSet fixed() const;
    VertexSet vertices() const;
    const VertexSet& latent() const { return latent_; }

    bool contains(const VertexId& v) const;
    bool is_random(const VertexId& v) const;
    bool is_fixed(const VertexId& v) const;

    const std::set<DirectedEdge>& directed_edges() const { return directed_; }
    const std::set<BidirectedEdge>& bidirected_edges() const { return bidirected_; }
    bool has_directed(const VertexId& tail, const VertexId& head) const;
    bool has_bidirected(const VertexId& a, const VertexId& b) const;

    std::size_t vertex_count() const { return order_.size(); }

    /// Structural equality: same vertex roles, same edges, same latent marks.
    /// Insertion order is presentation, not structure.
    bool operator==(const MixedGraph& other) const;
    bool operator!=(const MixedGraph& other) const { return !(*this == other); }

    // Genealogy. All are applied disjunctively to sets; an/de are reflexive.
    VertexSet parents(const VertexSet& a) const;
    VertexSet children(const VertexSet& a) const;
    VertexSet ancestors(const VertexSet& a) const;
    VertexSet descendants(const VertexSet& a) const;
    VertexSet non_descendants(const VertexSet& a) const;

    /// Total order with a ≺ b ⇒ a ∉ de(b); ties broken by lexicographic name.
    std::vector<VertexId> topological_order() const;

    /// Bidirected-connected components of V; a partition of the random set.
    std::vector<VertexSet> districts() const;
    VertexSet district_of(const VertexId& v) const;

    /// Vertices A with random/fixed status preserved; edges with both
    /// endpoints in A. Latent marks restricted to A.
    MixedGraph induced_subgraph(const VertexSet& a) const;

    bool is_ancestral(const VertexSet& a) const;

    /// mb(t) = pa(dis(t)) ∪ (dis(t) \ {t}), computed in this graph. Callers
    /// needing mb(t, A) pass the induced subgraph on A.
    VertexSet markov_blanket(const VertexId& t) const;

private:
    void require_known(const VertexId& v) const;
    void require_known(const VertexSet& a) const;

    std::vector<VertexId> order_;            // insertion order, V and W interleaved
    std::map<VertexId, bool> is_random_;     // role per vertex
    VertexSet latent_;                       // subset of random, used by projection
    std::set<DirectedEdge> directed_;
    std::set<BidirectedEdge> bidirected_;
    std::map<VertexId, VertexSet> parents_of_;
    std::map<VertexId, VertexSet> children_of_;
    std::map<VertexId, VertexSet> siblings_of_;  // bidirected neighbours
};

/// District as a value: a non-empty member set, bidirected-connected in the
/// graph it was computed from.
using District = VertexSet;

std::string join_names(const VertexSet& s, const std::string& sep = ",");

}  // namespace admg
