#pragma once

#include "admg/graph.hpp"

namespace admg {

/// Simple undirected graph; the codomain of augmentation.
class UndirectedGraph {
public:
    UndirectedGraph(VertexSet vertices, std::vector<std::pair<VertexId, VertexId>> edges);

    const VertexSet& vertices() const { return vertices_; }
    const std::set<std::pair<VertexId, VertexId>>& edges() const { return edges_; }
    bool adjacent(const VertexId& a, const VertexId& b) const;

private:
    VertexSet vertices_;
    std::set<std::pair<VertexId, VertexId>> edges_;  // stored with first < second
    std::map<VertexId, VertexSet> neighbours_;

    friend bool u_separated(const UndirectedGraph&, const VertexSet&, const VertexSet&, const VertexSet&);
};

/// G^{|W}: adds bidirected edges between all pairs in W, then treats every
/// vertex as random.
MixedGraph with_fixed_clique(const MixedGraph& g);

/// (G)^a: c — d iff c and d are joined by a path of colliders in G^{|W}
/// (a single edge counts). Computed by a reachability sweep over
/// arrived-with-arrowhead states, not path enumeration.
UndirectedGraph augment(const MixedGraph& g);

/// Every A–B path intersects C.
bool u_separated(const UndirectedGraph& u, const VertexSet& a, const VertexSet& b, const VertexSet& c);

/// m-separation of A and B given C, evaluated in G^{|W} when G has fixed
/// vertices. Production route: ancestral closure, augmentation, undirected
/// separation (equivalent per the augmented-Markov theorem; the literal
/// path-walk lives in the oracle).
bool m_separated(const MixedGraph& g, const VertexSet& a, const VertexSet& b, const VertexSet& c);

/// d-separation; defined only when G has no bidirected edges, where it
/// coincides with m-separation.
bool d_separated(const MixedGraph& g, const VertexSet& a, const VertexSet& b, const VertexSet& c);

/// u_separated in augment(induced_subgraph(G, an(A∪B∪C))).
bool augmented_separated(const MixedGraph& g, const VertexSet& a, const VertexSet& b, const VertexSet& c);

}  // namespace admg
