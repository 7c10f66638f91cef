#include "admg/separation.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace admg {

namespace {

void require_disjoint(const VertexSet& a, const VertexSet& b, const char* what) {
    for (const auto& v : a)
        if (b.count(v)) throw std::invalid_argument(std::string(what) + ": sets overlap at '" + v + "'");
}

void require_separation_args(const MixedGraph& g, const VertexSet& a, const VertexSet& b, const VertexSet& c) {
    if (a.empty() || b.empty()) throw std::invalid_argument("separation query with empty endpoint set");
    for (const auto& s : {a, b, c})
        for (const auto& v : s)
            if (!g.contains(v)) throw std::invalid_argument("unknown vertex '" + v + "'");
    require_disjoint(a, b, "separation");
    require_disjoint(a, c, "separation");
    require_disjoint(b, c, "separation");
}

VertexSet set_union(const VertexSet& a, const VertexSet& b) {
    VertexSet out = a;
    out.insert(b.begin(), b.end());
    return out;
}

}  // namespace

UndirectedGraph::UndirectedGraph(VertexSet vertices, std::vector<std::pair<VertexId, VertexId>> edges)
    : vertices_(std::move(vertices)) {
    for (const auto& v : vertices_) neighbours_[v];
    for (auto [a, b] : edges) {
        if (a == b) throw std::invalid_argument("self-loop at '" + a + "'");
        if (!vertices_.count(a) || !vertices_.count(b))
            throw std::invalid_argument("edge endpoint outside vertex set");
        edges_.insert({std::min(a, b), std::max(a, b)});
        neighbours_[a].insert(b);
        neighbours_[b].insert(a);
    }
}

bool UndirectedGraph::adjacent(const VertexId& a, const VertexId& b) const {
    return edges_.count({std::min(a, b), std::max(a, b)}) > 0;
}

MixedGraph with_fixed_clique(const MixedGraph& g) {
    std::vector<VertexId> rnd;
    for (const auto& v : g.insertion_order()) rnd.push_back(v);
    std::vector<DirectedEdge> de(g.directed_edges().begin(), g.directed_edges().end());
    std::vector<BidirectedEdge> be(g.bidirected_edges().begin(), g.bidirected_edges().end());
    VertexSet w = g.fixed();
    for (auto it = w.begin(); it != w.end(); ++it) {
        auto jt = it;
        for (++jt; jt != w.end(); ++jt) be.push_back({*it, *jt});
    }
    return MixedGraph(rnd, {}, de, be, {});
}

UndirectedGraph augment(const MixedGraph& g) {
    MixedGraph h = with_fixed_clique(g);
    // c ~ d iff a walk c … d exists in h whose every intermediate vertex has
    // arrowheads on both flanking edges. Sweep states: (vertex, arrived with
    // an arrowhead at it). Only arrowhead-arrivals may continue.
    std::vector<std::pair<VertexId, VertexId>> edges;
    VertexSet verts = h.vertices();
    for (const auto& c : verts) {
        // first hop: any edge leaving c
        std::deque<VertexId> frontier;     // reached with arrowhead, may continue
        VertexSet arrow_reached;           // states (v, true) seen
        VertexSet reached_any;             // any state seen, for adjacency
        auto arrive = [&](const VertexId& v, bool arrowhead_at_v) {
            reached_any.insert(v);
            if (arrowhead_at_v && arrow_reached.insert(v).second) frontier.push_back(v);
        };
        for (const auto& [tail, head] : h.directed_edges()) {
            if (tail == c) arrive(head, true);
            if (head == c) arrive(tail, false);
        }
        for (const auto& [x, y] : h.bidirected_edges()) {
            if (x == c) arrive(y, true);
            if (y == c) arrive(x, true);
        }
        while (!frontier.empty()) {
            VertexId z = frontier.front();
            frontier.pop_front();
            // continue through edges with an arrowhead at z on the near side
            for (const auto& [tail, head] : h.directed_edges()) {
                if (head == z && tail != c) arrive(tail, false);
            }
            for (const auto& [x, y] : h.bidirected_edges()) {
                if (x == z && y != c) arrive(y, true);
                if (y == z && x != c) arrive(x, true);
            }
        }
        for (const auto& d : reached_any)
            if (d > c) edges.push_back({c, d});
    }
    return UndirectedGraph(verts, edges);
}

bool u_separated(const UndirectedGraph& u, const VertexSet& a, const VertexSet& b, const VertexSet& c) {
    for (const auto& s : {a, b, c})
        for (const auto& v : s)
            if (!u.vertices().count(v)) throw std::invalid_argument("unknown vertex '" + v + "'");
    require_disjoint(a, b, "u_separated");
    require_disjoint(a, c, "u_separated");
    require_disjoint(b, c, "u_separated");
    VertexSet reached = a;
    std::deque<VertexId> frontier(a.begin(), a.end());
    while (!frontier.empty()) {
        VertexId v = frontier.front();
        frontier.pop_front();
        if (c.count(v)) continue;  // blocked; may be reached but not crossed
        for (const auto& n : u.neighbours_.at(v)) {
            if (b.count(n)) return false;
            if (reached.insert(n).second) frontier.push_back(n);
        }
    }
    return true;
}

bool augmented_separated(const MixedGraph& g, const VertexSet& a, const VertexSet& b, const VertexSet& c) {
    require_separation_args(g, a, b, c);
    VertexSet anc = g.ancestors(set_union(set_union(a, b), c));
    return u_separated(augment(g.induced_subgraph(anc)), a, b, c);
}

bool m_separated(const MixedGraph& g, const VertexSet& a, const VertexSet& b, const VertexSet& c) {
    require_separation_args(g, a, b, c);
    MixedGraph h = g.fixed().empty() ? g : with_fixed_clique(g);
    VertexSet anc = h.ancestors(set_union(set_union(a, b), c));
    return u_separated(augment(h.induced_subgraph(anc)), a, b, c);
}

bool d_separated(const MixedGraph& g, const VertexSet& a, const VertexSet& b, const VertexSet& c) {
    if (!g.bidirected_edges().empty())
        throw std::invalid_argument("d_separated requires a graph with no bidirected edges");
    return m_separated(g, a, b, c);
}

}  // namespace admg
