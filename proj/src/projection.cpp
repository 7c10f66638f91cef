#include "admg/projection.hpp"

#include "admg/fixing.hpp"

#include <algorithm>
#include <stdexcept>

namespace admg {

ProjectionRequest ProjectionRequest::eliminating(const MixedGraph& g, const VertexSet& latent) {
    VertexSet keep;
    for (const auto& v : g.random())
        if (!latent.count(v)) keep.insert(v);
    for (const auto& v : latent) {
        if (!g.contains(v)) throw std::invalid_argument("unknown vertex '" + v + "'");
        if (g.is_fixed(v)) throw std::invalid_argument("cannot project out fixed vertex '" + v + "'");
    }
    return ProjectionRequest{g, keep, latent};
}

ProjectionRequest ProjectionRequest::keeping(const MixedGraph& g, const VertexSet& keep) {
    for (const auto& v : keep) {
        if (!g.contains(v)) throw std::invalid_argument("unknown vertex '" + v + "'");
        if (!g.is_random(v)) throw std::invalid_argument("keep set must name random vertices, got '" + v + "'");
    }
    VertexSet latent;
    for (const auto& v : g.random())
        if (!keep.count(v)) latent.insert(v);
    return ProjectionRequest{g, keep, latent};
}

namespace {

/// Removes one latent vertex l, splicing its incident edges:
///   a → l, l → b   becomes a → b;
///   a ↔ l, l → b   becomes a ↔ b;
///   l → b, l → c   becomes b ↔ c  (distinct b, c).
MixedGraph eliminate_one(const MixedGraph& g, const VertexId& l) {
    VertexSet in, bi, out;
    for (const auto& [tail, head] : g.directed_edges()) {
        if (head == l) in.insert(tail);
        if (tail == l) out.insert(head);
    }
    for (const auto& [x, y] : g.bidirected_edges()) {
        if (x == l) bi.insert(y);
        if (y == l) bi.insert(x);
    }
    std::vector<VertexId> rnd, fx, lat;
    for (const auto& v : g.insertion_order()) {
        if (v == l) continue;
        if (g.is_random(v)) {
            rnd.push_back(v);
            if (g.latent().count(v)) lat.push_back(v);
        } else {
            fx.push_back(v);
        }
    }
    std::set<DirectedEdge> de;
    std::set<BidirectedEdge> be;
    for (const auto& e : g.directed_edges())
        if (e.first != l && e.second != l) de.insert(e);
    for (const auto& e : g.bidirected_edges())
        if (e.first != l && e.second != l) be.insert(e);
    for (const auto& a : in)
        for (const auto& b : out)
            if (a != b) de.insert({a, b});
    for (const auto& a : bi)
        for (const auto& b : out)
            if (a != b) be.insert({std::min(a, b), std::max(a, b)});
    for (auto it = out.begin(); it != out.end(); ++it) {
        auto jt = it;
        for (++jt; jt != out.end(); ++jt) be.insert({*it, *jt});
    }
    return MixedGraph(rnd, fx,
                      std::vector<DirectedEdge>(de.begin(), de.end()),
                      std::vector<BidirectedEdge>(be.begin(), be.end()), lat);
}

}  // namespace

MixedGraph latent_project(const ProjectionRequest& req) {
    MixedGraph g = req.graph;
    for (const auto& v : req.latent) {
        if (!g.contains(v)) throw std::invalid_argument("unknown vertex '" + v + "'");
        if (g.is_fixed(v)) throw std::invalid_argument("cannot project out fixed vertex '" + v + "'");
    }
    for (const auto& v : req.keep)
        if (req.latent.count(v)) throw std::invalid_argument("keep and latent overlap at '" + v + "'");
    // order is irrelevant to the result; name order keeps runs reproducible
    for (const auto& l : req.latent) g = eliminate_one(g, l);
    return g;
}

MixedGraph latent_project(const MixedGraph& g) {
    return latent_project(ProjectionRequest::eliminating(g, g.latent()));
}

bool projection_commutes_with_fixing_check(const MixedGraph& g, const VertexId& v) {
    if (!g.bidirected_edges().empty())
        throw std::invalid_argument("commutation check is defined for CADGs (no bidirected edges)");
    if (!g.is_random(v) || g.latent().count(v))
        throw std::invalid_argument("commutation check requires an observed random vertex");
    MixedGraph fixed_then_project = latent_project(fix_star(g, v));
    MixedGraph projected_then_fix = fix_star(latent_project(g), v);
    return fixed_then_project == projected_then_fix;
}

}  // namespace admg
