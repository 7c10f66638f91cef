#include "admg/fixing.hpp"

#include "admg/errors.hpp"

#include <algorithm>
#include <map>

namespace admg {

namespace {

VertexSet intersect(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.begin()));
    return out;
}

MixedGraph delete_arrowheads_at(const MixedGraph& g, const VertexId& v) {
    std::vector<VertexId> rnd, fx, lat;
    for (const auto& u : g.insertion_order()) {
        bool random_after = g.is_random(u) && u != v;
        if (random_after) {
            rnd.push_back(u);
            if (g.latent().count(u)) lat.push_back(u);
        } else {
            fx.push_back(u);
        }
    }
    std::vector<DirectedEdge> de;
    for (const auto& e : g.directed_edges())
        if (e.second != v) de.push_back(e);
    std::vector<BidirectedEdge> be;
    for (const auto& e : g.bidirected_edges())
        if (e.first != v && e.second != v) be.push_back(e);
    return MixedGraph(rnd, fx, de, be, lat);
}

}  // namespace

bool is_fixable(const MixedGraph& g, const VertexId& v) {
    if (!g.is_random(v)) return false;
    VertexSet overlap = intersect(g.district_of(v), g.descendants({v}));
    return overlap.size() == 1;  // = {v}
}

VertexSet fixable(const MixedGraph& g) {
    VertexSet out;
    for (const auto& v : g.random())
        if (is_fixable(g, v)) out.insert(v);
    return out;
}

MixedGraph fix_graph(const MixedGraph& g, const VertexId& r) {
    if (!g.is_random(r)) throw std::invalid_argument("cannot fix non-random vertex '" + r + "'");
    VertexSet overlap = intersect(g.district_of(r), g.descendants({r}));
    if (overlap.size() != 1) throw NotFixableError(r, join_names(overlap));
    return delete_arrowheads_at(g, r);
}

MixedGraph fix_star(const MixedGraph& g, const VertexId& v) {
    if (!g.is_random(v)) throw std::invalid_argument("cannot fix non-random vertex '" + v + "'");
    return delete_arrowheads_at(g, v);
}

MixedGraph fix_star(const MixedGraph& g, const VertexSet& vs) {
    MixedGraph h = g;
    for (const auto& v : vs) h = fix_star(h, v);
    return h;
}

MixedGraph apply_sequence(const MixedGraph& g, const std::vector<VertexId>& steps) {
    MixedGraph h = g;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        try {
            h = fix_graph(h, steps[i]);
        } catch (const NotFixableError& e) {
            throw NotFixableError(steps[i], e.evidence(), static_cast<int>(i));
        }
    }
    return h;
}

std::optional<FixingSequence> reach(const MixedGraph& g, const VertexSet& r) {
    for (const auto& v : r)
        if (!g.is_random(v)) throw std::invalid_argument("reach target must be a set of random vertices");
    MixedGraph h = g;
    std::vector<VertexId> steps;
    while (true) {
        VertexSet remaining = h.random();
        bool done = true;
        for (const auto& v : remaining)
            if (!r.count(v)) done = false;
        if (done) break;
        bool progressed = false;
        for (const auto& v : fixable(h)) {  // name order; first hit is the least
            if (r.count(v)) continue;
            h = fix_graph(h, v);
            steps.push_back(v);
            progressed = true;
            break;
        }
        if (!progressed) return std::nullopt;
    }
    return FixingSequence{steps, g};
}

std::vector<ReachableSet> reachable_sets(const MixedGraph& g, std::size_t max_vertices) {
    VertexSet all = g.random();
    if (all.size() > max_vertices)
        throw ResourceLimitError("reachable-set enumeration over " + std::to_string(all.size()) +
                                 " random vertices exceeds the cap of " + std::to_string(max_vertices));
    // Order-invariance of φ on graphs makes the remaining-set a sound memo key.
    std::map<VertexSet, MixedGraph> seen;
    std::vector<VertexSet> stack{all};
    seen.emplace(all, g);
    while (!stack.empty()) {
        VertexSet cur = stack.back();
        stack.pop_back();
        const MixedGraph h = seen.at(cur);
        for (const auto& v : fixable(h)) {
            VertexSet next = cur;
            next.erase(v);
            if (seen.count(next)) continue;
            seen.emplace(next, fix_graph(h, v));
            stack.push_back(next);
        }
    }
    std::vector<ReachableSet> out;
    for (const auto& [rs, graph] : seen) {
        auto witness = reach(g, rs);
        out.push_back(ReachableSet{rs, std::move(*witness)});
    }
    std::sort(out.begin(), out.end(), [](const ReachableSet& a, const ReachableSet& b) {
        if (a.remaining.size() != b.remaining.size()) return a.remaining.size() > b.remaining.size();
        return a.remaining < b.remaining;
    });
    return out;
}

std::vector<IntrinsicSet> intrinsic_sets(const MixedGraph& g, std::size_t max_vertices) {
    std::vector<IntrinsicSet> out;
    std::set<VertexSet> dedup;
    for (const auto& rs : reachable_sets(g, max_vertices)) {
        MixedGraph h = apply_sequence(g, rs.witness.steps);
        for (const auto& d : h.districts()) {
            if (dedup.insert(d).second) out.push_back(IntrinsicSet{d, rs.witness});
        }
    }
    std::sort(out.begin(), out.end(), [](const IntrinsicSet& a, const IntrinsicSet& b) {
        if (a.members.size() != b.members.size()) return a.members.size() < b.members.size();
        return a.members < b.members;
    });
    return out;
}

std::set<VertexSet> intrinsic_family(const MixedGraph& g, std::size_t max_vertices) {
    std::set<VertexSet> out;
    for (const auto& is : intrinsic_sets(g, max_vertices)) out.insert(is.members);
    return out;
}

}  // namespace admg
