#include "admg/oracle.hpp"

#include "admg/causal.hpp"
#include "admg/errors.hpp"
#include "admg/separation.hpp"

#include <algorithm>
#include <functional>
#include <random>

namespace admg {
namespace oracle {

namespace {

VertexSet set_union(const VertexSet& a, const VertexSet& b) {
    VertexSet out = a;
    out.insert(b.begin(), b.end());
    return out;
}

bool advance(std::vector<int>& coords, const std::vector<int>& card) {
    for (std::size_t i = coords.size(); i-- > 0;) {
        if (++coords[i] < card[i]) return true;
        coords[i] = 0;
    }
    return false;
}

std::vector<Rational> draw_conditional(std::mt19937_64& rng, int levels, bool allow_zeros) {
    std::vector<long> w(static_cast<std::size_t>(levels));
    long total = 0;
    do {
        total = 0;
        for (auto& x : w) {
            x = allow_zeros ? static_cast<long>(rng() % 17) : static_cast<long>(1 + rng() % 16);
            total += x;
        }
    } while (total == 0);
    std::vector<Rational> out;
    for (long x : w) out.push_back(rational_of(x, total));
    return out;
}

}  // namespace

Kernel random_dag_model(const MixedGraph& g, const StateSpace& card, Seed seed, bool allow_zeros) {
    if (!g.bidirected_edges().empty())
        throw std::invalid_argument("random_dag_model requires a graph with no bidirected edges");
    std::mt19937_64 rng(seed);
    VertexSet vs = g.random();
    VertexSet ws = g.fixed();
    if (!card.covers(set_union(vs, ws))) throw std::invalid_argument("state space does not cover the graph");

    // one conditional table per random vertex, in topological order
    struct Cpt {
        VertexId v;
        std::vector<VertexId> given;  // sorted parent list
        std::vector<int> given_card;
        std::vector<std::vector<Rational>> rows;  // by parent-assignment rank
    };
    std::vector<Cpt> cpts;
    for (const auto& v : g.topological_order()) {
        if (!g.is_random(v)) continue;
        Cpt cpt;
        cpt.v = v;
        VertexSet pa = g.parents({v});
        cpt.given.assign(pa.begin(), pa.end());
        std::size_t rows = 1;
        for (const auto& p : cpt.given) {
            cpt.given_card.push_back(card.cardinality(p));
            rows *= static_cast<std::size_t>(card.cardinality(p));
        }
        for (std::size_t i = 0; i < rows; ++i) cpt.rows.push_back(draw_conditional(rng, card.cardinality(v), allow_zeros));
        cpts.push_back(std::move(cpt));
    }
    return Kernel::from_function(vs, ws, card, [&](const Assignment& a) {
        Rational prod(1);
        for (const auto& cpt : cpts) {
            std::size_t row = 0;
            for (std::size_t i = 0; i < cpt.given.size(); ++i)
                row = row * static_cast<std::size_t>(cpt.given_card[i]) + static_cast<std::size_t>(a.at(cpt.given[i]));
            prod *= cpt.rows[row][static_cast<std::size_t>(a.at(cpt.v))];
        }
        return prod;
    });
}

Kernel random_cadmg_kernel(const MixedGraph& g, const StateSpace& card, Seed seed, bool allow_zeros) {
    MixedGraph dag = canonical_dag(g);
    StateSpace full = card;
    if (!dag.latent().empty()) {
        std::map<VertexId, int> cards = card.cardinalities();
        for (const auto& u : dag.latent()) cards[u] = 2;
        full = StateSpace(cards);
    }
    Kernel with_latents = random_dag_model(dag, full, seed, allow_zeros);
    return marginalize(with_latents, g.random());
}

Kernel random_kernel(const VertexSet& random_vars, const VertexSet& fixed_vars, const StateSpace& card, Seed seed,
                     bool allow_zeros) {
    std::mt19937_64 rng(seed);
    VertexSet all = set_union(random_vars, fixed_vars);
    std::vector<VertexId> vars(all.begin(), all.end());
    std::vector<int> cs;
    for (const auto& v : vars) cs.push_back(card.cardinality(v));

    // raw positive weights per cell, then per-context normalization
    std::map<std::vector<int>, long> weights;
    std::map<std::vector<int>, long> totals;
    std::vector<int> coords(vars.size(), 0);
    do {
        long w = allow_zeros ? static_cast<long>(rng() % 17) : static_cast<long>(1 + rng() % 16);
        std::vector<int> ctx;
        for (std::size_t i = 0; i < vars.size(); ++i)
            if (fixed_vars.count(vars[i])) ctx.push_back(coords[i]);
        weights[coords] = w;
        totals[ctx] += w;
    } while (advance(coords, cs));
    // a context of all-zero weights would not normalize; bump its first cell
    for (auto& [ctx, t] : totals) {
        if (t != 0) continue;
        std::fill(coords.begin(), coords.end(), 0);
        do {
            std::vector<int> c2;
            for (std::size_t i = 0; i < vars.size(); ++i)
                if (fixed_vars.count(vars[i])) c2.push_back(coords[i]);
            if (c2 == ctx) {
                weights[coords] = 1;
                t = 1;
                break;
            }
        } while (advance(coords, cs));
    }
    return Kernel::from_function(random_vars, fixed_vars, card, [&](const Assignment& a) {
        std::vector<int> full, ctx;
        for (std::size_t i = 0; i < vars.size(); ++i) {
            full.push_back(a.at(vars[i]));
            if (fixed_vars.count(vars[i])) ctx.push_back(a.at(vars[i]));
        }
        return rational_of(weights.at(full), totals.at(ctx));
    });
}

Kernel margin(const Kernel& p, const VertexSet& keep) { return marginalize(p, keep); }

// --- literal m-connection search ---------------------------------------------

namespace {

struct PathEdge {
    VertexId u, v;
    bool directed;  // u → v when true, u ↔ v otherwise
};

struct WalkSearch {
    const std::vector<PathEdge>& edges;
    const std::map<VertexId, std::vector<std::size_t>>& incident;
    const VertexSet& cond;
    const VertexSet& anc_cond;
    VertexId target;
    VertexSet on_path;

    /// Extends the vertex-simple path from `at`; `arrived_head` is whether
    /// the previous edge put an arrowhead at `at`.
    bool extend(const VertexId& at, bool arrived_head) {
        for (std::size_t ei : incident.at(at)) {
            const PathEdge& e = edges[ei];
            VertexId next = (e.u == at) ? e.v : e.u;
            if (on_path.count(next)) continue;
            bool head_at_current = e.directed ? (e.v == at) : true;
            bool head_at_next = e.directed ? (e.v == next) : true;
            // classify `at` as an occurrence between the two edges
            bool collider = arrived_head && head_at_current;
            if (collider) {
                if (!anc_cond.count(at)) continue;
            } else {
                if (cond.count(at)) continue;
            }
            if (next == target) return true;
            on_path.insert(next);
            bool found = extend(next, head_at_next);
            on_path.erase(next);
            if (found) return true;
        }
        return false;
    }
};

bool connected_pair(const MixedGraph& h, const VertexId& a, const VertexId& b, const VertexSet& c) {
    std::vector<PathEdge> edges;
    for (const auto& [u, v] : h.directed_edges()) edges.push_back({u, v, true});
    for (const auto& [u, v] : h.bidirected_edges()) edges.push_back({u, v, false});
    std::map<VertexId, std::vector<std::size_t>> incident;
    for (const auto& v : h.vertices()) incident[v];
    for (std::size_t i = 0; i < edges.size(); ++i) {
        incident[edges[i].u].push_back(i);
        incident[edges[i].v].push_back(i);
    }
    VertexSet anc_cond = c.empty() ? VertexSet{} : h.ancestors(c);

    // first edge from a: no constraint at the endpoint a itself
    for (std::size_t ei : incident.at(a)) {
        const PathEdge& e = edges[ei];
        VertexId next = (e.u == a) ? e.v : e.u;
        bool head_at_next = e.directed ? (e.v == next) : true;
        if (next == b) return true;
        WalkSearch search{edges, incident, c, anc_cond, b, {a, next}};
        if (search.extend(next, head_at_next)) return true;
    }
    return false;
}

}  // namespace

bool brute_force_msep(const MixedGraph& g, const VertexSet& a, const VertexSet& b, const VertexSet& c) {
    if (g.vertex_count() > 8) throw ResourceLimitError("brute_force_msep is capped at 8 vertices");
    for (const auto& s : {a, b, c})
        for (const auto& v : s)
            if (!g.contains(v)) throw std::invalid_argument("unknown vertex '" + v + "'");
    MixedGraph h = g.fixed().empty() ? g : with_fixed_clique(g);
    for (const auto& x : a)
        for (const auto& y : b)
            if (connected_pair(h, x, y, c)) return false;
    return true;
}

// --- path-based latent projection ---------------------------------------------

namespace {

/// Is there a path x … y whose non-endpoints are all non-colliders in the
/// latent set, with prescribed arrowhead orientations at the endpoints?
/// head_at_x / head_at_y say whether the edge adjacent to that endpoint must
/// carry an arrowhead there.
struct ProjSearch {
    const std::vector<PathEdge>& edges;
    const std::map<VertexId, std::vector<std::size_t>>& incident;
    const VertexSet& latent;
    VertexId target;
    bool head_at_target;
    VertexSet on_path;

    bool extend(const VertexId& at, bool arrived_head) {
        for (std::size_t ei : incident.at(at)) {
            const PathEdge& e = edges[ei];
            VertexId next = (e.u == at) ? e.v : e.u;
            if (on_path.count(next)) continue;
            bool head_at_current = e.directed ? (e.v == at) : true;
            bool head_at_next = e.directed ? (e.v == next) : true;
            // `at` is an intermediate: must be latent and a non-collider
            if (!latent.count(at)) continue;
            if (arrived_head && head_at_current) continue;
            if (next == target) {
                if (head_at_next == head_at_target) return true;
                continue;
            }
            on_path.insert(next);
            bool found = extend(next, head_at_next);
            on_path.erase(next);
            if (found) return true;
        }
        return false;
    }
};

/// Directed path v → … → w with every intermediate in the latent set.
bool directed_through_latents(const MixedGraph& g, const VertexId& v, const VertexId& w, const VertexSet& latent) {
    VertexSet on_path{v};
    std::function<bool(const VertexId&)> dfs = [&](const VertexId& at) -> bool {
        for (const auto& c : g.children({at})) {
            if (c == w) return true;
            if (on_path.count(c) || !latent.count(c)) continue;
            on_path.insert(c);
            if (dfs(c)) return true;
            on_path.erase(c);
        }
        return false;
    };
    return dfs(v);
}

bool projection_path(const MixedGraph& g, const VertexId& x, const VertexId& y, bool head_at_x, bool head_at_y,
                     const VertexSet& latent) {
    std::vector<PathEdge> edges;
    for (const auto& [u, v] : g.directed_edges()) edges.push_back({u, v, true});
    for (const auto& [u, v] : g.bidirected_edges()) edges.push_back({u, v, false});
    std::map<VertexId, std::vector<std::size_t>> incident;
    for (const auto& v : g.vertices()) incident[v];
    for (std::size_t i = 0; i < edges.size(); ++i) {
        incident[edges[i].u].push_back(i);
        incident[edges[i].v].push_back(i);
    }
    for (std::size_t ei : incident.at(x)) {
        const PathEdge& e = edges[ei];
        VertexId next = (e.u == x) ? e.v : e.u;
        bool head_at_source = e.directed ? (e.v == x) : true;
        bool head_at_next = e.directed ? (e.v == next) : true;
        if (head_at_source != head_at_x) continue;
        if (next == y) {
            if (head_at_next == head_at_y) return true;
            continue;
        }
        ProjSearch search{edges, incident, latent, y, head_at_y, {x, next}};
        if (search.extend(next, head_at_next)) return true;
    }
    return false;
}

}  // namespace

MixedGraph brute_force_projection(const MixedGraph& g, const VertexSet& keep) {
    if (g.vertex_count() > 8) throw ResourceLimitError("brute_force_projection is capped at 8 vertices");
    VertexSet latent;
    for (const auto& v : g.random())
        if (!keep.count(v)) latent.insert(v);
    for (const auto& v : keep)
        if (!g.is_random(v)) throw std::invalid_argument("keep set must name random vertices");

    std::vector<VertexId> rnd, fx;
    for (const auto& v : g.insertion_order()) {
        if (latent.count(v)) continue;
        (g.is_random(v) ? rnd : fx).push_back(v);
    }
    VertexSet survivors = keep;
    for (const auto& v : g.fixed()) survivors.insert(v);

    std::vector<DirectedEdge> de;
    std::vector<BidirectedEdge> be;
    for (const auto& v : survivors) {
        for (const auto& w : survivors) {
            if (v == w || !g.is_random(w)) continue;  // no heads into fixed vertices
            if (directed_through_latents(g, v, w, latent)) de.push_back({v, w});
        }
    }
    for (auto it = survivors.begin(); it != survivors.end(); ++it) {
        auto jt = it;
        for (++jt; jt != survivors.end(); ++jt) {
            if (!g.is_random(*it) || !g.is_random(*jt)) continue;
            if (projection_path(g, *it, *jt, true, true, latent)) be.push_back({*it, *jt});
        }
    }
    return MixedGraph(rnd, fx, de, be, {});
}

std::vector<MixedGraph> enumerate_admgs(int n) {
    if (n < 1 || n > 4) throw ResourceLimitError("enumerate_admgs is defined for 1 ≤ n ≤ 4");
    std::vector<VertexId> names;
    for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
    std::vector<std::pair<int, int>> arcs;  // ordered pairs
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) arcs.push_back({i, j});
    std::vector<std::pair<int, int>> pairs;  // unordered pairs
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.push_back({i, j});

    std::vector<MixedGraph> out;
    for (std::size_t dmask = 0; dmask < (std::size_t{1} << arcs.size()); ++dmask) {
        std::vector<DirectedEdge> de;
        for (std::size_t k = 0; k < arcs.size(); ++k)
            if (dmask & (std::size_t{1} << k)) de.push_back({names[arcs[k].first], names[arcs[k].second]});
        bool acyclic = true;
        try {
            MixedGraph probe(names, {}, de, {});
            (void)probe;
        } catch (const std::invalid_argument&) {
            acyclic = false;
        }
        if (!acyclic) continue;
        for (std::size_t bmask = 0; bmask < (std::size_t{1} << pairs.size()); ++bmask) {
            std::vector<BidirectedEdge> be;
            for (std::size_t k = 0; k < pairs.size(); ++k)
                if (bmask & (std::size_t{1} << k)) be.push_back({names[pairs[k].first], names[pairs[k].second]});
            out.push_back(MixedGraph(names, {}, de, be));
        }
    }
    return out;
}

MixedGraph random_admg(int n, Seed seed) {
    std::mt19937_64 rng(seed);
    std::vector<VertexId> names;
    for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
    std::vector<VertexId> order = names;
    std::shuffle(order.begin(), order.end(), rng);
    std::map<VertexId, int> pos;
    for (int i = 0; i < n; ++i) pos[order[i]] = i;
    std::vector<DirectedEdge> de;
    std::vector<BidirectedEdge> be;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (rng() % 2) {
                if (pos[names[i]] < pos[names[j]])
                    de.push_back({names[i], names[j]});
                else
                    de.push_back({names[j], names[i]});
            }
            if (rng() % 2) be.push_back({names[i], names[j]});
        }
    }
    return MixedGraph(names, {}, de, be);
}

MixedGraph random_latent_dag(int n, int max_latent, Seed seed) {
    std::mt19937_64 rng(seed);
    std::vector<VertexId> names;
    for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
    std::vector<VertexId> order = names;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<DirectedEdge> de;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng() % 2) de.push_back({order[i], order[j]});
    int k = max_latent > 0 ? static_cast<int>(rng() % static_cast<Seed>(max_latent + 1)) : 0;
    k = std::min(k, n);
    std::vector<VertexId> shuffled = names;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    std::vector<VertexId> latent(shuffled.begin(), shuffled.begin() + k);
    return MixedGraph(names, {}, de, {}, latent);
}

}  // namespace oracle
}  // namespace admg
