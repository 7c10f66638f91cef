#include "admg/nested.hpp"

#include "admg/errors.hpp"
#include "admg/separation.hpp"

#include <algorithm>
#include <map>

namespace admg {

namespace {

VertexSet set_union(const VertexSet& a, const VertexSet& b) {
    VertexSet out = a;
    out.insert(b.begin(), b.end());
    return out;
}

VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.begin()));
    return out;
}

bool subset(const VertexSet& a, const VertexSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

/// Reverse-topological ordering of `targets` in g; a valid fixing sequence
/// whenever `targets` is closed under descendants among g's random vertices.
std::vector<VertexId> reverse_topological(const MixedGraph& g, const VertexSet& targets) {
    std::vector<VertexId> out;
    for (const auto& v : g.topological_order())
        if (targets.count(v)) out.push_back(v);
    std::reverse(out.begin(), out.end());
    return out;
}

struct ConstraintKey {
    VertexSet margin_to;
    std::vector<VertexId> steps;
    VertexSet a, b, c;
    bool operator<(const ConstraintKey& o) const {
        return std::tie(margin_to, steps, a, b, c) < std::tie(o.margin_to, o.steps, o.a, o.b, o.c);
    }
};

void sort_canonical(std::vector<CiConstraint>& cs) {
    std::sort(cs.begin(), cs.end(), [](const CiConstraint& x, const CiConstraint& y) {
        if (x.fixed_set.size() != y.fixed_set.size()) return x.fixed_set.size() < y.fixed_set.size();
        return std::tie(x.fixed_set, x.a, x.b, x.c, x.margin_to) < std::tie(y.fixed_set, y.a, y.b, y.c, y.margin_to);
    });
}

void validate_order(const MixedGraph& g, const std::vector<VertexId>& order) {
    VertexSet covered(order.begin(), order.end());
    if (covered != g.vertices() || covered.size() != order.size())
        throw std::invalid_argument("ordering must be a permutation of the graph's vertices");
    std::map<VertexId, std::size_t> pos;
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    for (const auto& [tail, head] : g.directed_edges())
        if (pos[tail] > pos[head]) throw std::invalid_argument("ordering is not topological: " + head + " before " + tail);
}

}  // namespace

VertexSet erased_by_sequence(const MixedGraph& g, const std::vector<VertexId>& steps) {
    VertexSet erased;
    MixedGraph h = g;
    for (const auto& r : steps) {
        VertexSet others = h.random();
        others.erase(r);
        if (subset(others, h.markov_blanket(r))) erased.insert(r);
        h = fix_graph(h, r);
    }
    return erased;
}

std::vector<CiConstraint> global_nested_constraints(const MixedGraph& g, std::size_t max_vertices) {
    if (!g.fixed().empty()) throw std::invalid_argument("nested constraints are defined for ADMGs (no fixed vertices)");
    std::vector<CiConstraint> out;
    std::set<ConstraintKey> seen;
    VertexSet v_all = g.random();

    for (const auto& rs : reachable_sets(g, max_vertices)) {
        MixedGraph h = apply_sequence(g, rs.witness.steps);
        VertexSet erased = erased_by_sequence(g, rs.witness.steps);
        VertexSet universe = set_difference(h.vertices(), erased);
        std::vector<VertexId> verts(universe.begin(), universe.end());
        std::size_t n = verts.size();
        if (n < 2) continue;

        // pairwise m-separation matrices per conditioning set C ⊆ universe
        std::map<VertexSet, std::map<std::pair<VertexId, VertexId>, bool>> pairsep;
        for (std::size_t cmask = 0; cmask < (std::size_t{1} << n); ++cmask) {
            VertexSet c;
            for (std::size_t i = 0; i < n; ++i)
                if (cmask & (std::size_t{1} << i)) c.insert(verts[i]);
            auto& mat = pairsep[c];
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = i + 1; j < n; ++j) {
                    if (c.count(verts[i]) || c.count(verts[j])) continue;
                    bool sep = m_separated(h, {verts[i]}, {verts[j]}, c);
                    mat[{verts[i], verts[j]}] = sep;
                    mat[{verts[j], verts[i]}] = sep;
                }
            }
        }

        // per (A, C): maximal B; dedupe unordered (A, B) pairs
        std::vector<int> choice(n, 0);
        auto advance3 = [&]() {
            for (std::size_t i = n; i-- > 0;) {
                if (++choice[i] < 3) return true;
                choice[i] = 0;
            }
            return false;
        };
        do {
            VertexSet a, c;
            for (std::size_t i = 0; i < n; ++i) {
                if (choice[i] == 1) a.insert(verts[i]);
                if (choice[i] == 2) c.insert(verts[i]);
            }
            if (a.empty()) continue;
            const auto& mat = pairsep.at(c);
            VertexSet b;
            for (const auto& u : verts) {
                if (a.count(u) || c.count(u)) continue;
                bool sep_from_all = true;
                for (const auto& x : a) {
                    if (!mat.at({x, u})) {
                        sep_from_all = false;
                        break;
                    }
                }
                if (sep_from_all) b.insert(u);
            }
            if (b.empty()) continue;
            VertexSet lo = std::min(a, b), hi = std::max(a, b);
            ConstraintKey key{v_all, {}, lo, hi, c};
            key.steps = rs.witness.steps;
            if (!seen.insert(key).second) continue;
            out.push_back(CiConstraint{set_difference(v_all, rs.remaining), rs.witness, lo, hi, c, v_all});
        } while (advance3());
    }
    sort_canonical(out);
    return out;
}

std::vector<CiConstraint> ordered_local_nested_constraints(const MixedGraph& g, const std::vector<VertexId>& order,
                                                           std::size_t max_vertices) {
    if (!g.fixed().empty()) throw std::invalid_argument("nested constraints are defined for ADMGs (no fixed vertices)");
    validate_order(g, order);
    std::map<VertexId, std::size_t> pos;
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    VertexSet v_all = g.random();

    std::vector<CiConstraint> out;
    for (const auto& is : intrinsic_sets(g, max_vertices)) {
        // witness reaches a graph in which `members` is a district; the local
        // statement lives in the kernel fixing everything else
        auto witness = reach(g, is.members);
        if (!witness) continue;  // districts of reachable graphs are reachable
        MixedGraph h = apply_sequence(g, witness->steps);
        VertexSet erased = erased_by_sequence(g, witness->steps);
        VertexId t;
        bool first = true;
        for (const auto& v : is.members) {
            if (first || pos.at(v) > pos.at(t)) {
                t = v;
                first = false;
            }
        }
        VertexSet mb = h.markov_blanket(t);
        VertexSet indep;
        for (const auto& v : h.vertices())
            if (v != t && !mb.count(v)) indep.insert(v);
        if (set_difference(indep, erased).empty()) continue;
        out.push_back(CiConstraint{set_difference(v_all, is.members), *witness, {t}, indep, mb, v_all});
    }
    sort_canonical(out);
    return out;
}

std::vector<CiConstraint> ordered_local_nested_constraints(const MixedGraph& g, std::size_t max_vertices) {
    return ordered_local_nested_constraints(g, g.topological_order(), max_vertices);
}

// --- Tian's algorithms ---------------------------------------------------------

namespace {

struct TianEmitter {
    const MixedGraph& margin_graph;  // G(T): origin of every witness
    VertexSet margin_to;
    std::vector<CiConstraint>* out;

    void emit(const std::vector<VertexId>& steps, VertexSet a, VertexSet b, VertexSet c) {
        VertexSet fixed;
        for (const auto& s : steps) fixed.insert(s);
        out->push_back(CiConstraint{fixed, FixingSequence{steps, margin_graph}, std::move(a), std::move(b),
                                    std::move(c), margin_to});
    }
};

/// NODE-CONSTRAINTS body: h is the current CADMG (vertex set = the margin),
/// prefix the steps taken so far inside the margin graph.
void node_constraints_impl(const VertexId& v, const MixedGraph& h, const std::vector<VertexId>& prefix,
                           TianEmitter& em) {
    VertexSet s = h.random();
    // subsets of S \ {v} closed under descendants among the random vertices
    std::vector<VertexId> pool;
    for (const auto& u : s)
        if (u != v) pool.push_back(u);
    std::size_t n = pool.size();
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        VertexSet d;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (std::size_t{1} << i)) d.insert(pool[i]);
        if (d.size() == s.size()) continue;  // D ⊂ S strictly
        // closed under descendants within the random part
        VertexSet de_d;
        {
            VertexSet de_full = h.descendants(d);
            for (const auto& u : de_full)
                if (s.count(u)) de_d.insert(u);
        }
        if (de_d != d) continue;

        VertexSet d_prime = set_difference(s, d);
        std::vector<VertexId> d_steps = reverse_topological(h, d);
        std::vector<VertexId> steps_to_dprime = prefix;
        steps_to_dprime.insert(steps_to_dprime.end(), d_steps.begin(), d_steps.end());

        VertexSet pa_s_outside = set_difference(h.parents(s), s);
        VertexSet pa_dprime = h.parents(d_prime);
        VertexSet line6_b = set_difference(pa_s_outside, pa_dprime);
        if (!line6_b.empty()) {
            em.emit(steps_to_dprime, d_prime, line6_b, set_difference(pa_dprime, d_prime));
        }

        MixedGraph h_dprime = apply_sequence(h, d_steps);
        std::vector<VertexSet> districts = h_dprime.districts();
        VertexSet e;
        for (const auto& dist : districts)
            if (dist.count(v)) e = dist;

        if (districts.size() > 1) {
            VertexSet mb_ve = h_dprime.markov_blanket(v);  // district of v is E here
            VertexSet line10_b = set_difference(set_union(d_prime, h.parents(d_prime)), mb_ve);
            line10_b.erase(v);
            if (!line10_b.empty()) {
                em.emit(steps_to_dprime, {v}, line10_b, mb_ve);
            }
        }

        // recurse into the district of v
        auto to_e = reach(h, e);
        if (!to_e) throw std::logic_error("district of a reachable CADMG must be reachable");
        std::vector<VertexId> steps_to_e = prefix;
        steps_to_e.insert(steps_to_e.end(), to_e->steps.begin(), to_e->steps.end());
        node_constraints_impl(v, apply_sequence(h, to_e->steps), steps_to_e, em);
    }
}

}  // namespace

std::vector<CiConstraint> node_constraints(const VertexId& v, const MixedGraph& cadmg, const MixedGraph& origin,
                                           const std::vector<VertexId>& prefix) {
    if (!cadmg.is_random(v)) throw std::invalid_argument("node_constraints requires a random vertex");
    if (!cadmg.children({v}).empty()) throw std::invalid_argument("node_constraints requires a childless vertex");
    std::vector<CiConstraint> out;
    TianEmitter em{origin, origin.vertices(), &out};
    node_constraints_impl(v, cadmg, prefix, em);
    return out;
}

std::vector<CiConstraint> tian_constraints(const MixedGraph& g, const std::vector<VertexId>& order,
                                           std::size_t max_vertices) {
    if (!g.fixed().empty()) throw std::invalid_argument("nested constraints are defined for ADMGs (no fixed vertices)");
    validate_order(g, order);
    if (g.random().size() > max_vertices)
        throw ResourceLimitError("tian_constraints over " + std::to_string(g.random().size()) +
                                 " vertices exceeds the cap of " + std::to_string(max_vertices));
    std::vector<CiConstraint> out;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const VertexId& v = order[k];
        VertexSet t(order.begin(), order.begin() + static_cast<long>(k) + 1);
        MixedGraph gt = g.induced_subgraph(t);
        VertexSet s = gt.district_of(v);
        TianEmitter em{gt, t, &out};

        VertexSet mb_vt = gt.markov_blanket(v);
        VertexSet line7_b = set_difference(set_difference(t, mb_vt), VertexSet{v});
        if (!line7_b.empty()) {
            em.emit({}, {v}, line7_b, mb_vt);
        }
        auto to_s = reach(gt, s);
        if (!to_s) throw std::logic_error("district of an ancestral margin must be reachable");
        node_constraints_impl(v, apply_sequence(gt, to_s->steps), to_s->steps, em);
    }
    // dedupe identical derivations
    std::set<ConstraintKey> seen;
    std::vector<CiConstraint> dedup;
    for (auto& c : out) {
        ConstraintKey key{c.margin_to, c.witness.steps, c.a, c.b, c.c};
        if (seen.insert(key).second) dedup.push_back(std::move(c));
    }
    sort_canonical(dedup);
    return dedup;
}

std::vector<CiConstraint> tian_constraints(const MixedGraph& g, std::size_t max_vertices) {
    return tian_constraints(g, g.topological_order(), max_vertices);
}

// --- membership -----------------------------------------------------------------

bool ConstraintReport::all_pass() const {
    return std::all_of(results.begin(), results.end(),
                       [](const ConstraintResult& r) { return r.verdict == Verdict::Pass; });
}

std::size_t ConstraintReport::violation_count() const {
    return static_cast<std::size_t>(
        std::count_if(results.begin(), results.end(), [](const ConstraintResult& r) { return r.verdict == Verdict::Fail; }));
}

std::size_t ConstraintReport::degenerate_count() const {
    return static_cast<std::size_t>(std::count_if(results.begin(), results.end(), [](const ConstraintResult& r) {
        return r.verdict == Verdict::Degenerate;
    }));
}

ConstraintReport check_membership(const MixedGraph& g, const Kernel& p, MembershipMode mode,
                                  const std::vector<VertexId>& order, std::size_t max_vertices) {
    if (!p.fixed_vars().empty()) throw std::invalid_argument("membership checking requires a joint distribution");
    if (!g.fixed().empty()) throw std::invalid_argument("membership checking requires an ADMG");
    if (p.random_vars() != g.random()) throw std::invalid_argument("distribution and graph variables differ");

    std::vector<CiConstraint> constraints;
    ConstraintReport report;
    switch (mode) {
        case MembershipMode::Global:
            constraints = global_nested_constraints(g, max_vertices);
            report.mode = "global";
            break;
        case MembershipMode::Local:
            constraints = ordered_local_nested_constraints(g, order, max_vertices);
            report.mode = "local";
            break;
        case MembershipMode::Tian:
            constraints = tian_constraints(g, order, max_vertices);
            report.mode = "tian";
            break;
    }

    // kernels shared across constraints with the same derivation
    std::map<std::pair<VertexSet, std::vector<VertexId>>, Kernel> cache;
    for (const auto& c : constraints) {
        ConstraintResult res{c};
        auto key = std::make_pair(c.margin_to, c.witness.steps);
        auto it = cache.find(key);
        if (it == cache.end()) {
            Kernel base = (c.margin_to == p.random_vars()) ? p : marginalize(p, c.margin_to);
            MixedGraph origin = (c.margin_to == g.random()) ? g : g.induced_subgraph(c.margin_to);
            Kernel k = apply_sequence_kernel(base, c.witness.steps, origin);
            it = cache.emplace(key, std::move(k)).first;
        }
        const Kernel& k = it->second;
        if (k.has_undefined_context()) {
            res.verdict = Verdict::Degenerate;
        } else {
            CiCheck check = kernel_ci_check(k, c.a, c.b, c.c);
            res.outside_definition = check.outside_definition;
            if (check.holds) {
                res.verdict = Verdict::Pass;
            } else {
                res.verdict = Verdict::Fail;
                res.violation = check.violation;
            }
        }
        report.results.push_back(std::move(res));
    }
    return report;
}

ConstraintReport check_membership(const MixedGraph& g, const Kernel& p, MembershipMode mode, std::size_t max_vertices) {
    return check_membership(g, p, mode, g.topological_order(), max_vertices);
}

bool nested_factorization_holds(const MixedGraph& g, const Kernel& p, std::size_t max_vertices) {
    if (!p.fixed_vars().empty() || !g.fixed().empty())
        throw std::invalid_argument("nested factorization is a property of joints over ADMGs");
    std::map<VertexSet, Kernel> memo;
    auto kernel_for = [&](const VertexSet& remaining) -> const Kernel& {
        auto it = memo.find(remaining);
        if (it == memo.end()) {
            auto w = reach(g, remaining);
            it = memo.emplace(remaining, apply_sequence_kernel(p, w->steps, g)).first;
        }
        return it->second;
    };

    for (const auto& rs : reachable_sets(g, max_vertices)) {
        const Kernel& lhs = kernel_for(rs.remaining);
        MixedGraph h = apply_sequence(g, rs.witness.steps);
        std::vector<const Kernel*> parts;
        for (const auto& d : h.districts()) parts.push_back(&kernel_for(d));
        if (lhs.has_undefined_context()) return false;
        for (const Kernel* part : parts)
            if (part->has_undefined_context()) return false;
        // cellwise over the full V space
        std::size_t cells = lhs.cell_count();
        for (std::size_t rank = 0; rank < cells; ++rank) {
            Assignment a = lhs.assignment_of(rank);
            Rational rhs(1);
            for (const Kernel* part : parts) rhs *= part->value(a);
            if (lhs.value(a) != rhs) return false;
        }
    }
    return true;
}

}  // namespace admg
