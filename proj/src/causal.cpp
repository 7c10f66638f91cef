#include "admg/causal.hpp"

#include "admg/errors.hpp"

#include <algorithm>
#include <sstream>

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

void validate_query(const MixedGraph& g, const CausalQuery& q) {
    if (q.treatment.empty() || q.outcome.empty())
        throw std::invalid_argument("causal query needs non-empty treatment and outcome sets");
    for (const auto& v : set_union(q.treatment, q.outcome))
        if (!g.is_random(v)) throw std::invalid_argument("query vertex '" + v + "' is not a random vertex");
    for (const auto& v : q.treatment)
        if (q.outcome.count(v)) throw std::invalid_argument("treatment and outcome overlap at '" + v + "'");
}

}  // namespace

Kernel g_formula(const MixedGraph& g, const Kernel& p, const VertexSet& a) {
    if (!g.bidirected_edges().empty()) throw std::invalid_argument("g_formula requires a DAG-shaped graph");
    if (!g.fixed().empty() || !p.fixed_vars().empty())
        throw std::invalid_argument("g_formula takes a joint over an unconditional DAG");
    if (p.random_vars() != g.random()) throw std::invalid_argument("distribution and graph variables differ");
    for (const auto& v : a)
        if (!g.is_random(v)) throw std::invalid_argument("unknown treatment vertex '" + v + "'");

    VertexSet keep = set_difference(g.random(), a);
    struct Factor {
        VertexId v;
        VertexSet given;
    };
    std::vector<Factor> factors;
    for (const auto& v : keep) factors.push_back({v, g.parents({v})});

    // conditionals of p; undefined on zero-probability parent contexts
    struct Tables {
        Kernel num, den;
    };
    std::vector<Tables> tables;
    for (const auto& f : factors) {
        VertexSet vg = f.given;
        vg.insert(f.v);
        tables.push_back({marginalize(p, vg), marginalize(p, f.given)});
    }
    return Kernel::from_function(keep, a, p.space(), [&](const Assignment& full) {
        Rational prod(1);
        for (std::size_t i = 0; i < factors.size(); ++i) {
            Rational den = tables[i].den.value(full);
            if (den == 0)
                throw DegenerateInputError("g-formula conditional p(" + factors[i].v +
                                           " | parents) undefined on a needed context");
            prod *= tables[i].num.value(full) / den;
        }
        return prod;
    });
}

MixedGraph canonical_dag(const MixedGraph& g) {
    if (g.bidirected_edges().empty()) return g;
    std::vector<VertexId> rnd, fx, lat(g.latent().begin(), g.latent().end());
    for (const auto& v : g.insertion_order()) (g.is_random(v) ? rnd : fx).push_back(v);
    std::vector<DirectedEdge> de(g.directed_edges().begin(), g.directed_edges().end());
    VertexSet taken = g.vertices();
    for (const auto& [x, y] : g.bidirected_edges()) {
        std::string name = "u_" + x + "_" + y;
        while (taken.count(name)) name += "_";
        taken.insert(name);
        rnd.push_back(name);
        lat.push_back(name);
        de.push_back({name, x});
        de.push_back({name, y});
    }
    return MixedGraph(rnd, fx, de, {}, lat);
}

VertexSet truncate_to_relevant(const MixedGraph& g, const VertexSet& a, const VertexSet& y) {
    for (const auto& v : set_union(a, y))
        if (!g.contains(v)) throw std::invalid_argument("unknown vertex '" + v + "'");
    for (const auto& v : a)
        if (y.count(v)) throw std::invalid_argument("treatment and outcome overlap at '" + v + "'");
    // G_Ā: drop directed edges into A
    std::vector<VertexId> rnd, fx;
    for (const auto& v : g.insertion_order()) (g.is_random(v) ? rnd : fx).push_back(v);
    std::vector<DirectedEdge> de;
    for (const auto& e : g.directed_edges())
        if (!a.count(e.second)) de.push_back(e);
    std::vector<BidirectedEdge> be(g.bidirected_edges().begin(), g.bidirected_edges().end());
    MixedGraph cut(rnd, fx, de, be);
    VertexSet anc = cut.ancestors(y);
    VertexSet out;
    for (const auto& v : a)
        if (anc.count(v)) out.insert(v);
    return out;
}

IdResult identify(const MixedGraph& g, const CausalQuery& query, std::size_t max_vertices) {
    if (!g.fixed().empty()) throw std::invalid_argument("identify runs on ADMGs (no fixed vertices)");
    validate_query(g, query);

    VertexSet rest = set_difference(g.random(), query.treatment);
    MixedGraph g_rest = g.induced_subgraph(rest);
    VertexSet y_star = g_rest.ancestors(query.outcome);
    MixedGraph g_ystar = g.induced_subgraph(y_star);

    std::set<VertexSet> intrinsic = intrinsic_family(g, max_vertices);
    std::vector<VertexSet> districts = g_ystar.districts();
    std::sort(districts.begin(), districts.end(), [](const VertexSet& a, const VertexSet& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    for (const auto& d : districts) {
        if (intrinsic.count(d)) continue;
        // hedge: the minimal intrinsic superset witnesses the obstruction
        VertexSet best;
        bool found = false;
        for (const auto& s : intrinsic) {
            if (!std::includes(s.begin(), s.end(), d.begin(), d.end())) continue;
            if (!found || s.size() < best.size() || (s.size() == best.size() && s < best)) {
                best = s;
                found = true;
            }
        }
        return IdResult{NotIdentifiable{d, best}};
    }
    Identifiable ok;
    ok.y_star = y_star;
    ok.sum_over = set_difference(y_star, query.outcome);
    for (const auto& d : districts) {
        auto w = reach(g, d);
        if (!w) throw std::logic_error("intrinsic set must be reachable");
        ok.factors.push_back(IdentifiedFactor{d, std::move(*w)});
    }
    return IdResult{std::move(ok)};
}

Kernel evaluate_effect(const MixedGraph& g, const Kernel& p, const CausalQuery& query, std::size_t max_vertices) {
    IdResult id = identify(g, query, max_vertices);
    if (!id.identifiable())
        throw std::invalid_argument("effect is not identifiable; no functional to evaluate");
    const Identifiable& ok = id.ok();
    if (p.random_vars() != g.random() || !p.fixed_vars().empty())
        throw std::invalid_argument("evaluate_effect needs a joint over the graph's vertices");

    std::vector<Kernel> parts;
    for (const auto& f : ok.factors) parts.push_back(apply_sequence_kernel(p, f.witness.steps, g));

    VertexSet bound = ok.sum_over;
    VertexSet other = set_difference(set_difference(g.random(), ok.y_star), query.treatment);

    StateSpace space = p.space();
    return Kernel::from_function(query.outcome, query.treatment, space, [&](const Assignment& ya) {
        // sum over the bound coordinates; coordinates outside Y* ∪ A are
        // irrelevant to every factor and pinned at level 0
        std::vector<VertexId> bvars(bound.begin(), bound.end());
        std::vector<int> bcard;
        for (const auto& v : bvars) bcard.push_back(space.cardinality(v));
        Rational total(0);
        std::vector<int> coords(bvars.size(), 0);
        bool more = true;
        while (more) {
            Assignment full = ya;
            for (const auto& v : other) full[v] = 0;
            for (std::size_t i = 0; i < bvars.size(); ++i) full[bvars[i]] = coords[i];
            Rational prod(1);
            for (const auto& part : parts) prod *= part.value(full);
            total += prod;
            more = false;
            for (std::size_t i = coords.size(); i-- > 0;) {
                if (++coords[i] < bcard[i]) {
                    more = true;
                    break;
                }
                coords[i] = 0;
            }
            if (coords.empty()) break;
        }
        return total;
    });
}

std::map<Assignment, Rational> evaluate_effect_at(const MixedGraph& g, const Kernel& p, const CausalQuery& query,
                                                  const Assignment& x_a, std::size_t max_vertices) {
    Kernel k = evaluate_effect(g, p, query, max_vertices);
    std::map<Assignment, Rational> out;
    std::vector<VertexId> yvars(query.outcome.begin(), query.outcome.end());
    std::vector<int> ycard;
    for (const auto& v : yvars) ycard.push_back(p.space().cardinality(v));
    std::vector<int> coords(yvars.size(), 0);
    bool more = true;
    while (more) {
        Assignment y, full = x_a;
        for (std::size_t i = 0; i < yvars.size(); ++i) {
            y[yvars[i]] = coords[i];
            full[yvars[i]] = coords[i];
        }
        out[y] = k.value(full);
        more = false;
        for (std::size_t i = coords.size(); i-- > 0;) {
            if (++coords[i] < ycard[i]) {
                more = true;
                break;
            }
            coords[i] = 0;
        }
        if (coords.empty()) break;
    }
    return out;
}

// --- functional rendering ------------------------------------------------------

namespace {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { PMargin, PCond, Product, Sum, Quotient } kind;
    VertexSet vars;                 // PMargin: the margined set; PCond: {var}
    VertexSet given;                // PCond
    std::vector<ExprPtr> factors;   // Product
    VertexSet bound;                // Sum
    ExprPtr body;                   // Sum
    ExprPtr num, den;               // Quotient
};

ExprPtr make_margin(VertexSet vs) {
    return std::make_shared<Expr>(Expr{Expr::Kind::PMargin, std::move(vs), {}, {}, {}, nullptr, nullptr, nullptr});
}
ExprPtr make_cond(VertexId v, VertexSet given) {
    return std::make_shared<Expr>(Expr{Expr::Kind::PCond, {std::move(v)}, std::move(given), {}, {}, nullptr, nullptr, nullptr});
}
ExprPtr make_product(std::vector<ExprPtr> fs) {
    if (fs.size() == 1) return fs[0];
    return std::make_shared<Expr>(Expr{Expr::Kind::Product, {}, {}, std::move(fs), {}, nullptr, nullptr, nullptr});
}
ExprPtr make_sum(VertexSet bound, ExprPtr body) {
    if (bound.empty()) return body;
    return std::make_shared<Expr>(Expr{Expr::Kind::Sum, {}, {}, {}, std::move(bound), std::move(body), nullptr, nullptr});
}
ExprPtr make_quotient(ExprPtr num, ExprPtr den) {
    return std::make_shared<Expr>(Expr{Expr::Kind::Quotient, {}, {}, {}, {}, nullptr, std::move(num), std::move(den)});
}

/// Symbolic state: either a pure margin p(x_S) or a compound kernel
/// expression over the current random set.
struct SymbolicKernel {
    bool pure_margin;
    VertexSet margin;  // valid when pure_margin
    ExprPtr expr;      // valid otherwise
};

/// Conditional q(x_s | x_K, x_W) of the current kernel, as an expression.
/// For a pure margin this is an honest p-conditional.
ExprPtr conditional_of(const SymbolicKernel& sk, const VertexSet& current_random, const VertexId& s,
                       const VertexSet& k) {
    if (sk.pure_margin) return make_cond(s, k);
    VertexSet sk_set = k;
    sk_set.insert(s);
    VertexSet num_drop = set_difference(current_random, sk_set);
    VertexSet den_drop = set_difference(current_random, k);
    return make_quotient(make_sum(num_drop, sk.expr), make_sum(den_drop, sk.expr));
}

/// φ_{V\D}(p) as an expression in p, for intrinsic D, following the
/// margin/district-factorization recursion.
ExprPtr intrinsic_expression(const MixedGraph& g, const VertexSet& d) {
    std::vector<VertexId> order = g.topological_order();
    std::map<VertexId, std::size_t> pos;
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;

    MixedGraph h = g;
    SymbolicKernel sk{true, g.random(), nullptr};
    while (h.random() != d) {
        VertexSet rnd = h.random();
        VertexSet anc;
        {
            VertexSet full = h.ancestors(d);
            for (const auto& v : full)
                if (rnd.count(v)) anc.insert(v);
        }
        if (anc != rnd) {
            // marginalize the non-ancestors away (childless fixes)
            VertexSet dropped = set_difference(rnd, anc);
            if (sk.pure_margin) {
                sk.margin = set_difference(sk.margin, dropped);
            } else {
                sk.expr = make_sum(dropped, sk.expr);
            }
            h = h.induced_subgraph(set_union(anc, h.fixed()));
            continue;
        }
        VertexSet s = h.district_of(*d.begin());
        if (s == rnd) throw std::invalid_argument("set {" + join_names(d) + "} is not intrinsic");
        // q_S = Π_{s∈S} q(x_s | x_{pre ∩ random}, x_W), in topological order
        std::vector<VertexId> members(s.begin(), s.end());
        std::sort(members.begin(), members.end(), [&](const VertexId& a, const VertexId& b) { return pos[a] < pos[b]; });
        std::vector<ExprPtr> factors;
        for (const auto& m : members) {
            VertexSet k;
            for (const auto& u : rnd)
                if (pos[u] < pos[m]) k.insert(u);
            for (const auto& w : h.fixed()) k.insert(w);
            factors.push_back(conditional_of(sk, rnd, m, k));
        }
        sk = SymbolicKernel{false, {}, make_product(std::move(factors))};
        auto w = reach(h, s);
        if (!w) throw std::logic_error("district must be reachable");
        h = apply_sequence(h, w->steps);
    }
    if (sk.pure_margin) return make_margin(sk.margin);
    return sk.expr;
}

void free_vars(const ExprPtr& e, VertexSet bound, VertexSet& out) {
    switch (e->kind) {
        case Expr::Kind::PMargin:
            for (const auto& v : e->vars)
                if (!bound.count(v)) out.insert(v);
            break;
        case Expr::Kind::PCond:
            for (const auto& v : e->vars)
                if (!bound.count(v)) out.insert(v);
            for (const auto& v : e->given)
                if (!bound.count(v)) out.insert(v);
            break;
        case Expr::Kind::Product:
            for (const auto& f : e->factors) free_vars(f, bound, out);
            break;
        case Expr::Kind::Quotient:
            free_vars(e->num, bound, out);
            free_vars(e->den, bound, out);
            break;
        case Expr::Kind::Sum: {
            VertexSet inner = bound;
            inner.insert(e->bound.begin(), e->bound.end());
            free_vars(e->body, inner, out);
            break;
        }
    }
}

// capture-avoiding rename: bound names shadowing visible ones get primes
ExprPtr rename(const ExprPtr& e, const std::map<VertexId, std::string>& env, std::set<std::string>& used) {
    auto lookup = [&](const VertexId& v) -> std::string {
        auto it = env.find(v);
        return it == env.end() ? v : it->second;
    };
    switch (e->kind) {
        case Expr::Kind::PMargin: {
            VertexSet vs;
            for (const auto& v : e->vars) vs.insert(lookup(v));
            return make_margin(vs);
        }
        case Expr::Kind::PCond: {
            VertexSet gs;
            for (const auto& v : e->given) gs.insert(lookup(v));
            return make_cond(lookup(*e->vars.begin()), gs);
        }
        case Expr::Kind::Product: {
            std::vector<ExprPtr> fs;
            for (const auto& f : e->factors) fs.push_back(rename(f, env, used));
            return make_product(std::move(fs));
        }
        case Expr::Kind::Quotient:
            return make_quotient(rename(e->num, env, used), rename(e->den, env, used));
        case Expr::Kind::Sum: {
            std::map<VertexId, std::string> inner = env;
            VertexSet bound;
            for (const auto& v : e->bound) {
                std::string name = v;
                while (used.count(name)) name += "'";
                used.insert(name);
                inner[v] = name;
                bound.insert(name);
            }
            return make_sum(bound, rename(e->body, inner, used));
        }
    }
    return e;
}

void render(const ExprPtr& e, std::ostringstream& out, bool bracket_sums) {
    switch (e->kind) {
        case Expr::Kind::PMargin:
            out << "p(" << join_names(e->vars) << ")";
            break;
        case Expr::Kind::PCond:
            out << "p(" << *e->vars.begin();
            if (!e->given.empty()) out << " | " << join_names(e->given);
            out << ")";
            break;
        case Expr::Kind::Product: {
            bool first = true;
            for (const auto& f : e->factors) {
                if (!first) out << " ";
                render(f, out, true);
                first = false;
            }
            break;
        }
        case Expr::Kind::Sum:
            if (bracket_sums) out << "[";
            out << "Σ_{" << join_names(e->bound) << "} ";
            render(e->body, out, false);
            if (bracket_sums) out << "]";
            break;
        case Expr::Kind::Quotient:
            out << "(";
            render(e->num, out, false);
            out << ") / (";
            render(e->den, out, false);
            out << ")";
            break;
    }
}

}  // namespace

std::string render_intrinsic_kernel(const MixedGraph& g, const VertexSet& district) {
    if (!g.fixed().empty()) throw std::invalid_argument("intrinsic-kernel rendering runs on ADMGs");
    ExprPtr e = intrinsic_expression(g, district);
    std::set<std::string> used;
    VertexSet free;
    free_vars(e, {}, free);
    used.insert(free.begin(), free.end());
    std::map<VertexId, std::string> env;
    e = rename(e, env, used);
    std::ostringstream out;
    render(e, out, false);
    return out.str();
}

std::string render_functional(const MixedGraph& g, const CausalQuery& query, const IdResult& result) {
    if (!result.identifiable()) throw std::invalid_argument("no functional: effect is not identifiable");
    const Identifiable& ok = result.ok();
    std::vector<ExprPtr> factors;
    std::vector<IdentifiedFactor> fs = ok.factors;
    std::sort(fs.begin(), fs.end(),
              [](const IdentifiedFactor& a, const IdentifiedFactor& b) { return a.district < b.district; });
    for (const auto& f : fs) factors.push_back(intrinsic_expression(g, f.district));
    ExprPtr whole = make_sum(ok.sum_over, make_product(std::move(factors)));

    std::set<std::string> used;
    VertexSet free;
    free_vars(whole, {}, free);  // the query's own variables
    used.insert(free.begin(), free.end());
    std::map<VertexId, std::string> env;
    whole = rename(whole, env, used);

    std::ostringstream out;
    out << "p(" << join_names(query.outcome) << " | do(" << join_names(query.treatment) << ")) = ";
    render(whole, out, false);
    return out.str();
}

}  // namespace admg
