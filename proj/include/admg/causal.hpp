#pragma once

#include "admg/fixing.hpp"
#include "admg/kernel.hpp"

#include <memory>
#include <variant>

namespace admg {

/// p(x_Y | do(x_A)) query: disjoint non-empty treatment and outcome sets.
struct CausalQuery {
    VertexSet treatment;
    VertexSet outcome;
};

struct IdentifiedFactor {
    District district;
    FixingSequence witness;
};

struct Identifiable {
    VertexSet y_star;                       // an_{G_{V\A}}(Y)
    std::vector<IdentifiedFactor> factors;  // districts of G_{Y*}, each intrinsic
    VertexSet sum_over;                     // Y* \ Y
};

struct NotIdentifiable {
    District offending_district;            // district of G_{Y*} that is not intrinsic
    VertexSet minimal_intrinsic_superset;   // smallest intrinsic superset (hedge witness)
};

struct IdResult {
    std::variant<Identifiable, NotIdentifiable> outcome;

    bool identifiable() const { return std::holds_alternative<Identifiable>(outcome); }
    const Identifiable& ok() const { return std::get<Identifiable>(outcome); }
    const NotIdentifiable& hedge() const { return std::get<NotIdentifiable>(outcome); }
};

/// Truncated factorization Π_{v ∈ V\A} p(x_v | x_pa(v)) as a kernel with
/// V\A random and A fixed. G must have no bidirected edges and no fixed
/// vertices; p a joint over V.
Kernel g_formula(const MixedGraph& g, const Kernel& p, const VertexSet& a);

/// The one-line identification algorithm: Y* = an_{G_{V\A}}(Y); identifiable
/// iff every district of G_{Y*} is intrinsic in G, with the functional
/// Σ_{x_{Y*\Y}} Π_D φ_{V\D}(p). Otherwise returns the offending district
/// and its minimal intrinsic superset.
IdResult identify(const MixedGraph& g, const CausalQuery& query, std::size_t max_vertices = 12);

/// Evaluates the identifying functional exactly: returns the kernel
/// p(x_Y | do(x_A)) with Y random and A fixed.
Kernel evaluate_effect(const MixedGraph& g, const Kernel& p, const CausalQuery& query, std::size_t max_vertices = 12);

/// Distribution over x_Y at one treatment assignment.
std::map<Assignment, Rational> evaluate_effect_at(const MixedGraph& g, const Kernel& p, const CausalQuery& query,
                                                  const Assignment& x_a, std::size_t max_vertices = 12);

/// One fresh latent parent per bidirected edge; directed edges copied;
/// the fresh vertices carry latent marks.
MixedGraph canonical_dag(const MixedGraph& g);

/// A_Y = an_{G_Ā}(Y) ∩ A where G_Ā removes directed edges into A;
/// do(x_A) reduces to do(x_{A_Y}).
VertexSet truncate_to_relevant(const MixedGraph& g, const VertexSet& a, const VertexSet& y);

/// Renders the identifying functional as text, e.g.
///   p(x4 | do(x2)) = Σ_{x1,x3} p(x1) p(x3 | x1,x2) [Σ_{x2'} p(x2' | x1) p(x4 | x1,x2',x3)]
/// Bound variables that would capture a free name are primed. Valid only for
/// an Identifiable result.
std::string render_functional(const MixedGraph& g, const CausalQuery& query, const IdResult& result);

/// Renders φ_{V\D}(p) for an intrinsic set D in terms of p.
std::string render_intrinsic_kernel(const MixedGraph& g, const VertexSet& district);

}  // namespace admg
