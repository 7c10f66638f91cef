#pragma once

#include "admg/fixing.hpp"
#include "admg/kernel.hpp"

#include <optional>

namespace admg {

/// One statement "X_a ⫫ X_b | X_c in the kernel reached by fixing
/// fixed_set"; the currency of the nested model.
///
/// Global/local constraints derive their kernel as φ_S(p) via the witness.
/// Tian constraints follow the constraint-finding algorithm literally: an
/// ancestral margin first (margin_to ⊊ V), then fixing inside that margin's
/// induced CADMG.
struct CiConstraint {
    VertexSet fixed_set;      // S; the kernel is φ_S(p) (within the margin, for Tian)
    FixingSequence witness;   // a valid sequence; origin is g or the margin graph
    VertexSet a, b, c;
    VertexSet margin_to;      // = V for the pure-fixing modes
};

enum class Verdict { Pass, Fail, Degenerate };

struct ConstraintResult {
    CiConstraint constraint;
    Verdict verdict = Verdict::Pass;
    std::optional<CiViolation> violation;  // present on Fail
    bool outside_definition = false;       // statement hit the open corner of Def. def:ind
};

struct ConstraintReport {
    std::string mode;
    std::vector<ConstraintResult> results;

    bool all_pass() const;
    std::size_t violation_count() const;
    std::size_t degenerate_count() const;
};

enum class MembershipMode { Global, Local, Tian };

/// For every reachable R: all m-separation statements of φ_{V\R}(G)^{|W},
/// canonical order, maximal independent side per (R, A, C) slice, fixed
/// coordinates that were erased (fixed with a full Markov blanket, hence
/// constant in the kernel for every distribution) dropped from the universe.
std::vector<CiConstraint> global_nested_constraints(const MixedGraph& g, std::size_t max_vertices = 12);

/// For each intrinsic set C: the single local statement at max_≺(C) against
/// the kernel φ_{V\C}(p). Statements whose independent side is entirely
/// erased are suppressed.
std::vector<CiConstraint> ordered_local_nested_constraints(const MixedGraph& g, const std::vector<VertexId>& order,
                                                           std::size_t max_vertices = 12);
std::vector<CiConstraint> ordered_local_nested_constraints(const MixedGraph& g, std::size_t max_vertices = 12);

/// FIND-CONSTRAINTS: the constraint-finding algorithm over margins,
/// district kernels and recursive NODE-CONSTRAINTS calls.
std::vector<CiConstraint> tian_constraints(const MixedGraph& g, const std::vector<VertexId>& order,
                                           std::size_t max_vertices = 12);
std::vector<CiConstraint> tian_constraints(const MixedGraph& g, std::size_t max_vertices = 12);

/// NODE-CONSTRAINTS for a childless v of a CADMG; exposed for tests. The
/// prefix sequence is prepended to emitted witnesses.
std::vector<CiConstraint> node_constraints(const VertexId& v, const MixedGraph& cadmg, const MixedGraph& origin,
                                           const std::vector<VertexId>& prefix);

/// Evaluates every constraint of the chosen mode on the actually-computed
/// kernels. Degenerate fixings (undefined contexts on the way) yield a
/// Degenerate verdict rather than a crash.
ConstraintReport check_membership(const MixedGraph& g, const Kernel& p, MembershipMode mode,
                                  std::size_t max_vertices = 12);
ConstraintReport check_membership(const MixedGraph& g, const Kernel& p, MembershipMode mode,
                                  const std::vector<VertexId>& order, std::size_t max_vertices = 12);

/// For every reachable R: φ_{V\R}(p) = Π over districts D of φ_{V\R}(G) of
/// φ_{V\D}(p), exactly.
bool nested_factorization_holds(const MixedGraph& g, const Kernel& p, std::size_t max_vertices = 12);

/// The set of fixed coordinates that are structurally constant in the kernel
/// reached by `steps`: vertices whose Markov blanket covered every other
/// random vertex when they were fixed. Exposed for tests.
VertexSet erased_by_sequence(const MixedGraph& g, const std::vector<VertexId>& steps);

}  // namespace admg
