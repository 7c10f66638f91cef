#pragma once

#include "admg/graph.hpp"
#include "admg/rational.hpp"

#include <cstddef>
#include <functional>
#include <optional>

namespace admg {

/// Finite discrete state space: level count per vertex, levels 0..k-1.
class StateSpace {
public:
    StateSpace() = default;
    explicit StateSpace(std::map<VertexId, int> cardinalities);

    int cardinality(const VertexId& v) const;
    bool covers(const VertexSet& vs) const;
    const std::map<VertexId, int>& cardinalities() const { return card_; }

    /// Uniform cardinality k over the given vertices.
    static StateSpace uniform(const VertexSet& vs, int k);

private:
    std::map<VertexId, int> card_;
};

/// A point x_A: level index per vertex.
using Assignment = std::map<VertexId, int>;

struct FixingSequence;  // fixing.hpp

/// An exact tabular kernel q(x_V | x_W): for every context x_W a rational
/// distribution over x_V. A joint distribution is the W = ∅ case. Contexts
/// can be marked undefined (zero-probability conditioning); every defined
/// context sums to exactly 1. Immutable.
class Kernel {
public:
    Kernel(VertexSet random_vars, VertexSet fixed_vars, StateSpace space,
           std::vector<Rational> table, std::set<std::size_t> undefined_contexts = {});

    static Kernel from_function(VertexSet random_vars, VertexSet fixed_vars, StateSpace space,
                                const std::function<Rational(const Assignment&)>& f);
    static Kernel uniform_joint(const VertexSet& vars, const StateSpace& space);

    const VertexSet& random_vars() const { return random_; }
    const VertexSet& fixed_vars() const { return fixed_; }
    const StateSpace& space() const { return space_; }
    const std::vector<VertexId>& variables() const { return vars_; }  // sorted V ∪ W

    std::size_t cell_count() const { return table_.size(); }
    std::size_t context_count() const;

    /// Value at a full assignment over V ∪ W. Throws DegenerateInputError if
    /// the context is undefined.
    Rational value(const Assignment& a) const;

    bool context_defined(const Assignment& context) const;
    bool has_undefined_context() const { return !undefined_.empty(); }
    std::vector<Assignment> undefined_contexts() const;

    bool operator==(const Kernel& other) const;
    bool operator!=(const Kernel& other) const { return !(*this == other); }

    // iteration helpers
    std::size_t rank_of(const Assignment& full) const;
    Assignment assignment_of(std::size_t rank) const;
    Assignment context_of(std::size_t context_rank) const;

    /// True when the table never varies with coordinate v (v ∈ V ∪ W);
    /// undefined contexts are skipped.
    bool ignores(const VertexId& v) const;

private:
    friend class KernelOps;
    VertexSet random_;
    VertexSet fixed_;
    StateSpace space_;
    std::vector<VertexId> vars_;     // sorted names, the axis order
    std::vector<int> card_;          // aligned with vars_
    std::vector<std::size_t> fixed_pos_;  // positions of fixed vars within vars_
    std::vector<Rational> table_;
    std::set<std::size_t> undefined_;  // context ranks

    std::size_t context_rank_of_coords(const std::vector<int>& coords) const;
    void validate_normalization() const;
};

// --- kernel calculus -------------------------------------------------------

/// Σ over x_{V\A}: random vars become A, same W.
Kernel marginalize(const Kernel& q, const VertexSet& a);

/// q(x_{V\A} | x_{W∪A}) = q(x_V|x_W) / q(x_A|x_W); zero-denominator contexts
/// are recorded as undefined and surfaced on read.
Kernel condition(const Kernel& q, const VertexSet& a);

/// φ_r on kernels: divide by q(x_r | x_{mb_G(r)}) with mb computed in G.
/// 0/0 cells resolve to 0; contexts that lose mass that way are marked
/// undefined. r must be fixable in G and G's vertex split must match q's.
Kernel fix_kernel(const Kernel& q, const VertexId& r, const MixedGraph& g);

/// Sequential fix_kernel, tracking the evolving CADMG.
Kernel apply_sequence_kernel(const Kernel& p, const std::vector<VertexId>& steps, const MixedGraph& g);
Kernel apply_sequence_kernel(const Kernel& p, const FixingSequence& steps, const MixedGraph& g);

/// Witness for a failed kernel independence: two argument assignments that
/// agree on x_A, x_C but give different conditional values.
struct CiViolation {
    Assignment left;
    Assignment right;
    Rational left_value;
    Rational right_value;
};

struct CiCheck {
    bool holds = false;
    /// Both A and B intersect W: outside Def. of kernel independence; the
    /// check returns false and reports the situation.
    bool outside_definition = false;
    std::optional<CiViolation> violation;
};

/// X_A ⫫ X_B | X_C under q, per the two-clause kernel-independence
/// definition; undefined contexts are skipped, vacuously true when no
/// context is defined.
bool kernel_ci(const Kernel& q, const VertexSet& a, const VertexSet& b, const VertexSet& c);
CiCheck kernel_ci_check(const Kernel& q, const VertexSet& a, const VertexSet& b, const VertexSet& c);

/// q_D(x_D | x_{pa(D)\D}) = Π_{d∈D} q(x_d | x_{T_d}) with T_d the
/// ≺-compatible Markov blankets; ≺ is the graph's canonical topological
/// order. D must be a district of the induced subgraph on an(D).
Kernel district_kernel(const Kernel& q, const MixedGraph& g, const District& d);

/// Tian factorization: for every ancestral set A, q(x_{V∩A}|x_W) equals the
/// product of district kernels of G_A, exactly.
bool tian_factorization_holds(const Kernel& q, const MixedGraph& g);

/// Global Markov property for the CADMG: every m-separation in G^{|W}
/// implies kernel independence.
bool cadmg_markov(const Kernel& q, const MixedGraph& g);

/// Ordered local Markov property for the CADMG under ≺.
bool cadmg_ordered_local(const Kernel& q, const MixedGraph& g, const std::vector<VertexId>& order);
bool cadmg_ordered_local(const Kernel& q, const MixedGraph& g);

/// Augmented Markov property: separation in (G_{an(A∪B∪C)})^a implies
/// kernel independence.
bool cadmg_augmented(const Kernel& q, const MixedGraph& g);

}  // namespace admg
