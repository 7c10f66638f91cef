#pragma once

#include "admg/graph.hpp"

#include <optional>

namespace admg {

/// A validated order of fixings together with the graph it starts from.
/// Invariant: each step is fixable in the graph produced by the preceding
/// steps.
struct FixingSequence {
    std::vector<VertexId> steps;
    MixedGraph origin;
};

/// A random-vertex set left by some valid fixing sequence, with one witness.
struct ReachableSet {
    VertexSet remaining;
    FixingSequence witness;
};

/// A district of a reachable CADMG, with a witness sequence reaching a graph
/// in which it is a district.
struct IntrinsicSet {
    VertexSet members;
    FixingSequence witness;
};

/// {v ∈ V : dis(v) ∩ de(v) = {v}}.
VertexSet fixable(const MixedGraph& g);
bool is_fixable(const MixedGraph& g, const VertexId& v);

/// φ_r on graphs: r moves from V to W; edges with an arrowhead at r are
/// deleted, everything else is kept. Throws NotFixableError when r is not
/// fixable, carrying dis(r) ∩ de(r) as evidence.
MixedGraph fix_graph(const MixedGraph& g, const VertexId& r);

/// φ*_r: the same edge surgery without the fixability requirement. Used by
/// causal identification and tests only; the kernel engine never divides by
/// a non-fixable vertex's conditional.
MixedGraph fix_star(const MixedGraph& g, const VertexId& v);
MixedGraph fix_star(const MixedGraph& g, const VertexSet& vs);

/// Sequential fix_graph; the first invalid step is reported with its
/// position. The result depends only on the set of steps.
MixedGraph apply_sequence(const MixedGraph& g, const std::vector<VertexId>& steps);

/// Greedy search for a valid sequence fixing V \ R: repeatedly fixes the
/// name-least fixable vertex outside R. Complete because fixability is never
/// lost by fixing something else. Absence means R is not reachable.
std::optional<FixingSequence> reach(const MixedGraph& g, const VertexSet& r);

/// All reachable subsets of V, each with one witness, in canonical order
/// (by size descending, then names). Memoized recursion over fixable
/// frontiers; throws ResourceLimitError when |V| exceeds the cap.
std::vector<ReachableSet> reachable_sets(const MixedGraph& g, std::size_t max_vertices = 12);

/// Districts of reachable subgraphs, deduplicated by member set, canonical
/// order (by size, then names).
std::vector<IntrinsicSet> intrinsic_sets(const MixedGraph& g, std::size_t max_vertices = 12);

/// Convenience: the member sets of intrinsic_sets.
std::set<VertexSet> intrinsic_family(const MixedGraph& g, std::size_t max_vertices = 12);

}  // namespace admg
