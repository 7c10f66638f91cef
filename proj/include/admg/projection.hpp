#pragma once

#include "admg/graph.hpp"

namespace admg {

/// Latent projection request: project `graph` onto keep ∪ fixed, eliminating
/// `latent` (= random \ keep). Fixed vertices are always kept.
struct ProjectionRequest {
    MixedGraph graph;
    VertexSet keep;
    VertexSet latent;

    /// Builds a request that projects out exactly `latent`; validates the
    /// partition invariants.
    static ProjectionRequest eliminating(const MixedGraph& g, const VertexSet& latent);
    /// Builds a request keeping exactly `keep` of the random vertices.
    static ProjectionRequest keeping(const MixedGraph& g, const VertexSet& keep);
};

/// The latent projection: v → w iff a directed path through latents exists,
/// v ↔ w iff a path with arrowheads at both ends whose non-endpoints are all
/// non-colliders in the latent set exists. Implemented by eliminating latents
/// one at a time; the result is elimination-order invariant.
MixedGraph latent_project(const ProjectionRequest& req);

/// Convenience: project out the graph's own latent-marked vertices.
MixedGraph latent_project(const MixedGraph& g);

/// Test utility for the fixing/projection commutation lemma: checks
/// σ_H(φ*_v(G)) = φ*_v(σ_H(G)) structurally for a CADG with latent marks.
/// Must return true on every valid input.
bool projection_commutes_with_fixing_check(const MixedGraph& g, const VertexId& v);

}  // namespace admg
