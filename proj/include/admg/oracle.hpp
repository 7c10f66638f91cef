#pragma once

#include "admg/graph.hpp"
#include "admg/kernel.hpp"

#include <cstdint>

namespace admg {
namespace oracle {

/// Identical seed, identical artifact; all generators are pure functions of
/// (inputs, seed).
using Seed = std::uint64_t;

/// Samples each conditional p(x_v | x_pa(v)) with integer weights in [1, 16]
/// normalized to rationals, and assembles the joint (or kernel, when the
/// graph has fixed vertices) by the chain rule. Requires a graph with no
/// bidirected edges. With allow_zeros, weights live in [0, 16] with at least
/// one positive weight per conditional.
Kernel random_dag_model(const MixedGraph& g, const StateSpace& card, Seed seed, bool allow_zeros = false);

/// A factorizing kernel for an arbitrary CADMG: builds the canonical DAG
/// (one fresh latent parent per bidirected edge), samples a model, and sums
/// the latents out.
Kernel random_cadmg_kernel(const MixedGraph& g, const StateSpace& card, Seed seed, bool allow_zeros = false);

/// An arbitrary kernel: independently random positive cells per context,
/// normalized.
Kernel random_kernel(const VertexSet& random_vars, const VertexSet& fixed_vars, const StateSpace& card, Seed seed,
                     bool allow_zeros = false);

/// Alias of marginalize, named for latent-DAG workflows.
Kernel margin(const Kernel& p, const VertexSet& keep);

/// Literal m-connection search: enumerates vertex-simple paths (with every
/// parallel-edge choice) and applies the definition per occurrence.
bool brute_force_msep(const MixedGraph& g, const VertexSet& a, const VertexSet& b, const VertexSet& c);

/// Path-enumeration latent projection per the two definition clauses; used
/// to validate the elimination-based implementation.
MixedGraph brute_force_projection(const MixedGraph& g, const VertexSet& keep);

/// All labeled ADMGs on vertices x1..xn, deterministic order. n ≤ 4.
std::vector<MixedGraph> enumerate_admgs(int n);

/// Seeded random ADMG on vertices x1..xn (any n); used where exhaustive
/// enumeration is out of reach.
MixedGraph random_admg(int n, Seed seed);

/// Seeded random DAG with latent marks: n total vertices, at most
/// max_latent of them marked latent.
MixedGraph random_latent_dag(int n, int max_latent, Seed seed);

}  // namespace oracle
}  // namespace admg
