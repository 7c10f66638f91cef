#pragma once

#include "admg/graph.hpp"

namespace admg::testfix {

/// The four-variable ADMG with the bow-free Verma structure:
/// x1→x2, x2→x3, x1→x3, x3→x4, x2↔x4.
inline MixedGraph verma_admg() {
    return MixedGraph({"x1", "x2", "x3", "x4"}, {},
                      {{"x1", "x2"}, {"x2", "x3"}, {"x1", "x3"}, {"x3", "x4"}},
                      {{"x2", "x4"}});
}

/// The five-variable DAG whose x0-margin is the Verma ADMG:
/// x1→x2, x2→x3, x1→x3, x3→x4 plus x0→x2, x0→x4, with x0 latent.
inline MixedGraph verma_dag() {
    return MixedGraph({"x0", "x1", "x2", "x3", "x4"}, {},
                      {{"x1", "x2"}, {"x2", "x3"}, {"x1", "x3"}, {"x3", "x4"}, {"x0", "x2"}, {"x0", "x4"}},
                      {}, {"x0"});
}

/// The five-variable graph where ⟨x4,x3,x1⟩ and ⟨x3,x4,x1⟩ are both valid
/// fixing sequences: x1→x2, x2→x3, x1→x3, x3→x4, x4→x5, x2→x5, x2↔x5, x1↔x4.
inline MixedGraph two_fix_graph() {
    return MixedGraph({"x1", "x2", "x3", "x4", "x5"}, {},
                      {{"x1", "x2"}, {"x2", "x3"}, {"x1", "x3"}, {"x3", "x4"}, {"x4", "x5"}, {"x2", "x5"}},
                      {{"x2", "x5"}, {"x1", "x4"}});
}

/// a→y with a↔y: the classic non-identifiable bow.
inline MixedGraph bow_graph() {
    return MixedGraph({"a", "y"}, {}, {{"a", "y"}}, {{"a", "y"}});
}

/// Moralization example DAG: x1→x2, x2→x4, x3→x4.
inline MixedGraph moral_dag() {
    return MixedGraph({"x1", "x2", "x3", "x4"}, {}, {{"x1", "x2"}, {"x2", "x4"}, {"x3", "x4"}}, {});
}

}  // namespace admg::testfix
