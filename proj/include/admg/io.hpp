#pragma once

#include "admg/graph.hpp"
#include "admg/kernel.hpp"
#include "admg/nested.hpp"

#include <json.hpp>

#include <string>

namespace admg {

using Json = nlohmann::ordered_json;

/// Graph file format: "random: v1 v2 …", optional "fixed: …", optional
/// "latent: …", then edge lines "a -> b" / "a <-> b"; "#" starts a comment.
/// Parse errors carry 1-based line/column positions.
MixedGraph parse_graph(const std::string& text);
std::string render_graph(const MixedGraph& g);

/// Distribution file: {"cardinality": {v: k}, "entries": [{"assignment":
/// {v: level}, "p": "num/den"}]}. Entries cover the full space or omit only
/// zero cells; the total must be exactly 1.
Kernel parse_distribution(const std::string& json_text);
std::string render_distribution(const Kernel& joint);

Json assignment_to_json(const Assignment& a);
Json vertex_set_to_json(const VertexSet& s);
Json constraint_to_json(const CiConstraint& c);
Json report_to_json(const ConstraintReport& report);

}  // namespace admg
