#include "admg/io.hpp"

#include "admg/errors.hpp"

#include <algorithm>
#include <sstream>

namespace admg {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

}  // namespace

MixedGraph parse_graph(const std::string& text) {
    std::vector<VertexId> random_vs, fixed_vs, latent_vs;
    std::vector<DirectedEdge> directed;
    std::vector<BidirectedEdge> bidirected;
    std::set<VertexId> declared;

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        auto header = [&](const char* key) -> bool { return line.rfind(key, 0) == 0; };
        if (header("random:") || header("fixed:") || header("latent:")) {
            std::size_t colon = line.find(':');
            std::vector<std::string> names = split_ws(line.substr(colon + 1));
            for (const auto& n : names) {
                if (!valid_vertex_name(n))
                    throw ParseError(lineno, static_cast<int>(raw.find(n)) + 1, "invalid vertex name '" + n + "'");
            }
            if (header("random:")) {
                for (const auto& n : names) {
                    if (declared.count(n)) throw ParseError(lineno, 1, "duplicate vertex '" + n + "'");
                    declared.insert(n);
                    random_vs.push_back(n);
                }
            } else if (header("fixed:")) {
                for (const auto& n : names) {
                    if (declared.count(n)) throw ParseError(lineno, 1, "duplicate vertex '" + n + "'");
                    declared.insert(n);
                    fixed_vs.push_back(n);
                }
            } else {
                for (const auto& n : names) latent_vs.push_back(n);
            }
            continue;
        }

        std::vector<std::string> toks = split_ws(line);
        if (toks.size() != 3 || (toks[1] != "->" && toks[1] != "<->"))
            throw ParseError(lineno, 1, "expected 'a -> b', 'a <-> b', or a header line, got '" + line + "'");
        for (const auto& end : {toks[0], toks[2]}) {
            if (!declared.count(end))
                throw ParseError(lineno, static_cast<int>(raw.find(end)) + 1, "unknown vertex '" + end + "' in edge");
        }
        if (toks[1] == "->")
            directed.push_back({toks[0], toks[2]});
        else
            bidirected.push_back({toks[0], toks[2]});
    }
    if (declared.empty()) throw ParseError(lineno == 0 ? 1 : lineno, 1, "no vertices declared");
    for (const auto& n : latent_vs)
        if (!declared.count(n)) throw ParseError(1, 1, "latent mark on undeclared vertex '" + n + "'");
    // structural validation (cycles, CADMG restrictions) happens here
    return MixedGraph(random_vs, fixed_vs, directed, bidirected, latent_vs);
}

std::string render_graph(const MixedGraph& g) {
    std::ostringstream out;
    out << "random:";
    for (const auto& v : g.insertion_order())
        if (g.is_random(v)) out << " " << v;
    out << "\n";
    if (!g.fixed().empty()) {
        out << "fixed:";
        for (const auto& v : g.insertion_order())
            if (g.is_fixed(v)) out << " " << v;
        out << "\n";
    }
    if (!g.latent().empty()) out << "latent: " << join_names(g.latent(), " ") << "\n";
    for (const auto& [tail, head] : g.directed_edges()) out << tail << " -> " << head << "\n";
    for (const auto& [a, b] : g.bidirected_edges()) out << a << " <-> " << b << "\n";
    return out.str();
}

Kernel parse_distribution(const std::string& json_text) {
    Json doc;
    try {
        doc = Json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(1, 1, std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("cardinality") || !doc.contains("entries"))
        throw ParseError(1, 1, "distribution file needs 'cardinality' and 'entries'");
    std::map<VertexId, int> card;
    for (auto it = doc["cardinality"].begin(); it != doc["cardinality"].end(); ++it) {
        if (!it.value().is_number_integer()) throw ParseError(1, 1, "cardinality of '" + it.key() + "' must be an integer");
        card[it.key()] = it.value().get<int>();
    }
    StateSpace space(card);
    VertexSet vars;
    for (const auto& [v, k] : card) vars.insert(v);

    std::map<std::vector<int>, Rational> cells;
    std::vector<VertexId> var_list(vars.begin(), vars.end());
    for (const auto& entry : doc["entries"]) {
        if (!entry.contains("assignment") || !entry.contains("p"))
            throw ParseError(1, 1, "entry needs 'assignment' and 'p'");
        std::vector<int> coords;
        for (const auto& v : var_list) {
            if (!entry["assignment"].contains(v)) throw ParseError(1, 1, "assignment is missing '" + v + "'");
            int level = entry["assignment"][v].get<int>();
            if (level < 0 || level >= space.cardinality(v))
                throw ParseError(1, 1, "level " + std::to_string(level) + " out of range for '" + v + "'");
            coords.push_back(level);
        }
        Rational p = parse_rational(entry["p"].get<std::string>());
        if (p < 0) throw ParseError(1, 1, "negative probability");
        if (!cells.emplace(coords, p).second) throw ParseError(1, 1, "duplicate assignment in entries");
    }
    return Kernel::from_function(vars, {}, space, [&](const Assignment& a) {
        std::vector<int> coords;
        for (const auto& v : var_list) coords.push_back(a.at(v));
        auto it = cells.find(coords);
        return it == cells.end() ? Rational(0) : it->second;
    });
}

std::string render_distribution(const Kernel& joint) {
    if (!joint.fixed_vars().empty())
        throw std::invalid_argument("distribution files hold joints; the kernel has fixed variables");
    Json doc;
    Json card = Json::object();
    for (const auto& v : joint.random_vars()) card[v] = joint.space().cardinality(v);
    doc["cardinality"] = card;
    Json entries = Json::array();
    for (std::size_t rank = 0; rank < joint.cell_count(); ++rank) {
        Assignment a = joint.assignment_of(rank);
        Rational p = joint.value(a);
        if (p == 0) continue;  // omitted cells are zero
        Json e;
        e["assignment"] = assignment_to_json(a);
        e["p"] = format_rational(p);
        entries.push_back(e);
    }
    doc["entries"] = entries;
    return doc.dump(2) + "\n";
}

Json assignment_to_json(const Assignment& a) {
    Json out = Json::object();
    for (const auto& [v, level] : a) out[v] = level;
    return out;
}

Json vertex_set_to_json(const VertexSet& s) {
    Json out = Json::array();
    for (const auto& v : s) out.push_back(v);
    return out;
}

Json constraint_to_json(const CiConstraint& c) {
    Json out;
    out["fixed"] = vertex_set_to_json(c.fixed_set);
    out["margin"] = vertex_set_to_json(c.margin_to);
    Json steps = Json::array();
    for (const auto& s : c.witness.steps) steps.push_back(s);
    out["witness"] = steps;
    out["a"] = vertex_set_to_json(c.a);
    out["b"] = vertex_set_to_json(c.b);
    out["c"] = vertex_set_to_json(c.c);
    return out;
}

Json report_to_json(const ConstraintReport& report) {
    Json out;
    out["mode"] = report.mode;
    out["constraints"] = Json::array();
    for (const auto& r : report.results) {
        Json c = constraint_to_json(r.constraint);
        switch (r.verdict) {
            case Verdict::Pass:
                c["verdict"] = "pass";
                break;
            case Verdict::Fail:
                c["verdict"] = "fail";
                break;
            case Verdict::Degenerate:
                c["verdict"] = "degenerate";
                break;
        }
        if (r.outside_definition) c["outside_definition"] = true;
        if (r.violation) {
            Json v;
            v["left"] = assignment_to_json(r.violation->left);
            v["right"] = assignment_to_json(r.violation->right);
            v["left_value"] = format_rational(r.violation->left_value);
            v["right_value"] = format_rational(r.violation->right_value);
            c["violation"] = v;
        }
        out["constraints"].push_back(c);
    }
    out["total"] = report.results.size();
    out["violations"] = report.violation_count();
    out["degenerate"] = report.degenerate_count();
    out["ok"] = report.all_pass();
    return out;
}

}  // namespace admg
