#include "admg/graph.hpp"

#include <algorithm>
#include <deque>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace admg {

bool valid_vertex_name(const std::string& name) {
    if (name.empty()) return false;
    for (char c : name) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
        if (!ok) return false;
    }
    return true;
}

std::string join_names(const VertexSet& s, const std::string& sep) {
    std::ostringstream out;
    bool first = true;
    for (const auto& v : s) {
        if (!first) out << sep;
        out << v;
        first = false;
    }
    return out.str();
}

MixedGraph::MixedGraph(std::vector<VertexId> random_vertices,
                       std::vector<VertexId> fixed_vertices,
                       std::vector<DirectedEdge> directed,
                       std::vector<BidirectedEdge> bidirected,
                       std::vector<VertexId> latent_marks) {
    for (const auto& v : random_vertices) {
        if (!valid_vertex_name(v)) throw std::invalid_argument("invalid vertex name '" + v + "'");
        if (is_random_.count(v)) throw std::invalid_argument("duplicate vertex '" + v + "'");
        is_random_[v] = true;
        order_.push_back(v);
    }
    for (const auto& v : fixed_vertices) {
        if (!valid_vertex_name(v)) throw std::invalid_argument("invalid vertex name '" + v + "'");
        if (is_random_.count(v)) throw std::invalid_argument("duplicate vertex '" + v + "'");
        is_random_[v] = false;
        order_.push_back(v);
    }
    for (const auto& v : order_) {
        parents_of_[v];
        children_of_[v];
        siblings_of_[v];
    }
    for (const auto& [tail, head] : directed) {
        require_known(tail);
        require_known(head);
        if (tail == head) throw std::invalid_argument("self-loop at '" + tail + "'");
        if (!is_random_.at(head))
            throw std::invalid_argument("directed edge into fixed vertex '" + head + "'");
        directed_.insert({tail, head});
        parents_of_[head].insert(tail);
        children_of_[tail].insert(head);
    }
    for (const auto& [a, b] : bidirected) {
        require_known(a);
        require_known(b);
        if (a == b) throw std::invalid_argument("self-loop at '" + a + "'");
        if (!is_random_.at(a) || !is_random_.at(b))
            throw std::invalid_argument("bidirected edge touching fixed vertex: " + a + " <-> " + b);
        bidirected_.insert({std::min(a, b), std::max(a, b)});
        siblings_of_[a].insert(b);
        siblings_of_[b].insert(a);
    }
    for (const auto& v : latent_marks) {
        require_known(v);
        if (!is_random_.at(v)) throw std::invalid_argument("latent mark on fixed vertex '" + v + "'");
        latent_.insert(v);
    }
    // acyclicity of the directed part
    if (topological_order().size() != order_.size())
        throw std::invalid_argument("directed part contains a cycle");
}

void MixedGraph::require_known(const VertexId& v) const {
    if (!is_random_.count(v)) throw std::invalid_argument("unknown vertex '" + v + "'");
}

void MixedGraph::require_known(const VertexSet& a) const {
    for (const auto& v : a) require_known(v);
}

VertexSet MixedGraph::random() const {
    VertexSet out;
    for (const auto& [v, r] : is_random_)
        if (r) out.insert(v);
    return out;
}

VertexSet MixedGraph::fixed() const {
    VertexSet out;
    for (const auto& [v, r] : is_random_)
        if (!r) out.insert(v);
    return out;
}

VertexSet MixedGraph::vertices() const {
    VertexSet out;
    for (const auto& [v, r] : is_random_) out.insert(v);
    return out;
}

bool MixedGraph::contains(const VertexId& v) const { return is_random_.count(v) > 0; }
bool MixedGraph::is_random(const VertexId& v) const { return is_random_.count(v) && is_random_.at(v); }
bool MixedGraph::is_fixed(const VertexId& v) const { return is_random_.count(v) && !is_random_.at(v); }

bool MixedGraph::has_directed(const VertexId& tail, const VertexId& head) const {
    return directed_.count({tail, head}) > 0;
}

bool MixedGraph::has_bidirected(const VertexId& a, const VertexId& b) const {
    return bidirected_.count({std::min(a, b), std::max(a, b)}) > 0;
}

bool MixedGraph::operator==(const MixedGraph& other) const {
    return is_random_ == other.is_random_ && latent_ == other.latent_ &&
           directed_ == other.directed_ && bidirected_ == other.bidirected_;
}

VertexSet MixedGraph::parents(const VertexSet& a) const {
    require_known(a);
    VertexSet out;
    for (const auto& v : a) {
        const auto& ps = parents_of_.at(v);
        out.insert(ps.begin(), ps.end());
    }
    return out;
}

VertexSet MixedGraph::children(const VertexSet& a) const {
    require_known(a);
    VertexSet out;
    for (const auto& v : a) {
        const auto& cs = children_of_.at(v);
        out.insert(cs.begin(), cs.end());
    }
    return out;
}

VertexSet MixedGraph::ancestors(const VertexSet& a) const {
    require_known(a);
    VertexSet out = a;
    std::deque<VertexId> frontier(a.begin(), a.end());
    while (!frontier.empty()) {
        VertexId v = frontier.front();
        frontier.pop_front();
        for (const auto& p : parents_of_.at(v)) {
            if (out.insert(p).second) frontier.push_back(p);
        }
    }
    return out;
}

VertexSet MixedGraph::descendants(const VertexSet& a) const {
    require_known(a);
    VertexSet out = a;
    std::deque<VertexId> frontier(a.begin(), a.end());
    while (!frontier.empty()) {
        VertexId v = frontier.front();
        frontier.pop_front();
        for (const auto& c : children_of_.at(v)) {
            if (out.insert(c).second) frontier.push_back(c);
        }
    }
    return out;
}

VertexSet MixedGraph::non_descendants(const VertexSet& a) const {
    require_known(a);
    VertexSet out;
    VertexSet all = vertices();
    for (const auto& v : a) {
        VertexSet de = descendants({v});
        for (const auto& u : all)
            if (!de.count(u)) out.insert(u);
    }
    return out;
}

std::vector<VertexId> MixedGraph::topological_order() const {
    std::map<VertexId, std::size_t> indegree;
    for (const auto& [v, ps] : parents_of_) indegree[v] = ps.size();
    std::priority_queue<VertexId, std::vector<VertexId>, std::greater<>> ready;
    for (const auto& [v, d] : indegree)
        if (d == 0) ready.push(v);
    std::vector<VertexId> out;
    while (!ready.empty()) {
        VertexId v = ready.top();
        ready.pop();
        out.push_back(v);
        for (const auto& c : children_of_.at(v)) {
            if (--indegree[c] == 0) ready.push(c);
        }
    }
    return out;  // shorter than |V∪W| iff cyclic; constructor rejects that
}

std::vector<VertexSet> MixedGraph::districts() const {
    std::vector<VertexSet> out;
    VertexSet seen;
    for (const auto& [v, r] : is_random_) {
        if (!r || seen.count(v)) continue;
        VertexSet comp{v};
        std::deque<VertexId> frontier{v};
        while (!frontier.empty()) {
            VertexId u = frontier.front();
            frontier.pop_front();
            for (const auto& s : siblings_of_.at(u)) {
                if (comp.insert(s).second) frontier.push_back(s);
            }
        }
        seen.insert(comp.begin(), comp.end());
        out.push_back(std::move(comp));
    }
    return out;  // map iteration is name-sorted, so components emerge in canonical order
}

VertexSet MixedGraph::district_of(const VertexId& v) const {
    require_known(v);
    if (!is_random_.at(v)) throw std::invalid_argument("district_of requires a random vertex, got fixed '" + v + "'");
    VertexSet comp{v};
    std::deque<VertexId> frontier{v};
    while (!frontier.empty()) {
        VertexId u = frontier.front();
        frontier.pop_front();
        for (const auto& s : siblings_of_.at(u)) {
            if (comp.insert(s).second) frontier.push_back(s);
        }
    }
    return comp;
}

MixedGraph MixedGraph::induced_subgraph(const VertexSet& a) const {
    require_known(a);
    std::vector<VertexId> rnd, fx, lat;
    for (const auto& v : order_) {
        if (!a.count(v)) continue;
        if (is_random_.at(v)) {
            rnd.push_back(v);
            if (latent_.count(v)) lat.push_back(v);
        } else {
            fx.push_back(v);
        }
    }
    std::vector<DirectedEdge> de;
    for (const auto& e : directed_)
        if (a.count(e.first) && a.count(e.second)) de.push_back(e);
    std::vector<BidirectedEdge> be;
    for (const auto& e : bidirected_)
        if (a.count(e.first) && a.count(e.second)) be.push_back(e);
    return MixedGraph(rnd, fx, de, be, lat);
}

bool MixedGraph::is_ancestral(const VertexSet& a) const {
    require_known(a);
    return ancestors(a) == a;  // an(a) ⊇ a always; equality is the closure condition
}

VertexSet MixedGraph::markov_blanket(const VertexId& t) const {
    require_known(t);
    if (!is_random_.at(t)) throw std::invalid_argument("markov_blanket requires a random vertex, got '" + t + "'");
    VertexSet dis = district_of(t);
    VertexSet out = parents(dis);
    for (const auto& v : dis)
        if (v != t) out.insert(v);
    out.erase(t);
    return out;
}

}  // namespace admg
