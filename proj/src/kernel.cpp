#include "admg/kernel.hpp"

#include "admg/errors.hpp"
#include "admg/fixing.hpp"
#include "admg/separation.hpp"

#include <algorithm>
#include <numeric>

namespace admg {

/// Private-access shim for the free-function calculus in this file.
class KernelOps {
public:
    static const std::vector<Rational>& table(const Kernel& q) { return q.table_; }
    static const std::vector<int>& card(const Kernel& q) { return q.card_; }
    static const std::set<std::size_t>& undefined(const Kernel& q) { return q.undefined_; }
    static std::size_t context_rank(const Kernel& q, const std::vector<int>& coords) {
        return q.context_rank_of_coords(coords);
    }
};

namespace {

constexpr std::size_t kMaxCells = std::size_t{1} << 20;

VertexSet set_union(const VertexSet& a, const VertexSet& b) {
    VertexSet out = a;
    out.insert(b.begin(), b.end());
    return out;
}

VertexSet set_intersection(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.begin()));
    return out;
}

VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.begin()));
    return out;
}

bool advance(std::vector<int>& coords, const std::vector<int>& card) {
    for (std::size_t i = coords.size(); i-- > 0;) {
        if (++coords[i] < card[i]) return true;
        coords[i] = 0;
    }
    return false;
}

std::size_t product_size(const std::vector<int>& card) {
    std::size_t n = 1;
    for (int c : card) {
        n *= static_cast<std::size_t>(c);
        if (n > kMaxCells) throw ResourceLimitError("table exceeds the cell cap of 2^20");
    }
    return n;
}

/// Dense table over a subset of a kernel's axes; evaluated against full
/// parent coordinate vectors.
struct SubTable {
    std::vector<VertexId> vars;
    std::vector<int> card;
    std::vector<std::size_t> parent_pos;
    std::vector<Rational> data;

    std::size_t rank_from_parent(const std::vector<int>& parent_coords) const {
        std::size_t r = 0;
        for (std::size_t i = 0; i < vars.size(); ++i)
            r = r * static_cast<std::size_t>(card[i]) + static_cast<std::size_t>(parent_coords[parent_pos[i]]);
        return r;
    }
    const Rational& at_parent(const std::vector<int>& parent_coords) const {
        return data[rank_from_parent(parent_coords)];
    }
};

/// Marginal of q over target ∪ W (target ⊆ V). Reads the table directly;
/// undefined contexts hold zeros, so their marginals are zero as well.
SubTable marginal_with_context(const Kernel& q, const VertexSet& target) {
    VertexSet axes_set = set_union(target, q.fixed_vars());
    SubTable st;
    st.vars.assign(axes_set.begin(), axes_set.end());
    const auto& parent_vars = q.variables();
    for (const auto& v : st.vars) {
        st.card.push_back(q.space().cardinality(v));
        auto it = std::find(parent_vars.begin(), parent_vars.end(), v);
        if (it == parent_vars.end()) throw std::invalid_argument("marginal target '" + v + "' is not a kernel variable");
        st.parent_pos.push_back(static_cast<std::size_t>(it - parent_vars.begin()));
    }
    std::size_t n = 1;
    for (int c : st.card) n *= static_cast<std::size_t>(c);
    st.data.assign(n, Rational(0));

    const auto& card = KernelOps::card(q);
    const auto& table = KernelOps::table(q);
    std::vector<int> coords(parent_vars.size(), 0);
    std::size_t rank = 0;
    do {
        st.data[st.rank_from_parent(coords)] += table[rank];
        ++rank;
    } while (advance(coords, card));
    return st;
}

void check_shapes(const Kernel& q, const MixedGraph& g) {
    if (q.random_vars() != g.random() || q.fixed_vars() != g.fixed())
        throw std::invalid_argument("kernel variable split does not match the graph's V/W split");
}

void require_disjoint3(const VertexSet& a, const VertexSet& b, const VertexSet& c) {
    if (!set_intersection(a, b).empty() || !set_intersection(a, c).empty() || !set_intersection(b, c).empty())
        throw std::invalid_argument("kernel_ci requires pairwise disjoint sets");
}

}  // namespace

// --- StateSpace -------------------------------------------------------------

StateSpace::StateSpace(std::map<VertexId, int> cardinalities) : card_(std::move(cardinalities)) {
    for (const auto& [v, k] : card_) {
        if (!valid_vertex_name(v)) throw std::invalid_argument("invalid vertex name '" + v + "'");
        if (k < 2) throw std::invalid_argument("cardinality of '" + v + "' must be at least 2");
    }
}

int StateSpace::cardinality(const VertexId& v) const {
    auto it = card_.find(v);
    if (it == card_.end()) throw std::invalid_argument("state space does not cover '" + v + "'");
    return it->second;
}

bool StateSpace::covers(const VertexSet& vs) const {
    return std::all_of(vs.begin(), vs.end(), [&](const VertexId& v) { return card_.count(v) > 0; });
}

StateSpace StateSpace::uniform(const VertexSet& vs, int k) {
    std::map<VertexId, int> card;
    for (const auto& v : vs) card[v] = k;
    return StateSpace(card);
}

// --- Kernel -----------------------------------------------------------------

Kernel::Kernel(VertexSet random_vars, VertexSet fixed_vars, StateSpace space,
               std::vector<Rational> table, std::set<std::size_t> undefined_contexts)
    : random_(std::move(random_vars)),
      fixed_(std::move(fixed_vars)),
      space_(std::move(space)),
      table_(std::move(table)),
      undefined_(std::move(undefined_contexts)) {
    if (!set_intersection(random_, fixed_).empty())
        throw std::invalid_argument("random and fixed variable sets overlap");
    VertexSet all = set_union(random_, fixed_);
    if (!space_.covers(all)) throw std::invalid_argument("state space does not cover the kernel's variables");
    vars_.assign(all.begin(), all.end());
    for (const auto& v : vars_) card_.push_back(space_.cardinality(v));
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (fixed_.count(vars_[i])) fixed_pos_.push_back(i);
    std::size_t n = product_size(card_);
    if (table_.size() != n)
        throw std::invalid_argument("table size " + std::to_string(table_.size()) +
                                    " does not match the state space (" + std::to_string(n) + " cells)");
    for (const auto& x : table_)
        if (x < 0) throw std::invalid_argument("negative kernel entry");
    for (std::size_t u : undefined_)
        if (u >= context_count()) throw std::invalid_argument("undefined-context rank out of range");
    if (!undefined_.empty()) {
        // cells of undefined contexts are normalized to zero
        std::vector<int> coords(vars_.size(), 0);
        std::size_t rank = 0;
        do {
            if (undefined_.count(context_rank_of_coords(coords))) table_[rank] = 0;
            ++rank;
        } while (advance(coords, card_));
    }
    validate_normalization();
}

std::size_t Kernel::context_count() const {
    std::size_t n = 1;
    for (std::size_t p : fixed_pos_) n *= static_cast<std::size_t>(card_[p]);
    return n;
}

std::size_t Kernel::context_rank_of_coords(const std::vector<int>& coords) const {
    std::size_t r = 0;
    for (std::size_t p : fixed_pos_) r = r * static_cast<std::size_t>(card_[p]) + static_cast<std::size_t>(coords[p]);
    return r;
}

void Kernel::validate_normalization() const {
    std::vector<Rational> sums(context_count(), Rational(0));
    std::vector<int> coords(vars_.size(), 0);
    std::size_t rank = 0;
    do {
        sums[context_rank_of_coords(coords)] += table_[rank];
        ++rank;
    } while (advance(coords, card_));
    for (std::size_t ctx = 0; ctx < sums.size(); ++ctx) {
        if (undefined_.count(ctx)) continue;  // zeroed above
        if (sums[ctx] != 1)
            throw std::invalid_argument("kernel context does not sum to 1 (got " + format_rational(sums[ctx]) + ")");
    }
}

Kernel Kernel::from_function(VertexSet random_vars, VertexSet fixed_vars, StateSpace space,
                             const std::function<Rational(const Assignment&)>& f) {
    VertexSet all = set_union(random_vars, fixed_vars);
    std::vector<VertexId> vars(all.begin(), all.end());
    std::vector<int> card;
    for (const auto& v : vars) card.push_back(space.cardinality(v));
    std::vector<Rational> table(product_size(card));
    std::vector<int> coords(vars.size(), 0);
    std::size_t rank = 0;
    do {
        Assignment a;
        for (std::size_t i = 0; i < vars.size(); ++i) a[vars[i]] = coords[i];
        table[rank] = f(a);
        ++rank;
    } while (advance(coords, card));
    return Kernel(std::move(random_vars), std::move(fixed_vars), std::move(space), std::move(table));
}

Kernel Kernel::uniform_joint(const VertexSet& vars, const StateSpace& space) {
    std::vector<int> card;
    for (const auto& v : vars) card.push_back(space.cardinality(v));
    std::size_t n = product_size(card);
    Rational cell(1, static_cast<unsigned long>(n));
    cell.canonicalize();
    return Kernel(vars, {}, space, std::vector<Rational>(n, cell));
}

std::size_t Kernel::rank_of(const Assignment& full) const {
    std::size_t r = 0;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        auto it = full.find(vars_[i]);
        if (it == full.end()) throw std::invalid_argument("assignment is missing '" + vars_[i] + "'");
        if (it->second < 0 || it->second >= card_[i])
            throw std::invalid_argument("level " + std::to_string(it->second) + " out of range for '" + vars_[i] + "'");
        r = r * static_cast<std::size_t>(card_[i]) + static_cast<std::size_t>(it->second);
    }
    return r;
}

Assignment Kernel::assignment_of(std::size_t rank) const {
    Assignment a;
    for (std::size_t i = vars_.size(); i-- > 0;) {
        a[vars_[i]] = static_cast<int>(rank % static_cast<std::size_t>(card_[i]));
        rank /= static_cast<std::size_t>(card_[i]);
    }
    return a;
}

Assignment Kernel::context_of(std::size_t context_rank) const {
    Assignment a;
    for (std::size_t j = fixed_pos_.size(); j-- > 0;) {
        std::size_t p = fixed_pos_[j];
        a[vars_[p]] = static_cast<int>(context_rank % static_cast<std::size_t>(card_[p]));
        context_rank /= static_cast<std::size_t>(card_[p]);
    }
    return a;
}

Rational Kernel::value(const Assignment& a) const {
    std::size_t rank = rank_of(a);
    if (!undefined_.empty()) {
        std::size_t ctx = 0;
        for (std::size_t p : fixed_pos_)
            ctx = ctx * static_cast<std::size_t>(card_[p]) + static_cast<std::size_t>(a.at(vars_[p]));
        if (undefined_.count(ctx)) throw DegenerateInputError("kernel is undefined in this context");
    }
    return table_[rank];
}

bool Kernel::context_defined(const Assignment& context) const {
    std::size_t r = 0;
    for (std::size_t p : fixed_pos_) {
        auto it = context.find(vars_[p]);
        if (it == context.end()) throw std::invalid_argument("context is missing '" + vars_[p] + "'");
        r = r * static_cast<std::size_t>(card_[p]) + static_cast<std::size_t>(it->second);
    }
    return undefined_.count(r) == 0;
}

std::vector<Assignment> Kernel::undefined_contexts() const {
    std::vector<Assignment> out;
    for (std::size_t u : undefined_) out.push_back(context_of(u));
    return out;
}

bool Kernel::operator==(const Kernel& other) const {
    return random_ == other.random_ && fixed_ == other.fixed_ && card_ == other.card_ && vars_ == other.vars_ &&
           table_ == other.table_ && undefined_ == other.undefined_;
}

bool Kernel::ignores(const VertexId& v) const {
    auto it = std::find(vars_.begin(), vars_.end(), v);
    if (it == vars_.end()) throw std::invalid_argument("kernel has no variable '" + v + "'");
    std::size_t pos = static_cast<std::size_t>(it - vars_.begin());
    std::vector<int> coords(vars_.size(), 0);
    std::size_t rank = 0;
    do {
        if (coords[pos] != 0) {
            std::vector<int> base = coords;
            base[pos] = 0;
            bool self_ok = undefined_.empty() || !undefined_.count(context_rank_of_coords(coords));
            bool base_ok = undefined_.empty() || !undefined_.count(context_rank_of_coords(base));
            if (self_ok && base_ok) {
                std::size_t base_rank = 0;
                for (std::size_t i = 0; i < vars_.size(); ++i)
                    base_rank = base_rank * static_cast<std::size_t>(card_[i]) + static_cast<std::size_t>(base[i]);
                if (table_[rank] != table_[base_rank]) return false;
            }
        }
        ++rank;
    } while (advance(coords, card_));
    return true;
}

// --- calculus ----------------------------------------------------------------

Kernel marginalize(const Kernel& q, const VertexSet& a) {
    if (!std::includes(q.random_vars().begin(), q.random_vars().end(), a.begin(), a.end()))
        throw std::invalid_argument("marginalize target must be a subset of the random variables");
    SubTable m = marginal_with_context(q, a);
    // same fixed set and cardinalities, so context ranks carry over verbatim;
    // m's axes are exactly a ∪ W in sorted order, matching the Kernel layout
    return Kernel(a, q.fixed_vars(), q.space(), std::move(m.data), KernelOps::undefined(q));
}

Kernel condition(const Kernel& q, const VertexSet& a) {
    if (!std::includes(q.random_vars().begin(), q.random_vars().end(), a.begin(), a.end()))
        throw std::invalid_argument("condition target must be a subset of the random variables");
    if (a.empty()) return q;
    SubTable den = marginal_with_context(q, a);
    VertexSet new_random = set_difference(q.random_vars(), a);
    VertexSet new_fixed = set_union(q.fixed_vars(), a);

    const auto& vars = q.variables();
    const auto& card = KernelOps::card(q);
    const auto& table = KernelOps::table(q);
    std::vector<std::size_t> new_fixed_pos;
    std::vector<int> new_fixed_card;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (new_fixed.count(vars[i])) {
            new_fixed_pos.push_back(i);
            new_fixed_card.push_back(card[i]);
        }
    }
    auto new_context_rank = [&](const std::vector<int>& coords) {
        std::size_t r = 0;
        for (std::size_t j = 0; j < new_fixed_pos.size(); ++j)
            r = r * static_cast<std::size_t>(new_fixed_card[j]) + static_cast<std::size_t>(coords[new_fixed_pos[j]]);
        return r;
    };

    std::vector<Rational> out(table.size(), Rational(0));
    std::set<std::size_t> undef;
    std::vector<int> coords(vars.size(), 0);
    std::size_t rank = 0;
    do {
        bool old_undef = q.has_undefined_context() && KernelOps::undefined(q).count(KernelOps::context_rank(q, coords));
        const Rational& d = den.at_parent(coords);
        if (old_undef || d == 0) {
            undef.insert(new_context_rank(coords));
        } else {
            out[rank] = table[rank] / d;
        }
        ++rank;
    } while (advance(coords, card));
    return Kernel(new_random, new_fixed, q.space(), std::move(out), std::move(undef));
}

Kernel fix_kernel(const Kernel& q, const VertexId& r, const MixedGraph& g) {
    check_shapes(q, g);
    if (!is_fixable(g, r)) {
        VertexSet overlap = set_intersection(g.district_of(r), g.descendants({r}));
        throw NotFixableError(r, join_names(overlap));
    }
    VertexSet mb = g.markov_blanket(r);
    VertexSet m_rand = set_intersection(mb, q.random_vars());
    VertexSet rm = m_rand;
    rm.insert(r);
    SubTable num = marginal_with_context(q, rm);    // q(x_r, x_M | x_W)
    SubTable den = marginal_with_context(q, m_rand);  // q(x_M | x_W)

    VertexSet new_random = q.random_vars();
    new_random.erase(r);
    VertexSet new_fixed = q.fixed_vars();
    new_fixed.insert(r);

    const auto& vars = q.variables();
    const auto& card = KernelOps::card(q);
    const auto& table = KernelOps::table(q);
    std::vector<std::size_t> new_fixed_pos;
    std::vector<int> new_fixed_card;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (new_fixed.count(vars[i])) {
            new_fixed_pos.push_back(i);
            new_fixed_card.push_back(card[i]);
        }
    }
    auto new_context_rank = [&](const std::vector<int>& coords) {
        std::size_t r2 = 0;
        for (std::size_t j = 0; j < new_fixed_pos.size(); ++j)
            r2 = r2 * static_cast<std::size_t>(new_fixed_card[j]) + static_cast<std::size_t>(coords[new_fixed_pos[j]]);
        return r2;
    };
    std::size_t new_context_count = 1;
    for (int c : new_fixed_card) new_context_count *= static_cast<std::size_t>(c);

    std::vector<Rational> out(table.size(), Rational(0));
    std::vector<Rational> context_sums(new_context_count, Rational(0));
    std::set<std::size_t> undef;
    std::vector<int> coords(vars.size(), 0);
    std::size_t rank = 0;
    do {
        bool old_undef = q.has_undefined_context() && KernelOps::undefined(q).count(KernelOps::context_rank(q, coords));
        if (old_undef) {
            undef.insert(new_context_rank(coords));
        } else if (table[rank] != 0) {
            const Rational& n = num.at_parent(coords);
            const Rational& d = den.at_parent(coords);
            if (n == 0 || d == 0)
                throw DegenerateInputError("positive cell above a zero conditional while fixing '" + r + "'");
            // divisor q(x_r | x_mb) = n / d
            out[rank] = table[rank] * d / n;
            context_sums[new_context_rank(coords)] += out[rank];
        }
        ++rank;
    } while (advance(coords, card));
    // contexts that lost mass through 0/0 cells are undefined
    for (std::size_t ctx = 0; ctx < new_context_count; ++ctx)
        if (!undef.count(ctx) && context_sums[ctx] != 1) undef.insert(ctx);
    return Kernel(new_random, new_fixed, q.space(), std::move(out), std::move(undef));
}

Kernel apply_sequence_kernel(const Kernel& p, const std::vector<VertexId>& steps, const MixedGraph& g) {
    Kernel q = p;
    MixedGraph h = g;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        try {
            q = fix_kernel(q, steps[i], h);
            h = fix_graph(h, steps[i]);
        } catch (const NotFixableError& e) {
            throw NotFixableError(steps[i], e.evidence(), static_cast<int>(i));
        }
    }
    return q;
}

Kernel apply_sequence_kernel(const Kernel& p, const FixingSequence& steps, const MixedGraph& g) {
    return apply_sequence_kernel(p, steps.steps, g);
}

// --- kernel conditional independence -----------------------------------------

namespace {

/// Clause check: q(x_F | x_{rest}) is a function of x_F, x_C only, where
/// F ⊆ V. Returns a violation witness on failure.
std::optional<CiViolation> clause_violation(const Kernel& q, const VertexSet& f, const VertexSet& b,
                                            const VertexSet& c) {
    // conditional arguments: F ∪ B ∪ C ∪ W
    VertexSet args = set_union(set_union(f, b), set_union(c, q.fixed_vars()));
    VertexSet num_target = set_intersection(set_union(set_union(f, b), c), q.random_vars());
    VertexSet den_target = set_intersection(set_union(b, c), q.random_vars());
    SubTable num = marginal_with_context(q, num_target);
    SubTable den = marginal_with_context(q, den_target);

    std::vector<VertexId> arg_vars(args.begin(), args.end());
    std::vector<int> arg_card;
    for (const auto& v : arg_vars) arg_card.push_back(q.space().cardinality(v));

    // positions of arg vars inside the kernel's full axis list; the sub-tables
    // are evaluated through a padded full-coordinate vector
    const auto& vars = q.variables();
    std::vector<int> full(vars.size(), 0);
    std::vector<std::size_t> arg_pos;
    for (const auto& v : arg_vars) {
        auto it = std::find(vars.begin(), vars.end(), v);
        arg_pos.push_back(static_cast<std::size_t>(it - vars.begin()));
    }
    // group by restriction to F ∪ C
    std::vector<std::size_t> key_idx;
    for (std::size_t i = 0; i < arg_vars.size(); ++i)
        if (f.count(arg_vars[i]) || c.count(arg_vars[i])) key_idx.push_back(i);

    std::map<std::vector<int>, std::pair<std::vector<int>, Rational>> first_seen;
    std::vector<int> coords(arg_vars.size(), 0);
    do {
        for (std::size_t i = 0; i < arg_vars.size(); ++i) full[arg_pos[i]] = coords[i];
        // skip contexts where the kernel itself is undefined
        if (q.has_undefined_context() && KernelOps::undefined(q).count(KernelOps::context_rank(q, full))) continue;
        const Rational& d = den.at_parent(full);
        if (d == 0) continue;  // conditional undefined here
        Rational val = num.at_parent(full) / d;
        std::vector<int> key;
        key.reserve(key_idx.size());
        for (std::size_t i : key_idx) key.push_back(coords[i]);
        auto [it, inserted] = first_seen.try_emplace(key, coords, val);
        if (!inserted && it->second.second != val) {
            CiViolation wit;
            for (std::size_t i = 0; i < arg_vars.size(); ++i) {
                wit.left[arg_vars[i]] = it->second.first[i];
                wit.right[arg_vars[i]] = coords[i];
            }
            wit.left_value = it->second.second;
            wit.right_value = val;
            return wit;
        }
    } while (advance(coords, arg_card));
    return std::nullopt;
}

}  // namespace

CiCheck kernel_ci_check(const Kernel& q, const VertexSet& a, const VertexSet& b, const VertexSet& c) {
    require_disjoint3(a, b, c);
    VertexSet all = set_union(q.random_vars(), q.fixed_vars());
    for (const auto& s : {a, b, c})
        for (const auto& v : s)
            if (!all.count(v)) throw std::invalid_argument("kernel_ci: unknown variable '" + v + "'");
    CiCheck out;
    bool a_random = set_intersection(a, q.fixed_vars()).empty();
    bool b_random = set_intersection(b, q.fixed_vars()).empty();
    if (!a_random && !b_random) {
        // outside both clauses of the definition
        out.outside_definition = true;
        out.holds = false;
        return out;
    }
    std::optional<CiViolation> first;
    if (a_random) {
        auto v = clause_violation(q, a, b, c);
        if (!v) {
            out.holds = true;
            return out;
        }
        first = v;
    }
    if (b_random) {
        auto v = clause_violation(q, b, a, c);
        if (!v) {
            out.holds = true;
            return out;
        }
        if (!first) first = v;
    }
    out.holds = false;
    out.violation = first;
    return out;
}

bool kernel_ci(const Kernel& q, const VertexSet& a, const VertexSet& b, const VertexSet& c) {
    return kernel_ci_check(q, a, b, c).holds;
}

// --- district kernels and the CADMG properties --------------------------------

Kernel district_kernel(const Kernel& q, const MixedGraph& g, const District& d) {
    check_shapes(q, g);
    for (const auto& v : d)
        if (!g.is_random(v)) throw std::invalid_argument("district members must be random vertices");
    VertexSet an_d = g.ancestors(d);
    {
        MixedGraph closure = g.induced_subgraph(an_d);
        bool found = false;
        for (const auto& dd : closure.districts())
            if (dd == d) found = true;
        if (!found)
            throw std::invalid_argument("set {" + join_names(d) + "} is not a district of the induced subgraph on its ancestor closure");
    }
    std::vector<VertexId> order = g.topological_order();
    std::map<VertexId, std::size_t> pos;
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;

    // factor per d: conditional on the ≺-compatible Markov blanket
    struct Factor {
        SubTable num, den;
    };
    std::vector<Factor> factors;
    for (const auto& v : d) {
        VertexSet a_v;  // an(D) ∩ (pre(v) ∪ {v})
        for (const auto& u : an_d)
            if (pos[u] <= pos[v]) a_v.insert(u);
        VertexSet t_v = g.induced_subgraph(a_v).markov_blanket(v);
        VertexSet t_rand = set_intersection(t_v, q.random_vars());
        VertexSet vt = t_rand;
        vt.insert(v);
        factors.push_back(Factor{marginal_with_context(q, vt), marginal_with_context(q, t_rand)});
    }

    VertexSet out_fixed = set_difference(g.parents(d), d);
    VertexSet out_all = set_union(d, out_fixed);
    std::vector<VertexId> out_vars(out_all.begin(), out_all.end());
    std::vector<int> out_card;
    for (const auto& v : out_vars) out_card.push_back(q.space().cardinality(v));
    std::vector<Rational> out_table(product_size(out_card), Rational(0));

    // positions of output vars within the parent kernel's axes
    const auto& vars = q.variables();
    std::vector<std::size_t> out_pos;
    for (const auto& v : out_vars) {
        auto it = std::find(vars.begin(), vars.end(), v);
        out_pos.push_back(static_cast<std::size_t>(it - vars.begin()));
    }
    SubTable context_margin = marginal_with_context(q, set_intersection(out_fixed, q.random_vars()));

    std::vector<int> coords(out_vars.size(), 0);
    std::size_t rank = 0;
    const auto& card = KernelOps::card(q);
    do {
        // canonical full extension: all other coordinates at level 0
        std::vector<int> full(vars.size(), 0);
        for (std::size_t i = 0; i < out_vars.size(); ++i) full[out_pos[i]] = coords[i];
        Rational prod(1);
        bool undefined_factor = false;
        for (const auto& f : factors) {
            const Rational& den = f.den.at_parent(full);
            if (den == 0) {
                undefined_factor = true;
                break;
            }
            prod *= f.num.at_parent(full) / den;
        }
        if (undefined_factor) {
            if (context_margin.at_parent(full) != 0)
                throw DegenerateInputError("district kernel conditional undefined on a positive context");
            // zero-mass region: the factor product carries no information; leave 0
        } else {
            out_table[rank] = prod;
        }
        ++rank;
    } while (advance(coords, out_card));

    // contexts that fail to normalize (possible only for degenerate inputs)
    std::vector<std::size_t> ctx_pos;
    std::vector<int> ctx_card;
    for (std::size_t i = 0; i < out_vars.size(); ++i) {
        if (out_fixed.count(out_vars[i])) {
            ctx_pos.push_back(i);
            ctx_card.push_back(out_card[i]);
        }
    }
    std::size_t n_ctx = 1;
    for (int c : ctx_card) n_ctx *= static_cast<std::size_t>(c);
    std::vector<Rational> sums(n_ctx, Rational(0));
    std::fill(coords.begin(), coords.end(), 0);
    rank = 0;
    do {
        std::size_t ctx = 0;
        for (std::size_t j = 0; j < ctx_pos.size(); ++j)
            ctx = ctx * static_cast<std::size_t>(ctx_card[j]) + static_cast<std::size_t>(coords[ctx_pos[j]]);
        sums[ctx] += out_table[rank];
        ++rank;
    } while (advance(coords, out_card));
    std::set<std::size_t> undef;
    for (std::size_t ctx = 0; ctx < n_ctx; ++ctx)
        if (sums[ctx] != 1) undef.insert(ctx);
    return Kernel(d, out_fixed, q.space(), std::move(out_table), std::move(undef));
}

bool tian_factorization_holds(const Kernel& q, const MixedGraph& g) {
    check_shapes(q, g);
    VertexSet v_all = g.random();
    std::vector<VertexId> v_list(v_all.begin(), v_all.end());
    if (v_list.size() > 20) throw ResourceLimitError("tian_factorization_holds: too many random vertices");
    const auto& vars = q.variables();
    const auto& card = KernelOps::card(q);

    for (std::size_t mask = 1; mask < (std::size_t{1} << v_list.size()); ++mask) {
        VertexSet s;
        for (std::size_t i = 0; i < v_list.size(); ++i)
            if (mask & (std::size_t{1} << i)) s.insert(v_list[i]);
        // ancestral among random vertices (fixed ancestors are always present)
        VertexSet closure = set_intersection(g.ancestors(s), v_all);
        if (closure != s) continue;

        SubTable lhs = marginal_with_context(q, s);
        std::vector<Kernel> parts;
        bool degenerate = false;
        MixedGraph ga = g.induced_subgraph(set_union(s, g.fixed()));
        try {
            for (const auto& dist : ga.districts()) parts.push_back(district_kernel(q, g, dist));
        } catch (const DegenerateInputError&) {
            degenerate = true;
        }
        if (degenerate) return false;

        std::vector<int> coords(vars.size(), 0);
        do {
            if (q.has_undefined_context() && KernelOps::undefined(q).count(KernelOps::context_rank(q, coords))) continue;
            Rational rhs(1);
            bool rhs_defined = true;
            for (const auto& part : parts) {
                Assignment a;
                for (const auto& pv : part.variables()) {
                    auto it = std::find(vars.begin(), vars.end(), pv);
                    a[pv] = coords[static_cast<std::size_t>(it - vars.begin())];
                }
                if (!part.context_defined(a)) {
                    rhs_defined = false;
                    break;
                }
                rhs *= part.value(a);
            }
            if (!rhs_defined) return false;
            if (lhs.at_parent(coords) != rhs) return false;
        } while (advance(coords, card));
    }
    return true;
}

namespace {

/// Runs property checks of the form "for all disjoint (A,B,C), separation ⇒
/// kernel CI", checking only the maximal B per (A, C); sound by the
/// decomposition semi-graphoid axiom.
bool separation_implies_ci(const Kernel& q, const MixedGraph& g,
                           const std::function<bool(const VertexSet&, const VertexSet&, const VertexSet&)>& separated) {
    VertexSet all = g.vertices();
    std::vector<VertexId> verts(all.begin(), all.end());
    std::size_t n = verts.size();
    if (n > 16) throw ResourceLimitError("CADMG property check: too many vertices");
    // assign each vertex to A, C, or neither
    std::vector<int> choice(n, 0);
    auto advance3 = [&]() {
        for (std::size_t i = n; i-- > 0;) {
            if (++choice[i] < 3) return true;
            choice[i] = 0;
        }
        return false;
    };
    do {
        VertexSet a, c;
        for (std::size_t i = 0; i < n; ++i) {
            if (choice[i] == 1) a.insert(verts[i]);
            if (choice[i] == 2) c.insert(verts[i]);
        }
        if (a.empty()) continue;
        VertexSet b_max;
        for (const auto& v : verts) {
            if (a.count(v) || c.count(v)) continue;
            if (separated(a, {v}, c)) b_max.insert(v);
        }
        if (b_max.empty()) continue;
        if (!separated(a, b_max, c)) continue;  // guards pairwise-vs-set mismatches; never fires for m-separation
        if (!kernel_ci(q, a, b_max, c)) return false;
    } while (advance3());
    return true;
}

}  // namespace

bool cadmg_markov(const Kernel& q, const MixedGraph& g) {
    check_shapes(q, g);
    return separation_implies_ci(q, g, [&](const VertexSet& a, const VertexSet& b, const VertexSet& c) {
        return m_separated(g, a, b, c);
    });
}

bool cadmg_augmented(const Kernel& q, const MixedGraph& g) {
    check_shapes(q, g);
    return separation_implies_ci(q, g, [&](const VertexSet& a, const VertexSet& b, const VertexSet& c) {
        return augmented_separated(g, a, b, c);
    });
}

bool cadmg_ordered_local(const Kernel& q, const MixedGraph& g, const std::vector<VertexId>& order) {
    check_shapes(q, g);
    VertexSet all = g.vertices();
    std::vector<VertexId> verts(all.begin(), all.end());
    std::size_t n = verts.size();
    if (n > 16) throw ResourceLimitError("CADMG property check: too many vertices");
    std::map<VertexId, std::size_t> pos;
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    if (pos.size() != n) throw std::invalid_argument("ordering must cover all vertices");

    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        VertexSet a;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (std::size_t{1} << i)) a.insert(verts[i]);
        if (g.ancestors(a) != a) continue;
        VertexId t;
        std::size_t best = 0;
        bool first = true;
        for (const auto& v : a) {
            if (first || pos[v] > best) {
                best = pos[v];
                t = v;
                first = false;
            }
        }
        if (!g.is_random(t)) continue;
        VertexSet margin = set_intersection(a, g.random());
        Kernel qa = marginalize(q, margin);
        MixedGraph ga = g.induced_subgraph(set_union(margin, g.fixed()));
        VertexSet mb = ga.markov_blanket(t);
        VertexSet rest;
        for (const auto& v : ga.vertices())
            if (v != t && !mb.count(v)) rest.insert(v);
        if (rest.empty()) continue;
        if (!kernel_ci(qa, {t}, rest, mb)) return false;
    }
    return true;
}

bool cadmg_ordered_local(const Kernel& q, const MixedGraph& g) {
    return cadmg_ordered_local(q, g, g.topological_order());
}

}  // namespace admg
