#include "operadcalc/freeder.hpp"

#include <algorithm>
#include <stdexcept>

namespace operadcalc {

bool Context::has_label(const std::string& s) const {
    return std::find(labels.begin(), labels.end(), s) != labels.end();
}

Context stabilized_context(const Context& ctx, int n) {
    Context out = ctx;
    for (int i = 1; i <= n; ++i) {
        std::string sym = "+" + std::to_string(i);
        if (out.has_label(sym)) throw std::invalid_argument("stabilization symbol collision: " + sym);
        out.labels.push_back(sym);
    }
    return out;
}

Context plus_context(const Context& ctx) {
    Context out = ctx;
    if (out.has_label("+")) throw std::invalid_argument("reserved label '+' already present");
    out.labels.push_back("+");
    return out;
}

namespace {

void check_context(const Context& a, const Context& b) {
    if (a != b) throw std::invalid_argument("context mismatch");
}

void check_tree_over(const Context& ctx, const LabeledTree& t) {
    if (!ctx.has_label(t.root_label))
        throw std::invalid_argument("root label outside context: " + t.root_label);
    for (const auto& l : t.leaf_labels())
        if (!ctx.has_label(l)) throw std::invalid_argument("leaf label outside context: " + l);
}

}  // namespace

Derivation make_derivation(Context ctx, FormalSum value) {
    for (const auto& [k, c] : value.terms()) check_tree_over(ctx, make_tree(ctx.gens, k));
    return Derivation{std::move(ctx), std::move(value)};
}

Derivation der_zero(Context ctx) { return Derivation{std::move(ctx), FormalSum{}}; }

Derivation der_tree(Context ctx, const LabeledTree& t, Scalar c) {
    check_tree_over(ctx, t);
    return Derivation{std::move(ctx), FormalSum::basis(canonical_key(t), c)};
}

Derivation add(const Derivation& a, const Derivation& b) {
    check_context(a.ctx, b.ctx);
    return Derivation{a.ctx, a.value + b.value};
}

Derivation scale(const Scalar& c, const Derivation& a) { return Derivation{a.ctx, a.value.scaled(c)}; }

Derivation prelie(const Derivation& d, const Derivation& e) {
    check_context(d.ctx, e.ctx);
    FormalSum out;
    for (const auto& [k1, c1] : d.value.terms()) {
        LabeledTree t1 = make_tree(d.ctx.gens, k1);
        for (const auto& [k2, c2] : e.value.terms()) {
            LabeledTree t2 = make_tree(d.ctx.gens, k2);
            out += (c1 * c2) * graft_matching(t1, t2);
        }
    }
    return Derivation{d.ctx, std::move(out)};
}

Derivation bracket(const Derivation& d, const Derivation& e) {
    Derivation de = prelie(d, e);
    Derivation ed = prelie(e, d);
    return Derivation{d.ctx, de.value - ed.value};
}

Derivation homogeneous_part(const Derivation& d, int n) {
    FormalSum out;
    for (const auto& [k, c] : d.value.terms())
        if (degree_of_key(k) == n) out.add_term(k, c);
    return Derivation{d.ctx, std::move(out)};
}

std::vector<int> degrees_present(const Derivation& d) {
    std::vector<int> out;
    for (const auto& [k, c] : d.value.terms()) {
        int deg = degree_of_key(k);
        if (std::find(out.begin(), out.end(), deg) == out.end()) out.push_back(deg);
    }
    std::sort(out.begin(), out.end());
    return out;
}

Derivation restrict_positive(const Derivation& d) {
    FormalSum out;
    for (const auto& [k, c] : d.value.terms())
        if (degree_of_key(k) >= 1) out.add_term(k, c);
    return Derivation{d.ctx, std::move(out)};
}

Derivation stabilize(const Derivation& d, int n) {
    return Derivation{stabilized_context(d.ctx, n), d.value};
}

Derivation restrict_labels(const Derivation& d, const std::vector<std::string>& labels) {
    Context out_ctx{labels, d.ctx.gens};
    FormalSum out;
    for (const auto& [k, c] : d.value.terms()) {
        LabeledTree t = make_tree(d.ctx.gens, k);
        bool keep = out_ctx.has_label(t.root_label);
        if (keep)
            for (const auto& l : t.leaf_labels())
                if (!out_ctx.has_label(l)) {
                    keep = false;
                    break;
                }
        if (keep) out.add_term(k, c);
    }
    return Derivation{std::move(out_ctx), std::move(out)};
}

namespace {

void check_pointed_tree(const Context& ctx, const std::string& basepoint, const LabeledTree& t) {
    check_tree_over(ctx, t);
    if (t.root_label != basepoint)
        throw std::invalid_argument("pointed tree must be rooted at the basepoint: " +
                                    canonical_key(t));
    int count = 0;
    for (const auto& l : t.leaf_labels())
        if (l == basepoint) ++count;
    if (count != 1)
        throw std::invalid_argument("tree is not pointed (basepoint leaf count " +
                                    std::to_string(count) + "): " + canonical_key(t));
}

}  // namespace

PointedDerivation make_pointed(Context ctx, std::string basepoint, FormalSum value) {
    if (!ctx.has_label(basepoint)) throw std::invalid_argument("basepoint outside context");
    for (const auto& [k, c] : value.terms())
        check_pointed_tree(ctx, basepoint, make_tree(ctx.gens, k));
    return PointedDerivation{std::move(ctx), std::move(basepoint), std::move(value)};
}

PointedDerivation pointed_unit(Context ctx, const std::string& basepoint) {
    if (!ctx.has_label(basepoint)) throw std::invalid_argument("basepoint outside context");
    std::string key = basepoint + "<-" + basepoint;
    return PointedDerivation{std::move(ctx), basepoint, FormalSum::basis(key)};
}

PointedDerivation pointed_zero(Context ctx, std::string basepoint) {
    return PointedDerivation{std::move(ctx), std::move(basepoint), FormalSum{}};
}

Derivation as_derivation(const PointedDerivation& p) { return Derivation{p.ctx, p.value}; }

PointedDerivation add(const PointedDerivation& a, const PointedDerivation& b) {
    check_context(a.ctx, b.ctx);
    if (a.basepoint != b.basepoint) throw std::invalid_argument("basepoint mismatch");
    return PointedDerivation{a.ctx, a.basepoint, a.value + b.value};
}

PointedDerivation scale(const Scalar& c, const PointedDerivation& a) {
    return PointedDerivation{a.ctx, a.basepoint, a.value.scaled(c)};
}

PointedDerivation pointed_product(const PointedDerivation& p, const PointedDerivation& q) {
    check_context(p.ctx, q.ctx);
    if (p.basepoint != q.basepoint) throw std::invalid_argument("basepoint mismatch");
    FormalSum out;
    for (const auto& [k1, c1] : p.value.terms()) {
        LabeledTree t1 = make_tree(p.ctx.gens, k1);
        const auto leaves = t1.leaf_labels();
        int at = -1;
        for (std::size_t i = 0; i < leaves.size(); ++i)
            if (leaves[i] == p.basepoint) at = static_cast<int>(i) + 1;
        for (const auto& [k2, c2] : q.value.terms()) {
            LabeledTree t2 = make_tree(p.ctx.gens, k2);
            out.add_term(canonical_key(graft(t1, at, t2)), c1 * c2);
        }
    }
    return PointedDerivation{p.ctx, p.basepoint, std::move(out)};
}

std::vector<LabeledTree> spine_factorize(const LabeledTree& t) {
    TreeClass cls = classify(t);
    if (cls.kind == TreeKind::Disjoint || cls.kind == TreeKind::Other)
        throw std::invalid_argument("spine_factorize: tree is not pointed: " + canonical_key(t));
    const std::string& z = t.root_label;
    std::vector<LabeledTree> factors;
    const TreeNode* n = &t.body;
    // walk the spine; at each internal vertex cut off the continuation
    while (!n->is_leaf()) {
        // child whose subtree carries the unique z-leaf
        int child_idx = -1;
        for (std::size_t i = 0; i < n->children.size() && child_idx < 0; ++i) {
            LabeledTree sub{z, n->children[i]};
            for (const auto& l : sub.leaf_labels())
                if (l == z) {
                    child_idx = static_cast<int>(i);
                    break;
                }
        }
        const TreeNode& next = n->children[child_idx];
        LabeledTree factor;
        factor.root_label = z;
        factor.body = *n;
        if (!next.is_leaf()) {
            // cut the spine edge: continuation replaced by a z-leaf
            TreeNode leaf;
            leaf.label = z;
            factor.body.children[child_idx] = leaf;
        }
        factors.push_back(std::move(factor));
        if (next.is_leaf()) break;
        n = &next;
    }
    return factors;
}

std::string necklace_key(std::vector<std::string> factor_keys) {
    const std::size_t k = factor_keys.size();
    std::vector<std::string> best = factor_keys;
    for (std::size_t r = 1; r < k; ++r) {
        std::rotate(factor_keys.begin(), factor_keys.begin() + 1, factor_keys.end());
        if (factor_keys < best) best = factor_keys;
    }
    std::string out = "(";
    for (std::size_t i = 0; i < best.size(); ++i) {
        if (i) out += '|';
        out += best[i];
    }
    out += ')';
    return out;
}

std::vector<std::string> necklace_factors(const std::string& key) {
    if (key.size() < 2 || key.front() != '(' || key.back() != ')')
        throw std::invalid_argument("bad necklace key: " + key);
    std::string inner = key.substr(1, key.size() - 2);
    std::vector<std::string> out;
    if (inner.empty()) return out;
    std::size_t start = 0;
    while (true) {
        auto bar = inner.find('|', start);
        if (bar == std::string::npos) {
            out.push_back(inner.substr(start));
            break;
        }
        out.push_back(inner.substr(start, bar - start));
        start = bar + 1;
    }
    return out;
}

TraceElement trace_zero(Context ctx, std::string basepoint) {
    return TraceElement{std::move(ctx), std::move(basepoint), FormalSum{}};
}

TraceElement add(const TraceElement& a, const TraceElement& b) {
    check_context(a.ctx, b.ctx);
    if (a.basepoint != b.basepoint) throw std::invalid_argument("basepoint mismatch");
    return TraceElement{a.ctx, a.basepoint, a.value + b.value};
}

TraceElement scale(const Scalar& c, const TraceElement& a) {
    return TraceElement{a.ctx, a.basepoint, a.value.scaled(c)};
}

TraceElement restrict_positive(const TraceElement& t) {
    FormalSum out;
    for (const auto& [k, c] : t.value.terms())
        if (!necklace_factors(k).empty()) out.add_term(k, c);
    return TraceElement{t.ctx, t.basepoint, std::move(out)};
}

TraceElement trace_class(const PointedDerivation& p) {
    FormalSum out;
    for (const auto& [k, c] : p.value.terms()) {
        LabeledTree t = make_tree(p.ctx.gens, k);
        auto factors = spine_factorize(t);
        std::vector<std::string> fkeys;
        fkeys.reserve(factors.size());
        for (const auto& f : factors) fkeys.push_back(canonical_key(f));
        out.add_term(necklace_key(std::move(fkeys)), c);
    }
    return TraceElement{p.ctx, p.basepoint, std::move(out)};
}

PointedDerivation necklace_representative(const Context& ctx, const std::string& basepoint,
                                          const std::string& key) {
    auto fkeys = necklace_factors(key);
    PointedDerivation p = pointed_unit(ctx, basepoint);
    for (const auto& fk : fkeys) {
        PointedDerivation f =
            make_pointed(ctx, basepoint, FormalSum::basis(fk));
        p = pointed_product(p, f);
    }
    return p;
}

TraceElement act(const TraceElement& t, const Derivation& d) {
    if (d.ctx.gens != t.ctx.gens) throw std::invalid_argument("generator set mismatch");
    for (const auto& l : d.ctx.labels)
        if (l == t.basepoint)
            throw std::invalid_argument("acting derivation must avoid the basepoint label");
    for (const auto& l : d.ctx.labels)
        if (!t.ctx.has_label(l)) throw std::invalid_argument("acting context not contained: " + l);
    Derivation d_in_t{t.ctx, d.value};
    TraceElement out = trace_zero(t.ctx, t.basepoint);
    for (const auto& [k, c] : t.value.terms()) {
        PointedDerivation p = necklace_representative(t.ctx, t.basepoint, k);
        Derivation moved = prelie(as_derivation(p), d_in_t);
        PointedDerivation q{t.ctx, t.basepoint, moved.value};
        out = add(out, scale(c, trace_class(q)));
    }
    return out;
}

TraceElement stabilize(const TraceElement& t, int n) {
    return TraceElement{stabilized_context(t.ctx, n), t.basepoint, t.value};
}

}  // namespace operadcalc
