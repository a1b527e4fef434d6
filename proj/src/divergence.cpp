#include "operadcalc/divergence.hpp"

#include <stdexcept>

namespace operadcalc {

namespace {

void relabel_leaf(TreeNode& n, int& k, const std::string& label) {
    if (n.is_leaf()) {
        if (--k == 0) n.label = label;
        return;
    }
    for (auto& ch : n.children) {
        relabel_leaf(ch, k, label);
        if (k <= 0) return;
    }
}

}  // namespace

FormalSum contract_tree(const LabeledTree& t) {
    FormalSum out;
    const std::string z = t.root_label;
    const auto leaves = t.leaf_labels();
    for (std::size_t i = 0; i < leaves.size(); ++i) {
        if (leaves[i] != z) continue;
        LabeledTree img = t;
        img.root_label = "+";
        int k = static_cast<int>(i) + 1;
        relabel_leaf(img.body, k, "+");
        out.add_term(canonical_key(img), Scalar(1));
    }
    return out;
}

PointedDerivation contract(const Derivation& d) {
    Context out_ctx = plus_context(d.ctx);  // throws on reserved-label collision
    FormalSum out;
    for (const auto& [k, c] : d.value.terms())
        out += c * contract_tree(make_tree(d.ctx.gens, k));
    return PointedDerivation{std::move(out_ctx), "+", std::move(out)};
}

TraceElement div(const Derivation& d) { return trace_class(contract(d)); }

TraceElement div_positive(const Derivation& d) { return div(restrict_positive(d)); }

TraceElement cocycle_defect(const Derivation& d, const Derivation& e) {
    if (d.ctx != e.ctx) throw std::invalid_argument("context mismatch");
    TraceElement lhs = div(bracket(d, e));
    TraceElement t1 = act(div(d), e);
    TraceElement t2 = act(div(e), d);
    TraceElement out = add(lhs, scale(Scalar(-1), t1));
    return add(out, t2);
}

}  // namespace operadcalc
