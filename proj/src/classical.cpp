#include "operadcalc/classical.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace operadcalc {

using namespace words;

OperadTag parse_operad_tag(const std::string& s) {
    if (s == "lie") return OperadTag::Lie;
    if (s == "ass") return OperadTag::Ass;
    if (s == "com") return OperadTag::Com;
    throw std::invalid_argument("unknown operad tag: " + s);
}

std::string to_string(OperadTag t) {
    switch (t) {
        case OperadTag::Lie: return "lie";
        case OperadTag::Ass: return "ass";
        case OperadTag::Com: return "com";
    }
    return "?";
}

ClassicalContext make_classical_context(OperadTag tag, const std::string& alphabet) {
    if (alphabet.empty()) throw std::invalid_argument("empty alphabet");
    for (char c : alphabet) {
        if (!std::isalpha(static_cast<unsigned char>(c)))
            throw std::invalid_argument("alphabet letters must be alphabetic");
        if (std::count(alphabet.begin(), alphabet.end(), c) != 1)
            throw std::invalid_argument("duplicate alphabet letter");
    }
    return ClassicalContext{tag, alphabet};
}

std::string standard_alphabet(int rank) {
    static const std::string pool = "xyzwvutsrqponmlkjihgfedcba";
    if (rank < 1 || rank > static_cast<int>(pool.size()))
        throw std::invalid_argument("unsupported rank");
    return pool.substr(0, rank);
}

ClassicalContext extend_alphabet(const ClassicalContext& ctx, int n) {
    static const std::string pool = "abcdefghijklmnopqrstuvwxyz";
    ClassicalContext out = ctx;
    int added = 0;
    for (char c : pool) {
        if (added == n) break;
        if (out.alphabet.find(c) == std::string::npos) {
            out.alphabet.push_back(c);
            ++added;
        }
    }
    if (added != n) throw std::invalid_argument("alphabet pool exhausted");
    return out;
}

namespace {

void check_letters(const ClassicalContext& ctx, const std::string& w) {
    if (is_unit(w)) return;
    for (char c : w)
        if (ctx.alphabet.find(c) == std::string::npos)
            throw std::invalid_argument(std::string("letter outside alphabet: ") + c);
}

void check_value_key(const ClassicalContext& ctx, const std::string& key) {
    switch (ctx.tag) {
        case OperadTag::Lie: {
            LieExpr e = parse_bracket(key);
            std::function<void(const LieExpr&)> walk = [&](const LieExpr& x) {
                if (x.is_leaf()) {
                    if (ctx.alphabet.find(x.letter) == std::string::npos)
                        throw std::invalid_argument(std::string("letter outside alphabet: ") +
                                                    x.letter);
                    return;
                }
                walk(*x.left);
                walk(*x.right);
            };
            walk(e);
            break;
        }
        case OperadTag::Ass: check_letters(ctx, key); break;
        case OperadTag::Com:
            check_letters(ctx, key);
            if (monomial_of(key) != key)
                throw std::invalid_argument("monomial key not sorted: " + key);
            break;
    }
}

}  // namespace

ClassicalDerivation cder_zero(ClassicalContext ctx) { return ClassicalDerivation{std::move(ctx), {}}; }

ClassicalDerivation cder(ClassicalContext ctx, std::map<char, FormalSum> values) {
    for (auto& [letter, sum] : values) {
        if (ctx.alphabet.find(letter) == std::string::npos)
            throw std::invalid_argument(std::string("slot letter outside alphabet: ") + letter);
        for (const auto& [k, c] : sum.terms()) check_value_key(ctx, k);
    }
    for (auto it = values.begin(); it != values.end();) {
        if (it->second.is_zero())
            it = values.erase(it);
        else
            ++it;
    }
    return ClassicalDerivation{std::move(ctx), std::move(values)};
}

ClassicalDerivation add(const ClassicalDerivation& a, const ClassicalDerivation& b) {
    if (a.ctx != b.ctx) throw std::invalid_argument("classical context mismatch");
    std::map<char, FormalSum> out = a.values;
    for (const auto& [l, v] : b.values) {
        out[l] += v;
        if (out[l].is_zero()) out.erase(l);
    }
    return ClassicalDerivation{a.ctx, std::move(out)};
}

ClassicalDerivation scale(const Scalar& c, const ClassicalDerivation& a) {
    std::map<char, FormalSum> out;
    if (c != 0)
        for (const auto& [l, v] : a.values) out.emplace(l, v.scaled(c));
    return ClassicalDerivation{a.ctx, std::move(out)};
}

bool is_zero(const ClassicalDerivation& d) {
    for (const auto& [l, v] : d.values)
        if (!v.is_zero()) return false;
    return true;
}

ClassicalDerivation stabilize_classical(const ClassicalDerivation& d, int n) {
    return ClassicalDerivation{extend_alphabet(d.ctx, n), d.values};
}

namespace {

// Leibniz extension over a tensor word; values given as word sums.
FormalSum word_leibniz(const std::map<char, FormalSum>& word_values, const std::string& w) {
    FormalSum out;
    if (is_unit(w)) return out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        auto it = word_values.find(w[i]);
        if (it == word_values.end()) continue;
        std::string left = w.substr(0, i);
        std::string right = w.substr(i + 1);
        FormalSum mid = it->second;
        FormalSum acc = FormalSum::basis(left.empty() ? "1" : left);
        acc = word_product(acc, mid);
        acc = word_product(acc, FormalSum::basis(right.empty() ? "1" : right));
        out += acc;
    }
    return out;
}

// values-on-letters as word sums (expanding Lyndon keys when tag == Lie)
std::map<char, FormalSum> values_as_words(const ClassicalDerivation& d) {
    std::map<char, FormalSum> out;
    for (const auto& [l, v] : d.values) {
        FormalSum w;
        for (const auto& [k, c] : v.terms()) {
            if (d.ctx.tag == OperadTag::Lie)
                w += c * expand_lyndon_key(k);
            else
                w.add_term(k, c);
        }
        out.emplace(l, std::move(w));
    }
    return out;
}

}  // namespace

FormalSum extend_derivation(const ClassicalDerivation& d, const FormalSum& element) {
    FormalSum out;
    switch (d.ctx.tag) {
        case OperadTag::Ass: {
            auto wv = values_as_words(d);
            for (const auto& [w, c] : element.terms()) out += c * word_leibniz(wv, w);
            break;
        }
        case OperadTag::Lie: {
            // extend on the tensor expansion; the result stays primitive
            auto wv = values_as_words(d);
            FormalSum expanded;
            for (const auto& [k, c] : element.terms()) expanded += c * expand_lyndon_key(k);
            FormalSum moved;
            for (const auto& [w, c] : expanded.terms()) moved += c * word_leibniz(wv, w);
            out = lyndonize(moved);
            break;
        }
        case OperadTag::Com: {
            for (const auto& [m, c] : element.terms()) {
                if (is_unit(m)) continue;
                std::string seen;
                for (char letter : m) {
                    if (seen.find(letter) != std::string::npos) continue;
                    seen.push_back(letter);
                    auto it = d.values.find(letter);
                    if (it == d.values.end()) continue;
                    FormalSum part = monomial_partial(m, letter);
                    out += c * monomial_product(part, it->second);
                }
            }
            break;
        }
    }
    return out;
}

ClassicalDerivation prelie_classical(const ClassicalDerivation& d, const ClassicalDerivation& e) {
    if (d.ctx != e.ctx) throw std::invalid_argument("classical context mismatch");
    std::map<char, FormalSum> out;
    for (const auto& [l, v] : d.values) {
        FormalSum moved = extend_derivation(e, v);
        if (!moved.is_zero()) out.emplace(l, std::move(moved));
    }
    return ClassicalDerivation{d.ctx, std::move(out)};
}

ClassicalDerivation bracket_classical(const ClassicalDerivation& d, const ClassicalDerivation& e) {
    return add(prelie_classical(d, e), scale(Scalar(-1), prelie_classical(e, d)));
}

FormalSum lie_normal_form(const std::string& bracket_expression) {
    return lyndonize(expand_bracket(parse_bracket(bracket_expression)));
}

std::vector<std::string> lyndon_basis(const std::string& alphabet, int degree) {
    return lyndon_words(alphabet, degree);
}

namespace {

// expansion of expr with the marked leaf replaced by the basepoint letter
FormalSum expand_with_basepoint(const LieExpr& e, int& countdown, char slot) {
    if (e.is_leaf()) {
        if (e.letter == slot && --countdown == 0)
            return FormalSum::basis(std::string(1, kBasepoint));
        return FormalSum::basis(std::string(1, e.letter));
    }
    FormalSum l = expand_with_basepoint(*e.left, countdown, slot);
    FormalSum r = expand_with_basepoint(*e.right, countdown, slot);
    return word_product(l, r) - word_product(r, l);
}

int count_letter(const LieExpr& e, char c) {
    if (e.is_leaf()) return e.letter == c ? 1 : 0;
    return count_letter(*e.left, c) + count_letter(*e.right, c);
}

}  // namespace

FormalSum satoh_trace(const ClassicalDerivation& d) {
    if (d.ctx.tag != OperadTag::Lie) throw std::invalid_argument("satoh_trace needs a Lie context");
    FormalSum out;
    for (const auto& [slot, v] : d.values) {
        for (const auto& [key, c] : v.terms()) {
            LieExpr e = parse_bracket(key);
            int occurrences = count_letter(e, slot);
            for (int occ = 1; occ <= occurrences; ++occ) {
                int countdown = occ;
                FormalSum pointed = expand_with_basepoint(e, countdown, slot);
                out += c * necklaceify(reduce_pointed_words(pointed));
            }
        }
    }
    return out;
}

FormalSum BimodQuotient::reduce(const FormalSum& bimod_sum) {
    // split into bidegrees; reduce each against its commutator span
    std::map<std::pair<int, int>, FormalSum> parts;
    for (const auto& [k, c] : bimod_sum.terms()) {
        auto [l, r] = bimod_parts(k);
        parts[{word_length(l), word_length(r)}].add_term(k, c);
    }
    FormalSum out;
    for (auto& [deg, part] : parts) out += commutator_span(deg.first, deg.second).reduce(part);
    return out;
}

bool BimodQuotient::equal(const FormalSum& a, const FormalSum& b) {
    return reduce(a - b).is_zero();
}

std::vector<std::string> BimodQuotient::basis_keys(int left_deg, int right_deg) const {
    auto words_of = [&](int n) {
        std::vector<std::string> out;
        if (n == 0) {
            out.push_back("1");
            return out;
        }
        std::vector<int> idx(n, 0);
        const int k = static_cast<int>(alphabet_.size());
        while (true) {
            std::string s;
            for (int i : idx) s.push_back(alphabet_[i]);
            out.push_back(s);
            int i = n - 1;
            while (i >= 0 && idx[i] == k - 1) idx[i--] = 0;
            if (i < 0) break;
            ++idx[i];
        }
        return out;
    };
    std::vector<std::string> lefts = words_of(left_deg);
    std::vector<std::string> rights = words_of(right_deg);
    std::vector<std::string> keys;
    keys.reserve(lefts.size() * rights.size());
    for (const auto& l : lefts)
        for (const auto& r : rights) keys.push_back(bimod_key(l, r));
    std::sort(keys.begin(), keys.end());
    return keys;
}

const Subspace& BimodQuotient::commutator_span(int left_deg, int right_deg) {
    auto it = spans_.find({left_deg, right_deg});
    if (it != spans_.end()) return it->second;
    std::vector<std::string> ambient = basis_keys(left_deg, right_deg);
    std::vector<FormalSum> comms;
    for (int a = 0; a <= left_deg; ++a) {
        for (int b = 0; b <= right_deg; ++b) {
            // [u, v] with u of bidegree (a,b), v of bidegree (left-a, right-b)
            auto us = basis_keys(a, b);
            auto vs = basis_keys(left_deg - a, right_deg - b);
            for (const auto& u : us)
                for (const auto& v : vs) {
                    FormalSum fu = FormalSum::basis(u), fv = FormalSum::basis(v);
                    FormalSum comm = bimod_product(fu, fv) - bimod_product(fv, fu);
                    if (!comm.is_zero()) comms.push_back(std::move(comm));
                }
        }
    }
    auto [pos, ok] =
        spans_.emplace(std::make_pair(left_deg, right_deg), Subspace::span(ambient, comms));
    (void)ok;
    return pos->second;
}

FormalSum double_divergence_raw(const ClassicalDerivation& d) {
    if (d.ctx.tag != OperadTag::Ass)
        throw std::invalid_argument("double_divergence needs an Ass context");
    FormalSum out;
    for (const auto& [slot, v] : d.values) {
        for (const auto& [w, c] : v.terms()) {
            if (is_unit(w)) continue;
            for (std::size_t i = 0; i < w.size(); ++i) {
                if (w[i] != slot) continue;
                out.add_term(bimod_key(w.substr(0, i), w.substr(i + 1)), c);
            }
        }
    }
    return out;
}

FormalSum double_divergence(const ClassicalDerivation& d, BimodQuotient& q) {
    return q.reduce(double_divergence_raw(d));
}

FormalSum com_divergence(const ClassicalDerivation& d) {
    if (d.ctx.tag != OperadTag::Com)
        throw std::invalid_argument("com_divergence needs a Com context");
    FormalSum out;
    for (const auto& [slot, v] : d.values)
        for (const auto& [m, c] : v.terms()) out += c * monomial_partial(m, slot);
    return out;
}

FormalSum tilde_delta(const std::string& word) { return tilde_delta_word(word); }

FormalSum tilde_delta_trace(const FormalSum& necklaces, BimodQuotient& q) {
    FormalSum out;
    for (const auto& [k, c] : necklaces.terms()) {
        if (k.empty() || k[0] != '~') throw std::invalid_argument("bad necklace key: " + k);
        out += c * tilde_delta_word(k.substr(1));
    }
    return q.reduce(out);
}

ClassicalDerivation lie_to_ass(const ClassicalDerivation& d) {
    if (d.ctx.tag != OperadTag::Lie) throw std::invalid_argument("lie_to_ass needs a Lie context");
    std::map<char, FormalSum> out;
    for (const auto& [l, v] : d.values) {
        FormalSum w;
        for (const auto& [k, c] : v.terms()) w += c * expand_lyndon_key(k);
        if (!w.is_zero()) out.emplace(l, std::move(w));
    }
    return ClassicalDerivation{ClassicalContext{OperadTag::Ass, d.ctx.alphabet}, std::move(out)};
}

ClassicalDerivation ass_to_com(const ClassicalDerivation& d) {
    if (d.ctx.tag != OperadTag::Ass) throw std::invalid_argument("ass_to_com needs an Ass context");
    std::map<char, FormalSum> out;
    for (const auto& [l, v] : d.values) {
        FormalSum m;
        for (const auto& [w, c] : v.terms()) m.add_term(abelianize_word(w), c);
        if (!m.is_zero()) out.emplace(l, std::move(m));
    }
    return ClassicalDerivation{ClassicalContext{OperadTag::Com, d.ctx.alphabet}, std::move(out)};
}

FormalSum abelianize_bimod(const FormalSum& bimod_sum) {
    FormalSum out;
    for (const auto& [k, c] : bimod_sum.terms()) {
        auto [l, r] = bimod_parts(k);
        out.add_term(monomial_of(concat(l, r)), c);
    }
    return out;
}

FormalSum act_lie_trace(const FormalSum& necklaces, const ClassicalDerivation& d) {
    auto wv = values_as_words(d);
    FormalSum out;
    for (const auto& [k, c] : necklaces.terms()) {
        if (k.empty() || k[0] != '~') throw std::invalid_argument("bad necklace key: " + k);
        std::string w = k.substr(1);
        if (is_unit(w)) continue;  // the unit class is killed by every derivation
        out += c * necklaceify(word_leibniz(wv, w));
    }
    return out;
}

FormalSum act_ass_trace(const FormalSum& bimod_classes, const ClassicalDerivation& d,
                        BimodQuotient& q) {
    auto wv = values_as_words(d);
    FormalSum out;
    for (const auto& [k, c] : bimod_classes.terms()) {
        auto [l, r] = bimod_parts(k);
        FormalSum dl = word_leibniz(wv, l);
        FormalSum dr = word_leibniz(wv, r);
        for (const auto& [wl, cl] : dl.terms()) out.add_term(bimod_key(wl, r), c * cl);
        for (const auto& [wr, cr] : dr.terms()) out.add_term(bimod_key(l, wr), c * cr);
    }
    return q.reduce(out);
}

FormalSum act_com_trace(const FormalSum& monomials, const ClassicalDerivation& d) {
    return extend_derivation(d, monomials);
}

FormalSum classical_div(const ClassicalDerivation& d, BimodQuotient* q) {
    switch (d.ctx.tag) {
        case OperadTag::Lie: return satoh_trace(d);
        case OperadTag::Ass:
            if (!q) throw std::invalid_argument("Ass divergence needs a BimodQuotient");
            return double_divergence(d, *q);
        case OperadTag::Com: return com_divergence(d);
    }
    return {};
}

FormalSum classical_cocycle_defect(const ClassicalDerivation& d, const ClassicalDerivation& e,
                                   BimodQuotient* q) {
    FormalSum lhs = classical_div(bracket_classical(d, e), q);
    FormalSum dd = classical_div(d, q);
    FormalSum de = classical_div(e, q);
    FormalSum td, te;
    switch (d.ctx.tag) {
        case OperadTag::Lie:
            td = act_lie_trace(dd, e);
            te = act_lie_trace(de, d);
            break;
        case OperadTag::Ass:
            td = act_ass_trace(dd, e, *q);
            te = act_ass_trace(de, d, *q);
            break;
        case OperadTag::Com:
            td = act_com_trace(dd, e);
            te = act_com_trace(de, d);
            break;
    }
    FormalSum out = lhs - td + te;
    if (d.ctx.tag == OperadTag::Ass) out = q->reduce(out);
    return out;
}

namespace {

char single_char_label(const std::string& label) {
    if (label.size() != 1) throw std::invalid_argument("transport needs single-char labels: " + label);
    return label[0];
}

LieExpr lie_expr_of_node(const TreeNode& n) {
    if (n.is_leaf()) return LieExpr::leaf(single_char_label(n.label));
    if (n.children.size() != 2)
        throw std::invalid_argument("transport needs a binary generator set");
    return LieExpr::node(lie_expr_of_node(n.children[0]), lie_expr_of_node(n.children[1]));
}

// leaf word with the basepoint leaf '+' mapped to the basepoint letter
std::string word_of_node(const TreeNode& n) {
    std::string out;
    std::function<void(const TreeNode&)> walk = [&](const TreeNode& m) {
        if (m.is_leaf()) {
            out.push_back(m.label == "+" ? kBasepoint : single_char_label(m.label));
            return;
        }
        for (const auto& ch : m.children) walk(ch);
    };
    walk(n);
    return out;
}

}  // namespace

FormalSum lie_element_of_tree(const LabeledTree& t) {
    return lyndonize(expand_bracket(lie_expr_of_node(t.body)));
}

std::string ass_word_of_tree(const LabeledTree& t) { return word_of_node(t.body); }

ClassicalDerivation transport_derivation(OperadTag tag, const Derivation& d) {
    std::string alphabet;
    for (const auto& l : d.ctx.labels) alphabet.push_back(single_char_label(l));
    ClassicalContext ctx{tag, alphabet};
    std::map<char, FormalSum> values;
    for (const auto& [k, c] : d.value.terms()) {
        LabeledTree t = make_tree(d.ctx.gens, k);
        char slot = single_char_label(t.root_label);
        switch (tag) {
            case OperadTag::Lie: values[slot] += c * lie_element_of_tree(t); break;
            case OperadTag::Ass: values[slot].add_term(ass_word_of_tree(t), c); break;
            case OperadTag::Com: values[slot].add_term(monomial_of(ass_word_of_tree(t)), c); break;
        }
    }
    for (auto it = values.begin(); it != values.end();) {
        if (it->second.is_zero())
            it = values.erase(it);
        else
            ++it;
    }
    return ClassicalDerivation{std::move(ctx), std::move(values)};
}

FormalSum transport_trace_lie(const TraceElement& t) {
    FormalSum out;
    for (const auto& [k, c] : t.value.terms()) {
        PointedDerivation rep = necklace_representative(t.ctx, t.basepoint, k);
        for (const auto& [tk, tc] : rep.value.terms()) {
            LabeledTree tree = make_tree(t.ctx.gens, tk);
            // bracket expression with the marked '+' leaf as the basepoint
            std::function<LieExpr(const TreeNode&)> conv = [&](const TreeNode& n) -> LieExpr {
                if (n.is_leaf())
                    return LieExpr::leaf(n.label == "+" ? kBasepoint
                                                        : single_char_label(n.label));
                return LieExpr::node(conv(n.children[0]), conv(n.children[1]));
            };
            FormalSum pointed = expand_bracket(conv(tree.body));
            out += (c * tc) * necklaceify(reduce_pointed_words(pointed));
        }
    }
    return out;
}

FormalSum transport_trace_ass(const TraceElement& t, BimodQuotient& q) {
    FormalSum out;
    for (const auto& [k, c] : t.value.terms()) {
        PointedDerivation rep = necklace_representative(t.ctx, t.basepoint, k);
        for (const auto& [tk, tc] : rep.value.terms()) {
            LabeledTree tree = make_tree(t.ctx.gens, tk);
            std::string w = word_of_node(tree.body);
            auto bp = w.find(kBasepoint);
            if (bp == std::string::npos) throw std::logic_error("pointed tree without basepoint");
            out.add_term(bimod_key(w.substr(0, bp), w.substr(bp + 1)), c * tc);
        }
    }
    return q.reduce(out);
}

std::vector<std::string> classical_value_keys(const ClassicalContext& ctx, int length) {
    std::vector<std::string> out;
    switch (ctx.tag) {
        case OperadTag::Lie: {
            for (const auto& w : lyndon_words(ctx.alphabet, length)) out.push_back(lyndon_key(w));
            break;
        }
        case OperadTag::Ass: {
            if (length == 0) {
                out.push_back("1");
                break;
            }
            std::vector<int> idx(length, 0);
            const int k = static_cast<int>(ctx.alphabet.size());
            while (true) {
                std::string s;
                for (int i : idx) s.push_back(ctx.alphabet[i]);
                out.push_back(s);
                int i = length - 1;
                while (i >= 0 && idx[i] == k - 1) idx[i--] = 0;
                if (i < 0) break;
                ++idx[i];
            }
            break;
        }
        case OperadTag::Com: {
            // multisets of the given size, as nondecreasing strings
            std::string sorted = ctx.alphabet;
            std::sort(sorted.begin(), sorted.end());
            std::string cur;
            std::function<void(std::size_t, int)> rec = [&](std::size_t from, int left) {
                if (left == 0) {
                    out.push_back(cur.empty() ? "1" : cur);
                    return;
                }
                for (std::size_t i = from; i < sorted.size(); ++i) {
                    cur.push_back(sorted[i]);
                    rec(i, left - 1);
                    cur.pop_back();
                }
            };
            rec(0, length);
            break;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::pair<char, std::string>> classical_der_basis(const ClassicalContext& ctx,
                                                              int degree) {
    std::vector<std::pair<char, std::string>> out;
    auto keys = classical_value_keys(ctx, degree + 1);
    for (char slot : ctx.alphabet)
        for (const auto& k : keys) out.emplace_back(slot, k);
    return out;
}

}  // namespace operadcalc
