#include "operadcalc/words.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace operadcalc {
namespace words {

std::string concat(const std::string& a, const std::string& b) {
    if (is_unit(a)) return b;
    if (is_unit(b)) return a;
    return a + b;
}

FormalSum word_product(const FormalSum& a, const FormalSum& b) {
    FormalSum out;
    for (const auto& [wa, ca] : a.terms())
        for (const auto& [wb, cb] : b.terms()) out.add_term(concat(wa, wb), ca * cb);
    return out;
}

bool is_lyndon(const std::string& w) {
    if (is_unit(w) || w.empty()) return false;
    const std::size_t n = w.size();
    for (std::size_t r = 1; r < n; ++r) {
        std::string rot = w.substr(r) + w.substr(0, r);
        if (!(w < rot)) return false;
    }
    return true;
}

std::vector<std::string> lyndon_words(const std::string& alphabet, int length) {
    if (length < 1) throw std::invalid_argument("lyndon_words: length must be >= 1");
    std::string sorted = alphabet;
    std::sort(sorted.begin(), sorted.end());
    const int n = length;
    const int k = static_cast<int>(sorted.size());
    std::vector<std::string> out;
    // Duval: generates Lyndon words of length dividing n in lex order
    std::vector<int> word{0};
    while (true) {
        if (n % static_cast<int>(word.size()) == 0 && static_cast<int>(word.size()) == n) {
            std::string s;
            for (int i : word) s.push_back(sorted[i]);
            out.push_back(s);
        }
        std::size_t m = word.size();
        std::vector<int> w2 = word;
        while (w2.size() < static_cast<std::size_t>(n)) w2.push_back(w2[w2.size() % m]);
        while (!w2.empty() && w2.back() == k - 1) w2.pop_back();
        if (w2.empty()) break;
        ++w2.back();
        word = std::move(w2);
    }
    return out;
}

std::size_t standard_split(const std::string& w) {
    // longest proper Lyndon suffix
    for (std::size_t i = 1; i < w.size(); ++i)
        if (is_lyndon(w.substr(i))) return i;
    throw std::logic_error("standard_split: no Lyndon suffix in " + w);
}

LieExpr LieExpr::leaf(char c) {
    LieExpr e;
    e.letter = c;
    return e;
}

LieExpr LieExpr::node(LieExpr l, LieExpr r) {
    LieExpr e;
    e.left = std::make_shared<const LieExpr>(std::move(l));
    e.right = std::make_shared<const LieExpr>(std::move(r));
    return e;
}

namespace {

LieExpr parse_bracket_at(const std::string& s, std::size_t& pos) {
    if (pos >= s.size()) throw std::invalid_argument("bracket parse error: " + s);
    if (s[pos] == '[') {
        ++pos;
        LieExpr l = parse_bracket_at(s, pos);
        if (pos >= s.size() || s[pos] != ',')
            throw std::invalid_argument("bracket parse error (expected ','): " + s);
        ++pos;
        LieExpr r = parse_bracket_at(s, pos);
        if (pos >= s.size() || s[pos] != ']')
            throw std::invalid_argument("bracket parse error (expected ']'): " + s);
        ++pos;
        return LieExpr::node(std::move(l), std::move(r));
    }
    char c = s[pos];
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+')
        throw std::invalid_argument("bracket parse error (expected a letter): " + s);
    ++pos;
    return LieExpr::leaf(c);
}

}  // namespace

LieExpr parse_bracket(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    std::size_t pos = 0;
    LieExpr e = parse_bracket_at(s, pos);
    if (pos != s.size()) throw std::invalid_argument("bracket parse error (trailing): " + text);
    return e;
}

std::string bracket_str(const LieExpr& e) {
    if (e.is_leaf()) return std::string(1, e.letter);
    return "[" + bracket_str(*e.left) + "," + bracket_str(*e.right) + "]";
}

LieExpr standard_bracketing(const std::string& w) {
    if (!is_lyndon(w)) throw std::invalid_argument("not a Lyndon word: " + w);
    if (w.size() == 1) return LieExpr::leaf(w[0]);
    std::size_t i = standard_split(w);
    return LieExpr::node(standard_bracketing(w.substr(0, i)), standard_bracketing(w.substr(i)));
}

std::string lyndon_key(const std::string& w) { return bracket_str(standard_bracketing(w)); }

FormalSum expand_bracket(const LieExpr& e) {
    if (e.is_leaf()) return FormalSum::basis(std::string(1, e.letter));
    FormalSum l = expand_bracket(*e.left);
    FormalSum r = expand_bracket(*e.right);
    return word_product(l, r) - word_product(r, l);
}

FormalSum expand_lyndon_key(const std::string& key) { return expand_bracket(parse_bracket(key)); }

FormalSum lyndonize(const FormalSum& word_sum) {
    FormalSum rest = word_sum;
    FormalSum out;
    while (!rest.is_zero()) {
        // the lexicographically smallest word present (shorter-first to keep
        // multidegrees separated; expansion never changes a word's length)
        std::string m;
        bool have = false;
        for (const auto& [w, c] : rest.terms()) {
            if (!have || w.size() < m.size() || (w.size() == m.size() && w < m)) {
                m = w;
                have = true;
            }
        }
        if (!is_lyndon(m))
            throw std::invalid_argument("lyndonize: not a free-Lie element (leading word " + m +
                                        ")");
        Scalar c = rest.coeff(m);
        rest -= c * expand_bracket(standard_bracketing(m));
        out.add_term(lyndon_key(m), c);
    }
    return out;
}

FormalSum iterated_bracket_with_basepoint(const std::string& u) {
    if (is_unit(u) || u.empty()) return FormalSum::basis(std::string(1, kBasepoint));
    FormalSum tail = iterated_bracket_with_basepoint(u.substr(1));
    FormalSum head = FormalSum::basis(std::string(1, u[0]));
    return word_product(head, tail) - word_product(tail, head);
}

FormalSum reduce_pointed_words(FormalSum in) {
    // sanity: each word carries the basepoint exactly once
    for (const auto& [w, c] : in.terms()) {
        if (std::count(w.begin(), w.end(), kBasepoint) != 1)
            throw std::invalid_argument("reduce_pointed_words: word not linear in basepoint: " + w);
    }
    FormalSum out;
    while (!in.is_zero()) {
        std::string hit;
        for (const auto& [w, c] : in.terms())
            if (w.back() == kBasepoint) {
                hit = w;
                break;
            }
        if (hit.empty())
            throw std::invalid_argument("reduce_pointed_words: residue outside the span: " +
                                        in.str());
        Scalar c = in.coeff(hit);
        std::string u = hit.substr(0, hit.size() - 1);
        if (u.empty()) u = "1";
        out.add_term(u, c);
        in -= c * iterated_bracket_with_basepoint(u);
    }
    return out;
}

std::string min_rotation(const std::string& w) {
    if (is_unit(w)) return w;
    std::string best = w;
    std::string cur = w;
    for (std::size_t i = 1; i < w.size(); ++i) {
        std::rotate(cur.begin(), cur.begin() + 1, cur.end());
        if (cur < best) best = cur;
    }
    return best;
}

std::string necklace_of_word(const std::string& w) { return "~" + min_rotation(w); }

FormalSum necklaceify(const FormalSum& word_sum) {
    FormalSum out;
    for (const auto& [w, c] : word_sum.terms()) out.add_term(necklace_of_word(w), c);
    return out;
}

std::string bimod_key(const std::string& left, const std::string& right) {
    return (left.empty() ? "1" : left) + "|" + (right.empty() ? "1" : right);
}

std::pair<std::string, std::string> bimod_parts(const std::string& key) {
    auto bar = key.find('|');
    if (bar == std::string::npos) throw std::invalid_argument("bad bimodule key: " + key);
    return {key.substr(0, bar), key.substr(bar + 1)};
}

FormalSum bimod_product(const FormalSum& a, const FormalSum& b) {
    FormalSum out;
    for (const auto& [ka, ca] : a.terms()) {
        auto [al, ar] = bimod_parts(ka);
        for (const auto& [kb, cb] : b.terms()) {
            auto [bl, br] = bimod_parts(kb);
            out.add_term(bimod_key(concat(al, bl), concat(br, ar)), ca * cb);
        }
    }
    return out;
}

FormalSum tilde_delta_word(const std::string& w) {
    FormalSum acc = FormalSum::basis(bimod_key("1", "1"));
    if (is_unit(w)) return acc;
    for (char v : w) {
        FormalSum f;
        f.add_term(bimod_key(std::string(1, v), "1"), Scalar(1));
        f.add_term(bimod_key("1", std::string(1, v)), Scalar(-1));
        acc = bimod_product(acc, f);
    }
    return acc;
}

std::string monomial_of(const std::string& letters) {
    if (letters.empty() || is_unit(letters)) return "1";
    std::string m = letters;
    std::sort(m.begin(), m.end());
    return m;
}

FormalSum monomial_product(const FormalSum& a, const FormalSum& b) {
    FormalSum out;
    for (const auto& [ma, ca] : a.terms())
        for (const auto& [mb, cb] : b.terms()) out.add_term(monomial_of(concat(ma, mb)), ca * cb);
    return out;
}

FormalSum monomial_partial(const std::string& monomial, char letter) {
    FormalSum out;
    if (is_unit(monomial)) return out;
    long count = std::count(monomial.begin(), monomial.end(), letter);
    if (count == 0) return out;
    std::string reduced = monomial;
    reduced.erase(std::find(reduced.begin(), reduced.end(), letter));
    if (reduced.empty()) reduced = "1";
    out.add_term(reduced, Scalar(count));
    return out;
}

std::string abelianize_word(const std::string& w) { return monomial_of(w); }

}  // namespace words
}  // namespace operadcalc
