#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "operadcalc/classical.hpp"
#include "operadcalc/divergence.hpp"

using namespace operadcalc;
using namespace operadcalc::words;

namespace {

const ClassicalContext kLie2{OperadTag::Lie, "xy"};
const ClassicalContext kAss2{OperadTag::Ass, "xy"};
const ClassicalContext kCom2{OperadTag::Com, "xy"};

ClassicalDerivation one_value(const ClassicalContext& ctx, char slot, const std::string& key,
                              Scalar c = Scalar(1)) {
    std::map<char, FormalSum> v;
    v[slot] = FormalSum::basis(key, c);
    return cder(ctx, v);
}

// mobius-free Witt count for small degrees over k letters
long long witt(int k, int n) {
    // (1/n) sum_{d|n} mu(d) k^{n/d}
    auto mu = [](int d) {
        switch (d) {
            case 1: return 1;
            case 2: return -1;
            case 3: return -1;
            case 4: return 0;
            case 5: return -1;
            case 6: return 1;
            default: throw std::logic_error("witt helper limited to n <= 6");
        }
    };
    long long sum = 0;
    for (int d = 1; d <= n; ++d) {
        if (n % d) continue;
        long long p = 1;
        for (int i = 0; i < n / d; ++i) p *= k;
        sum += mu(d) * p;
    }
    return sum / n;
}

}  // namespace

TEST_CASE("lyndon words and Witt counts") {
    CHECK(lyndon_words("xy", 2) == std::vector<std::string>{"xy"});
    CHECK(lyndon_words("xy", 3).size() == 2);  // xxy, xyy
    for (int n = 1; n <= 5; ++n) {
        CHECK(static_cast<long long>(lyndon_words("xy", n).size()) == witt(2, n));
        CHECK(static_cast<long long>(lyndon_words("xyz", n).size()) == witt(3, n));
    }
    for (const auto& w : lyndon_words("xyz", 4)) CHECK(is_lyndon(w));
}

TEST_CASE("standard bracketing expands triangularly") {
    for (int n = 1; n <= 5; ++n) {
        for (const auto& w : lyndon_words("xyz", n)) {
            FormalSum e = expand_bracket(standard_bracketing(w));
            CHECK(e.coeff(w) == 1);
            // every other word of the expansion is lexicographically larger
            for (const auto& [u, c] : e.terms()) {
                CHECK(u.size() == w.size());
                CHECK(u >= w);
            }
        }
    }
}

TEST_CASE("lie normal form: antisymmetry, Jacobi, idempotence") {
    CHECK(lie_normal_form("[x,x]").is_zero());
    CHECK(lie_normal_form("[x,y]").str() == "1*[x,y]");
    // [y,x] = -[x,y]
    CHECK(lie_normal_form("[y,x]").coeff("[x,y]") == -1);
    // Jacobi: [x,[y,z]] + [y,[z,x]] + [z,[x,y]] = 0
    FormalSum j = lie_normal_form("[x,[y,z]]") + lie_normal_form("[y,[z,x]]") +
                  lie_normal_form("[z,[x,y]]");
    CHECK(j.is_zero());
    // idempotent on basis keys
    for (const auto& w : lyndon_words("xy", 4)) {
        FormalSum nf = lie_normal_form(lyndon_key(w));
        CHECK(nf.str() == "1*" + lyndon_key(w));
    }
    // non-primitive input is rejected by lyndonize
    FormalSum notlie = FormalSum::basis("xy");
    CHECK_THROWS(lyndonize(notlie));
}

TEST_CASE("extend_derivation: Leibniz on words, brackets, monomials") {
    // d(x)=xy on the tensor algebra: d(xx) = (xy)x + x(xy)
    ClassicalDerivation d = one_value(kAss2, 'x', "xy");
    FormalSum dxx = extend_derivation(d, FormalSum::basis("xx"));
    CHECK(dxx.coeff("xyx") == 1);
    CHECK(dxx.coeff("xxy") == 1);
    CHECK(dxx.size() == 2);

    // d(x)=[x,y] on Lie: d([x,y]) = [[x,y],y]
    ClassicalDerivation dl = one_value(kLie2, 'x', "[x,y]");
    FormalSum img = extend_derivation(dl, FormalSum::basis("[x,y]"));
    CHECK(img == lie_normal_form("[[x,y],y]"));

    // zero derivation kills everything
    ClassicalDerivation z = cder_zero(kAss2);
    CHECK(extend_derivation(z, FormalSum::basis("xyx")).is_zero());

    // Com Leibniz: d(x)=y on x^2 gives 2xy
    ClassicalDerivation dc = one_value(kCom2, 'x', "y");
    FormalSum m = extend_derivation(dc, FormalSum::basis("xx"));
    CHECK(m.str() == "2*xy");
}

TEST_CASE("satoh trace: degree zero is the matrix trace") {
    // d = E_11 on rank 2: x |-> x, y |-> 0
    ClassicalDerivation d = one_value(kLie2, 'x', "x");
    CHECK(satoh_trace(d).str() == "1*~1");
    ClassicalDerivation off = one_value(kLie2, 'x', "y");
    CHECK(satoh_trace(off).is_zero());
    // full trace of a degree-0 matrix
    auto e11 = one_value(kLie2, 'x', "x", Scalar(3));
    auto e22 = one_value(kLie2, 'y', "y", Scalar(5));
    CHECK(satoh_trace(add(e11, e22)).coeff("~1") == 8);
}

TEST_CASE("satoh trace frozen values (sign fixed by the free-operad oracle)") {
    // d: x -> [x,y], y -> 0
    ClassicalDerivation d = one_value(kLie2, 'x', "[x,y]");
    CHECK(satoh_trace(d).str() == "-1*~y");
    // d: y -> [x,y]
    ClassicalDerivation e = one_value(kLie2, 'y', "[x,y]");
    CHECK(satoh_trace(e).str() == "1*~x");
    // d: x -> [y,[y,x]]: contributes in trace degree 2
    std::map<char, FormalSum> vals;
    vals['x'] = lie_normal_form("[y,[y,x]]");
    ClassicalDerivation f = cder(kLie2, vals);
    CHECK(satoh_trace(f).str() == "1*~yy");
}

TEST_CASE("double divergence frozen splits") {
    BimodQuotient q("xy");
    ClassicalDerivation d = one_value(kAss2, 'x', "xy");
    CHECK(double_divergence(d, q).str() == "1*1|y");
    ClassicalDerivation e = one_value(kAss2, 'x', "yx");
    CHECK(double_divergence(e, q).str() == "1*y|1");
    // degree-0 identity on rank 2 -> 2 * unit class
    auto id2 = add(one_value(kAss2, 'x', "x"), one_value(kAss2, 'y', "y"));
    CHECK(double_divergence(id2, q).str() == "2*1|1");
}

TEST_CASE("com divergence is the formal partial sum") {
    ClassicalContext c1{OperadTag::Com, "x"};
    ClassicalDerivation d = one_value(c1, 'x', "xx");
    CHECK(com_divergence(d).str() == "2*x");
    ClassicalDerivation e = one_value(kCom2, 'x', "yy");
    CHECK(com_divergence(e).is_zero());
    auto f = add(one_value(kCom2, 'x', "xy"), one_value(kCom2, 'y', "xy"));
    FormalSum div = com_divergence(f);
    CHECK(div.coeff("y") == 1);
    CHECK(div.coeff("x") == 1);
}

TEST_CASE("tilde_delta on letters and words") {
    FormalSum dx = tilde_delta("x");
    CHECK(dx.coeff("x|1") == 1);
    CHECK(dx.coeff("1|x") == -1);
    FormalSum dxy = tilde_delta("xy");
    CHECK(dxy.coeff("xy|1") == 1);
    CHECK(dxy.coeff("x|y") == -1);
    CHECK(dxy.coeff("y|x") == -1);
    CHECK(dxy.coeff("1|yx") == 1);
    CHECK(dxy.size() == 4);
    CHECK(tilde_delta("1").str() == "1*1|1");
}

TEST_CASE("lie_to_ass and ass_to_com") {
    ClassicalDerivation d = one_value(kLie2, 'x', "[x,y]");
    ClassicalDerivation a = lie_to_ass(d);
    CHECK(a.ctx.tag == OperadTag::Ass);
    FormalSum ax = a.value_of('x');
    CHECK(ax.coeff("xy") == 1);
    CHECK(ax.coeff("yx") == -1);
    // grading preserved
    for (const auto& [k, c] : ax.terms()) CHECK(word_length(k) == 2);
    // abelianize(xy - yx) = 0
    ClassicalDerivation cm = ass_to_com(a);
    CHECK(is_zero(cm));
}

TEST_CASE("classical prelie matches composition of extensions") {
    ClassicalDerivation d = one_value(kAss2, 'x', "xy");
    ClassicalDerivation e = one_value(kAss2, 'y', "xx");
    ClassicalDerivation de = prelie_classical(d, e);
    CHECK(de.value_of('x') == extend_derivation(e, FormalSum::basis("xy")));
    // bracket antisymmetry
    CHECK(is_zero(bracket_classical(d, d)));
}

TEST_CASE("oracle agreement: satoh trace vs free-operad divergence via fo->Lie") {
    GeneratorSet star = GeneratorSet::parse("*:2");
    Context ctx{{"x", "y"}, star};
    int checked = 0;
    for (int deg = 1; deg <= 2; ++deg) {
        for (const auto& t : enumerate_trees(ctx.labels, star, deg)) {
            Derivation dt = der_tree(ctx, t);
            ClassicalDerivation cd = transport_derivation(OperadTag::Lie, dt);
            FormalSum direct = satoh_trace(cd);
            FormalSum transported = transport_trace_lie(div(dt));
            ++checked;
            if (direct != transported) {
                CAPTURE(canonical_key(t));
                REQUIRE(direct == transported);
            }
        }
    }
    CHECK(checked == 8 + 32);
}

TEST_CASE("oracle agreement: double divergence vs free-operad divergence via fo->Ass") {
    GeneratorSet star = GeneratorSet::parse("*:2");
    Context ctx{{"x", "y"}, star};
    BimodQuotient q("xy");
    int checked = 0;
    for (int deg = 1; deg <= 2; ++deg) {
        for (const auto& t : enumerate_trees(ctx.labels, star, deg)) {
            Derivation dt = der_tree(ctx, t);
            ClassicalDerivation cd = transport_derivation(OperadTag::Ass, dt);
            FormalSum direct = double_divergence(cd, q);
            FormalSum transported = transport_trace_ass(div(dt), q);
            ++checked;
            if (!q.equal(direct, transported)) {
                CAPTURE(canonical_key(t));
                REQUIRE(q.equal(direct, transported));
            }
        }
    }
    CHECK(checked == 8 + 32);
}

TEST_CASE("compatibility square: Satoh trace -> double divergence via tilde_delta") {
    int checked = 0;
    for (int rank = 2; rank <= 3; ++rank) {
        std::string alphabet = standard_alphabet(rank);
        ClassicalContext lie{OperadTag::Lie, alphabet};
        BimodQuotient q(alphabet);
        for (int deg = 1; deg <= 3; ++deg) {
            for (char slot : alphabet) {
                for (const auto& w : lyndon_words(alphabet, deg + 1)) {
                    ClassicalDerivation d = one_value(lie, slot, lyndon_key(w));
                    FormalSum lhs = tilde_delta_trace(satoh_trace(d), q);
                    FormalSum rhs = double_divergence(lie_to_ass(d), q);
                    ++checked;
                    if (!q.equal(lhs, rhs)) {
                        CAPTURE(rank);
                        CAPTURE(slot);
                        CAPTURE(w);
                        REQUIRE(q.equal(lhs, rhs));
                    }
                }
            }
        }
    }
    CHECK(checked == 2 * (1 + 2 + 3) + 3 * (3 + 8 + 18));
}

TEST_CASE("compatibility square: double divergence -> com divergence") {
    int checked = 0;
    for (int rank = 2; rank <= 3; ++rank) {
        std::string alphabet = standard_alphabet(rank);
        ClassicalContext ass{OperadTag::Ass, alphabet};
        for (int deg = 1; deg <= 3; ++deg) {
            for (char slot : alphabet) {
                for (const auto& w : classical_value_keys(ass, deg + 1)) {
                    ClassicalDerivation d = one_value(ass, slot, w);
                    FormalSum lhs = com_divergence(ass_to_com(d));
                    FormalSum rhs = abelianize_bimod(double_divergence_raw(d));
                    ++checked;
                    if (lhs != rhs) {
                        CAPTURE(rank);
                        CAPTURE(slot);
                        CAPTURE(w);
                        REQUIRE(lhs == rhs);
                    }
                }
            }
        }
    }
    // rank r contributes r * (r^2 + r^3 + r^4) pairs
    CHECK(checked == 2 * (4 + 8 + 16) + 3 * (9 + 27 + 81));
}

TEST_CASE("classical 1-cocycle: seeded random pairs in each realization") {
    std::mt19937_64 rng(4242);
    for (auto tag : {OperadTag::Lie, OperadTag::Ass, OperadTag::Com}) {
        for (int rank = 1; rank <= 2; ++rank) {
            ClassicalContext ctx{tag, standard_alphabet(rank)};
            BimodQuotient q(ctx.alphabet);
            for (int trial = 0; trial < 12; ++trial) {
                auto random_der = [&](int degree) {
                    auto keys = classical_value_keys(ctx, degree + 1);
                    std::map<char, FormalSum> vals;
                    for (char slot : ctx.alphabet)
                        for (const auto& k : keys) {
                            long long c = static_cast<long long>(rng() % 5) - 2;
                            if (c) vals[slot].add_term(k, Scalar(static_cast<long>(c)));
                        }
                    for (auto it = vals.begin(); it != vals.end();) {
                        if (it->second.is_zero())
                            it = vals.erase(it);
                        else
                            ++it;
                    }
                    return ClassicalDerivation{ctx, vals};
                };
                int da = 1 + static_cast<int>(rng() % 2);
                int db = 1 + static_cast<int>(rng() % 2);
                if (tag == OperadTag::Lie && rank == 1) continue;  // Lie(x) vanishes above deg 1
                ClassicalDerivation d = random_der(da);
                ClassicalDerivation e = random_der(db);
                FormalSum defect = classical_cocycle_defect(d, e, &q);
                if (!defect.is_zero()) {
                    CAPTURE(to_string(tag));
                    CAPTURE(rank);
                    REQUIRE(defect.is_zero());
                }
            }
        }
    }
}

TEST_CASE("satoh trace is 1-surjective: witnesses from pointed representatives") {
    // every cyclic word over the alphabet is the trace of a derivation over
    // the alphabet extended by one fresh letter
    ClassicalContext base{OperadTag::Lie, "xy"};
    ClassicalContext ext = extend_alphabet(base, 1);
    char fresh = ext.alphabet.back();
    for (int len = 1; len <= 3; ++len) {
        std::set<std::string> classes;
        for (const auto& w : classical_value_keys(ClassicalContext{OperadTag::Ass, "xy"}, len))
            classes.insert(min_rotation(w));
        for (const auto& w : classes) {
            // slot value [w1,[w2,...,[wn, fresh]...]: contracting the fresh
            // letter recovers the word
            std::string expr;
            for (char c : w) expr += "[" + std::string(1, c) + ",";
            expr += std::string(1, fresh);
            expr += std::string(w.size(), ']');
            std::map<char, FormalSum> vals;
            vals[fresh] = lie_normal_form(expr);
            ClassicalDerivation d = cder(ext, vals);
            FormalSum img = satoh_trace(d);
            CHECK(img.coeff("~" + w) == 1);
            CHECK(img.size() == 1);
        }
    }
}

TEST_CASE("classical derivation bases") {
    // Lie degree 1 over rank 2: 2 slots x 1 Lyndon word of length 2
    CHECK(classical_der_basis(kLie2, 1).size() == 2);
    // Ass degree 1: 2 slots x 4 words
    CHECK(classical_der_basis(kAss2, 1).size() == 8);
    // Com degree 1: 2 slots x 3 monomials (xx, xy, yy)
    CHECK(classical_der_basis(kCom2, 1).size() == 6);
    CHECK(standard_alphabet(3) == "xyz");
    CHECK(extend_alphabet(kLie2, 2).alphabet == "xyab");
}
