#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "operadcalc/subspace.hpp"
#include "operadcalc/trees.hpp"

using namespace operadcalc;

TEST_CASE("formal sum arithmetic is exact") {
    FormalSum a = FormalSum::basis("t", Scalar(1));
    FormalSum zero;
    CHECK(a + zero == a);
    CHECK((a + Scalar(-1) * a).is_zero());
    FormalSum two_t = FormalSum::basis("t", Scalar(2));
    CHECK(Scalar(1, 2) * two_t == a);
    FormalSum third = FormalSum::basis("u", Scalar(1, 3));
    FormalSum sixth = FormalSum::basis("u", Scalar(1, 6));
    CHECK((third + sixth).coeff("u") == Scalar(1, 2));
}

TEST_CASE("formal sum text form round-trips") {
    FormalSum s;
    s.add_term("x<-*(x,y)", Scalar(1));
    s.add_term("x<-*(y,x)", Scalar(-2, 3));
    std::string text = s.str();
    CHECK(text == "1*x<-*(x,y) + -2/3*x<-*(y,x)");
    CHECK(FormalSum::parse(text) == s);
    CHECK(FormalSum::parse("0").is_zero());
    CHECK(FormalSum::parse("x<-*(x,y)").coeff("x<-*(x,y)") == 1);
    // keys containing '+' labels parse back
    FormalSum p = FormalSum::basis("+<-*(+1,x)", Scalar(5, 7));
    CHECK(FormalSum::parse(p.str()) == p);
}

TEST_CASE("span rank and dependence") {
    std::vector<std::string> ambient{"a", "b", "c"};
    FormalSum v;
    v.add_term("a", Scalar(1));
    v.add_term("b", Scalar(2));
    auto s1 = Subspace::span(ambient, {v, Scalar(2) * v});
    CHECK(s1.rank() == 1);
    auto s0 = Subspace::span(ambient, {});
    CHECK(s0.rank() == 0);

    // the 2 degree-2 trees over S={x} are independent basis elements
    GeneratorSet star = GeneratorSet::parse("*:2");
    auto trees = enumerate_trees({"x"}, star, 2);
    REQUIRE(trees.size() == 2);
    std::vector<std::string> amb;
    std::vector<FormalSum> vecs;
    for (const auto& t : trees) {
        amb.push_back(canonical_key(t));
        vecs.push_back(FormalSum::basis(canonical_key(t)));
    }
    CHECK(Subspace::span(amb, vecs).rank() == 2);
}

TEST_CASE("membership and quotient dimension") {
    std::vector<std::string> ambient{"a", "b", "c"};
    FormalSum v;
    v.add_term("a", Scalar(1));
    v.add_term("b", Scalar(-1, 2));
    FormalSum w = FormalSum::basis("c");
    auto s = Subspace::span(ambient, {v});
    CHECK(s.contains(Scalar(3) * v));
    CHECK(!s.contains(w));
    CHECK(s.contains(FormalSum{}));
    CHECK(s.quotient_dim() == 2);

    // rank(span(X u {v})) == rank(span X) iff contains
    auto s2 = Subspace::span(ambient, {v, w});
    CHECK(s2.rank() == 2);
    auto s3 = Subspace::span(ambient, {v, Scalar(7) * v});
    CHECK(s3.rank() == 1);
}

TEST_CASE("span is idempotent and rows are reduced echelon") {
    std::vector<std::string> ambient{"a", "b", "c", "d"};
    std::vector<FormalSum> vecs;
    FormalSum v1, v2, v3;
    v1.add_term("a", Scalar(2));
    v1.add_term("b", Scalar(4));
    v1.add_term("c", Scalar(-2));
    v2.add_term("b", Scalar(1));
    v2.add_term("d", Scalar(3));
    v3 = v1 + Scalar(5) * v2;
    auto s = Subspace::span(ambient, {v1, v2, v3});
    CHECK(s.rank() == 2);
    auto rows = s.basis();
    auto s2 = Subspace::span(ambient, rows);
    CHECK(s2.rank() == 2);
    for (const auto& r : rows) CHECK(s.contains(r));
    // reduced echelon: each row's pivot is absent from the other rows
    REQUIRE(rows.size() == 2);
    const std::string piv0 = rows[0].terms().begin()->first;
    CHECK(rows[0].terms().begin()->second == 1);
    CHECK(rows[1].coeff(piv0) == 0);
}

TEST_CASE("reduce gives a canonical residual") {
    std::vector<std::string> ambient{"a", "b", "c"};
    FormalSum v;
    v.add_term("a", Scalar(1));
    v.add_term("b", Scalar(1));
    auto s = Subspace::span(ambient, {v});
    FormalSum u;
    u.add_term("a", Scalar(1));
    u.add_term("c", Scalar(1));
    FormalSum r = s.reduce(u);
    CHECK(r.coeff("a") == 0);
    CHECK(!r.is_zero());
    CHECK(s.reduce(u + v) == r);
}

TEST_CASE("nullspace of vectors") {
    std::vector<std::string> ambient{"a", "b"};
    FormalSum v1, v2, v3;
    v1.add_term("a", Scalar(1));
    v2.add_term("b", Scalar(1));
    v3.add_term("a", Scalar(1));
    v3.add_term("b", Scalar(1));
    auto ker = nullspace_of_vectors(ambient, {v1, v2, v3});
    REQUIRE(ker.size() == 1);
    // c1*v1 + c2*v2 + c3*v3 = 0
    FormalSum check = ker[0][0] * v1 + ker[0][1] * v2 + ker[0][2] * v3;
    CHECK(check.is_zero());
    auto none = nullspace_of_vectors(ambient, {v1, v2});
    CHECK(none.empty());
}

TEST_CASE("builder insert reports rank growth") {
    SpanBuilder b({"a", "b", "c"});
    FormalSum v1 = FormalSum::basis("a");
    FormalSum v2 = FormalSum::basis("b");
    CHECK(b.insert(v1));
    CHECK(!b.insert(v1));
    CHECK(b.insert(v2));
    CHECK(b.rank() == 2);
    CHECK(!b.full());
    CHECK(b.insert(FormalSum::basis("c")));
    CHECK(b.full());
    CHECK_THROWS(b.insert(FormalSum::basis("zzz")));
}
