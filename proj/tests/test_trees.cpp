#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "operadcalc/trees.hpp"

using namespace operadcalc;

namespace {

const GeneratorSet kStar = GeneratorSet::parse("*:2");

// Independent count oracle for binary generator sets:
// |S| * Catalan(n) * b^n * |S|^(n+1).
long long catalan(int n) {
    long long c = 1;
    for (int i = 0; i < n; ++i) c = c * 2 * (2 * i + 1) / (i + 2);
    return c;
}
long long expected_tree_count(int set_size, int b, int n) {
    long long count = set_size * catalan(n);
    for (int i = 0; i < n; ++i) count *= b;
    for (int i = 0; i < n + 1; ++i) count *= set_size;
    return count;
}

}  // namespace

TEST_CASE("make_tree parses and round-trips") {
    LabeledTree t = make_tree(kStar, "x<-*(x,y)");
    CHECK(t.root_label == "x");
    CHECK(t.internal_count() == 1);
    CHECK(t.leaf_labels() == std::vector<std::string>{"x", "y"});
    CHECK(canonical_key(t) == "x<-*(x,y)");

    LabeledTree d = make_tree(kStar, "z<-z");
    CHECK(d.internal_count() == 0);
    CHECK(d.leaf_count() == 1);
    CHECK(d.root_label == "z");
    CHECK(canonical_key(d) == "z<-z");

    CHECK(canonical_key(make_tree(kStar, "  x <- * ( x , y ) ")) == "x<-*(x,y)");
}

TEST_CASE("make_tree rejects malformed input") {
    CHECK_THROWS(make_tree(kStar, "x<-*(x,*)"));          // arity mismatch on inner '*'
    CHECK_THROWS(make_tree(kStar, "x<-*(x)"));            // arity mismatch
    CHECK_THROWS(make_tree(kStar, "x<-o(x,y)"));          // unknown generator
    CHECK_THROWS(make_tree(kStar, "x<-*(x,y"));           // parse error
    CHECK_THROWS(make_tree(kStar, "<-x"));                // missing root
}

TEST_CASE("parse(canonical_key(t)) == t for enumerated trees") {
    for (int n = 0; n <= 2; ++n) {
        for (const auto& t : enumerate_trees({"x", "y"}, kStar, n)) {
            LabeledTree u = make_tree(kStar, canonical_key(t));
            CHECK(canonical_key(u) == canonical_key(t));
        }
    }
}

TEST_CASE("graft places subtree at the planar leaf position") {
    LabeledTree t1 = make_tree(kStar, "x<-*(x,y)");
    LabeledTree t2 = make_tree(kStar, "q<-*(y,y)");
    CHECK(canonical_key(graft(t1, 2, t2)) == "x<-*(x,*(y,y))");

    // grafting units
    LabeledTree dz = make_tree(kStar, "z<-z");
    CHECK(canonical_key(graft(dz, 1, t1)) == "z<-*(x,y)");
    LabeledTree dw = make_tree(kStar, "w<-w");
    CHECK(canonical_key(graft(t1, 1, dw)) == "x<-*(w,y)");

    CHECK_THROWS(graft(t1, 3, t2));
    CHECK_THROWS(graft(t1, 0, t2));
}

TEST_CASE("graft adds leaf and vertex counts") {
    LabeledTree t1 = make_tree(kStar, "x<-*(*(y,x),y)");
    LabeledTree t2 = make_tree(kStar, "y<-*(x,*(x,x))");
    LabeledTree g = graft(t1, 2, t2);
    CHECK(g.leaf_count() == t1.leaf_count() + t2.leaf_count() - 1);
    CHECK(g.internal_count() == t1.internal_count() + t2.internal_count());
    CHECK(g.root_label == t1.root_label);
}

TEST_CASE("graft_matching sums over matching leaves") {
    LabeledTree t1 = make_tree(kStar, "x<-*(x,y)");
    LabeledTree t2 = make_tree(kStar, "y<-*(y,y)");
    CHECK(graft_matching(t1, t2).str() == "1*x<-*(x,*(y,y))");

    LabeledTree w = make_tree(kStar, "w<-*(x,x)");
    CHECK(graft_matching(t1, w).is_zero());

    LabeledTree a = make_tree(kStar, "z<-*(z,z)");
    LabeledTree b = make_tree(kStar, "z<-*(x,y)");
    FormalSum s = graft_matching(a, b);
    CHECK(s.coeff("z<-*(*(x,y),z)") == 1);
    CHECK(s.coeff("z<-*(z,*(x,y))") == 1);
    CHECK(s.size() == 2);
}

TEST_CASE("prune cuts an internal edge; regraft recovers the tree") {
    LabeledTree t = make_tree(kStar, "x<-*(x,*(y,y))");
    REQUIRE(internal_edge_count(t) == 1);
    auto [lower, upper] = prune(t, 1);
    CHECK(canonical_key(lower) == "x<-*(x,+)");
    CHECK(canonical_key(upper) == "+<-*(y,y)");
    CHECK(classify(upper).kind == TreeKind::Disjoint);

    FormalSum regraft = graft_matching(lower, upper);
    CHECK(regraft.str() == "1*" + canonical_key(t));

    CHECK_THROWS(prune(make_tree(kStar, "x<-*(x,y)"), 1));  // too few internal vertices
    CHECK_THROWS(prune(t, 2));                              // edge out of range
}

TEST_CASE("prune edge indexing follows preorder") {
    LabeledTree t = make_tree(kStar, "x<-*(*(x,y),*(y,x))");
    REQUIRE(internal_edge_count(t) == 2);
    auto [l1, u1] = prune(t, 1);
    CHECK(canonical_key(l1) == "x<-*(+,*(y,x))");
    CHECK(canonical_key(u1) == "+<-*(x,y)");
    auto [l2, u2] = prune(t, 2);
    CHECK(canonical_key(l2) == "x<-*(*(x,y),+)");
    CHECK(canonical_key(u2) == "+<-*(y,x)");
}

TEST_CASE("prune/regraft round-trips over every internal edge") {
    for (const auto& t : enumerate_trees({"x", "y"}, kStar, 3)) {
        for (int e = 1; e <= internal_edge_count(t); ++e) {
            auto [lower, upper] = prune(t, e);
            CHECK(graft_matching(lower, upper).str() == "1*" + canonical_key(t));
            CHECK(classify(upper).kind == TreeKind::Disjoint);
        }
    }
}

TEST_CASE("classify distinguishes disjoint / pointed / special") {
    CHECK(classify(make_tree(kStar, "z<-*(x,y)")).kind == TreeKind::Disjoint);
    auto sp = classify(make_tree(kStar, "z<-*(z,y)"));
    CHECK(sp.kind == TreeKind::SpecialPointed);
    CHECK(sp.spine_length == 1);
    auto pn = classify(make_tree(kStar, "z<-*(x,*(y,z))"));
    CHECK(pn.kind == TreeKind::PointedNotSpecial);
    CHECK(pn.spine_length == 2);
    CHECK(classify(make_tree(kStar, "z<-*(z,z)")).kind == TreeKind::Other);
    auto unit = classify(make_tree(kStar, "z<-z"));
    CHECK(unit.kind == TreeKind::SpecialPointed);
    CHECK(unit.spine_length == 0);
}

TEST_CASE("classify partitions every enumerated tree") {
    for (int n = 0; n <= 3; ++n)
        for (const auto& t : enumerate_trees({"x", "y", "z"}, kStar, n)) {
            auto c = classify(t);
            bool one_of = c.kind == TreeKind::Disjoint || c.kind == TreeKind::PointedNotSpecial ||
                          c.kind == TreeKind::SpecialPointed || c.kind == TreeKind::Other;
            CHECK(one_of);
        }
}

TEST_CASE("enumeration matches the closed-form binary count") {
    for (int set_size = 1; set_size <= 3; ++set_size) {
        std::vector<std::string> labels;
        for (int i = 0; i < set_size; ++i) labels.push_back(std::string(1, char('x' + i)));
        for (int n = 0; n <= 4; ++n) {
            auto trees = enumerate_trees(labels, kStar, n);
            CHECK(static_cast<long long>(trees.size()) == expected_tree_count(set_size, 1, n));
            // uniqueness + binary leaf law + orderedness
            std::set<std::string> keys;
            for (const auto& t : trees) {
                keys.insert(canonical_key(t));
                CHECK(t.leaf_count() == t.internal_count() + 1);
            }
            CHECK(keys.size() == trees.size());
            for (std::size_t i = 1; i < trees.size(); ++i)
                CHECK(tree_less(trees[i - 1], trees[i], kStar));
        }
    }
}

TEST_CASE("enumeration with two binary generators") {
    GeneratorSet g2 = GeneratorSet::parse("*:2,m:2");
    auto trees = enumerate_trees({"x", "y"}, g2, 2);
    CHECK(static_cast<long long>(trees.size()) == expected_tree_count(2, 2, 2));
}

TEST_CASE("degenerate and filtered enumeration") {
    CHECK(enumerate_trees({"x", "y"}, kStar, 0).size() == 4);  // |S|^2
    CHECK(enumerate_trees({"z"}, kStar, 2, std::nullopt, TreeKind::Disjoint).empty());
    auto rooted = enumerate_trees({"x", "y"}, kStar, 1, std::string("x"));
    CHECK(rooted.size() == 4);
    for (const auto& t : rooted) CHECK(t.root_label == "x");
    CHECK(enumerate_trees({"x", "y"}, kStar, 2).size() == 32);
}

TEST_CASE("canonical keys are strictly ordered") {
    LabeledTree a = make_tree(kStar, "x<-*(x,y)");
    LabeledTree b = make_tree(kStar, "x<-*(y,x)");
    CHECK(tree_less(a, b, kStar));
    CHECK(!tree_less(b, a, kStar));
    CHECK(canonical_key(a) < canonical_key(b));
}

TEST_CASE("general arity generators enumerate and classify") {
    GeneratorSet g = GeneratorSet::parse("t:3");
    LabeledTree t = make_tree(g, "x<-t(x,y,x)");
    CHECK(t.internal_count() == 1);
    CHECK(t.leaf_count() == 3);
    CHECK(classify(t).kind == TreeKind::Other);
    // shapes with n internal ternary vertices have 2n+1 leaves
    auto trees = enumerate_trees({"x"}, g, 2);
    for (const auto& u : trees) CHECK(u.leaf_count() == 5);
    // 2 shapes (which slot carries the second vertex: 3) -> 3 shapes, 1 label
    CHECK(trees.size() == 3);
}

TEST_CASE("reserved labels and label validation") {
    CHECK(is_reserved_label("+"));
    CHECK(is_reserved_label("+1"));
    CHECK(is_reserved_label("+12"));
    CHECK(!is_reserved_label("x"));
    CHECK(!is_reserved_label("+x"));
    CHECK_THROWS(validate_labels({"x", "+"}));
    CHECK_THROWS(validate_labels({"x", "x"}));
    CHECK_THROWS(validate_labels({}));
    CHECK_NOTHROW(validate_labels({"x", "y", "z"}));
}

TEST_CASE("generator set validation") {
    CHECK_THROWS(GeneratorSet::parse("*:1"));
    CHECK_THROWS(GeneratorSet::parse("*:2,*:3"));
    CHECK_THROWS(GeneratorSet::parse("*"));
    CHECK(GeneratorSet::parse("*:2").binary());
    CHECK(!GeneratorSet::parse("*:2,t:3").binary());
}
