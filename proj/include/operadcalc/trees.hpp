#pragma once

#include <optional>
#include <string>
#include <vector>

#include "operadcalc/formal_sum.hpp"

namespace operadcalc {

/// The graded set of operation generators; every arity is at least 2
/// (reduced: no nullary or unary generators beyond the implicit unit).
class GeneratorSet {
public:
    struct Gen {
        std::string name;
        int arity;
    };

    GeneratorSet() = default;
    explicit GeneratorSet(std::vector<Gen> gens);

    /// Parses "name:arity[,name:arity...]", e.g. "*:2".
    static GeneratorSet parse(const std::string& text);

    const std::vector<Gen>& gens() const { return gens_; }
    int arity_of(const std::string& name) const;       // -1 when unknown
    int index_of(const std::string& name) const;       // -1 when unknown
    bool binary() const;                                // all arities == 2
    std::size_t size() const { return gens_.size(); }
    std::string str() const;

    bool operator==(const GeneratorSet& o) const;

private:
    std::vector<Gen> gens_;
};

/// One node of a rooted planar tree: a leaf carrying a label, or an
/// internal vertex carrying a generator name with arity-many children.
struct TreeNode {
    std::string gen;                 // empty for a leaf
    std::string label;               // leaf label when leaf
    std::vector<TreeNode> children;  // size == arity when internal

    bool is_leaf() const { return gen.empty(); }
};

/// An S-labelled rooted planar tree over a generator set: the basis
/// element of derivation modules. Immutable value type.
struct LabeledTree {
    std::string root_label;
    TreeNode body;

    int internal_count() const;
    int leaf_count() const;
    std::vector<std::string> leaf_labels() const;  // planar order
    bool uses_label(const std::string& s) const;   // as root or leaf
};

enum class TreeKind { Disjoint, PointedNotSpecial, SpecialPointed, Other };

struct TreeClass {
    TreeKind kind;
    int spine_length = -1;  // internal vertices on the root-to-marked-leaf path, when pointed
};

std::string to_string(TreeKind k);

/// Parses the grammar `LABEL "<-" NODE`, `NODE := LABEL | GEN "(" NODE ("," NODE)* ")"`;
/// names match [A-Za-z0-9_+*]+ and whitespace is insignificant.
LabeledTree make_tree(const GeneratorSet& gens, const std::string& text);

/// Injective serialization: the grammar above, preorder, no whitespace.
std::string canonical_key(const LabeledTree& t);

/// Total order: root label first, then preorder with generators compared by
/// declaration index and leaves before internal vertices.
bool tree_less(const LabeledTree& a, const LabeledTree& b, const GeneratorSet& gens);

/// Grafts the root of t2 onto the given leaf of t1 (1-based planar index);
/// the grafted leaf's label is discarded and the root label stays t1's.
LabeledTree graft(const LabeledTree& t1, int leaf_index, const LabeledTree& t2);

/// Sum over the leaves of t1 labelled root(t2) of the corresponding grafts;
/// the empty match set yields the zero sum. This is the tree-level preLie
/// operation.
FormalSum graft_matching(const LabeledTree& t1, const LabeledTree& t2);

/// Number of internal edges (edges joining two internal vertices).
int internal_edge_count(const LabeledTree& t);

/// Cuts the k-th internal edge (1-based, preorder of the upper vertex).
/// The lower part keeps the original root and gains a leaf labelled "+";
/// the upper part is rooted at "+". graft_matching(lower, upper) == t.
std::pair<LabeledTree, LabeledTree> prune(const LabeledTree& t, int edge_index);

/// Disjoint / pointed / special pointed classification of Def-style classes:
/// the root label absent from the leaves, present exactly once (with the
/// spine through at most one internal vertex for special), or otherwise.
TreeClass classify(const LabeledTree& t);

/// All trees with exactly n_internal internal vertices over the label set,
/// each exactly once, in canonical order. Optional filters restrict the
/// root label and the classification.
std::vector<LabeledTree> enumerate_trees(const std::vector<std::string>& labels,
                                         const GeneratorSet& gens, int n_internal,
                                         const std::optional<std::string>& root_filter = std::nullopt,
                                         const std::optional<TreeKind>& class_filter = std::nullopt);

/// Degree (= internal vertex count) read off a canonical key.
int degree_of_key(const std::string& key);

/// Root label read off a canonical key.
std::string root_of_key(const std::string& key);

/// True for labels reserved for pruning and stabilization: "+", "+1", "+2", ...
bool is_reserved_label(const std::string& s);

/// Validates a user label set: nonempty, unique, no reserved labels.
void validate_labels(const std::vector<std::string>& labels);

}  // namespace operadcalc
