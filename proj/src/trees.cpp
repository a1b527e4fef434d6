#include "operadcalc/trees.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <stdexcept>

namespace operadcalc {

namespace {

bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '+' || c == '*';
}

}  // namespace

GeneratorSet::GeneratorSet(std::vector<Gen> gens) : gens_(std::move(gens)) {
    for (std::size_t i = 0; i < gens_.size(); ++i) {
        if (gens_[i].name.empty()) throw std::invalid_argument("generator with empty name");
        for (char c : gens_[i].name)
            if (!is_name_char(c)) throw std::invalid_argument("bad generator name: " + gens_[i].name);
        if (gens_[i].arity < 2)
            throw std::invalid_argument("generator arity must be >= 2: " + gens_[i].name);
        for (std::size_t j = 0; j < i; ++j)
            if (gens_[j].name == gens_[i].name)
                throw std::invalid_argument("duplicate generator name: " + gens_[i].name);
    }
}

GeneratorSet GeneratorSet::parse(const std::string& text) {
    std::vector<Gen> gens;
    std::string cur;
    auto flush = [&](const std::string& item) {
        if (item.empty()) throw std::invalid_argument("empty generator declaration");
        auto colon = item.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("generator declaration needs name:arity: " + item);
        std::string name = item.substr(0, colon);
        std::string ar = item.substr(colon + 1);
        if (ar.empty() || !std::all_of(ar.begin(), ar.end(), [](char c) {
                return std::isdigit(static_cast<unsigned char>(c));
            }))
            throw std::invalid_argument("bad arity in generator declaration: " + item);
        gens.push_back(Gen{name, std::stoi(ar)});
    };
    std::size_t start = 0;
    std::string stripped;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) stripped.push_back(c);
    while (start <= stripped.size()) {
        auto comma = stripped.find(',', start);
        if (comma == std::string::npos) {
            flush(stripped.substr(start));
            break;
        }
        flush(stripped.substr(start, comma - start));
        start = comma + 1;
    }
    return GeneratorSet(std::move(gens));
}

int GeneratorSet::arity_of(const std::string& name) const {
    for (const auto& g : gens_)
        if (g.name == name) return g.arity;
    return -1;
}

int GeneratorSet::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < gens_.size(); ++i)
        if (gens_[i].name == name) return static_cast<int>(i);
    return -1;
}

bool GeneratorSet::binary() const {
    for (const auto& g : gens_)
        if (g.arity != 2) return false;
    return true;
}

std::string GeneratorSet::str() const {
    std::string out;
    for (std::size_t i = 0; i < gens_.size(); ++i) {
        if (i) out += ',';
        out += gens_[i].name + ":" + std::to_string(gens_[i].arity);
    }
    return out;
}

bool GeneratorSet::operator==(const GeneratorSet& o) const {
    if (gens_.size() != o.gens_.size()) return false;
    for (std::size_t i = 0; i < gens_.size(); ++i)
        if (gens_[i].name != o.gens_[i].name || gens_[i].arity != o.gens_[i].arity) return false;
    return true;
}

namespace {

int internal_count_node(const TreeNode& n) {
    if (n.is_leaf()) return 0;
    int c = 1;
    for (const auto& ch : n.children) c += internal_count_node(ch);
    return c;
}

int leaf_count_node(const TreeNode& n) {
    if (n.is_leaf()) return 1;
    int c = 0;
    for (const auto& ch : n.children) c += leaf_count_node(ch);
    return c;
}

void collect_leaves(const TreeNode& n, std::vector<std::string>& out) {
    if (n.is_leaf()) {
        out.push_back(n.label);
        return;
    }
    for (const auto& ch : n.children) collect_leaves(ch, out);
}

void node_key(const TreeNode& n, std::string& out) {
    if (n.is_leaf()) {
        out += n.label;
        return;
    }
    out += n.gen;
    out += '(';
    for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i) out += ',';
        node_key(n.children[i], out);
    }
    out += ')';
}

// -1 / 0 / +1 comparison: leaves before internal vertices, leaf labels
// lexicographic, generators by declaration index, children pairwise.
int node_cmp(const TreeNode& a, const TreeNode& b, const GeneratorSet& gens) {
    if (a.is_leaf() != b.is_leaf()) return a.is_leaf() ? -1 : 1;
    if (a.is_leaf()) return a.label.compare(b.label) < 0 ? -1 : (a.label == b.label ? 0 : 1);
    int ga = gens.index_of(a.gen), gb = gens.index_of(b.gen);
    if (ga != gb) return ga < gb ? -1 : 1;
    for (std::size_t i = 0; i < a.children.size(); ++i) {
        int c = node_cmp(a.children[i], b.children[i], gens);
        if (c != 0) return c;
    }
    return 0;
}

struct Parser {
    const GeneratorSet& gens;
    std::string s;  // whitespace stripped
    std::size_t pos = 0;

    Parser(const GeneratorSet& g, const std::string& text) : gens(g) {
        for (char c : text)
            if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw std::invalid_argument("tree parse error at position " + std::to_string(pos) + ": " +
                                    what + " in '" + s + "'");
    }

    std::string name() {
        std::size_t start = pos;
        while (pos < s.size() && is_name_char(s[pos])) ++pos;
        if (pos == start) fail("expected a name");
        return s.substr(start, pos - start);
    }

    TreeNode node() {
        std::string n = name();
        if (pos < s.size() && s[pos] == '(') {
            int arity = gens.arity_of(n);
            if (arity < 0) fail("unknown generator '" + n + "'");
            ++pos;
            TreeNode out;
            out.gen = n;
            out.children.push_back(node());
            while (pos < s.size() && s[pos] == ',') {
                ++pos;
                out.children.push_back(node());
            }
            if (pos >= s.size() || s[pos] != ')') fail("expected ')'");
            ++pos;
            if (static_cast<int>(out.children.size()) != arity)
                fail("arity mismatch for '" + n + "': got " + std::to_string(out.children.size()) +
                     ", need " + std::to_string(arity));
            return out;
        }
        if (gens.arity_of(n) >= 0)
            fail("arity mismatch: generator '" + n + "' used without arguments");
        TreeNode out;
        out.label = n;
        return out;
    }

    LabeledTree tree() {
        LabeledTree t;
        t.root_label = name();
        if (pos + 1 >= s.size() || s[pos] != '<' || s[pos + 1] != '-') fail("expected '<-'");
        pos += 2;
        t.body = node();
        if (pos != s.size()) fail("trailing input");
        return t;
    }
};

}  // namespace

int LabeledTree::internal_count() const { return internal_count_node(body); }
int LabeledTree::leaf_count() const { return leaf_count_node(body); }

std::vector<std::string> LabeledTree::leaf_labels() const {
    std::vector<std::string> out;
    collect_leaves(body, out);
    return out;
}

bool LabeledTree::uses_label(const std::string& s) const {
    if (root_label == s) return true;
    for (const auto& l : leaf_labels())
        if (l == s) return true;
    return false;
}

std::string to_string(TreeKind k) {
    switch (k) {
        case TreeKind::Disjoint: return "disjoint";
        case TreeKind::PointedNotSpecial: return "pointed";
        case TreeKind::SpecialPointed: return "special-pointed";
        case TreeKind::Other: return "other";
    }
    return "?";
}

LabeledTree make_tree(const GeneratorSet& gens, const std::string& text) {
    Parser p(gens, text);
    return p.tree();
}

std::string canonical_key(const LabeledTree& t) {
    std::string out = t.root_label;
    out += "<-";
    node_key(t.body, out);
    return out;
}

bool tree_less(const LabeledTree& a, const LabeledTree& b, const GeneratorSet& gens) {
    int c = a.root_label.compare(b.root_label);
    if (c != 0) return c < 0;
    return node_cmp(a.body, b.body, gens) < 0;
}

namespace {

// Replaces the k-th leaf (1-based counter decremented in place) by `repl`.
bool replace_leaf(TreeNode& n, int& k, const TreeNode& repl) {
    if (n.is_leaf()) {
        if (--k == 0) {
            n = repl;
            return true;
        }
        return false;
    }
    for (auto& ch : n.children)
        if (replace_leaf(ch, k, repl)) return true;
    return false;
}

}  // namespace

LabeledTree graft(const LabeledTree& t1, int leaf_index, const LabeledTree& t2) {
    if (leaf_index < 1 || leaf_index > t1.leaf_count())
        throw std::out_of_range("graft: leaf index " + std::to_string(leaf_index) +
                                " out of range (tree has " + std::to_string(t1.leaf_count()) +
                                " leaves)");
    LabeledTree out = t1;
    int k = leaf_index;
    replace_leaf(out.body, k, t2.body);
    return out;
}

FormalSum graft_matching(const LabeledTree& t1, const LabeledTree& t2) {
    FormalSum out;
    const auto leaves = t1.leaf_labels();
    for (std::size_t i = 0; i < leaves.size(); ++i)
        if (leaves[i] == t2.root_label)
            out.add_term(canonical_key(graft(t1, static_cast<int>(i) + 1, t2)), Scalar(1));
    return out;
}

namespace {

// Preorder walk over internal vertices; the k-th internal edge is the edge
// above the k-th non-topmost internal vertex whose parent is internal.
// Returns the upper (child-side) vertex of the k-th internal edge.
TreeNode* find_internal_edge(TreeNode& n, int& k) {
    for (auto& ch : n.children) {
        if (ch.is_leaf()) continue;
        if (--k == 0) return &ch;
        if (TreeNode* r = find_internal_edge(ch, k)) return r;
    }
    return nullptr;
}

}  // namespace

int internal_edge_count(const LabeledTree& t) {
    int n = t.internal_count();
    return n > 0 ? n - 1 : 0;
}

std::pair<LabeledTree, LabeledTree> prune(const LabeledTree& t, int edge_index) {
    if (t.internal_count() < 2)
        throw std::invalid_argument("prune: tree needs at least 2 internal vertices");
    if (edge_index < 1 || edge_index > internal_edge_count(t))
        throw std::out_of_range("prune: internal edge index out of range");
    LabeledTree lower = t;
    int k = edge_index;
    TreeNode* upper_node = find_internal_edge(lower.body, k);
    if (!upper_node) throw std::logic_error("prune: edge walk failed");
    LabeledTree upper;
    upper.root_label = "+";
    upper.body = *upper_node;
    TreeNode plus_leaf;
    plus_leaf.label = "+";
    *upper_node = plus_leaf;
    return {lower, upper};
}

TreeClass classify(const LabeledTree& t) {
    const auto leaves = t.leaf_labels();
    int count = 0;
    int marked = -1;
    for (std::size_t i = 0; i < leaves.size(); ++i) {
        if (leaves[i] == t.root_label) {
            ++count;
            marked = static_cast<int>(i) + 1;
        }
    }
    if (count == 0) return TreeClass{TreeKind::Disjoint, -1};
    if (count > 1) return TreeClass{TreeKind::Other, -1};
    // spine length: internal vertices met on the path from root to leaf #marked
    int spine = 0;
    const TreeNode* n = &t.body;
    int k = marked;
    while (!n->is_leaf()) {
        ++spine;
        for (const auto& ch : n->children) {
            int l = leaf_count_node(ch);
            if (k <= l) {
                n = &ch;
                break;
            }
            k -= l;
        }
    }
    if (spine <= 1) return TreeClass{TreeKind::SpecialPointed, spine};
    return TreeClass{TreeKind::PointedNotSpecial, spine};
}

namespace {

// All shapes with n internal vertices; leaves carry empty labels.
std::vector<TreeNode> shapes(const GeneratorSet& gens, int n,
                             std::map<int, std::vector<TreeNode>>& cache) {
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<TreeNode> out;
    if (n == 0) {
        out.push_back(TreeNode{});
    } else {
        for (const auto& g : gens.gens()) {
            // distribute n-1 internal vertices over the arity children
            std::vector<int> comp(g.arity, 0);
            std::function<void(int, int)> rec = [&](int slot, int left) {
                if (slot == g.arity - 1) {
                    comp[slot] = left;
                    std::vector<std::vector<TreeNode>> parts(g.arity);
                    for (int i = 0; i < g.arity; ++i) parts[i] = shapes(gens, comp[i], cache);
                    std::vector<int> pick(g.arity, 0);
                    std::function<void(int)> build = [&](int slot2) {
                        if (slot2 == g.arity) {
                            TreeNode node;
                            node.gen = g.name;
                            for (int i = 0; i < g.arity; ++i)
                                node.children.push_back(parts[i][pick[i]]);
                            out.push_back(std::move(node));
                            return;
                        }
                        for (pick[slot2] = 0; pick[slot2] < static_cast<int>(parts[slot2].size());
                             ++pick[slot2])
                            build(slot2 + 1);
                    };
                    build(0);
                    return;
                }
                for (int v = 0; v <= left; ++v) {
                    comp[slot] = v;
                    rec(slot + 1, left - v);
                }
            };
            rec(0, n - 1);
        }
    }
    cache.emplace(n, out);
    return out;
}

void assign_leaf_labels(TreeNode& n, const std::vector<std::string>& labels,
                        std::vector<int>::const_iterator& it) {
    if (n.is_leaf()) {
        n.label = labels[*it++];
        return;
    }
    for (auto& ch : n.children) assign_leaf_labels(ch, labels, it);
}

}  // namespace

std::vector<LabeledTree> enumerate_trees(const std::vector<std::string>& labels,
                                         const GeneratorSet& gens, int n_internal,
                                         const std::optional<std::string>& root_filter,
                                         const std::optional<TreeKind>& class_filter) {
    if (n_internal < 0) throw std::invalid_argument("enumerate_trees: negative degree");
    if (labels.empty()) throw std::invalid_argument("enumerate_trees: empty label set");
    std::map<int, std::vector<TreeNode>> cache;
    const auto shs = shapes(gens, n_internal, cache);
    std::vector<LabeledTree> out;
    const int ls = static_cast<int>(labels.size());
    for (const auto& root : labels) {
        if (root_filter && *root_filter != root) continue;
        for (const auto& sh : shs) {
            int leaves = leaf_count_node(sh);
            std::vector<int> assign(leaves, 0);
            while (true) {
                LabeledTree t;
                t.root_label = root;
                t.body = sh;
                auto it = assign.cbegin();
                assign_leaf_labels(t.body, labels, it);
                if (!class_filter || classify(t).kind == *class_filter) out.push_back(t);
                int i = leaves - 1;
                while (i >= 0 && assign[i] == ls - 1) assign[i--] = 0;
                if (i < 0) break;
                ++assign[i];
            }
        }
    }
    std::sort(out.begin(), out.end(),
              [&gens](const LabeledTree& a, const LabeledTree& b) { return tree_less(a, b, gens); });
    return out;
}

int degree_of_key(const std::string& key) {
    return static_cast<int>(std::count(key.begin(), key.end(), '('));
}

std::string root_of_key(const std::string& key) {
    auto pos = key.find("<-");
    if (pos == std::string::npos) throw std::invalid_argument("bad tree key: " + key);
    return key.substr(0, pos);
}

bool is_reserved_label(const std::string& s) {
    if (s.empty() || s[0] != '+') return false;
    for (std::size_t i = 1; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

void validate_labels(const std::vector<std::string>& labels) {
    if (labels.empty()) throw std::invalid_argument("label set must be nonempty");
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto& l = labels[i];
        if (l.empty()) throw std::invalid_argument("empty label");
        for (char c : l)
            if (!is_name_char(c)) throw std::invalid_argument("bad label: " + l);
        if (is_reserved_label(l)) throw std::invalid_argument("label '" + l + "' is reserved");
        for (std::size_t j = 0; j < i; ++j)
            if (labels[j] == l) throw std::invalid_argument("duplicate label: " + l);
    }
}

}  // namespace operadcalc
