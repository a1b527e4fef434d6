#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "operadcalc/classical.hpp"
#include "operadcalc/divergence.hpp"
#include "operadcalc/subspace.hpp"

namespace operadcalc {

using Json = nlohmann::ordered_json;

/// Soft wall-clock budget; heavy loops poll it and raise BudgetExceeded.
class Budget {
public:
    Budget() = default;
    explicit Budget(long long ms)
        : enabled_(ms > 0), deadline_(std::chrono::steady_clock::now() + std::chrono::milliseconds(ms)) {}
    bool exceeded() const {
        return enabled_ && std::chrono::steady_clock::now() > deadline_;
    }
    void check(const char* where) const;

private:
    bool enabled_ = false;
    std::chrono::steady_clock::time_point deadline_{};
};

struct BudgetExceeded : std::runtime_error {
    explicit BudgetExceeded(const std::string& where)
        : std::runtime_error("computation budget exceeded in " + where) {}
};

/// Indexed degree-d tree basis over a label set.
struct DegreeBasis {
    std::vector<LabeledTree> trees;
    std::vector<std::string> keys;
    std::unordered_map<std::string, int> index;
};

/// Degree-indexed family of subspaces of the corresponding tree (or
/// necklace) bases.
struct GradedSubspace {
    std::map<int, Subspace> by_degree;
};

struct TorsionReport {
    std::string element;
    std::string functor;
    int tested_bound = 0;
    int order = -1;  // smallest n with vanishing stabilized class; -1 if none found
    bool found() const { return order >= 0; }
};

/// Caches degree bases, derpl/derlie spans, divergence images and kernels
/// per label set. All computations are exact.
class Workspace {
public:
    explicit Workspace(GeneratorSet gens, Budget budget = Budget());

    const GeneratorSet& gens() const { return gens_; }
    const Budget& budget() const { return budget_; }

    const DegreeBasis& tree_basis(const std::vector<std::string>& labels, int degree);

    /// Sub-preLie algebra generated by degree one, degree-d part.
    const Subspace& derpl(const std::vector<std::string>& labels, int degree);

    /// Sub-Lie algebra generated by degree one, degree-d part.
    const Subspace& derlie(const std::vector<std::string>& labels, int degree);

    /// Tests x (homogeneous of the given degree) for membership in
    /// derlie_d(labels), building the span only as far as needed.
    bool in_derlie(const std::vector<std::string>& labels, int degree, const FormalSum& x);

    /// Necklace basis keys of degree d over (labels + "+", "+").
    const std::vector<std::string>& necklace_keys(const std::vector<std::string>& labels, int degree);

    /// Image of div on degree-d derivations, over the necklace basis.
    const Subspace& div_image(const std::vector<std::string>& labels, int degree);

    /// div(derlie_d), over the necklace basis.
    const Subspace& imderlie(const std::vector<std::string>& labels, int degree);

    /// Trace classes of special pointed trees over (labels + "+", "+").
    const Subspace& imderliespec(const std::vector<std::string>& labels, int degree);

    /// Kernel of div on degree-d derivations, over the tree basis.
    const Subspace& kernel_div(const std::vector<std::string>& labels, int degree);

    /// derlie \cap ker div, over the tree basis.
    const Subspace& K_O(const std::vector<std::string>& labels, int degree);

    /// div of a single degree-d basis tree as a necklace sum.
    FormalSum div_of_tree(const LabeledTree& t) const;

private:
    struct DerlieBuild;
    std::string cache_key(const std::vector<std::string>& labels, int degree) const;
    DerlieBuild& lie_build(const std::vector<std::string>& labels, int degree);

    GeneratorSet gens_;
    Budget budget_;
    std::map<std::string, DegreeBasis> bases_;
    std::map<std::string, Subspace> derpl_, derlie_, div_image_, imderlie_, imderliespec_;
    std::map<std::string, Subspace> kernel_div_, ko_;
    std::map<std::string, std::vector<std::string>> necklaces_;
    std::map<std::string, std::shared_ptr<DerlieBuild>> lie_builds_;
};

/// Spec-level wrappers.
GradedSubspace generate_derpl(const std::vector<std::string>& labels, const GeneratorSet& gens,
                              int max_degree);
GradedSubspace generate_derlie(const std::vector<std::string>& labels, const GeneratorSet& gens,
                               int max_degree);
Subspace disjoint_subspace(const std::vector<std::string>& labels, const GeneratorSet& gens,
                           const std::string& root, int degree);
Subspace special_pointed_subspace(const std::vector<std::string>& labels, const GeneratorSet& gens,
                                  const std::string& root, int degree);

/// Torsion order of the class of a homogeneous derivation in Der+/derlie
/// (or Ker Div / K^O, which reduces to the same membership test).
TorsionReport torsion_order(Workspace& ws, const Derivation& x, const std::string& functor_tag,
                            int max_n);

/// Torsion order of a necklace element in coker Div or trace/imderlie.
TorsionReport torsion_order_trace(Workspace& ws, const std::vector<std::string>& labels,
                                  const TraceElement& x, const std::string& functor_tag, int max_n);

struct MiddleHomologyReport {
    int degree = 0;
    int dim_kerdiv = 0;
    int dim_ko = 0;
    int dim_before = 0;   // dim KerDiv - dim K^O
    int stabilization = 0;
    int dim_after = 0;    // surviving quotient dimension after stabilizing
    bool vanished = false;
};

MiddleHomologyReport middle_homology(Workspace& ws, const std::vector<std::string>& labels,
                                     int degree, int stabilization);

/// Classical-side graded machinery (Lie / Ass / Com realizations).
FormalSum cder_to_vector(const ClassicalDerivation& d);
ClassicalDerivation vector_to_cder(const ClassicalContext& ctx, const FormalSum& v);

class ClassicalWorkspace {
public:
    ClassicalWorkspace(OperadTag tag, Budget budget = Budget());

    /// Degree-d derivation basis keys "slot:valuekey" over the alphabet.
    const std::vector<std::string>& der_keys(const std::string& alphabet, int degree);

    /// Degree-d part of the Lie algebra generated by degree one.
    const Subspace& derlie(const std::string& alphabet, int degree);

    bool in_derlie(const std::string& alphabet, int degree, const ClassicalDerivation& d);

    OperadTag tag() const { return tag_; }

private:
    OperadTag tag_;
    Budget budget_;
    std::map<std::string, std::vector<std::string>> keys_;
    std::map<std::string, Subspace> derlie_;
};

/// Suite parameters; every bound is explicit and the seed fixes all
/// randomness.
struct SuiteParams {
    std::vector<std::string> labels{"x", "y"};
    GeneratorSet gens = GeneratorSet::parse("*:2");
    OperadTag operad = OperadTag::Lie;  // classical suites
    int max_degree = 3;
    int rank = 2;
    int stab_bound = 6;
    unsigned long long seed = 1;
    int random_pairs = 200;
    long long budget_ms = 0;  // 0 = unlimited
};

/// Named verification suites. Returns the structured report; "pass" is a
/// top-level boolean. Budget overruns mark the report partial and rethrow
/// nothing (the caller inspects "partial").
Json run_suite(const std::string& name, const SuiteParams& params);

std::vector<std::string> suite_names();

}  // namespace operadcalc
