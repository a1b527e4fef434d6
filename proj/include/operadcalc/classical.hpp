#pragma once

#include <map>
#include <string>
#include <vector>

#include "operadcalc/freeder.hpp"
#include "operadcalc/subspace.hpp"
#include "operadcalc/words.hpp"

namespace operadcalc {

/// The three classical quotients of the free binary operad realized on
/// concrete word bases: free Lie algebra (Lyndon basis), tensor algebra,
/// symmetric algebra.
enum class OperadTag { Lie, Ass, Com };

OperadTag parse_operad_tag(const std::string& s);
std::string to_string(OperadTag t);

/// Ordered single-character alphabet ('1' and digits are reserved).
struct ClassicalContext {
    OperadTag tag;
    std::string alphabet;

    bool operator==(const ClassicalContext& o) const {
        return tag == o.tag && alphabet == o.alphabet;
    }
    bool operator!=(const ClassicalContext& o) const { return !(*this == o); }
};

ClassicalContext make_classical_context(OperadTag tag, const std::string& alphabet);

/// Standard alphabet of the given rank: "xy", "xyz", then continuing
/// alphabetically.
std::string standard_alphabet(int rank);

/// Alphabet extended by n fresh letters (deterministic pool order).
ClassicalContext extend_alphabet(const ClassicalContext& ctx, int n);

/// A derivation of the classical free algebra, determined by its values on
/// the generators. Value keys: Lyndon bracket keys (Lie), tensor words
/// (Ass), sorted monomials (Com); graded by word length - 1.
struct ClassicalDerivation {
    ClassicalContext ctx;
    std::map<char, FormalSum> values;

    FormalSum value_of(char letter) const {
        auto it = values.find(letter);
        return it == values.end() ? FormalSum{} : it->second;
    }
};

ClassicalDerivation cder_zero(ClassicalContext ctx);
ClassicalDerivation cder(ClassicalContext ctx, std::map<char, FormalSum> values);
ClassicalDerivation add(const ClassicalDerivation& a, const ClassicalDerivation& b);
ClassicalDerivation scale(const Scalar& c, const ClassicalDerivation& a);
bool is_zero(const ClassicalDerivation& d);

/// Same values over an alphabet extended by n fresh letters.
ClassicalDerivation stabilize_classical(const ClassicalDerivation& d, int n);

/// Leibniz extension of d to an element of the tagged algebra.
FormalSum extend_derivation(const ClassicalDerivation& d, const FormalSum& element);

/// (d <| e)(x) = e(d(x)); bracket is the commutator of <|.
ClassicalDerivation prelie_classical(const ClassicalDerivation& d, const ClassicalDerivation& e);
ClassicalDerivation bracket_classical(const ClassicalDerivation& d, const ClassicalDerivation& e);

/// Lie normal form of an arbitrary bracket-expression sum; keys are
/// standard bracketings of Lyndon words. Throws off the free Lie algebra.
FormalSum lie_normal_form(const std::string& bracket_expression);

/// Lyndon basis of the degree (= bracket length) over the alphabet.
std::vector<std::string> lyndon_basis(const std::string& alphabet, int degree);

/// Trace space of the tensor algebra: cyclic words keyed "~w" ("~1" unit).
/// The Satoh trace: contract each occurrence of the slot letter to the
/// basepoint, rewrite through the iterated-bracket identification, pass to
/// cyclic words.
FormalSum satoh_trace(const ClassicalDerivation& d);

/// Quotient of the bimodule algebra T(V) (x) T(V)^op modulo commutators,
/// computed by bidegree-wise commutator spans. Values are reduced
/// canonical residuals.
class BimodQuotient {
public:
    explicit BimodQuotient(std::string alphabet) : alphabet_(std::move(alphabet)) {}

    FormalSum reduce(const FormalSum& bimod_sum);
    bool equal(const FormalSum& a, const FormalSum& b);
    const Subspace& commutator_span(int left_deg, int right_deg);
    std::vector<std::string> basis_keys(int left_deg, int right_deg) const;

private:
    std::string alphabet_;
    std::map<std::pair<int, int>, Subspace> spans_;
};

/// The double divergence of an Ass-tagged derivation: split each slot-letter
/// occurrence into (left | right), then reduce modulo commutators.
FormalSum double_divergence_raw(const ClassicalDerivation& d);
FormalSum double_divergence(const ClassicalDerivation& d, BimodQuotient& q);

/// Classical divergence: sum of formal partials d(x_i) by x_i.
FormalSum com_divergence(const ClassicalDerivation& d);

/// Algebra map T(V) -> T(V) (x) T(V)^op, v -> (v|1) - (1|v), applied to a
/// tensor word.
FormalSum tilde_delta(const std::string& word);

/// Induced map |T(V)| -> |T(V) (x) T(V)^op| on trace classes ("~w" keys in,
/// reduced bimodule sums out).
FormalSum tilde_delta_trace(const FormalSum& necklaces, BimodQuotient& q);

/// Bracket expansion into tensor words / abelianization of words.
ClassicalDerivation lie_to_ass(const ClassicalDerivation& d);
ClassicalDerivation ass_to_com(const ClassicalDerivation& d);

/// Abelianization |T (x) T^op| -> S(V): (l|r) -> sorted(lr).
FormalSum abelianize_bimod(const FormalSum& bimod_sum);

/// Right action of derivations on the tagged trace space.
FormalSum act_lie_trace(const FormalSum& necklaces, const ClassicalDerivation& d);
FormalSum act_ass_trace(const FormalSum& bimod_classes, const ClassicalDerivation& d,
                        BimodQuotient& q);
FormalSum act_com_trace(const FormalSum& monomials, const ClassicalDerivation& d);

/// Divergence in the tagged realization (bimodule output reduced via q when
/// tag == Ass).
FormalSum classical_div(const ClassicalDerivation& d, BimodQuotient* q = nullptr);

/// 1-cocycle defect in the tagged realization; identically zero.
FormalSum classical_cocycle_defect(const ClassicalDerivation& d, const ClassicalDerivation& e,
                                   BimodQuotient* q = nullptr);

/// Transports along the operad surjections from the free binary operad.
/// Trees must be over a single binary generator with single-char labels.
FormalSum lie_element_of_tree(const LabeledTree& t);        // Lyndon keys
std::string ass_word_of_tree(const LabeledTree& t);         // planar leaf word
ClassicalDerivation transport_derivation(OperadTag tag, const Derivation& d);
FormalSum transport_trace_lie(const TraceElement& t);                       // "~w" keys
FormalSum transport_trace_ass(const TraceElement& t, BimodQuotient& q);     // reduced bimod

/// Degree-d basis of classical derivations: (slot letter, value key).
std::vector<std::pair<char, std::string>> classical_der_basis(const ClassicalContext& ctx,
                                                              int degree);

/// Value-space basis keys of the given word degree (length = degree).
std::vector<std::string> classical_value_keys(const ClassicalContext& ctx, int length);

}  // namespace operadcalc
