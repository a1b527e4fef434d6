#pragma once

#include <memory>
#include <string>
#include <vector>

#include "operadcalc/formal_sum.hpp"

namespace operadcalc {

/// Tensor words over a single-character alphabet. The empty word (the unit)
/// is written "1"; the character '1' is reserved and also stands for the
/// basepoint when working linearly in it.
namespace words {

/// Reserved letter standing for the basepoint inside pointed words; distinct
/// from "1", which denotes the empty word.
inline constexpr char kBasepoint = '0';

inline bool is_unit(const std::string& w) { return w == "1"; }
inline int word_length(const std::string& w) { return is_unit(w) ? 0 : static_cast<int>(w.size()); }

std::string concat(const std::string& a, const std::string& b);

/// Word-by-word product of formal sums of tensor words.
FormalSum word_product(const FormalSum& a, const FormalSum& b);

/// Strictly smaller than all proper rotations.
bool is_lyndon(const std::string& w);

/// All Lyndon words of the given length over the ordered alphabet (Duval).
std::vector<std::string> lyndon_words(const std::string& alphabet, int length);

/// Right factor of the standard factorization: the longest proper Lyndon
/// suffix. Precondition: w is Lyndon of length >= 2.
std::size_t standard_split(const std::string& w);

/// A bracket expression over letters; immutable, cheap to copy.
struct LieExpr {
    char letter = 0;  // when leaf
    std::shared_ptr<const LieExpr> left, right;
    bool is_leaf() const { return !left; }

    static LieExpr leaf(char c);
    static LieExpr node(LieExpr l, LieExpr r);
};

/// "[x,[x,y]]" or a single letter.
LieExpr parse_bracket(const std::string& text);
std::string bracket_str(const LieExpr& e);

/// The standard (Shirshov) bracketing of a Lyndon word.
LieExpr standard_bracketing(const std::string& w);

/// Bracket-keyed basis key of a Lyndon word.
std::string lyndon_key(const std::string& w);

/// Expansion of a bracket expression into tensor words.
FormalSum expand_bracket(const LieExpr& e);

/// Rewrites a tensor-word sum lying in the free Lie algebra into the Lyndon
/// basis (keys via lyndon_key). Throws when the input is not primitive.
FormalSum lyndonize(const FormalSum& word_sum);

/// Expansion of the Lyndon basis element named by a bracket key.
FormalSum expand_lyndon_key(const std::string& key);

/// Words containing the basepoint letter exactly once, rewritten to the
/// tensor-word basis through w <-> [w_1,[w_2,...,[w_k, 1]...]. Throws when
/// the input is outside the span.
FormalSum reduce_pointed_words(FormalSum in);

/// [u_1,[u_2,...,[u_k,1]...] expanded as words containing one basepoint
/// letter; the empty u gives the bare basepoint word.
FormalSum iterated_bracket_with_basepoint(const std::string& u);

/// Minimal cyclic rotation of a word ("1" for the unit).
std::string min_rotation(const std::string& w);

/// Necklace key of a tensor word: "~" + minimal rotation.
std::string necklace_of_word(const std::string& w);

/// Classwise reduction of a word sum modulo cyclic rotation.
FormalSum necklaceify(const FormalSum& word_sum);

/// Bimodule words: pairs left|right with "1" for the empty side and the
/// product (a|b)(c|d) = (ac|db).
std::string bimod_key(const std::string& left, const std::string& right);
std::pair<std::string, std::string> bimod_parts(const std::string& key);
FormalSum bimod_product(const FormalSum& a, const FormalSum& b);

/// Algebra map determined on letters by v -> (v|1) - (1|v).
FormalSum tilde_delta_word(const std::string& w);

/// Commutative monomials as sorted letter strings, "1" for the unit.
std::string monomial_of(const std::string& letters);
FormalSum monomial_product(const FormalSum& a, const FormalSum& b);

/// Count-weighted letter deletion: the formal partial derivative.
FormalSum monomial_partial(const std::string& monomial, char letter);

/// Abelianization of a tensor word.
std::string abelianize_word(const std::string& w);

}  // namespace words

}  // namespace operadcalc
