#pragma once

#include "operadcalc/freeder.hpp"

namespace operadcalc {

/// The generalized contraction: each tree with root z maps to the sum,
/// over its z-labelled leaves, of the tree with the root and that one leaf
/// relabelled by the fresh basepoint "+". Lands in pointed derivations
/// over the enlarged label set, grading preserved; disjoint trees map to 0.
PointedDerivation contract(const Derivation& d);

/// The generalized divergence: contraction followed by the commutator
/// quotient (necklace normal form).
TraceElement div(const Derivation& d);

/// div restricted to the positive-degree part.
TraceElement div_positive(const Derivation& d);

/// The 1-cocycle defect div([d,e]) - div(d).e + div(e).d; identically zero.
TraceElement cocycle_defect(const Derivation& d, const Derivation& e);

/// Contraction of a single tree, as a raw formal sum over the enlarged set.
FormalSum contract_tree(const LabeledTree& t);

}  // namespace operadcalc
