#pragma once

#include <string>
#include <vector>

#include "operadcalc/formal_sum.hpp"
#include "operadcalc/trees.hpp"

namespace operadcalc {

/// Label set + generator set over which derivations live.
struct Context {
    std::vector<std::string> labels;
    GeneratorSet gens;

    bool has_label(const std::string& s) const;
    bool operator==(const Context& o) const { return labels == o.labels && gens == o.gens; }
    bool operator!=(const Context& o) const { return !(*this == o); }
};

/// Context enlarged by the fresh stabilization symbols "+1", ..., "+n".
Context stabilized_context(const Context& ctx, int n);

/// Context enlarged by the pruning/contraction basepoint "+".
Context plus_context(const Context& ctx);

/// A derivation of the free operad algebra on the labelled generators:
/// an exact formal sum of labelled trees, graded by internal vertex count.
struct Derivation {
    Context ctx;
    FormalSum value;
};

/// Checks that every supported tree parses over ctx; throws otherwise.
Derivation make_derivation(Context ctx, FormalSum value);

Derivation der_zero(Context ctx);
Derivation der_tree(Context ctx, const LabeledTree& t, Scalar c = Scalar(1));

Derivation add(const Derivation& a, const Derivation& b);
Derivation scale(const Scalar& c, const Derivation& a);

/// The preLie product: bilinear extension of label-matched grafting.
/// Degrees add; in degree zero this is the opposite of map composition.
Derivation prelie(const Derivation& d, const Derivation& e);

/// Commutator bracket [d,e] = d<|e - e<|d of the preLie product.
Derivation bracket(const Derivation& d, const Derivation& e);

/// Homogeneous part of internal-vertex degree n.
Derivation homogeneous_part(const Derivation& d, int n);
std::vector<int> degrees_present(const Derivation& d);

/// Projection onto degrees >= 1.
Derivation restrict_positive(const Derivation& d);

/// Image of d under adding n fresh symbols: trees unchanged, new labels
/// unused. Functorial: stabilize(stabilize(d,m),n) = stabilize(d,m+n).
Derivation stabilize(const Derivation& d, int n);

/// The retraction for the split inclusion: keeps only trees all of whose
/// labels lie in `labels`.
Derivation restrict_labels(const Derivation& d, const std::vector<std::string>& labels);

/// A derivation supported on pointed trees rooted at the basepoint
/// (the basepoint occurs exactly once among each tree's leaves).
struct PointedDerivation {
    Context ctx;
    std::string basepoint;
    FormalSum value;
};

PointedDerivation make_pointed(Context ctx, std::string basepoint, FormalSum value);
PointedDerivation pointed_unit(Context ctx, const std::string& basepoint);
PointedDerivation pointed_zero(Context ctx, std::string basepoint);

/// Forgets the pointed structure.
Derivation as_derivation(const PointedDerivation& p);

PointedDerivation add(const PointedDerivation& a, const PointedDerivation& b);
PointedDerivation scale(const Scalar& c, const PointedDerivation& a);

/// The unital associative product: grafts q's root onto the unique
/// basepoint-labelled leaf of each tree of p.
PointedDerivation pointed_product(const PointedDerivation& p, const PointedDerivation& q);

/// Cuts every spine edge of a pointed tree (root-to-marked-leaf path);
/// the ordered factors are special pointed and their pointed product
/// reconstructs the tree. The degenerate tree factors as the empty list.
std::vector<LabeledTree> spine_factorize(const LabeledTree& t);

/// Minimal-rotation necklace key "(" f1 "|" f2 "|" ... ")" over factor keys.
std::string necklace_key(std::vector<std::string> factor_keys);
std::vector<std::string> necklace_factors(const std::string& key);

/// An element of the trace space: the quotient of the pointed algebra by
/// commutators, in cyclic (necklace) normal form over special-pointed
/// factor sequences.
struct TraceElement {
    Context ctx;
    std::string basepoint;
    FormalSum value;
};

TraceElement trace_zero(Context ctx, std::string basepoint);
TraceElement add(const TraceElement& a, const TraceElement& b);
TraceElement scale(const Scalar& c, const TraceElement& a);
TraceElement restrict_positive(const TraceElement& t);

/// Class of a pointed derivation modulo commutators, via unique spine
/// factorization and rotation-minimal normal form.
TraceElement trace_class(const PointedDerivation& p);

/// Pointed tree reconstructed from a necklace key's stored rotation.
PointedDerivation necklace_representative(const Context& ctx, const std::string& basepoint,
                                          const std::string& key);

/// Right action of the derivation Lie algebra on the trace space. The
/// derivation must not use the basepoint label (its context is the trace
/// context without the basepoint); grafting therefore never touches the
/// marked leaf.
TraceElement act(const TraceElement& t, const Derivation& d);

/// Trace-space counterpart of stabilize: same necklaces over the enlarged
/// label set.
TraceElement stabilize(const TraceElement& t, int n);

}  // namespace operadcalc
