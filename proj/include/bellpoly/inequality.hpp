#pragma once

// Bell inequalities over the reduced correlator space: evaluation, LHV and
// algebraic bounds, the generator that turns any non-linear function into a
// non-trivial inequality, and a catalog of named families.

#include "bellpoly/correlator.hpp"
#include "bellpoly/modfunc.hpp"
#include "bellpoly/rational.hpp"

#include <string>
#include <vector>

namespace bellpoly {

struct SettingMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct LinearFunctionInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct UnknownFamily : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct SearchSpaceTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// omega . p + p0_offset <= gamma_L, with omega over the reduced coordinates
// (same order as CorrelatorVector). Families printed with k = 0 terms are
// projected here: eliminating p(0|s) = 1 - sum_k p(k|s) moves the k = 0
// coefficients into p0_offset and shifts the k != 0 columns, so evaluate()
// reproduces the printed left-hand side exactly.
struct BellInequality {
  Setting setting;
  RatVec coeffs;        // omega_{k,s}, k = 1..d-1 inner, s outer
  Rat p0_offset = 0;    // constant absorbed from eliminated k = 0 columns
  Rat gamma_L = 0;      // max of evaluate() over the LHV vertices
  Rat gamma_P = 0;      // max of evaluate() over the whole correlator space
  Rat paper_scale = 1;  // stored form = paper_scale * published form
  std::string origin;   // "generated", family name, or "file"

  void validate() const;
  const Rat& coeff(long long setting_index, int k) const;  // k in 1..d-1
};

// Probability weights over the setting strings (lexicographic order).
struct InputWeights {
  Setting setting;
  RatVec w;

  void validate() const;  // size, w >= 0, sum exactly 1
  static InputWeights uniform(const Setting& st);
};

// Exact value omega . p + p0_offset.
Rat evaluate(const BellInequality& ineq, const CorrelatorVector& corr);

// evaluate() on the deterministic correlator of f, without building it.
Rat vertex_value(const BellInequality& ineq, const FunctionOverSettings& f);

// Exact max of evaluate() over all n-partite linear functions.
Rat lhv_bound(const BellInequality& ineq);

// Exact max of evaluate() over the full correlator space:
// p0_offset + sum_s max(0, max_k omega_{k,s}).
Rat algebraic_max(const BellInequality& ineq);

// The weighted indicator inequality of a non-linear function f:
// sum_s w(s) [outcome sum = f(s)] <= gamma_L, which is < gamma_P = 1
// whenever all weights are strictly positive. Throws LinearFunctionInput
// when f is n-partite linear (then gamma_L would equal gamma_P).
BellInequality nontrivial_from_function(const FunctionOverSettings& f, const InputWeights& w);

// Catalog of named families; throws UnknownFamily for a name/setting pair
// outside the catalog. The recomputed LHV bound is asserted against the
// published bound at construction.
BellInequality named_family(const std::string& name, const Setting& st);

// All catalog names available at st.
std::vector<std::string> family_names(const Setting& st);

// Every function whose deterministic correlator attains gamma_P: the product
// of the per-setting argmax sets. Throws SearchSpaceTooLarge if the product
// exceeds `limit`.
std::vector<FunctionOverSettings> max_violating_vertices(const BellInequality& ineq,
                                                         long long limit = 1000000);

// Integer row (a..., g) with a.p <= g equivalent to the inequality (offset
// folded into the right-hand side, scaled to coprime integers); comparable
// with HRep facet rows.
IntVec canonical_row(const BellInequality& ineq);

// Inequality built from an HRep-style row; gamma_L is recomputed from the
// vertices (the row's right-hand side is not trusted).
BellInequality inequality_from_row(const Setting& st, const IntVec& row, std::string origin);

}  // namespace bellpoly
