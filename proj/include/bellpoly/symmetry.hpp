#pragma once

// The relabeling group of a scenario — party permutations (between parties
// with equal alphabet sizes), per-party setting shifts, and per-(party,
// setting) outcome shifts — with its actions on functions, correlators, and
// inequalities, plus orbit enumeration and symmetry-class partitioning.

#include "bellpoly/correlator.hpp"
#include "bellpoly/inequality.hpp"
#include "bellpoly/modfunc.hpp"
#include "bellpoly/rational.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace bellpoly {

struct IncompatiblePermutation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Relabeling g acting on a function table as
//   (g.f)(s) = f(T(s)) + sum_j beta[j][s_j]  (mod d),
//   T(s)_j   = s_{pi[j]} + alpha[j]          (mod c_j),
// i.e. pi[j] names the source party read by target slot j, settings are
// shifted after the permutation, and outcome shifts are evaluated at the new
// setting string.
struct SymmetryElement {
  Setting setting;
  std::vector<int> pi;                  // permutation of 0..n-1 (source of slot j)
  std::vector<int> alpha;               // alpha[j] in Z_{c_j}
  std::vector<std::vector<int>> beta;   // beta[j][a] in Z_d, a in Z_{c_j}

  void validate() const;  // IncompatiblePermutation / invalid_argument
};

SymmetryElement identity_element(const Setting& st);
// apply h first, then g: apply(compose(g,h), x) == apply(g, apply(h, x))
SymmetryElement compose(const SymmetryElement& g, const SymmetryElement& h);
SymmetryElement inverse(const SymmetryElement& g);
SymmetryElement random_element(const Setting& st, std::mt19937_64& rng);

// Generating set used for orbit computations: adjacent party transpositions
// (where alphabets match), unit setting shift per party, unit outcome shift
// per (party, setting value).
std::vector<SymmetryElement> group_generators(const Setting& st);

FunctionOverSettings apply_to_function(const SymmetryElement& g, const FunctionOverSettings& f);

// Pushforward on behaviors: (g.q)(k|s) = q(k - sum_j beta[j][s_j] | T(s)).
CorrelatorVector apply_to_correlator(const SymmetryElement& g, const CorrelatorVector& corr);

// Dual action so that evaluate(g.ineq, g.corr) == evaluate(ineq, corr);
// both bounds and the LHV bound are invariant and are carried over.
BellInequality apply_to_inequality(const SymmetryElement& g, const BellInequality& ineq);

// Same dual action on an integer inequality row (coefficients + rhs, the
// facet-file format); exact on coprime rows.
IntVec apply_to_row(const SymmetryElement& g, const IntVec& row);

// Full orbit of a row under the generated group, sorted lexicographically.
std::vector<IntVec> orbit_of_row(const Setting& st, const IntVec& row);

struct SymmetryClass {
  IntVec canonical;             // lexicographically least row of the orbit
  long long orbit_size = 0;     // full orbit cardinality
  std::vector<size_t> members;  // indices of input rows lying in this orbit
};

// Partition input rows into symmetry classes via generator BFS; classes are
// sorted by canonical row. For inputs closed under the group (facet lists)
// every orbit member is an input row and orbit_size == members.size().
std::vector<SymmetryClass> orbit_partition_rows(const Setting& st,
                                                const std::vector<IntVec>& rows, int jobs = 1);

// Convenience wrapper over canonical_row().
std::vector<SymmetryClass> orbit_partition(const std::vector<BellInequality>& items,
                                           int jobs = 1);

}  // namespace bellpoly
