#pragma once

// Full joint conditional distributions p(m|s), the no-signaling polytope's
// constraint system, generalized uniform boxes attached to functions, and
// the LP-based uniqueness/vertex tests for correlator-compatible boxes.

#include "bellpoly/correlator.hpp"
#include "bellpoly/geometry.hpp"
#include "bellpoly/modfunc.hpp"

#include <optional>
#include <utility>

namespace bellpoly {

struct InvalidSplit : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NotNonsignaling : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Conditional distribution over outcome strings m in Z_d^n for every joint
// setting s. Coordinate order: setting strings outer (lexicographic, s_1
// most significant), outcome strings inner (lexicographic, m_1 most
// significant).
struct JointDistribution {
  Setting setting;
  RatVec entries;  // prod_j c_j blocks of d^n entries each

  JointDistribution() = default;
  JointDistribution(Setting st, RatVec e);

  std::size_t index_of(long long setting_index, long long outcome_index) const;
  const Rat& at(const std::vector<int>& s, const std::vector<int>& m) const;
  Rat& at(const std::vector<int>& s, const std::vector<int>& m);

  // Sizes, entries >= 0, each s-block sums to exactly 1.
  void validate() const;

  bool operator==(const JointDistribution&) const = default;
};

// Positivity, per-s normalization, and no-signaling equalities over the
// p(m|s) coordinates (same coordinate order as JointDistribution.entries).
// The equalities use the single-party marginal-independence basis, which
// generates all subset marginal conditions.
struct NsConstraintSystem {
  Setting setting;
  HRep system;
};

NsConstraintSystem ns_constraint_system(const Setting& st);

// Uniform weight d^{1-n} on the strings with sum_j m_j == f(s) (mod d).
JointDistribution gen_pr_box(const FunctionOverSettings& f);

// For f(s) = fA(s_A) + fB(s_B) split along the party bipartition given by
// group (0 = side A, 1 = side B, both nonempty): uniform weight d^{2-n} on
// the strings satisfying both group-sum conditions. Throws InvalidSplit if
// f does not decompose along the given bipartition.
JointDistribution bipartite_box(const FunctionOverSettings& f, const std::vector<int>& group);

// Every party subset's marginal is independent of the complement's settings.
bool is_nonsignaling(const JointDistribution& dist);

struct NsUniquenessResult {
  bool unique = false;
  // Lemma scope: the uniqueness criterion is proved for prime d only;
  // composite-d results are recorded data, not theorem instances.
  bool prime_scope = true;
  JointDistribution witness;                  // the box itself when unique
  std::optional<JointDistribution> second;    // a distinct feasible box otherwise
};

// Decide whether gen_pr_box(f) is the only no-signaling distribution whose
// correlator equals deterministic_correlator(f), by exact max/min LPs over
// every coordinate of the constrained NS system. jobs > 1 parallelizes the
// per-coordinate LPs.
NsUniquenessResult unique_ns_for_vertex(const FunctionOverSettings& f, int jobs = 1);

// Whether dist is an extreme point of the no-signaling polytope: the face of
// NS tight at dist's zero set must have affine dimension 0.
bool is_ns_vertex(const JointDistribution& dist);

}  // namespace bellpoly
