#pragma once

// Exact polytope geometry: V- and H-representations, facet enumeration by the
// double description method on the polar cone, vertex enumeration by the same
// engine on the homogenization, facet certification, and membership tests.

#include "bellpoly/linprog.hpp"
#include "bellpoly/rational.hpp"

#include <functional>
#include <optional>
#include <stdexcept>

namespace bellpoly {

// Finite point set; the polytope is its convex hull.
struct VRep {
  int dim = 0;
  std::vector<RatVec> vertices;

  void validate() const;
};

// Inequalities a_1..a_D g meaning  a . x <= g,  stored as coprime integer
// rows of length dim+1; equalities the same with ==.
struct HRep {
  int dim = 0;
  std::vector<IntVec> ineq;
  std::vector<IntVec> eq;
};

struct DdOptions {
  int jobs = 1;
  // Progress callback: (constraints processed, total, current ray count).
  std::function<void(int, int, size_t)> progress;
};

struct DdOverflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotValidInequality : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exact rank of a rational matrix (Bareiss on the integerized rows).
int matrix_rank(const std::vector<RatVec>& rows);

// rank of {p_i - p_0}; -1 for an empty set.
int affine_dim(const std::vector<RatVec>& pts);

bool affinely_independent(const std::vector<RatVec>& pts);

// All facets (and affine-hull equalities) of conv(v.vertices).
// Deterministic: canonical integer rows, lexicographically sorted.
HRep facet_enumeration(const VRep& v, const DdOptions& opt = {});

// All vertices of the (bounded) polyhedron described by h; throws
// std::runtime_error if the feasible set is unbounded or empty.
VRep vertex_enumeration(const HRep& h, const DdOptions& opt = {});

// Whether row (a_1..a_D g) supports a facet of conv(v): the inequality must
// be valid on every vertex (else NotValidInequality) and its saturating
// vertex set must have affine dimension exactly dim(aff hull) - 1.
bool is_facet_defining(const VRep& v, const IntVec& row);

struct MembershipResult {
  bool inside = false;
  RatVec weights;     // convex weights over v.vertices when inside
  IntVec separator;   // row (a..., g): a.x <= g valid on v, violated by point
};

MembershipResult polytope_membership(const VRep& v, const RatVec& point);

}  // namespace bellpoly
