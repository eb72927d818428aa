#pragma once

// Correlator spaces. The reduced space collects p(k|s) for k = 1..d-1 over
// all setting strings s; the full space also carries p(0|s). The LHV
// polytope is the convex hull of the deterministic correlators of all
// n-partite linear functions.

#include "bellpoly/geometry.hpp"
#include "bellpoly/modfunc.hpp"
#include "bellpoly/rational.hpp"

#include <memory>
#include <mutex>

namespace bellpoly {

struct JointDistribution;  // nonsignaling.hpp

struct NotNormalizable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Coordinate order used by every vector in this space: setting strings in
// lexicographic order with s_1 most significant (outer), k innermost.
struct CorrelatorVector {
  Setting setting;
  RatVec entries;  // (d-1) * prod_j c_j entries, k = 1..d-1 per s-block

  CorrelatorVector() = default;
  CorrelatorVector(Setting st, RatVec e);

  std::size_t index_of(long long setting_index, int k) const;  // k in 1..d-1
  const Rat& at(const std::vector<int>& s, int k) const;
  Rat& at(const std::vector<int>& s, int k);

  // Sizes, entries >= 0, per-s sums <= 1.
  void validate() const;

  bool operator==(const CorrelatorVector&) const = default;
};

// All of p(0|s)..p(d-1|s); every s-block sums to exactly 1.
struct FullCorrelatorVector {
  Setting setting;
  RatVec entries;  // d * prod_j c_j entries, k = 0..d-1 per s-block

  FullCorrelatorVector() = default;
  FullCorrelatorVector(Setting st, RatVec e);

  std::size_t index_of(long long setting_index, int k) const;  // k in 0..d-1
  const Rat& at(const std::vector<int>& s, int k) const;
  Rat& at(const std::vector<int>& s, int k);

  void validate() const;

  bool operator==(const FullCorrelatorVector&) const = default;
};

// p(k|s) = [f(s) == k] restricted to k != 0.
CorrelatorVector deterministic_correlator(const FunctionOverSettings& f);

// p(k|s) = sum over outcome strings m with sum_j m_j == k (mod d).
CorrelatorVector correlator_from_distribution(const JointDistribution& dist);

// Insert p(0|s) = 1 - sum_{k!=0} p(k|s); throws NotNormalizable if any
// s-block already exceeds total probability 1.
FullCorrelatorVector lift_to_full(const CorrelatorVector& corr);

// Drop the k = 0 coordinates; inverse of lift_to_full.
CorrelatorVector project_to_reduced(const FullCorrelatorVector& full);

// Convex hull of the deterministic correlators of every n-partite linear
// function; vertex i of vertices() is the correlator of vertex_functions()[i].
class LhvPolytope {
 public:
  explicit LhvPolytope(Setting st);

  const Setting& setting() const { return setting_; }
  const VRep& vertices() const { return vrep_; }
  const std::vector<FunctionOverSettings>& vertex_functions() const { return funcs_; }

  // Complete facet/equality structure. Computed once on first call; later
  // calls return the shared result and ignore opt.
  const HRep& facets(const DdOptions& opt = {}) const;
  bool facets_computed() const;

 private:
  Setting setting_;
  VRep vrep_;
  std::vector<FunctionOverSettings> funcs_;
  mutable std::mutex mu_;
  mutable std::unique_ptr<HRep> hrep_;
};

// Exact membership in the LHV polytope. Uses the cached facet structure when
// available (then a reported separator is a genuine facet row); otherwise
// decides by exact LP over convex weights, whose Farkas certificate provides
// a valid separating inequality.
MembershipResult lhv_membership(const CorrelatorVector& corr, const LhvPolytope& lhv);

}  // namespace bellpoly
