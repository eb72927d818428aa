#pragma once

// The linear pre-processing game: inputs x feed every party a setting
// s_j = [sum_i alpha_{j,i} x_i] mod q, each party answers with an arbitrary
// single-site map g_j(s_j) in Z_d, and the game's output is sum_j g_j. The
// achievable deterministic maps x -> Z_d form the boosted analogue of the
// n-partite linear functions; for d = 2 the boost is empty, for d > 2 it is
// strict.
//
// Domains: x ranges over Z_q^{x_len}, where q is the wiring modulus (q = d
// in the plain game; q < d is the mixed mode, e.g. bit-string wirings
// feeding mod-3 sites). A function over x is carried as a
// FunctionOverSettings whose Setting(x_len, q, d) encodes the x-domain.

#include "bellpoly/inequality.hpp"
#include "bellpoly/modfunc.hpp"
#include "bellpoly/rational.hpp"

#include <vector>

namespace bellpoly {

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Linear wiring x -> s: party j receives [sum_i alpha[j][i] * x_i] mod
// `modulus`.
struct PreprocessingWiring {
  int x_len = 0;
  int modulus = 2;                      // q: alphabet of x digits and settings
  std::vector<std::vector<int>> alpha;  // [party][x_len]

  void validate() const;
  int setting_for(int party, const std::vector<int>& x) const;
};

// Value table over x of sum_j site_maps[j][ s_j(x) ] mod d, where
// site_maps[j] lists g_j's values on Z_q.
std::vector<int> boosted_table(const PreprocessingWiring& wiring,
                               const std::vector<std::vector<int>>& site_maps, int d);

// The achievable set, stored as canonical tables (outcome-shifted so that
// f(0...0) = 0, deduplicated, sorted). The full achievable set is the
// canonical tables plus all d constant shifts of each.
struct BoostedFunctionSet {
  int n = 0;
  int x_len = 0;
  int d = 2;
  int wiring_modulus = 2;
  bool complete = true;  // false when the budget cut the search short
  std::vector<std::vector<int>> tables;

  bool contains(const std::vector<int>& table) const;  // canonicalizes first
  long long expanded_count() const;                    // tables * d shifts
};

// Exact closure by n-fold sumsets of the single-party achievable set.
// `budget` caps the number of candidate-table constructions; when exceeded
// the partial set is returned with complete = false.
BoostedFunctionSet achievable_boosted_functions(int n, int x_len, int d, int wiring_modulus,
                                                long long budget = 100000000);

// Whether f (over Setting(x_len, q, d), q = f's setting alphabet) appears in
// the boosted set for some n <= n_max. Monotone in n, so only the largest
// level is consulted; the closure stops early once the set stabilizes.
// Throws BudgetExceeded only when the cut search did not already contain f.
bool is_boosted_achievable(const FunctionOverSettings& f, int n_max,
                           long long budget = 100000000);

// Max over the boosted set (constant shifts included) of the weighted
// agreement sum_x w(x) [g(x) == f(x)] — the boosted analogue of the
// non-trivial-inequality bound. Equals 1 exactly when f is achievable.
Rat boosted_bell_bound(const FunctionOverSettings& f, int n, const InputWeights& weights,
                       long long budget = 100000000);

}  // namespace bellpoly
