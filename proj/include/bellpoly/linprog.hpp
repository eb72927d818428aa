#pragma once

// Exact rational linear programming: dense tableau simplex with Bland's rule
// (two phases, anti-cycling, infeasibility certificates).

#include "bellpoly/rational.hpp"

#include <optional>

namespace bellpoly {

struct LinearProgram {
  int nvars = 0;
  std::vector<RatVec> A;  // A x <= b
  RatVec b;
  std::vector<RatVec> E;  // E x == f
  RatVec f;
  RatVec c;               // objective
  bool maximize = true;
  bool nonneg = false;    // variables restricted to x >= 0 (else free)
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rat value;
  RatVec x;
  // Infeasibility certificate (Farkas):  u >= 0 for the inequality rows and
  // free w for the equality rows with  u^T A + w^T E = 0  (>= 0 when the
  // program restricts x >= 0) and  u^T b + w^T f < 0.
  RatVec farkas_u, farkas_w;
};

LpResult lp_solve(const LinearProgram& lp);

}  // namespace bellpoly
