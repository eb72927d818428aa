#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bellpoly/linprog.hpp"

using namespace bellpoly;

TEST_CASE("interval") {
  LinearProgram lp;
  lp.nvars = 1;
  lp.A = {{Rat(1)}, {Rat(-1)}};
  lp.b = {Rat(1), Rat(0)};
  lp.c = {Rat(1)};
  lp.maximize = true;
  auto r = lp_solve(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.value == 1);
  CHECK(r.x[0] == 1);
  lp.maximize = false;
  r = lp_solve(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.value == 0);
}

TEST_CASE("equality rows and free variables") {
  // max x + y  s.t.  x + y == 2,  x <= 3/2  (x, y free)
  LinearProgram lp;
  lp.nvars = 2;
  lp.E = {{Rat(1), Rat(1)}};
  lp.f = {Rat(2)};
  lp.A = {{Rat(1), Rat(0)}};
  lp.b = {Rat(3, 2)};
  lp.c = {Rat(1), Rat(1)};
  auto r = lp_solve(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.value == 2);
  CHECK(r.x[0] + r.x[1] == 2);
  CHECK(r.x[0] <= Rat(3, 2));

  // min x - y with the same rows: y = 2 - x, objective 2x - 2 -> min at x -> -inf
  lp.c = {Rat(1), Rat(-1)};
  lp.maximize = false;
  r = lp_solve(lp);
  CHECK(r.status == LpStatus::Unbounded);
}

TEST_CASE("unbounded nonneg program") {
  LinearProgram lp;
  lp.nvars = 1;
  lp.nonneg = true;
  lp.c = {Rat(1)};
  lp.maximize = true;
  auto r = lp_solve(lp);
  CHECK(r.status == LpStatus::Unbounded);
}

TEST_CASE("infeasibility certificates") {
  // x >= 0, x <= -1
  LinearProgram lp;
  lp.nvars = 1;
  lp.nonneg = true;
  lp.A = {{Rat(1)}};
  lp.b = {Rat(-1)};
  lp.c = {Rat(0)};
  auto r = lp_solve(lp);
  REQUIRE(r.status == LpStatus::Infeasible);
  REQUIRE(r.farkas_u.size() == 1);
  CHECK(r.farkas_u[0] >= 0);
  // u^T A >= 0 (componentwise), u^T b < 0
  CHECK(r.farkas_u[0] * lp.A[0][0] >= 0);
  CHECK(r.farkas_u[0] * lp.b[0] < 0);

  // inconsistent equalities on nonneg vars
  LinearProgram lq;
  lq.nvars = 2;
  lq.nonneg = true;
  lq.E = {{Rat(1), Rat(1)}, {Rat(1), Rat(1)}};
  lq.f = {Rat(2), Rat(3)};
  lq.c = {Rat(0), Rat(0)};
  auto q = lp_solve(lq);
  REQUIRE(q.status == LpStatus::Infeasible);
  for (int j = 0; j < 2; ++j) {
    Rat col = q.farkas_w[0] * lq.E[0][j] + q.farkas_w[1] * lq.E[1][j];
    CHECK(col >= 0);
  }
  CHECK(q.farkas_w[0] * lq.f[0] + q.farkas_w[1] * lq.f[1] < 0);
}

TEST_CASE("Beale cycling instance terminates under Bland's rule") {
  // min -3/4 x1 + 150 x2 - 1/50 x3 + 6 x4, the classic cycling example
  LinearProgram lp;
  lp.nvars = 4;
  lp.nonneg = true;
  lp.maximize = false;
  lp.c = {Rat(-3, 4), Rat(150), Rat(-1, 50), Rat(6)};
  lp.A = {
      {Rat(1, 4), Rat(-60), Rat(-1, 25), Rat(9)},
      {Rat(1, 2), Rat(-90), Rat(-1, 50), Rat(3)},
      {Rat(0), Rat(0), Rat(1), Rat(0)},
  };
  lp.b = {Rat(0), Rat(0), Rat(1)};
  auto r = lp_solve(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.value == Rat(-1, 20));
}

TEST_CASE("exactness with awkward rationals") {
  // max 7/3 x + 5/7 y  s.t.  x/2 + y/3 <= 11/6, x <= 2, y <= 3, x,y >= 0
  LinearProgram lp;
  lp.nvars = 2;
  lp.nonneg = true;
  lp.c = {Rat(7, 3), Rat(5, 7)};
  lp.A = {{Rat(1, 2), Rat(1, 3)}, {Rat(1), Rat(0)}, {Rat(0), Rat(1)}};
  lp.b = {Rat(11, 6), Rat(2), Rat(3)};
  auto r = lp_solve(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  // optimum at x = 2, y = 5/2: value 14/3 + 25/14 = 271/42
  CHECK(r.value == Rat(271, 42));
  CHECK(r.x[0] == 2);
  CHECK(r.x[1] == Rat(5, 2));
}
