#include "doctest.h"

#include <cmath>

#include "randinv/simplex.hpp"

using namespace randinv::lp;

TEST_CASE("simplex solves a textbook maximization") {
  // max 3x + 5y  s.t. x <= 4, 2y <= 12, 3x + 2y <= 18  ->  36 at (2, 6)
  Problem p;
  p.objective = {3.0, 5.0};
  p.constraints = {{{1.0, 0.0}, Relation::LessEq, 4.0},
                   {{0.0, 2.0}, Relation::LessEq, 12.0},
                   {{3.0, 2.0}, Relation::LessEq, 18.0}};
  auto s = maximize(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.value == doctest::Approx(36.0).epsilon(1e-12));
  CHECK(s.x[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(s.x[1] == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("simplex handles equality and >= rows via phase 1") {
  // max x + y  s.t. x + y = 1, x >= 0.25  ->  1, e.g. x = 0.25, y = 0.75
  Problem p;
  p.objective = {1.0, 1.0};
  p.constraints = {{{1.0, 1.0}, Relation::Equal, 1.0},
                   {{1.0, 0.0}, Relation::GreaterEq, 0.25}};
  auto s = maximize(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.x[0] >= 0.25 - 1e-12);
  CHECK(s.x[0] + s.x[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("simplex reports infeasible and unbounded problems") {
  Problem inf;
  inf.objective = {1.0};
  inf.constraints = {{{1.0}, Relation::LessEq, 1.0}, {{1.0}, Relation::GreaterEq, 2.0}};
  CHECK(maximize(inf).status == Status::Infeasible);

  Problem unb;
  unb.objective = {1.0};
  unb.constraints = {{{1.0}, Relation::GreaterEq, 1.0}};
  CHECK(maximize(unb).status == Status::Unbounded);
}

TEST_CASE("simplex survives a degenerate cycling-prone instance") {
  // Beale's classic example; Bland's rule must terminate at 0.05.
  Problem p;
  p.objective = {0.75, -150.0, 0.02, -6.0};
  p.constraints = {{{0.25, -60.0, -1.0 / 25.0, 9.0}, Relation::LessEq, 0.0},
                   {{0.5, -90.0, -1.0 / 50.0, 3.0}, Relation::LessEq, 0.0},
                   {{0.0, 0.0, 1.0, 0.0}, Relation::LessEq, 1.0}};
  auto s = maximize(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.value == doctest::Approx(0.05).epsilon(1e-9));
}

TEST_CASE("negative right-hand sides are normalized") {
  // max -x  s.t. -x <= -2  (i.e. x >= 2)  ->  -2
  Problem p;
  p.objective = {-1.0};
  p.constraints = {{{-1.0}, Relation::LessEq, -2.0}};
  auto s = maximize(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.value == doctest::Approx(-2.0).epsilon(1e-12));
}
