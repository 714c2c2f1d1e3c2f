#pragma once

#include <vector>

namespace randinv::lp {

enum class Relation { LessEq, GreaterEq, Equal };

struct Constraint {
  std::vector<double> coeffs;
  Relation rel = Relation::LessEq;
  double rhs = 0.0;
};

// maximize objective . x  subject to the constraints and x >= 0.
struct Problem {
  std::vector<double> objective;
  std::vector<Constraint> constraints;
};

enum class Status { Optimal, Infeasible, Unbounded };

struct Solution {
  Status status = Status::Optimal;
  double value = 0.0;
  std::vector<double> x;
};

// Dense two-phase primal simplex with Bland's anticycling rule. Intended for
// the small instances this library produces (tens of variables); tol is the
// feasibility/optimality threshold.
Solution maximize(const Problem& problem, double tol = 1e-9);

}  // namespace randinv::lp
