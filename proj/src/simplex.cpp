#include "randinv/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

namespace randinv::lp {

namespace {

struct Tableau {
  std::size_t nvars = 0;     // original variables
  std::size_t ncols = 0;     // original + slack/surplus + artificial
  std::size_t nrows = 0;
  std::vector<std::vector<double>> body;  // nrows x (ncols + 1), rhs last
  std::vector<std::size_t> basis;         // basic column per row
  std::vector<bool> artificial;           // per column
  std::vector<double> zrow;               // reduced costs + objective value

  double& rhs(std::size_t i) { return body[i][ncols]; }
};

void pivot(Tableau& t, std::size_t prow, std::size_t pcol) {
  auto& row = t.body[prow];
  const double pv = row[pcol];
  for (double& v : row) v /= pv;
  for (std::size_t i = 0; i < t.nrows; ++i) {
    if (i == prow) continue;
    const double f = t.body[i][pcol];
    if (f == 0.0) continue;
    for (std::size_t j = 0; j <= t.ncols; ++j) t.body[i][j] -= f * row[j];
  }
  const double zf = t.zrow[pcol];
  if (zf != 0.0) {
    for (std::size_t j = 0; j <= t.ncols; ++j) t.zrow[j] -= zf * row[j];
  }
  t.basis[prow] = pcol;
}

// Reduced costs for objective c (length ncols): z_j = c_B^T T_j - c_j.
void reset_zrow(Tableau& t, const std::vector<double>& c) {
  t.zrow.assign(t.ncols + 1, 0.0);
  for (std::size_t j = 0; j < t.ncols; ++j) t.zrow[j] = -c[j];
  t.zrow[t.ncols] = 0.0;
  for (std::size_t i = 0; i < t.nrows; ++i) {
    const double cb = c[t.basis[i]];
    if (cb == 0.0) continue;
    for (std::size_t j = 0; j <= t.ncols; ++j) t.zrow[j] += cb * t.body[i][j];
  }
}

// Bland's rule: entering = lowest eligible column index, leaving = lowest
// basic variable among ratio-test ties. Returns false on unboundedness.
bool run_simplex(Tableau& t, const std::vector<bool>& frozen, double tol) {
  const std::size_t max_iters = 50000 + 200 * (t.nrows + t.ncols);
  for (std::size_t iter = 0; iter < max_iters; ++iter) {
    std::size_t entering = t.ncols;
    for (std::size_t j = 0; j < t.ncols; ++j) {
      if (frozen[j]) continue;
      if (t.zrow[j] < -tol) {
        entering = j;
        break;
      }
    }
    if (entering == t.ncols) return true;  // optimal

    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < t.nrows; ++i) {
      const double a = t.body[i][entering];
      if (a > tol) best_ratio = std::min(best_ratio, t.rhs(i) / a);
    }
    if (best_ratio == std::numeric_limits<double>::infinity()) return false;  // unbounded
    std::size_t leaving = t.nrows;
    for (std::size_t i = 0; i < t.nrows; ++i) {
      const double a = t.body[i][entering];
      if (a > tol && t.rhs(i) / a <= best_ratio + tol) {
        if (leaving == t.nrows || t.basis[i] < t.basis[leaving]) leaving = i;
      }
    }
    pivot(t, leaving, entering);
  }
  throw std::runtime_error("simplex: iteration limit exceeded (numerical breakdown)");
}

}  // namespace

Solution maximize(const Problem& problem, double tol) {
  const std::size_t n = problem.objective.size();
  const std::size_t m = problem.constraints.size();

  for (const auto& c : problem.constraints) {
    if (c.coeffs.size() != n) {
      throw std::invalid_argument("lp::maximize: constraint length does not match objective");
    }
  }

  // Normalize to rhs >= 0 and count auxiliary columns.
  std::vector<std::vector<double>> rows(m);
  std::vector<Relation> rels(m);
  std::vector<double> rhs(m);
  std::size_t n_slack = 0;
  std::size_t n_art = 0;
  for (std::size_t i = 0; i < m; ++i) {
    rows[i] = problem.constraints[i].coeffs;
    rels[i] = problem.constraints[i].rel;
    rhs[i] = problem.constraints[i].rhs;
    if (rhs[i] < 0.0) {
      for (double& v : rows[i]) v = -v;
      rhs[i] = -rhs[i];
      if (rels[i] == Relation::LessEq) rels[i] = Relation::GreaterEq;
      else if (rels[i] == Relation::GreaterEq) rels[i] = Relation::LessEq;
    }
    if (rels[i] != Relation::Equal) ++n_slack;
    if (rels[i] != Relation::LessEq) ++n_art;
  }

  Tableau t;
  t.nvars = n;
  t.ncols = n + n_slack + n_art;
  t.nrows = m;
  t.body.assign(m, std::vector<double>(t.ncols + 1, 0.0));
  t.basis.assign(m, 0);
  t.artificial.assign(t.ncols, false);

  std::size_t slack_at = n;
  std::size_t art_at = n + n_slack;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t.body[i][j] = rows[i][j];
    t.body[i][t.ncols] = rhs[i];
    switch (rels[i]) {
      case Relation::LessEq:
        t.body[i][slack_at] = 1.0;
        t.basis[i] = slack_at++;
        break;
      case Relation::GreaterEq:
        t.body[i][slack_at] = -1.0;
        ++slack_at;
        t.body[i][art_at] = 1.0;
        t.artificial[art_at] = true;
        t.basis[i] = art_at++;
        break;
      case Relation::Equal:
        t.body[i][art_at] = 1.0;
        t.artificial[art_at] = true;
        t.basis[i] = art_at++;
        break;
    }
  }

  std::vector<bool> frozen(t.ncols, false);
  Solution sol;

  if (n_art > 0) {
    // Phase 1: maximize -sum(artificials).
    std::vector<double> c1(t.ncols, 0.0);
    for (std::size_t j = 0; j < t.ncols; ++j) {
      if (t.artificial[j]) c1[j] = -1.0;
    }
    reset_zrow(t, c1);
    if (!run_simplex(t, frozen, tol)) {
      throw std::runtime_error("simplex: phase 1 reported unbounded (numerical breakdown)");
    }
    if (t.zrow[t.ncols] < -tol) {
      sol.status = Status::Infeasible;
      return sol;
    }
    // Drive remaining artificials out of the basis where possible.
    for (std::size_t i = 0; i < t.nrows; ++i) {
      if (!t.artificial[t.basis[i]]) continue;
      for (std::size_t j = 0; j < t.ncols; ++j) {
        if (t.artificial[j]) continue;
        if (std::abs(t.body[i][j]) > tol) {
          pivot(t, i, j);
          break;
        }
      }
    }
    for (std::size_t j = 0; j < t.ncols; ++j) {
      if (t.artificial[j]) frozen[j] = true;
    }
  }

  // Phase 2.
  std::vector<double> c2(t.ncols, 0.0);
  for (std::size_t j = 0; j < n; ++j) c2[j] = problem.objective[j];
  reset_zrow(t, c2);
  if (!run_simplex(t, frozen, tol)) {
    sol.status = Status::Unbounded;
    return sol;
  }

  sol.status = Status::Optimal;
  sol.value = t.zrow[t.ncols];
  sol.x.assign(n, 0.0);
  for (std::size_t i = 0; i < t.nrows; ++i) {
    if (t.basis[i] < n) sol.x[t.basis[i]] = t.rhs(i);
  }
  return sol;
}

}  // namespace randinv::lp
