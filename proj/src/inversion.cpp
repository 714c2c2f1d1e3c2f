#include "randinv/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "randinv/simplex.hpp"

namespace randinv {

RandomFn map_estimator(const RandomFn& xi, const std::vector<double>& weights, TieBreak ties) {
  const std::size_t na = xi.domain_size();
  const std::size_t nu = xi.codomain_size();
  if (weights.size() != na) {
    throw std::invalid_argument("map_estimator: weight count does not match |A|");
  }
  for (double w : weights) {
    if (!(w > 0.0)) throw std::invalid_argument("map_estimator: weights must be positive");
  }
  std::vector<std::vector<double>> rows(nu, std::vector<double>(na, 0.0));
  for (std::size_t u = 0; u < nu; ++u) {
    double best = -1.0;
    for (std::size_t a = 0; a < na; ++a) best = std::max(best, xi.entry(a, u) * weights[a]);
    std::vector<std::size_t> arg;
    for (std::size_t a = 0; a < na; ++a) {
      if (xi.entry(a, u) * weights[a] == best) arg.push_back(a);
    }
    if (ties == TieBreak::FirstLabel) {
      rows[u][arg.front()] = 1.0;
    } else {
      const double share = 1.0 / static_cast<double>(arg.size());
      for (std::size_t a : arg) rows[u][a] = share;
    }
  }
  return RandomFn(xi.codomain(), xi.domain(), std::move(rows), kInternalTol);
}

RandomFn map_estimator(const RandomFn& xi, TieBreak ties) {
  return map_estimator(xi, std::vector<double>(xi.domain_size(), 1.0), ties);
}

std::vector<double> return_probabilities(const RandomFn& xi, const RandomFn& gamma) {
  if (xi.codomain() != gamma.domain() || xi.domain() != gamma.codomain()) {
    throw std::invalid_argument("return_probabilities: labels do not match");
  }
  const std::size_t na = xi.domain_size();
  std::vector<double> r(na, 0.0);
  for (std::size_t a = 0; a < na; ++a) {
    for (std::size_t u = 0; u < xi.codomain_size(); ++u) {
      r[a] += xi.entry(a, u) * gamma.entry(u, a);
    }
  }
  return r;
}

SeparationResult separates(const RandomFn& xi, double tol) {
  const std::size_t na = xi.domain_size();
  if (na < 2) throw std::invalid_argument("separates: need at least two domain elements");
  SeparationResult res;
  res.min_distance = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = i + 1; j < na; ++j) {
      double d = 0.0;
      for (std::size_t u = 0; u < xi.codomain_size(); ++u) {
        d += std::abs(xi.entry(i, u) - xi.entry(j, u));
      }
      res.min_distance = std::min(res.min_distance, d);
    }
  }
  res.separates = res.min_distance > tol;
  return res;
}

namespace {

InvertibilityResult margins_from_composition(const RandomFn& composed) {
  InvertibilityResult res;
  const std::size_t na = composed.domain_size();
  const double unif = 1.0 / static_cast<double>(na);
  res.min_margin = std::numeric_limits<double>::infinity();
  res.i1 = true;
  res.i2 = true;
  for (std::size_t a = 0; a < na; ++a) {
    const double raa = composed.entry(a, a);
    if (!(raa > unif)) res.i1 = false;
    for (std::size_t x = 0; x < na; ++x) {
      if (x == a) continue;
      if (!(composed.entry(a, x) < unif)) res.i2 = false;
      const double margin = raa - composed.entry(a, x);
      res.margins.push_back({composed.domain()[a], composed.domain()[x], margin});
      res.min_margin = std::min(res.min_margin, margin);
    }
  }
  res.invertible = res.min_margin > 0.0;
  return res;
}

}  // namespace

InvertibilityResult check_invertibility(const RandomFn& xi, const RandomFn& gamma) {
  return margins_from_composition(compose(xi, gamma));
}

InverterReport strict_inverter(const RandomFn& xi) {
  const auto sep = separates(xi);
  if (!sep.separates) {
    throw std::invalid_argument("strict_inverter: input does not separate its domain");
  }
  const std::size_t na = xi.domain_size();
  const std::size_t nu = xi.codomain_size();

  std::vector<double> norms(na, 0.0);
  for (std::size_t a = 0; a < na; ++a) {
    double s = 0.0;
    for (std::size_t u = 0; u < nu; ++u) s += xi.entry(a, u) * xi.entry(a, u);
    norms[a] = std::sqrt(s);
  }
  std::vector<double> mean_dir(nu, 0.0);
  for (std::size_t a = 0; a < na; ++a) {
    for (std::size_t u = 0; u < nu; ++u) mean_dir[u] += xi.entry(a, u) / norms[a];
  }
  for (double& v : mean_dir) v /= static_cast<double>(na);

  // Columns v_a of V, indexed [u][a].
  std::vector<std::vector<double>> v(nu, std::vector<double>(na, 0.0));
  double vmax = 0.0;
  for (std::size_t a = 0; a < na; ++a) {
    for (std::size_t u = 0; u < nu; ++u) {
      v[u][a] = xi.entry(a, u) / norms[a] - mean_dir[u];
      vmax = std::max(vmax, std::abs(v[u][a]));
    }
  }
  const double unif = 1.0 / static_cast<double>(na);
  const double eps = 0.5 * std::min(1.0, vmax > 0.0 ? unif / vmax : 1.0);

  std::vector<std::vector<double>> rows(nu, std::vector<double>(na, 0.0));
  for (std::size_t u = 0; u < nu; ++u) {
    for (std::size_t a = 0; a < na; ++a) rows[u][a] = eps * v[u][a] + unif;
  }
  RandomFn gamma(xi.codomain(), xi.domain(), std::move(rows), kInternalTol);

  std::vector<double> r = return_probabilities(xi, gamma);
  auto inv = check_invertibility(xi, gamma);
  return InverterReport{std::move(gamma), std::move(r), std::move(inv.margins),
                        inv.invertible,   inv.i1,       inv.i2,
                        eps};
}

MinimaxResult minimax_inverter(const RandomFn& xi) {
  const std::size_t na = xi.domain_size();
  const std::size_t nu = xi.codomain_size();

  // Primal: variables g_{ua} (u-major) then z; maximize z.
  lp::Problem primal;
  const std::size_t nvars = nu * na + 1;
  primal.objective.assign(nvars, 0.0);
  primal.objective[nvars - 1] = 1.0;
  for (std::size_t a = 0; a < na; ++a) {
    lp::Constraint c;
    c.coeffs.assign(nvars, 0.0);
    for (std::size_t u = 0; u < nu; ++u) c.coeffs[u * na + a] = xi.entry(a, u);
    c.coeffs[nvars - 1] = -1.0;
    c.rel = lp::Relation::GreaterEq;
    c.rhs = 0.0;
    primal.constraints.push_back(std::move(c));
  }
  for (std::size_t u = 0; u < nu; ++u) {
    lp::Constraint c;
    c.coeffs.assign(nvars, 0.0);
    for (std::size_t a = 0; a < na; ++a) c.coeffs[u * na + a] = 1.0;
    c.rel = lp::Relation::Equal;
    c.rhs = 1.0;
    primal.constraints.push_back(std::move(c));
  }
  auto psol = lp::maximize(primal);
  if (psol.status != lp::Status::Optimal) {
    throw std::runtime_error("minimax_inverter: primal LP did not reach an optimum");
  }

  // Dual: variables mu_a then t_u; maximize -sum t.
  lp::Problem dual;
  const std::size_t dvars = na + nu;
  dual.objective.assign(dvars, 0.0);
  for (std::size_t u = 0; u < nu; ++u) dual.objective[na + u] = -1.0;
  for (std::size_t a = 0; a < na; ++a) {
    for (std::size_t u = 0; u < nu; ++u) {
      lp::Constraint c;
      c.coeffs.assign(dvars, 0.0);
      c.coeffs[na + u] = 1.0;
      c.coeffs[a] = -xi.entry(a, u);
      c.rel = lp::Relation::GreaterEq;
      c.rhs = 0.0;
      dual.constraints.push_back(std::move(c));
    }
  }
  {
    lp::Constraint c;
    c.coeffs.assign(dvars, 0.0);
    for (std::size_t a = 0; a < na; ++a) c.coeffs[a] = 1.0;
    c.rel = lp::Relation::Equal;
    c.rhs = 1.0;
    dual.constraints.push_back(std::move(c));
  }
  auto dsol = lp::maximize(dual);
  if (dsol.status != lp::Status::Optimal) {
    throw std::runtime_error("minimax_inverter: dual LP did not reach an optimum");
  }

  std::vector<std::vector<double>> rows(nu, std::vector<double>(na, 0.0));
  for (std::size_t u = 0; u < nu; ++u) {
    for (std::size_t a = 0; a < na; ++a) rows[u][a] = std::max(0.0, psol.x[u * na + a]);
  }
  RandomFn gamma(xi.codomain(), xi.domain(), std::move(rows), kInputTol);

  std::vector<double> mu(na, 0.0);
  for (std::size_t a = 0; a < na; ++a) mu[a] = std::max(0.0, dsol.x[a]);

  MinimaxResult res{std::move(gamma), psol.value, Dist(xi.domain(), std::move(mu), kInputTol),
                    -dsol.value, std::abs(psol.value - (-dsol.value))};
  return res;
}

double separation_lower_bound(const RandomFn& xi, BoundVariant variant) {
  const std::size_t na = xi.domain_size();
  if (na < 2) throw std::invalid_argument("separation_lower_bound: need |A| >= 2");
  double min_row_sum = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < na; ++a) {
    double s = 0.0;
    for (std::size_t b = 0; b < na; ++b) {
      if (b == a) continue;
      double d = 0.0;
      for (std::size_t u = 0; u < xi.codomain_size(); ++u) {
        d += std::abs(xi.entry(a, u) - xi.entry(b, u));
      }
      s += d;
    }
    min_row_sum = std::min(min_row_sum, s);
  }
  const double n = static_cast<double>(na);
  const double denom = (variant == BoundVariant::Paper) ? 2.0 * n * (n - 1.0) : 4.0 * n * (n - 1.0);
  return 1.0 / n + min_row_sum / denom;
}

PairwiseGap pairwise_gap(const std::vector<double>& b) {
  if (b.size() < 2) throw std::invalid_argument("pairwise_gap: need at least two numbers");
  PairwiseGap g;
  for (std::size_t i = 0; i < b.size(); ++i) {
    for (std::size_t j = i + 1; j < b.size(); ++j) g.pairwise_abs_sum += std::abs(b[i] - b[j]);
  }
  const double mean = std::accumulate(b.begin(), b.end(), 0.0) / static_cast<double>(b.size());
  g.max_dev_from_mean = -std::numeric_limits<double>::infinity();
  for (double v : b) g.max_dev_from_mean = std::max(g.max_dev_from_mean, v - mean);
  return g;
}

RankTestResult composition_rank_test(const RandomFn& upsilon, double pivot_tol) {
  const std::size_t nu = upsilon.domain_size();
  const std::size_t nz = upsilon.codomain_size();

  // System matrix: one row per z (coefficients P[upsilon_u = z]) plus the
  // all-ones row; columns indexed by u.
  std::vector<std::vector<double>> m(nz + 1, std::vector<double>(nu, 0.0));
  for (std::size_t z = 0; z < nz; ++z) {
    for (std::size_t u = 0; u < nu; ++u) m[z][u] = upsilon.entry(u, z);
  }
  for (std::size_t u = 0; u < nu; ++u) m[nz][u] = 1.0;

  // Gaussian elimination with partial pivoting; record pivot column per step.
  const std::size_t nrows = m.size();
  std::vector<std::size_t> pivot_col_of_row;
  std::vector<bool> col_is_pivot(nu, false);
  std::size_t row = 0;
  for (std::size_t col = 0; col < nu && row < nrows; ++col) {
    std::size_t best = row;
    for (std::size_t i = row + 1; i < nrows; ++i) {
      if (std::abs(m[i][col]) > std::abs(m[best][col])) best = i;
    }
    if (std::abs(m[best][col]) <= pivot_tol) continue;
    std::swap(m[row], m[best]);
    const double pv = m[row][col];
    for (std::size_t j = col; j < nu; ++j) m[row][j] /= pv;
    for (std::size_t i = 0; i < nrows; ++i) {
      if (i == row) continue;
      const double f = m[i][col];
      if (f == 0.0) continue;
      for (std::size_t j = col; j < nu; ++j) m[i][j] -= f * m[row][j];
    }
    pivot_col_of_row.push_back(col);
    col_is_pivot[col] = true;
    ++row;
  }

  RankTestResult res;
  res.rank = static_cast<int>(row);
  res.full = (row == nu);
  if (res.full) return res;

  // Back-substitute with the first free column set to 1.
  std::size_t free_col = 0;
  while (col_is_pivot[free_col]) ++free_col;
  std::vector<double> x(nu, 0.0);
  x[free_col] = 1.0;
  for (std::size_t r = 0; r < pivot_col_of_row.size(); ++r) {
    x[pivot_col_of_row[r]] = -m[r][free_col];
  }
  double scale = 0.0;
  for (double v : x) scale = std::max(scale, std::abs(v));
  for (double& v : x) v /= scale;
  res.null_vector = std::move(x);
  return res;
}

RandomFn composition_counterexample(const RandomFn& upsilon, const std::vector<double>& x,
                                    double tol) {
  const std::size_t nu = upsilon.domain_size();
  if (x.size() != nu) {
    throw std::invalid_argument("composition_counterexample: vector length does not match |U|");
  }
  double xmax = 0.0;
  for (double v : x) xmax = std::max(xmax, std::abs(v));
  if (xmax <= tol) throw std::invalid_argument("composition_counterexample: trivial vector");

  double sum = 0.0;
  for (double v : x) sum += v;
  if (std::abs(sum) > tol * static_cast<double>(nu)) {
    throw std::invalid_argument("composition_counterexample: entries do not sum to zero");
  }
  for (std::size_t z = 0; z < upsilon.codomain_size(); ++z) {
    double dot = 0.0;
    for (std::size_t u = 0; u < nu; ++u) dot += upsilon.entry(u, z) * x[u];
    if (std::abs(dot) > tol * static_cast<double>(nu)) {
      throw std::invalid_argument(
          "composition_counterexample: vector does not solve the homogeneous system");
    }
  }

  double pos = 0.0;
  double neg = 0.0;
  for (double v : x) {
    if (v > 0.0) pos += v;
    if (v < 0.0) neg += v;
  }
  if (pos <= 0.0 || neg >= 0.0) {
    throw std::invalid_argument("composition_counterexample: vector lacks a sign change");
  }
  std::vector<std::vector<double>> rows(2, std::vector<double>(nu, 0.0));
  for (std::size_t u = 0; u < nu; ++u) {
    if (x[u] > 0.0) rows[0][u] = x[u] / pos;
    if (x[u] < 0.0) rows[1][u] = x[u] / neg;
  }
  return RandomFn({"a", "b"}, upsilon.domain(), std::move(rows), kInternalTol);
}

namespace {

// P[plurality of m i.i.d. draws from q equals target], ties uniform. Exact
// enumeration over count vectors.
double plurality_exact(const std::vector<double>& q, int m, std::size_t target) {
  const std::size_t n = q.size();
  std::vector<double> logq(n);
  for (std::size_t i = 0; i < n; ++i) {
    logq[i] = q[i] > 0.0 ? std::log(q[i]) : -std::numeric_limits<double>::infinity();
  }
  std::vector<double> logfact(static_cast<std::size_t>(m) + 1, 0.0);
  for (int i = 2; i <= m; ++i) {
    logfact[static_cast<std::size_t>(i)] =
        logfact[static_cast<std::size_t>(i - 1)] + std::log(static_cast<double>(i));
  }
  std::vector<int> counts(n, 0);
  double total = 0.0;
  // Depth-first over compositions of m into n parts.
  auto recurse = [&](auto&& self, std::size_t idx, int remaining) -> void {
    if (idx + 1 == n) {
      counts[idx] = remaining;
      double logp = logfact[static_cast<std::size_t>(m)];
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[i] == 0) continue;
        if (logq[i] == -std::numeric_limits<double>::infinity()) return;
        logp += counts[i] * logq[i] - logfact[static_cast<std::size_t>(counts[i])];
      }
      int best = *std::max_element(counts.begin(), counts.end());
      if (counts[target] != best) return;
      int ties = static_cast<int>(std::count(counts.begin(), counts.end(), best));
      total += std::exp(logp) / static_cast<double>(ties);
      return;
    }
    for (int c = 0; c <= remaining; ++c) {
      counts[idx] = c;
      self(self, idx + 1, remaining - c);
    }
  };
  recurse(recurse, 0, m);
  return total;
}

std::uint64_t composition_count(int m, std::size_t parts) {
  // C(m + parts - 1, parts - 1) with overflow guard.
  long double v = 1.0L;
  for (std::size_t i = 1; i < parts; ++i) {
    v *= static_cast<long double>(m + static_cast<int>(i)) / static_cast<long double>(i);
    if (v > 1e18L) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(v);
}

}  // namespace

AmplifyResult amplify(const RandomFn& xi, const RandomFn& gamma, int m, const Label& a,
                      RngStream& rng, std::int64_t mc_trials, std::uint64_t max_enumeration) {
  if (m < 1) throw std::invalid_argument("amplify: m must be at least 1");
  const RandomFn composed = compose(xi, gamma);
  const std::size_t ai = composed.domain_index(a);
  auto qrow = composed.row(ai);
  std::vector<double> q(qrow.begin(), qrow.end());
  const std::size_t target = composed.codomain_index(a);

  AmplifyResult res;
  if (composition_count(m, q.size()) <= max_enumeration) {
    res.success = plurality_exact(q, m, target);
    res.exact = true;
    return res;
  }
  std::int64_t wins = 0;
  std::vector<int> counts(q.size(), 0);
  for (std::int64_t t = 0; t < mc_trials; ++t) {
    std::fill(counts.begin(), counts.end(), 0);
    for (int i = 0; i < m; ++i) ++counts[rng.next_index(q)];
    const int best = *std::max_element(counts.begin(), counts.end());
    if (counts[target] != best) continue;
    const int nties = static_cast<int>(std::count(counts.begin(), counts.end(), best));
    if (nties == 1 || rng.next_below(static_cast<std::uint64_t>(nties)) == 0) ++wins;
  }
  res.success = static_cast<double>(wins) / static_cast<double>(mc_trials);
  res.exact = false;
  return res;
}

}  // namespace randinv
