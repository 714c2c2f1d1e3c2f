#pragma once

// Shared helpers for the unit and acceptance suites: random instance
// generators plus independent brute-force oracles. Every oracle here
// deliberately avoids the library code path it is used to check.

#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "randinv/dist.hpp"
#include "randinv/models.hpp"
#include "randinv/random_fn.hpp"
#include "randinv/rng.hpp"

namespace testsupport {

using randinv::Dist;
using randinv::Label;
using randinv::RandomFn;
using randinv::RngStream;

inline std::vector<Label> make_labels(const std::string& prefix, std::size_t n) {
  std::vector<Label> out;
  out.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

// Dirichlet(1,...,1) row via exponential spacings.
inline std::vector<double> random_simplex_point(std::size_t n, RngStream& rng) {
  std::vector<double> w(n);
  double sum = 0.0;
  for (auto& v : w) {
    v = -std::log(1.0 - rng.next_unit());
    sum += v;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    w[i] /= sum;
    acc += w[i];
  }
  w[n - 1] = 1.0 - acc;  // exact unit sum
  return w;
}

inline RandomFn random_stochastic(std::size_t na, std::size_t nu, RngStream& rng,
                                  const std::string& dom_prefix = "a",
                                  const std::string& cod_prefix = "u") {
  std::vector<std::vector<double>> rows;
  rows.reserve(na);
  for (std::size_t i = 0; i < na; ++i) rows.push_back(random_simplex_point(nu, rng));
  return RandomFn(make_labels(dom_prefix, na), make_labels(cod_prefix, nu), std::move(rows));
}

// Regenerates until all pairwise row distances clear the threshold.
inline RandomFn random_separating(std::size_t na, std::size_t nu, RngStream& rng,
                                  double min_gap = 1e-3) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    RandomFn xi = random_stochastic(na, nu, rng);
    double gap = 2.0;
    for (std::size_t i = 0; i < na; ++i) {
      for (std::size_t j = i + 1; j < na; ++j) {
        double d = 0.0;
        for (std::size_t u = 0; u < nu; ++u) d += std::abs(xi.entry(i, u) - xi.entry(j, u));
        gap = std::min(gap, d);
      }
    }
    if (gap > min_gap) return xi;
  }
  throw std::runtime_error("random_separating: could not generate a separated instance");
}

// The two-element instance with xi_1 = u1 surely and xi_2 = (2/3, 1/3).
inline RandomFn example22() {
  return RandomFn({"a1", "a2"}, {"u1", "u2"},
                  {{1.0, 0.0}, {2.0 / 3.0, 1.0 / 3.0}});
}

// Product distribution of row a over k-tuples by nested loops (odometer),
// independent of the base-|U| encoding used by the library.
inline std::vector<double> kfold_row_oracle(const RandomFn& xi, std::size_t a, int k) {
  const std::size_t nu = xi.codomain_size();
  std::size_t total = 1;
  for (int i = 0; i < k; ++i) total *= nu;
  std::vector<double> out;
  out.reserve(total);
  std::vector<std::size_t> digits(static_cast<std::size_t>(k), 0);
  for (;;) {
    double p = 1.0;
    for (std::size_t d : digits) p *= xi.entry(a, d);
    out.push_back(p);
    int pos = k - 1;
    while (pos >= 0) {
      if (++digits[static_cast<std::size_t>(pos)] < nu) break;
      digits[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return out;
}

// P[plurality vote over m draws from q equals `target`] by enumerating all
// |q|^m outcome sequences (ties split uniformly).
inline double plurality_oracle(const std::vector<double>& q, int m, std::size_t target) {
  const std::size_t n = q.size();
  std::vector<std::size_t> seq(static_cast<std::size_t>(m), 0);
  double total = 0.0;
  for (;;) {
    double p = 1.0;
    std::vector<int> counts(n, 0);
    for (std::size_t s : seq) {
      p *= q[s];
      ++counts[s];
    }
    int best = 0;
    for (int c : counts) best = std::max(best, c);
    if (counts[target] == best) {
      int ties = 0;
      for (int c : counts) {
        if (c == best) ++ties;
      }
      total += p / ties;
    }
    int pos = m - 1;
    while (pos >= 0) {
      if (++seq[static_cast<std::size_t>(pos)] < n) break;
      seq[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return total;
}

// CFN pattern distribution by enumerating every full labeling of the six
// vertices (4 leaves + 2 internal).
inline std::array<double, 16> cfn_oracle(randinv::models::Topology t,
                                         const randinv::models::EdgeProbs& p) {
  std::array<double, 16> out{};
  const auto flip = [](double pe, int s0, int s1) { return s0 != s1 ? pe : 1.0 - pe; };
  std::array<int, 4> parent_is_x{};
  switch (t) {
    case randinv::models::Topology::T12_34: parent_is_x = {1, 1, 0, 0}; break;
    case randinv::models::Topology::T13_24: parent_is_x = {1, 0, 1, 0}; break;
    case randinv::models::Topology::T14_23: parent_is_x = {1, 0, 0, 1}; break;
  }
  for (int v = 0; v < 64; ++v) {
    const int l1 = (v >> 5) & 1, l2 = (v >> 4) & 1, l3 = (v >> 3) & 1, l4 = (v >> 2) & 1;
    const int sx = (v >> 1) & 1, sy = v & 1;
    const std::array<int, 4> leaves{l1, l2, l3, l4};
    double prob = 0.5 * flip(p.central, sx, sy);
    for (int leaf = 0; leaf < 4; ++leaf) {
      const int par = parent_is_x[static_cast<std::size_t>(leaf)] ? sx : sy;
      prob *= flip(p.pendant[static_cast<std::size_t>(leaf)], par,
                   leaves[static_cast<std::size_t>(leaf)]);
    }
    const int code = (l1 << 3) | (l2 << 2) | (l3 << 1) | l4;
    out[static_cast<std::size_t>(code)] += prob;
  }
  return out;
}

// Wilson interval recomputed from the closed form, using a fixed z for 95%.
inline std::pair<double, double> wilson_oracle_95(std::int64_t s, std::int64_t n) {
  const double z = 1.959963984540054;
  const double nn = static_cast<double>(n);
  const double ph = static_cast<double>(s) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = ph + z2 / (2.0 * nn);
  const double half = z * std::sqrt(ph * (1.0 - ph) / nn + z2 / (4.0 * nn * nn));
  return {(center - half) / denom, (center + half) / denom};
}

}  // namespace testsupport
