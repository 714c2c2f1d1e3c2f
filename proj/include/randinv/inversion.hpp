#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "randinv/dist.hpp"
#include "randinv/random_fn.hpp"
#include "randinv/rng.hpp"

namespace randinv {

enum class TieBreak { Uniform, FirstLabel };

// Margin of Xi against inverter Gamma for one ordered pair:
// P[gamma_{xi_a} = a] - P[gamma_{xi_a} = x].
struct Margin {
  Label a;
  Label x;
  double value = 0.0;
};

struct InverterReport {
  RandomFn inverter;
  std::vector<double> return_probabilities;  // aligned with inverter's A order
  std::vector<Margin> margins;               // all ordered pairs a != x
  bool invertible = false;                   // all margins strictly positive
  bool i1 = false;                           // r_a > 1/|A| for all a
  bool i2 = false;                           // P[gamma_{xi_a} = b] < 1/|A| for all b != a
  double epsilon = 1.0;                      // scaling used by the explicit construction
};

// Maximum a posteriori inverter: row u of the result is uniform over
// argmax_a P[xi_a = u] w(a) (point mass on the first such a in FirstLabel
// mode). Constant weights give maximum likelihood.
RandomFn map_estimator(const RandomFn& xi, const std::vector<double>& weights,
                       TieBreak ties = TieBreak::Uniform);
RandomFn map_estimator(const RandomFn& xi, TieBreak ties = TieBreak::Uniform);

// r_a = sum_u P[xi_a = u] P[gamma_u = a]; the diagonal of compose(xi, gamma).
std::vector<double> return_probabilities(const RandomFn& xi, const RandomFn& gamma);

struct SeparationResult {
  bool separates = false;
  double min_distance = 0.0;
};

// True when every pair of rows is farther apart than tol in variational
// distance.
SeparationResult separates(const RandomFn& xi, double tol = kInternalTol);

// Explicit strict inverter G = eps*V + J/|A| with v_i = a_i/|a_i| -
// (1/|A|) sum_j a_j/|a_j|. The raw construction can have negative entries;
// eps = min(1, (1/|A|) / max|V|) / 2 restores nonnegativity while keeping
// every margin strictly positive (margins scale linearly with eps).
InverterReport strict_inverter(const RandomFn& xi);

struct InvertibilityResult {
  bool invertible = false;
  std::vector<Margin> margins;
  double min_margin = 0.0;
  bool i1 = false;
  bool i2 = false;
};

InvertibilityResult check_invertibility(const RandomFn& xi, const RandomFn& gamma);

struct MinimaxResult {
  RandomFn inverter;
  double value = 0.0;         // max over Gamma of min_a r_a
  Dist least_favorable;       // prior mu over A from the dual program
  double dual_value = 0.0;
  double duality_gap = 0.0;
};

// Optimal inverter via the primal LP (max z s.t. r_a >= z, rows of G
// stochastic) and its dual (min sum_u t_u s.t. t_u >= mu(a) P[xi_a = u],
// mu a distribution), both solved independently as a self-check.
MinimaxResult minimax_inverter(const RandomFn& xi);

enum class BoundVariant { Paper, Conservative };

// Worst-case lower bound on the minimax return probability from the pairwise
// variational distances: 1/|A| + c * min_a sum_b d(a,b) with
// c = 1/(2|A|(|A|-1)) for Paper and 1/(4|A|(|A|-1)) for Conservative.
double separation_lower_bound(const RandomFn& xi, BoundVariant variant);

struct PairwiseGap {
  double pairwise_abs_sum = 0.0;   // sum over i<j of |b_i - b_j|
  double max_dev_from_mean = 0.0;  // max_j (b_j - mean)
};

PairwiseGap pairwise_gap(const std::vector<double>& b);

struct RankTestResult {
  bool full = false;
  int rank = 0;
  // Nontrivial x with sum_u P[upsilon_u = z] x_u = 0 for all z and
  // sum_u x_u = 0, present when the system matrix is rank deficient.
  std::optional<std::vector<double>> null_vector;
};

// Rank test for composition invertibility: builds the homogeneous system
// matrix (one row per z plus an all-ones row, one column per u) and checks
// full column rank by pivoted elimination.
RankTestResult composition_rank_test(const RandomFn& upsilon, double pivot_tol = 1e-9);

// From a nontrivial null vector, the two-point random function whose positive
// and negative parts give xi_a and xi_b; it separates {a, b} with distance 2
// while both elements compose to the same distribution through upsilon.
RandomFn composition_counterexample(const RandomFn& upsilon, const std::vector<double>& x,
                                    double tol = 1e-9);

struct AmplifyResult {
  double success = 0.0;  // probability the plurality vote returns a
  bool exact = false;
};

// Plurality vote over m independent applications of gamma to independent
// draws of xi_a, ties broken uniformly. Exact when the number of count
// vectors is small, Monte Carlo otherwise. Success converges to 1 in m
// whenever (xi, gamma) has positive margins at a.
AmplifyResult amplify(const RandomFn& xi, const RandomFn& gamma, int m, const Label& a,
                      RngStream& rng, std::int64_t mc_trials = 100000,
                      std::uint64_t max_enumeration = 2000000);

}  // namespace randinv
