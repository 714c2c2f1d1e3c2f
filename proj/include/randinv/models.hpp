#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "randinv/parametric.hpp"

namespace randinv::models {

// Two-class family over U = {0, 1, ..., n} in which the rival class's
// parameter space is the full simplex on the nonzero outcomes. Class "a" is
// the single distribution (delta at 0, (1-delta)/n elsewhere); class "b" has
// P[0] = 2*delta and P[u] = lambda_u (1 - 2*delta).
class LinearFamily final : public ParamFamily {
 public:
  LinearFamily(int n, double delta);

  const std::vector<Label>& classes() const override { return classes_; }
  const std::vector<Label>& codomain() const override { return codomain_; }
  SupLogLik sup_log_likelihood(const Label& cls, const Counts& c) const override;
  std::vector<GridPoint> grid(const Label& cls, int resolution) const override;
  Dist point(const ParamPoint& p) const override;

  int n() const { return n_; }
  double delta() const { return delta_; }
  Dist class_a_dist() const;

 private:
  int n_;
  double delta_;
  std::vector<Label> classes_{"a", "b"};
  std::vector<Label> codomain_;
};

// True when 2 (1 - 2 delta)^(delta/2) > 1, the smallness condition under
// which the family defeats maximum likelihood at k <= n/2.
bool linear_check_delta(double delta);

struct LinearSupLogs {
  double log_class_a = 0.0;        // exact sup of the log-likelihood, class a
  double log_class_b_lower = 0.0;  // closed-form lower bound for class b
};

// Total (not per-sample) log-likelihood sup for class a and the uniform-
// lambda lower bound for class b, for an outcome-index sequence of length
// k <= n. Only the number of zero coordinates enters either formula.
LinearSupLogs linear_sup_likelihoods(const LinearFamily& fam,
                                     const std::vector<std::size_t>& seq);

// Two-class family over U = {(1,0), (1,1), (2,0), (2,1)} with angular
// parameters: class a1 has P[(1,j)] = sin^2 t on Theta(a1) = [pi/4, 3pi/4),
// class a2 swaps sine and cosine on Theta(a2) = (pi/4, 3pi/4], where
// j = floor(2t/pi) is constant per parameter. The two classes' distance
// infima vanish while every individual pair stays separated.
class TrigFamily final : public ParamFamily {
 public:
  TrigFamily();

  const std::vector<Label>& classes() const override { return classes_; }
  const std::vector<Label>& codomain() const override { return codomain_; }
  SupLogLik sup_log_likelihood(const Label& cls, const Counts& c) const override;
  std::vector<GridPoint> grid(const Label& cls, int resolution) const override;
  Dist point(const ParamPoint& p) const override;

 private:
  std::vector<Label> classes_{"a1", "a2"};
  std::vector<Label> codomain_{"1_0", "1_1", "2_0", "2_1"};
};

// Count ones and twos in the first coordinates; more ones selects a1, more
// twos selects a2, and a tie goes to a1 when j = 0 and to a2 otherwise.
// Counts must be concentrated on second coordinate j.
Label trig_pedestrian(const Counts& c, int j);

// Probability of a tied count at the uniform parameter: C(k, k/2) 2^-k for
// even k; odd k can never tie and yields 0.
double trig_tie_probability(int k);

// ---- four-leaf two-state symmetric substitution model ----

enum class Topology { T12_34, T13_24, T14_23 };

Label topology_label(Topology t);
Topology topology_from_label(const Label& l);
const std::vector<Label>& topology_labels();

struct EdgeProbs {
  std::array<double, 4> pendant{};  // per leaf 1..4
  double central = 0.0;
};

// Site patterns are assignments {1,2,3,4} -> {0,1} encoded as integers 0..15
// with leaf 1 as the most significant bit; labels are the 4-bit strings.
Label pattern_label(int code);
int pattern_code(const Label& l);
const std::vector<Label>& pattern_labels();

// Distribution over the 16 site patterns: a uniform state at one internal
// vertex propagates across every edge, flipping with that edge's probability;
// the pattern probability sums the two internal-vertex assignments with the
// 1/2 root factor.
Dist cfn_distribution(Topology t, const EdgeProbs& p);

// Condition for strictly positive separation: pendant probabilities at most g
// and central probability at least f, with 0 < f, g < 1/2.
bool cfn_check_P(const EdgeProbs& p, double f, double g);

// Three-class family over the 16 site patterns, one class per topology;
// theta = (pendant 1..4, central). The likelihood supremum over the closed
// 5-cube [0, 1/2]^5 is located by multistart grid search plus coordinate
// ascent (a documented heuristic; no global guarantee). When (f, g) bounds
// are supplied, grid() enumerates only parameters satisfying the separation
// condition.
class CfnFamily final : public ParamFamily {
 public:
  explicit CfnFamily(std::optional<std::pair<double, double>> f_g = std::nullopt,
                     int sup_grid_points = 6);

  const std::vector<Label>& classes() const override { return topology_labels(); }
  const std::vector<Label>& codomain() const override { return pattern_labels(); }
  SupLogLik sup_log_likelihood(const Label& cls, const Counts& c) const override;
  std::vector<GridPoint> grid(const Label& cls, int resolution) const override;
  Dist point(const ParamPoint& p) const override;

  // Best parameters found for a class, exposed for reporting.
  std::pair<double, EdgeProbs> fit(const Label& cls, const Counts& c) const;

 private:
  std::optional<std::pair<double, double>> f_g_;
  int sup_grid_points_;
};

}  // namespace randinv::models
