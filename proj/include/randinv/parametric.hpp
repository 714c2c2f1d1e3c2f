#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "randinv/dist.hpp"
#include "randinv/inversion.hpp"
#include "randinv/rng.hpp"

namespace randinv {

// Opaque parameter descriptor; each family documents its own layout.
using Theta = std::vector<double>;

struct ParamPoint {
  Label cls;
  Theta theta;
};

struct SupLogLik {
  double value = 0.0;  // per-sample log-likelihood supremum, in [-inf, 0]
  bool attained = false;
};

struct GridPoint {
  Theta theta;
  Dist dist;
};

// A parametric family B = {(a, theta)}: per-class distributions over a common
// codomain with a sup-likelihood oracle. grid(r) must return nested point
// sets as r grows (grid(r) contains grid(r-1)) so distance estimates shrink
// monotonically. All oracles must be pure and reentrant.
class ParamFamily {
 public:
  virtual ~ParamFamily() = default;

  virtual const std::vector<Label>& classes() const = 0;
  virtual const std::vector<Label>& codomain() const = 0;

  virtual SupLogLik sup_log_likelihood(const Label& cls, const Counts& c) const = 0;
  virtual std::vector<GridPoint> grid(const Label& cls, int resolution) const = 0;
  virtual Dist point(const ParamPoint& p) const = 0;
};

// Explicit finite family: each class carries a fixed list of distributions;
// theta is the single index into that list.
class GridFamily final : public ParamFamily {
 public:
  GridFamily(std::vector<Label> codomain, std::vector<std::pair<Label, std::vector<Dist>>> classes);

  const std::vector<Label>& classes() const override { return class_labels_; }
  const std::vector<Label>& codomain() const override { return codomain_; }
  SupLogLik sup_log_likelihood(const Label& cls, const Counts& c) const override;
  std::vector<GridPoint> grid(const Label& cls, int resolution) const override;
  Dist point(const ParamPoint& p) const override;

  const std::vector<Dist>& dists_of(const Label& cls) const;

 private:
  std::vector<Label> codomain_;
  std::vector<Label> class_labels_;
  std::vector<std::vector<Dist>> dists_;
  std::size_t class_index(const Label& cls) const;
};

// Per-sample log-likelihood (1/k) sum_u count_u log p_u; -inf when a counted
// outcome has zero probability.
double log_likelihood(const Dist& p, const Counts& c);

struct ClassScore {
  Label cls;
  SupLogLik sup;
};

struct MleDecision {
  Label winner;
  std::vector<ClassScore> scores;
};

// Parametric maximum likelihood decision: the class with the strictly largest
// likelihood supremum wins; among suprema tied within 1e-12, classes that
// attain theirs are preferred, and any remaining tie is broken uniformly at
// random.
MleDecision parametric_mle(const ParamFamily& family, const Counts& c, RngStream& rng,
                           TieBreak ties = TieBreak::Uniform);

// Markov-type tail bounds on the empirical distribution of k i.i.d. draws.
double concentration_bound_kl(std::int64_t u_plus, std::int64_t k, double delta);
double concentration_bound_var(std::int64_t u_plus, std::int64_t k, double delta);

// Smallest k guaranteeing d_KL(p_hat, p) < delta and d(p_hat, p) < delta
// simultaneously with probability at least 1 - epsilon.
std::int64_t concentration_sample_size(std::int64_t u_plus, double epsilon, double delta);

// The constant 2/(2 - sqrt(3))^2 in the MLE sample bound.
double mle_bound_constant();

// Smallest k at which maximum likelihood recovers the generating class with
// probability at least 1 - epsilon whenever the generating distribution is at
// variational distance >= d from every rival class.
std::int64_t mle_sample_size(std::int64_t u_plus, double epsilon, double d);

// Grid upper bound on d_(a,theta) = inf over rival classes of the variational
// distance from point(p); nonincreasing in resolution by the nested-grid
// contract.
double estimate_d(const ParamFamily& family, const ParamPoint& p, int resolution);

}  // namespace randinv
