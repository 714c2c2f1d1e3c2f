#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "randinv/rng.hpp"

namespace randinv {

using Label = std::string;

// Validation tolerances: user-supplied numbers are accepted if each row sums
// to 1 within kInputTol; internally constructed rows must meet kInternalTol.
inline constexpr double kInputTol = 1e-9;
inline constexpr double kInternalTol = 1e-12;

// A labeled finite probability distribution. Construction validates and never
// silently renormalizes.
class Dist {
 public:
  Dist(std::vector<Label> labels, std::vector<double> probs, double tol = kInputTol);

  const std::vector<Label>& labels() const { return labels_; }
  const std::vector<double>& probs() const { return probs_; }
  std::size_t size() const { return probs_.size(); }
  double prob(std::size_t i) const { return probs_[i]; }

  // Index of a label; throws std::invalid_argument if absent.
  std::size_t index_of(const Label& l) const;

  bool same_labels(const Dist& other) const { return labels_ == other.labels_; }

 private:
  std::vector<Label> labels_;
  std::vector<double> probs_;
};

inline Dist make_dist(std::vector<Label> labels, std::vector<double> weights) {
  return Dist(std::move(labels), std::move(weights));
}

// Multinomial outcome counts from total i.i.d. draws, aligned with a fixed
// outcome label list (zero counts allowed).
struct Counts {
  std::vector<Label> outcomes;
  std::vector<std::int64_t> counts;

  Counts(std::vector<Label> outcome_labels, std::vector<std::int64_t> values);

  std::int64_t total() const;
  std::size_t size() const { return counts.size(); }
};

// Sum_u |p_u - q_u|, in [0, 2]. Distributions must share the same ordered
// label list.
double variational_distance(const Dist& p, const Dist& q);

// Euclidean distance of the probability vectors.
double l2_distance(const Dist& p, const Dist& q);

// Sum over {u : p_u > 0} of p_u log(p_u / q_u), natural log. Terms with
// p_u = 0 contribute nothing; p_u > 0 with q_u = 0 makes the result +inf.
double kl_divergence(const Dist& p, const Dist& q);

struct SupportInfo {
  double alpha = 0.0;               // smallest positive probability
  std::vector<Label> support;       // labels with positive probability
  std::vector<std::size_t> indices; // their positions
};

// Smallest positive entry together with the support set.
SupportInfo min_positive_prob(const Dist& p);

// Normalized counts: p_hat(u) = count(u) / total. Errors when total is 0.
Dist empirical_distribution(const Counts& c);

// One categorical draw from p.
std::size_t draw_from(const Dist& p, RngStream& rng);

// k i.i.d. draws from p, returned as counts aligned with p's labels.
Counts sample_dist(const Dist& p, std::int64_t k, RngStream& rng);

// Same draws, but keeping the sequence of outcome indices.
std::vector<std::size_t> sample_dist_sequence(const Dist& p, std::int64_t k, RngStream& rng);

Counts counts_from_sequence(const std::vector<Label>& outcome_labels,
                            const std::vector<std::size_t>& seq);

}  // namespace randinv
