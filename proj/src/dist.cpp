#include "randinv/dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace randinv {

namespace {

void check_unique(const std::vector<Label>& labels, const char* what) {
  std::unordered_set<std::string_view> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) {
      throw std::invalid_argument(std::string(what) + ": duplicate label '" + l + "'");
    }
  }
}

}  // namespace

Dist::Dist(std::vector<Label> labels, std::vector<double> probs, double tol)
    : labels_(std::move(labels)), probs_(std::move(probs)) {
  if (labels_.size() != probs_.size()) {
    throw std::invalid_argument("Dist: labels and probabilities differ in length");
  }
  if (labels_.empty()) throw std::invalid_argument("Dist: empty distribution");
  check_unique(labels_, "Dist");
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0)) throw std::invalid_argument("Dist: negative or NaN probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > tol) {
    throw std::invalid_argument("Dist: probabilities sum to " + std::to_string(sum) +
                                ", outside tolerance of 1");
  }
}

std::size_t Dist::index_of(const Label& l) const {
  auto it = std::find(labels_.begin(), labels_.end(), l);
  if (it == labels_.end()) throw std::invalid_argument("Dist: unknown label '" + l + "'");
  return static_cast<std::size_t>(it - labels_.begin());
}

Counts::Counts(std::vector<Label> outcome_labels, std::vector<std::int64_t> values)
    : outcomes(std::move(outcome_labels)), counts(std::move(values)) {
  if (outcomes.size() != counts.size()) {
    throw std::invalid_argument("Counts: outcomes and counts differ in length");
  }
  check_unique(outcomes, "Counts");
  for (std::int64_t c : counts) {
    if (c < 0) throw std::invalid_argument("Counts: negative count");
  }
}

std::int64_t Counts::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

namespace {

void require_same_labels(const Dist& p, const Dist& q, const char* op) {
  if (!p.same_labels(q)) {
    throw std::invalid_argument(std::string(op) + ": distributions are over different codomains");
  }
}

}  // namespace

double variational_distance(const Dist& p, const Dist& q) {
  require_same_labels(p, q, "variational_distance");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) d += std::abs(p.prob(i) - q.prob(i));
  return d;
}

double l2_distance(const Dist& p, const Dist& q) {
  require_same_labels(p, q, "l2_distance");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double diff = p.prob(i) - q.prob(i);
    s += diff * diff;
  }
  return std::sqrt(s);
}

double kl_divergence(const Dist& p, const Dist& q) {
  require_same_labels(p, q, "kl_divergence");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pu = p.prob(i);
    if (pu == 0.0) continue;
    const double qu = q.prob(i);
    if (qu == 0.0) return std::numeric_limits<double>::infinity();
    d += pu * std::log(pu / qu);
  }
  return d;
}

SupportInfo min_positive_prob(const Dist& p) {
  SupportInfo info;
  info.alpha = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.prob(i) > 0.0) {
      info.support.push_back(p.labels()[i]);
      info.indices.push_back(i);
      info.alpha = std::min(info.alpha, p.prob(i));
    }
  }
  return info;
}

Dist empirical_distribution(const Counts& c) {
  const std::int64_t k = c.total();
  if (k <= 0) throw std::invalid_argument("empirical_distribution: no observations");
  std::vector<double> probs(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    probs[i] = static_cast<double>(c.counts[i]) / static_cast<double>(k);
  }
  return Dist(c.outcomes, std::move(probs), kInternalTol);
}

std::size_t draw_from(const Dist& p, RngStream& rng) { return rng.next_index(p.probs()); }

Counts sample_dist(const Dist& p, std::int64_t k, RngStream& rng) {
  if (k < 1) throw std::invalid_argument("sample_dist: k must be at least 1");
  std::vector<std::int64_t> counts(p.size(), 0);
  for (std::int64_t i = 0; i < k; ++i) ++counts[draw_from(p, rng)];
  return Counts(p.labels(), std::move(counts));
}

std::vector<std::size_t> sample_dist_sequence(const Dist& p, std::int64_t k, RngStream& rng) {
  if (k < 1) throw std::invalid_argument("sample_dist_sequence: k must be at least 1");
  std::vector<std::size_t> seq(static_cast<std::size_t>(k));
  for (auto& s : seq) s = draw_from(p, rng);
  return seq;
}

Counts counts_from_sequence(const std::vector<Label>& outcome_labels,
                            const std::vector<std::size_t>& seq) {
  std::vector<std::int64_t> counts(outcome_labels.size(), 0);
  for (std::size_t idx : seq) {
    if (idx >= outcome_labels.size()) {
      throw std::invalid_argument("counts_from_sequence: index out of range");
    }
    ++counts[idx];
  }
  return Counts(outcome_labels, std::move(counts));
}

}  // namespace randinv
