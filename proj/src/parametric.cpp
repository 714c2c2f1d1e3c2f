#include "randinv/parametric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace randinv {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kTieTol = 1e-12;
}  // namespace

GridFamily::GridFamily(std::vector<Label> codomain,
                       std::vector<std::pair<Label, std::vector<Dist>>> classes)
    : codomain_(std::move(codomain)) {
  if (classes.empty()) throw std::invalid_argument("GridFamily: no classes");
  for (auto& [label, dists] : classes) {
    if (dists.empty()) throw std::invalid_argument("GridFamily: class '" + label + "' is empty");
    for (const auto& d : dists) {
      if (d.labels() != codomain_) {
        throw std::invalid_argument("GridFamily: distribution codomain mismatch in class '" +
                                    label + "'");
      }
    }
    class_labels_.push_back(label);
    dists_.push_back(std::move(dists));
  }
}

std::size_t GridFamily::class_index(const Label& cls) const {
  auto it = std::find(class_labels_.begin(), class_labels_.end(), cls);
  if (it == class_labels_.end()) {
    throw std::invalid_argument("GridFamily: unknown class '" + cls + "'");
  }
  return static_cast<std::size_t>(it - class_labels_.begin());
}

const std::vector<Dist>& GridFamily::dists_of(const Label& cls) const {
  return dists_[class_index(cls)];
}

SupLogLik GridFamily::sup_log_likelihood(const Label& cls, const Counts& c) const {
  double best = kNegInf;
  for (const auto& d : dists_[class_index(cls)]) best = std::max(best, log_likelihood(d, c));
  return {best, best > kNegInf};
}

std::vector<GridPoint> GridFamily::grid(const Label& cls, int resolution) const {
  if (resolution < 1) throw std::invalid_argument("GridFamily: resolution must be at least 1");
  const auto& ds = dists_[class_index(cls)];
  std::vector<GridPoint> out;
  out.reserve(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    out.push_back({Theta{static_cast<double>(i)}, ds[i]});
  }
  return out;
}

Dist GridFamily::point(const ParamPoint& p) const {
  const auto& ds = dists_[class_index(p.cls)];
  if (p.theta.size() != 1) throw std::invalid_argument("GridFamily: theta must be a single index");
  const auto idx = static_cast<std::size_t>(p.theta[0]);
  if (idx >= ds.size()) throw std::invalid_argument("GridFamily: theta index out of range");
  return ds[idx];
}

double log_likelihood(const Dist& p, const Counts& c) {
  if (p.labels() != c.outcomes) {
    throw std::invalid_argument("log_likelihood: outcome labels do not match");
  }
  const std::int64_t k = c.total();
  if (k <= 0) throw std::invalid_argument("log_likelihood: empty counts");
  double sum = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const std::int64_t n = c.counts[i];
    if (n == 0) continue;
    const double pu = p.prob(i);
    if (pu == 0.0) return kNegInf;
    sum += static_cast<double>(n) * std::log(pu);
  }
  return sum / static_cast<double>(k);
}

MleDecision parametric_mle(const ParamFamily& family, const Counts& c, RngStream& rng,
                           TieBreak ties) {
  if (c.outcomes != family.codomain()) {
    throw std::invalid_argument("parametric_mle: counts are not over the family codomain");
  }
  MleDecision decision;
  double best = kNegInf;
  for (const auto& cls : family.classes()) {
    SupLogLik s = family.sup_log_likelihood(cls, c);
    best = std::max(best, s.value);
    decision.scores.push_back({cls, s});
  }
  if (best == kNegInf) {
    throw std::invalid_argument("parametric_mle: observations lie outside every class support");
  }
  std::vector<std::size_t> tied;
  bool any_attained = false;
  for (std::size_t i = 0; i < decision.scores.size(); ++i) {
    if (decision.scores[i].sup.value >= best - kTieTol) {
      tied.push_back(i);
      any_attained = any_attained || decision.scores[i].sup.attained;
    }
  }
  if (any_attained) {
    std::erase_if(tied, [&](std::size_t i) { return !decision.scores[i].sup.attained; });
  }
  std::size_t pick = tied.front();
  if (tied.size() > 1 && ties == TieBreak::Uniform) {
    pick = tied[rng.next_below(tied.size())];
  }
  decision.winner = decision.scores[pick].cls;
  return decision;
}

double concentration_bound_kl(std::int64_t u_plus, std::int64_t k, double delta) {
  if (u_plus < 1 || k < 1 || !(delta > 0.0)) {
    throw std::invalid_argument("concentration_bound_kl: need |U+| >= 1, k >= 1, delta > 0");
  }
  return static_cast<double>(u_plus) / (static_cast<double>(k) * delta);
}

double concentration_bound_var(std::int64_t u_plus, std::int64_t k, double delta) {
  if (u_plus < 1 || k < 1 || !(delta > 0.0)) {
    throw std::invalid_argument("concentration_bound_var: need |U+| >= 1, k >= 1, delta > 0");
  }
  return static_cast<double>(u_plus) / (static_cast<double>(k) * delta * delta);
}

std::int64_t concentration_sample_size(std::int64_t u_plus, double epsilon, double delta) {
  if (u_plus < 1) throw std::invalid_argument("concentration_sample_size: need |U+| >= 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("concentration_sample_size: need epsilon > 0");
  if (!(delta > 0.0) || delta >= 1.0) {
    throw std::invalid_argument("concentration_sample_size: need 0 < delta < 1");
  }
  return static_cast<std::int64_t>(
      std::ceil(2.0 * static_cast<double>(u_plus) / (epsilon * delta * delta)));
}

double mle_bound_constant() {
  const double c = 2.0 - std::sqrt(3.0);
  return 2.0 / (c * c);
}

std::int64_t mle_sample_size(std::int64_t u_plus, double epsilon, double d) {
  if (u_plus < 1) throw std::invalid_argument("mle_sample_size: need |U+| >= 1");
  if (!(epsilon > 0.0) || epsilon >= 1.0) {
    throw std::invalid_argument("mle_sample_size: need 0 < epsilon < 1");
  }
  if (!(d > 0.0) || d > 2.0) throw std::invalid_argument("mle_sample_size: need 0 < d <= 2");
  return static_cast<std::int64_t>(
      std::ceil(mle_bound_constant() * static_cast<double>(u_plus) / (epsilon * d * d * d * d)));
}

double estimate_d(const ParamFamily& family, const ParamPoint& p, int resolution) {
  if (resolution < 1) throw std::invalid_argument("estimate_d: resolution must be at least 1");
  const Dist base = family.point(p);
  double best = std::numeric_limits<double>::infinity();
  bool any = false;
  for (const auto& cls : family.classes()) {
    if (cls == p.cls) continue;
    for (const auto& gp : family.grid(cls, resolution)) {
      best = std::min(best, variational_distance(base, gp.dist));
      any = true;
    }
  }
  if (!any) throw std::invalid_argument("estimate_d: no rival class has grid points");
  return best;
}

}  // namespace randinv
