#include "randinv/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace randinv::models {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kQuarterPi = std::numbers::pi / 4.0;
constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kThreeQuarterPi = 3.0 * std::numbers::pi / 4.0;

int next_pow2(int r) {
  int s = 1;
  while (s < r) s *= 2;
  return s;
}

}  // namespace

// ---------------------------------------------------------------- linear ---

LinearFamily::LinearFamily(int n, double delta) : n_(n), delta_(delta) {
  if (n < 1) throw std::invalid_argument("LinearFamily: n must be at least 1");
  if (!(delta > 0.0) || !(delta < 0.5)) {
    throw std::invalid_argument("LinearFamily: delta must lie in (0, 1/2)");
  }
  codomain_.reserve(static_cast<std::size_t>(n) + 1);
  for (int u = 0; u <= n; ++u) codomain_.push_back(std::to_string(u));
}

Dist LinearFamily::class_a_dist() const {
  std::vector<double> probs(static_cast<std::size_t>(n_) + 1, (1.0 - delta_) / n_);
  probs[0] = delta_;
  return Dist(codomain_, std::move(probs), kInternalTol);
}

SupLogLik LinearFamily::sup_log_likelihood(const Label& cls, const Counts& c) const {
  if (c.outcomes != codomain_) {
    throw std::invalid_argument("LinearFamily: counts are not over this codomain");
  }
  const std::int64_t k = c.total();
  if (k <= 0) throw std::invalid_argument("LinearFamily: empty counts");
  const auto x = static_cast<double>(c.counts[0]);
  const double m = static_cast<double>(k) - x;  // draws on nonzero outcomes
  if (cls == "a") {
    const double v = x * std::log(delta_) + m * std::log((1.0 - delta_) / n_);
    return {v / static_cast<double>(k), true};
  }
  if (cls == "b") {
    // The maximizing lambda puts mass c_u / m on each observed nonzero u.
    double v = x * std::log(2.0 * delta_);
    if (m > 0.0) {
      v += m * std::log(1.0 - 2.0 * delta_);
      for (std::size_t u = 1; u < c.size(); ++u) {
        const auto cu = static_cast<double>(c.counts[u]);
        if (cu > 0.0) v += cu * std::log(cu / m);
      }
    }
    return {v / static_cast<double>(k), true};
  }
  throw std::invalid_argument("LinearFamily: unknown class '" + cls + "'");
}

std::vector<GridPoint> LinearFamily::grid(const Label& cls, int resolution) const {
  if (resolution < 1) throw std::invalid_argument("LinearFamily: resolution must be at least 1");
  std::vector<GridPoint> out;
  if (cls == "a") {
    out.push_back({Theta{}, class_a_dist()});
    return out;
  }
  if (cls != "b") throw std::invalid_argument("LinearFamily: unknown class '" + cls + "'");
  // Nested lambda grid: the uniform vector plus dyadic mixtures of uniform
  // with the first few corners. Uniform attains the distance infimum from
  // class a, so even resolution 1 is sharp there.
  const int s = next_pow2(std::min(resolution, 16));
  const int corners = std::min(n_, s);
  auto push = [&](const std::vector<double>& lambda) {
    std::vector<double> probs(static_cast<std::size_t>(n_) + 1, 0.0);
    probs[0] = 2.0 * delta_;
    for (int u = 1; u <= n_; ++u) {
      probs[static_cast<std::size_t>(u)] = lambda[static_cast<std::size_t>(u - 1)] *
                                           (1.0 - 2.0 * delta_);
    }
    out.push_back({lambda, Dist(codomain_, std::move(probs), kInternalTol)});
  };
  std::vector<double> lambda(static_cast<std::size_t>(n_), 1.0 / n_);
  push(lambda);
  for (int i = 0; i < corners; ++i) {
    for (int j = 1; j <= s; ++j) {
      const double w = static_cast<double>(j) / s;
      std::fill(lambda.begin(), lambda.end(), (1.0 - w) / n_);
      lambda[static_cast<std::size_t>(i)] += w;
      push(lambda);
    }
  }
  return out;
}

Dist LinearFamily::point(const ParamPoint& p) const {
  if (p.cls == "a") {
    if (!p.theta.empty()) throw std::invalid_argument("LinearFamily: class a takes no parameters");
    return class_a_dist();
  }
  if (p.cls != "b") throw std::invalid_argument("LinearFamily: unknown class '" + p.cls + "'");
  if (p.theta.size() != static_cast<std::size_t>(n_)) {
    throw std::invalid_argument("LinearFamily: lambda must have n entries");
  }
  double sum = 0.0;
  for (double l : p.theta) {
    if (!(l >= 0.0)) throw std::invalid_argument("LinearFamily: lambda entries must be >= 0");
    sum += l;
  }
  if (std::abs(sum - 1.0) > kInputTol) {
    throw std::invalid_argument("LinearFamily: lambda must sum to 1");
  }
  std::vector<double> probs(static_cast<std::size_t>(n_) + 1, 0.0);
  probs[0] = 2.0 * delta_;
  for (int u = 1; u <= n_; ++u) {
    probs[static_cast<std::size_t>(u)] = p.theta[static_cast<std::size_t>(u - 1)] *
                                         (1.0 - 2.0 * delta_);
  }
  return Dist(codomain_, std::move(probs));
}

bool linear_check_delta(double delta) {
  if (!(delta > 0.0) || !(delta < 0.5)) {
    throw std::invalid_argument("linear_check_delta: delta must lie in (0, 1/2)");
  }
  return 2.0 * std::pow(1.0 - 2.0 * delta, delta / 2.0) > 1.0;
}

LinearSupLogs linear_sup_likelihoods(const LinearFamily& fam,
                                     const std::vector<std::size_t>& seq) {
  const auto k = static_cast<std::int64_t>(seq.size());
  if (k > fam.n()) throw std::invalid_argument("linear_sup_likelihoods: requires k <= n");
  double x = 0.0;
  for (std::size_t u : seq) {
    if (u > static_cast<std::size_t>(fam.n())) {
      throw std::invalid_argument("linear_sup_likelihoods: outcome index out of range");
    }
    if (u == 0) x += 1.0;
  }
  const double m = static_cast<double>(k) - x;
  const double delta = fam.delta();
  LinearSupLogs res;
  res.log_class_a = x * std::log(delta) + m * std::log((1.0 - delta) / fam.n());
  res.log_class_b_lower = x * std::log(2.0 * delta);
  if (m > 0.0) res.log_class_b_lower += m * std::log((1.0 - 2.0 * delta) / m);
  return res;
}

// ------------------------------------------------------------------ trig ---

TrigFamily::TrigFamily() = default;

namespace {

struct SRange {
  double lo, hi;
  bool lo_closed, hi_closed;
};

// Range of s = P[(1, j)] reachable by a class at fixed second coordinate j,
// with interval closure tracking the half-open parameter spaces.
SRange trig_s_range(const Label& cls, int j) {
  if (cls == "a1") {
    return j == 0 ? SRange{0.5, 1.0, true, false} : SRange{0.5, 1.0, false, true};
  }
  return j == 0 ? SRange{0.0, 0.5, false, false} : SRange{0.0, 0.5, true, true};
}

double bernoulli_log_lik(double n1, double n2, double s) {
  double v = 0.0;
  if (n1 > 0.0) {
    if (s == 0.0) return kNegInf;
    v += n1 * std::log(s);
  }
  if (n2 > 0.0) {
    if (s == 1.0) return kNegInf;
    v += n2 * std::log(1.0 - s);
  }
  return v;
}

}  // namespace

SupLogLik TrigFamily::sup_log_likelihood(const Label& cls, const Counts& c) const {
  if (c.outcomes != codomain_) {
    throw std::invalid_argument("TrigFamily: counts are not over this codomain");
  }
  if (cls != "a1" && cls != "a2") {
    throw std::invalid_argument("TrigFamily: unknown class '" + cls + "'");
  }
  const std::int64_t k = c.total();
  if (k <= 0) throw std::invalid_argument("TrigFamily: empty counts");
  const std::int64_t on0 = c.counts[0] + c.counts[2];
  const std::int64_t on1 = c.counts[1] + c.counts[3];
  if (on0 > 0 && on1 > 0) return {kNegInf, false};  // no parameter covers both j values
  const int j = on1 > 0 ? 1 : 0;
  const auto n1 = static_cast<double>(c.counts[j == 0 ? 0 : 1]);
  const auto n2 = static_cast<double>(c.counts[j == 0 ? 2 : 3]);

  const SRange range = trig_s_range(cls, j);
  const double sstar = n1 / (n1 + n2);
  double value;
  bool attained;
  if (sstar > range.lo && sstar < range.hi) {
    value = bernoulli_log_lik(n1, n2, sstar);
    attained = true;
  } else if (sstar <= range.lo) {
    value = bernoulli_log_lik(n1, n2, range.lo);
    attained = range.lo_closed;
  } else {
    value = bernoulli_log_lik(n1, n2, range.hi);
    attained = range.hi_closed;
  }
  return {value / static_cast<double>(k), attained};
}

std::vector<GridPoint> TrigFamily::grid(const Label& cls, int resolution) const {
  if (resolution < 1) throw std::invalid_argument("TrigFamily: resolution must be at least 1");
  if (cls != "a1" && cls != "a2") {
    throw std::invalid_argument("TrigFamily: unknown class '" + cls + "'");
  }
  const int s = next_pow2(std::min(resolution, 1 << 16));
  std::vector<GridPoint> out;
  const int j_begin = cls == "a1" ? 0 : 1;
  const int j_end = cls == "a1" ? s - 1 : s;
  for (int j = j_begin; j <= j_end; ++j) {
    const double t = kQuarterPi + kHalfPi * (static_cast<double>(j) / s);
    out.push_back({Theta{t}, point({cls, Theta{t}})});
  }
  return out;
}

Dist TrigFamily::point(const ParamPoint& p) const {
  if (p.theta.size() != 1) throw std::invalid_argument("TrigFamily: theta must be a single angle");
  const double t = p.theta[0];
  if (p.cls == "a1") {
    if (!(t >= kQuarterPi && t < kThreeQuarterPi)) {
      throw std::invalid_argument("TrigFamily: a1 angle must lie in [pi/4, 3pi/4)");
    }
  } else if (p.cls == "a2") {
    if (!(t > kQuarterPi && t <= kThreeQuarterPi)) {
      throw std::invalid_argument("TrigFamily: a2 angle must lie in (pi/4, 3pi/4]");
    }
  } else {
    throw std::invalid_argument("TrigFamily: unknown class '" + p.cls + "'");
  }
  const int j = t < kHalfPi ? 0 : 1;
  const double sin2 = std::sin(t) * std::sin(t);
  const double s = p.cls == "a1" ? sin2 : 1.0 - sin2;
  std::vector<double> probs(4, 0.0);
  probs[j == 0 ? 0 : 1] = s;        // (1, j)
  probs[j == 0 ? 2 : 3] = 1.0 - s;  // (2, j)
  return Dist(codomain_, std::move(probs), kInternalTol);
}

Label trig_pedestrian(const Counts& c, int j) {
  if (j != 0 && j != 1) throw std::invalid_argument("trig_pedestrian: j must be 0 or 1");
  if (c.outcomes.size() != 4) {
    throw std::invalid_argument("trig_pedestrian: counts must cover the four outcomes");
  }
  const std::int64_t off = j == 0 ? c.counts[1] + c.counts[3] : c.counts[0] + c.counts[2];
  if (off > 0) {
    throw std::invalid_argument("trig_pedestrian: observed second coordinates are not all " +
                                std::to_string(j));
  }
  const std::int64_t n1 = c.counts[j == 0 ? 0 : 1];
  const std::int64_t n2 = c.counts[j == 0 ? 2 : 3];
  if (n1 > n2) return "a1";
  if (n2 > n1) return "a2";
  return j == 0 ? "a1" : "a2";
}

double trig_tie_probability(int k) {
  if (k < 2 || k % 2 != 0) return 0.0;
  double q = 1.0;
  for (int i = 1; i <= k / 2; ++i) {
    q *= static_cast<double>(2 * i - 1) / static_cast<double>(2 * i);
  }
  return q;
}

// ------------------------------------------------------------------- cfn ---

const std::vector<Label>& topology_labels() {
  static const std::vector<Label> labels{"12|34", "13|24", "14|23"};
  return labels;
}

Label topology_label(Topology t) { return topology_labels()[static_cast<std::size_t>(t)]; }

Topology topology_from_label(const Label& l) {
  const auto& labels = topology_labels();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == l) return static_cast<Topology>(i);
  }
  throw std::invalid_argument("topology_from_label: unknown topology '" + l + "'");
}

const std::vector<Label>& pattern_labels() {
  static const std::vector<Label> labels = [] {
    std::vector<Label> out;
    out.reserve(16);
    for (int code = 0; code < 16; ++code) out.push_back(pattern_label(code));
    return out;
  }();
  return labels;
}

Label pattern_label(int code) {
  if (code < 0 || code > 15) throw std::invalid_argument("pattern_label: code out of range");
  Label l(4, '0');
  for (int leaf = 0; leaf < 4; ++leaf) {
    if ((code >> (3 - leaf)) & 1) l[static_cast<std::size_t>(leaf)] = '1';
  }
  return l;
}

int pattern_code(const Label& l) {
  if (l.size() != 4) throw std::invalid_argument("pattern_code: label must have four bits");
  int code = 0;
  for (char ch : l) {
    if (ch != '0' && ch != '1') throw std::invalid_argument("pattern_code: label must be binary");
    code = code * 2 + (ch == '1');
  }
  return code;
}

namespace {

// Left pair of leaves (0-based) per topology; the other two attach to the
// second internal vertex.
std::array<bool, 4> left_side(Topology t) {
  switch (t) {
    case Topology::T12_34: return {true, true, false, false};
    case Topology::T13_24: return {true, false, true, false};
    case Topology::T14_23: return {true, false, false, true};
  }
  throw std::logic_error("left_side: bad topology");
}

void check_edge_probs(const EdgeProbs& p) {
  for (double v : p.pendant) {
    if (!(v >= 0.0) || !(v <= 0.5)) {
      throw std::invalid_argument("EdgeProbs: pendant probabilities must lie in [0, 0.5]");
    }
  }
  if (!(p.central >= 0.0) || !(p.central <= 0.5)) {
    throw std::invalid_argument("EdgeProbs: central probability must lie in [0, 0.5]");
  }
}

std::array<double, 16> cfn_pattern_probs(Topology t, const EdgeProbs& p) {
  const auto left = left_side(t);
  std::array<double, 16> probs{};
  for (int code = 0; code < 16; ++code) {
    double total = 0.0;
    for (int sx = 0; sx < 2; ++sx) {
      for (int sy = 0; sy < 2; ++sy) {
        double w = 0.5 * (sx != sy ? p.central : 1.0 - p.central);
        for (int leaf = 0; leaf < 4; ++leaf) {
          const int bit = (code >> (3 - leaf)) & 1;
          const int parent = left[static_cast<std::size_t>(leaf)] ? sx : sy;
          const double pe = p.pendant[static_cast<std::size_t>(leaf)];
          w *= (bit != parent) ? pe : 1.0 - pe;
        }
        total += w;
      }
    }
    probs[static_cast<std::size_t>(code)] = total;
  }
  return probs;
}

}  // namespace

Dist cfn_distribution(Topology t, const EdgeProbs& p) {
  check_edge_probs(p);
  const auto probs = cfn_pattern_probs(t, p);
  return Dist(pattern_labels(), std::vector<double>(probs.begin(), probs.end()), kInternalTol);
}

bool cfn_check_P(const EdgeProbs& p, double f, double g) {
  if (!(f > 0.0) || !(f < 0.5) || !(g > 0.0) || !(g < 0.5)) {
    throw std::invalid_argument("cfn_check_P: need 0 < f, g < 1/2");
  }
  check_edge_probs(p);
  for (double v : p.pendant) {
    if (v > g) return false;
  }
  return p.central >= f;
}

CfnFamily::CfnFamily(std::optional<std::pair<double, double>> f_g, int sup_grid_points)
    : f_g_(f_g), sup_grid_points_(sup_grid_points) {
  if (sup_grid_points < 2) throw std::invalid_argument("CfnFamily: need at least 2 grid points");
  if (f_g_) {
    const auto [f, g] = *f_g_;
    if (!(f > 0.0) || !(f < 0.5) || !(g > 0.0) || !(g < 0.5)) {
      throw std::invalid_argument("CfnFamily: need 0 < f, g < 1/2");
    }
  }
}

namespace {

double cfn_log_lik(Topology t, const EdgeProbs& p, const Counts& c) {
  const auto probs = cfn_pattern_probs(t, p);
  double v = 0.0;
  for (std::size_t i = 0; i < 16; ++i) {
    const auto n = static_cast<double>(c.counts[i]);
    if (n == 0.0) continue;
    if (probs[i] <= 0.0) return kNegInf;
    v += n * std::log(probs[i]);
  }
  return v / static_cast<double>(c.total());
}

// Golden-section maximization of f over [lo, hi].
template <typename F>
std::pair<double, double> golden_max(F&& f, double lo, double hi, int iters = 64) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    }
  }
  const double mid = 0.5 * (a + b);
  return {mid, f(mid)};
}

}  // namespace

std::pair<double, EdgeProbs> CfnFamily::fit(const Label& cls, const Counts& c) const {
  if (c.outcomes != pattern_labels()) {
    throw std::invalid_argument("CfnFamily: counts are not over the site patterns");
  }
  if (c.total() <= 0) throw std::invalid_argument("CfnFamily: empty counts");
  const Topology t = topology_from_label(cls);

  // Multistart lattice over the closed cube.
  const int g = sup_grid_points_;
  std::vector<double> values(static_cast<std::size_t>(g));
  for (int i = 0; i < g; ++i) values[static_cast<std::size_t>(i)] = 0.5 * i / (g - 1);

  struct Start {
    double value;
    EdgeProbs p;
  };
  std::vector<Start> starts;
  EdgeProbs p;
  for (double p1 : values)
    for (double p2 : values)
      for (double p3 : values)
        for (double p4 : values)
          for (double pc : values) {
            p.pendant = {p1, p2, p3, p4};
            p.central = pc;
            const double v = cfn_log_lik(t, p, c);
            if (v == kNegInf) continue;
            starts.push_back({v, p});
          }
  std::partial_sort(starts.begin(), starts.begin() + std::min<std::size_t>(3, starts.size()),
                    starts.end(), [](const Start& a, const Start& b) { return a.value > b.value; });
  if (starts.empty()) {
    // No lattice point has full support on the observed patterns; fall back
    // to the cube center.
    p.pendant = {0.25, 0.25, 0.25, 0.25};
    p.central = 0.25;
    starts.push_back({cfn_log_lik(t, p, c), p});
  }
  starts.resize(std::min<std::size_t>(3, starts.size()));

  Start best = starts.front();
  for (auto& start : starts) {
    EdgeProbs cur = start.p;
    double cur_val = start.value;
    for (int round = 0; round < 60; ++round) {
      const double before = cur_val;
      for (int coord = 0; coord < 5; ++coord) {
        auto eval = [&](double v) {
          EdgeProbs trial = cur;
          if (coord < 4) trial.pendant[static_cast<std::size_t>(coord)] = v;
          else trial.central = v;
          return cfn_log_lik(t, trial, c);
        };
        auto [arg, val] = golden_max(eval, 0.0, 0.5);
        if (val > cur_val) {
          cur_val = val;
          if (coord < 4) cur.pendant[static_cast<std::size_t>(coord)] = arg;
          else cur.central = arg;
        }
      }
      if (cur_val - before < 1e-10) break;
    }
    if (cur_val > best.value) best = {cur_val, cur};
  }
  return {best.value, best.p};
}

SupLogLik CfnFamily::sup_log_likelihood(const Label& cls, const Counts& c) const {
  return {fit(cls, c).first, true};  // the parameter cube is closed
}

std::vector<GridPoint> CfnFamily::grid(const Label& cls, int resolution) const {
  if (resolution < 1) throw std::invalid_argument("CfnFamily: resolution must be at least 1");
  const Topology t = topology_from_label(cls);
  // Nested dyadic lattice, capped so the 5-dimensional point count stays
  // tractable; beyond the cap the grid (and any distance estimate) is
  // unchanged.
  const int s = next_pow2(std::min(resolution, 8));
  double pend_lo = 0.0, pend_hi = 0.5, cen_lo = 0.0, cen_hi = 0.5;
  if (f_g_) {
    cen_lo = f_g_->first;
    pend_hi = f_g_->second;
  }
  std::vector<double> pend_values, cen_values;
  for (int i = 0; i <= s; ++i) {
    pend_values.push_back(pend_lo + (pend_hi - pend_lo) * i / s);
    cen_values.push_back(cen_lo + (cen_hi - cen_lo) * i / s);
  }
  std::vector<GridPoint> out;
  EdgeProbs p;
  for (double p1 : pend_values)
    for (double p2 : pend_values)
      for (double p3 : pend_values)
        for (double p4 : pend_values)
          for (double pc : cen_values) {
            p.pendant = {p1, p2, p3, p4};
            p.central = pc;
            out.push_back({Theta{p1, p2, p3, p4, pc}, cfn_distribution(t, p)});
          }
  return out;
}

Dist CfnFamily::point(const ParamPoint& p) const {
  if (p.theta.size() != 5) {
    throw std::invalid_argument("CfnFamily: theta must be (pendant 1..4, central)");
  }
  EdgeProbs ep;
  ep.pendant = {p.theta[0], p.theta[1], p.theta[2], p.theta[3]};
  ep.central = p.theta[4];
  return cfn_distribution(topology_from_label(p.cls), ep);
}

}  // namespace randinv::models
