#include "doctest.h"

#include <cmath>
#include <limits>

#include "randinv/inversion.hpp"
#include "randinv/parametric.hpp"
#include "support.hpp"

using namespace randinv;
using namespace testsupport;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("per-sample log-likelihood") {
  Dist point({"u1", "u2"}, {1.0, 0.0});
  Counts all_on({"u1", "u2"}, {5, 0});
  CHECK(log_likelihood(point, all_on) == 0.0);

  Dist half({"u1", "u2"}, {0.5, 0.5});
  Counts one_each({"u1", "u2"}, {1, 1});
  CHECK(log_likelihood(half, one_each) == doctest::Approx(std::log(0.5)).epsilon(1e-15));

  Counts off_support({"u1", "u2"}, {4, 1});
  CHECK(log_likelihood(point, off_support) == -kInf);

  Counts empty({"u1", "u2"}, {0, 0});
  CHECK_THROWS_AS(log_likelihood(point, empty), std::invalid_argument);
}

TEST_CASE("concentration bounds are plain arithmetic") {
  CHECK(concentration_bound_kl(4, 1000, 0.05) == doctest::Approx(0.08).epsilon(1e-15));
  CHECK(concentration_bound_kl(16, 100, 0.1) == doctest::Approx(1.6).epsilon(1e-15));
  CHECK(concentration_bound_kl(1, 500, 0.1) == doctest::Approx(1.0 / 50.0).epsilon(1e-15));

  CHECK(concentration_bound_var(4, 1000, 0.2) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(concentration_bound_var(16, 64, 0.5) == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(concentration_bound_kl(0, 10, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(concentration_bound_var(4, 10, 0.0), std::invalid_argument);
}

TEST_CASE("joint concentration sample size") {
  CHECK(concentration_sample_size(4, 0.1, 0.5) == 320);
  CHECK(concentration_sample_size(1, 0.5, 0.5) == 16);
  CHECK_THROWS_AS(concentration_sample_size(4, 0.1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(concentration_sample_size(4, 0.0, 0.5), std::invalid_argument);
}

TEST_CASE("maximum likelihood sample size bound") {
  CHECK(mle_bound_constant() == doctest::Approx(27.856406460551018).epsilon(1e-15));
  CHECK(mle_sample_size(4, 0.2, 0.4) == 21763);
  CHECK(mle_sample_size(16, 0.1, 0.5) == 71313);
  CHECK_THROWS_AS(mle_sample_size(4, 0.2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(mle_sample_size(4, 0.2, 2.5), std::invalid_argument);
  CHECK_THROWS_AS(mle_sample_size(4, 1.5, 0.4), std::invalid_argument);
}

namespace {

// Singleton-parameter family induced by the rows of a random function.
GridFamily singleton_family(const RandomFn& xi) {
  std::vector<std::pair<Label, std::vector<Dist>>> classes;
  for (std::size_t a = 0; a < xi.domain_size(); ++a) {
    classes.emplace_back(xi.domain()[a], std::vector<Dist>{xi.row_dist(a)});
  }
  return GridFamily(xi.codomain(), std::move(classes));
}

}  // namespace

TEST_CASE("parametric mle with singleton classes equals the map estimator") {
  RngStream rng(314);
  for (int it = 0; it < 20; ++it) {
    auto xi = random_stochastic(3, 4, rng);
    auto fam = singleton_family(xi);
    auto gamma = map_estimator(xi, TieBreak::FirstLabel);
    for (std::size_t u = 0; u < xi.codomain_size(); ++u) {
      std::vector<std::int64_t> counts(xi.codomain_size(), 0);
      counts[u] = 1;
      Counts c(xi.codomain(), counts);
      RngStream tie(0);
      auto decision = parametric_mle(fam, c, tie, TieBreak::FirstLabel);
      const std::size_t winner = xi.domain_index(decision.winner);
      CHECK(gamma.entry(u, winner) == 1.0);
    }
  }
}

TEST_CASE("tie sets coincide between the parametric and matrix mle routes") {
  RandomFn xi({"a1", "a2", "a3"}, {"u1", "u2"},
              {{0.5, 0.5}, {0.5, 0.5}, {1.0, 0.0}});
  auto fam = singleton_family(xi);
  auto g = map_estimator(xi);
  // At u2 the first two classes tie exactly and the third is out.
  CHECK(g.entry(1, 0) == 0.5);
  CHECK(g.entry(1, 1) == 0.5);
  CHECK(g.entry(1, 2) == 0.0);
  Counts c(xi.codomain(), {0, 1});
  RngStream rng(3);
  auto d = parametric_mle(fam, c, rng);
  CHECK(d.scores[0].sup.value == d.scores[1].sup.value);
  CHECK(d.scores[2].sup.value < d.scores[0].sup.value);
  CHECK((d.winner == "a1" || d.winner == "a2"));
}

TEST_CASE("parametric mle attainment-aware tie rule") {
  // Class "att" attains the shared supremum, class "unatt" does not; the
  // attained one must win deterministically.
  struct Family final : ParamFamily {
    std::vector<Label> cls{"att", "unatt"};
    std::vector<Label> cod{"u1", "u2"};
    const std::vector<Label>& classes() const override { return cls; }
    const std::vector<Label>& codomain() const override { return cod; }
    SupLogLik sup_log_likelihood(const Label& c, const Counts&) const override {
      return c == "att" ? SupLogLik{-1.0, true} : SupLogLik{-1.0, false};
    }
    std::vector<GridPoint> grid(const Label&, int) const override { return {}; }
    Dist point(const ParamPoint&) const override { return Dist(cod, {0.5, 0.5}); }
  } fam;
  Counts c({"u1", "u2"}, {1, 0});
  RngStream rng(1);
  for (int it = 0; it < 16; ++it) CHECK(parametric_mle(fam, c, rng).winner == "att");
}

TEST_CASE("parametric mle rejects observations outside every support") {
  GridFamily fam({"u1", "u2", "u3"},
                 {{"a", {Dist({"u1", "u2", "u3"}, {1.0, 0.0, 0.0})}},
                  {"b", {Dist({"u1", "u2", "u3"}, {0.0, 1.0, 0.0})}}});
  Counts c({"u1", "u2", "u3"}, {0, 0, 3});
  RngStream rng(2);
  CHECK_THROWS_AS(parametric_mle(fam, c, rng), std::invalid_argument);
}

TEST_CASE("grid-family distance estimation reduces to pairwise distances") {
  Dist pa({"u1", "u2"}, {0.9, 0.1});
  Dist pb({"u1", "u2"}, {0.4, 0.6});
  GridFamily fam({"u1", "u2"}, {{"a", {pa}}, {"b", {pb}}});
  const double d = estimate_d(fam, {"a", {0.0}}, 1);
  CHECK(d == doctest::Approx(variational_distance(pa, pb)).epsilon(1e-15));
  for (int r : {1, 2, 4, 8}) {
    CHECK(estimate_d(fam, {"a", {0.0}}, r) == doctest::Approx(d).epsilon(1e-15));
  }
}

TEST_CASE("markov bound on empirical kl and variational distance, sampled") {
  // Uniform source over four outcomes, k = 1000: the bounds are 0.08 for
  // the KL tail at 0.05 and 0.1 for the variational tail at 0.2.
  auto labels = make_labels("u", 4);
  Dist p(labels, std::vector<double>(4, 0.25));
  int kl_hits = 0;
  int var_hits = 0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    RngStream rs(515151, static_cast<std::uint64_t>(t));
    auto counts = sample_dist(p, 1000, rs);
    auto phat = empirical_distribution(counts);
    if (kl_divergence(phat, p) >= 0.05) ++kl_hits;
    if (variational_distance(phat, p) >= 0.2) ++var_hits;
  }
  CHECK(static_cast<double>(kl_hits) / trials <= concentration_bound_kl(4, 1000, 0.05));
  CHECK(static_cast<double>(var_hits) / trials <= concentration_bound_var(4, 1000, 0.2));
}

TEST_CASE("chi-square statistic has mean (|U+|-1)/k") {
  auto labels = make_labels("u", 4);
  Dist p(labels, std::vector<double>(4, 0.25));
  const int k = 50;
  const int trials = 10000;
  double sum = 0.0, sumsq = 0.0;
  for (int t = 0; t < trials; ++t) {
    RngStream rs(626262, static_cast<std::uint64_t>(t));
    auto counts = sample_dist(p, k, rs);
    double x = 0.0;
    for (std::size_t u = 0; u < 4; ++u) {
      const double diff = static_cast<double>(counts.counts[u]) / k - p.prob(u);
      x += diff * diff / p.prob(u);
    }
    sum += x;
    sumsq += x * x;
  }
  const double mean = sum / trials;
  const double var = sumsq / trials - mean * mean;
  const double se = std::sqrt(var / trials);
  const double expected = 3.0 / k;
  CHECK(std::abs(mean - expected) <= 3.0 * se);
}

TEST_CASE("log-likelihood ratio is positive under the concentration event") {
  // Two singleton classes at variational distance d; conditional on the
  // empirical distribution landing within (2 - sqrt(3)) d in variational
  // distance and (2 - sqrt(3)) d^2 in KL, the ratio against the rival is
  // strictly positive.
  Dist pa({"u1", "u2", "u3", "u4"}, {0.4, 0.3, 0.2, 0.1});
  Dist pb({"u1", "u2", "u3", "u4"}, {0.3, 0.4, 0.1, 0.2});
  const double d = variational_distance(pa, pb);
  const double c = 2.0 - std::sqrt(3.0);
  int conditioned = 0;
  for (int t = 0; t < 4000; ++t) {
    RngStream rs(737373, static_cast<std::uint64_t>(t));
    auto counts = sample_dist(pa, 200, rs);
    auto phat = empirical_distribution(counts);
    if (variational_distance(phat, pa) > c * d) continue;
    if (!(kl_divergence(phat, pa) < c * d * d)) continue;
    ++conditioned;
    const double la = log_likelihood(pa, counts);
    const double lb = log_likelihood(pb, counts);
    CHECK(la - lb > 0.0);
  }
  CHECK(conditioned > 100);  // the event is overwhelmingly likely at k = 200
}

TEST_CASE("no estimator beats a coin when a pair of parameters collide") {
  // Class a's only distribution also appears in class b's list, so both
  // points have distance infimum zero; the smaller of the two success
  // probabilities cannot exceed 1/2.
  Dist shared({"u1", "u2"}, {0.7, 0.3});
  Dist other({"u1", "u2"}, {0.2, 0.8});
  GridFamily fam({"u1", "u2"}, {{"a", {shared}}, {"b", {shared, other}}});
  CHECK(estimate_d(fam, {"a", {0.0}}, 1) == 0.0);
  CHECK(estimate_d(fam, {"b", {0.0}}, 1) == 0.0);

  const int trials = 4000;
  auto success = [&](const Label& truth) {
    int wins = 0;
    for (int t = 0; t < trials; ++t) {
      RngStream rs(848484 + (truth == "b" ? 1 : 0), static_cast<std::uint64_t>(t));
      auto counts = sample_dist(shared, 25, rs);
      if (parametric_mle(fam, counts, rs).winner == truth) ++wins;
    }
    return static_cast<double>(wins) / trials;
  };
  const double sa = success("a");
  const double sb = success("b");
  const double mc_slack = 3.0 * std::sqrt(0.25 / trials);
  CHECK(std::min(sa, sb) <= 0.5 + mc_slack);
}
