#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>

#include "randinv/dist.hpp"
#include "randinv/parametric.hpp"
#include "randinv/random_fn.hpp"

#include "json.hpp"

namespace randinv {

// Seeded Monte Carlo result. Trials are driven by per-trial substreams
// derived from (seed, trial index), so aggregate counts are identical for
// any worker count and across runs.
struct Report {
  std::int64_t successes = 0;
  std::int64_t trials = 0;
  double estimate = 0.0;
  double wilson_low = 0.0;
  double wilson_high = 0.0;
  double confidence = 0.95;
  std::uint64_t seed = 0;
  std::int64_t k = 1;
  nlohmann::ordered_json config;  // echo of the experiment description
  double runtime_seconds = 0.0;
  std::string version;
};

// Wilson score interval for a binomial proportion.
std::pair<double, double> wilson_interval(std::int64_t successes, std::int64_t trials,
                                          double confidence);

// Upper-tail standard normal quantile helper used by the interval.
double normal_quantile(double p);

// Estimate of r_a: per trial draw u from xi_a, then a draw of gamma_u, and
// count returns to a.
Report run_return_experiment(const RandomFn& xi, const RandomFn& gamma, const Label& a,
                             std::int64_t trials, std::uint64_t seed, int workers = 1,
                             double confidence = 0.95);

// Generic k-sample classification experiment: each trial draws k i.i.d.
// outcomes from source and asks the classifier for a label, counting matches
// with truth_class. The classifier sees the trial's own stream (after the
// sampling draws) for any randomized tie-breaking.
using Classifier = std::function<Label(const Counts&, RngStream&)>;

Report run_classifier_experiment(const Dist& source, const Label& truth_class, std::int64_t k,
                                 std::int64_t trials, std::uint64_t seed,
                                 const Classifier& classify, int workers = 1,
                                 double confidence = 0.95);

// Estimate of the parametric MLE return probability [R^(k)]'.
Report run_mle_experiment(const ParamFamily& family, const ParamPoint& truth, std::int64_t k,
                          std::int64_t trials, std::uint64_t seed, int workers = 1,
                          double confidence = 0.95);

// Serialization. JSON round-trips exactly (shortest-round-trip doubles); CSV
// uses 17 significant digits and the fixed header
// success,trials,estimate,wilson_low,wilson_high,seed,k.
nlohmann::ordered_json report_to_json(const Report& r, bool include_runtime = true);
Report report_from_json(const nlohmann::ordered_json& j);
std::string report_to_csv(const Report& r);
Report report_from_csv(const std::string& text);

enum class ReportFormat { Json, Csv };

void write_report(const Report& r, ReportFormat format, const std::string& path);
Report read_report(ReportFormat format, const std::string& path);

}  // namespace randinv
