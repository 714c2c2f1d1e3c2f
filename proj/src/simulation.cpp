#include "randinv/simulation.hpp"

#include <chrono>
#include <numbers>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "randinv/version.hpp"

namespace randinv {

namespace {

// Acklam's rational approximation to the standard normal quantile, polished
// with one Halley step through erfc.
double normal_quantile_raw(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= 1.0 - plow) {
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double q = std::sqrt(-2.0 * std::log(1.0 - p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

}  // namespace

double normal_quantile(double p) {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw std::invalid_argument("normal_quantile: p must lie in (0, 1)");
  }
  double x = normal_quantile_raw(p);
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(x * x / 2.0);
  return x - u / (1.0 + x * u / 2.0);
}

std::pair<double, double> wilson_interval(std::int64_t successes, std::int64_t trials,
                                          double confidence) {
  if (trials < 1 || successes < 0 || successes > trials) {
    throw std::invalid_argument("wilson_interval: need 0 <= successes <= trials, trials >= 1");
  }
  if (!(confidence > 0.0) || !(confidence < 1.0)) {
    throw std::invalid_argument("wilson_interval: confidence must lie in (0, 1)");
  }
  const double z = normal_quantile(0.5 + confidence / 2.0);
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = phat + z2 / (2.0 * n);
  const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
  double low = (center - half) / denom;
  double high = (center + half) / denom;
  low = std::min(std::max(low, 0.0), 1.0);
  high = std::min(std::max(high, 0.0), 1.0);
  // The closed form collapses exactly at the boundaries; keep that exact.
  if (successes == 0) low = 0.0;
  if (successes == trials) high = 1.0;
  return {low, high};
}

namespace {

// Runs `trials` independent trials, each a pure function of its substream,
// and sums the successes. The partition into workers cannot change the total.
std::int64_t count_successes(std::int64_t trials, std::uint64_t seed, int workers,
                             const std::function<bool(RngStream&)>& trial_fn) {
  if (trials < 1) throw std::invalid_argument("experiment: trials must be at least 1");
  if (workers < 1) workers = 1;
  if (workers == 1) {
    std::int64_t hits = 0;
    for (std::int64_t t = 0; t < trials; ++t) {
      RngStream rs(seed, static_cast<std::uint64_t>(t));
      if (trial_fn(rs)) ++hits;
    }
    return hits;
  }
  std::vector<std::int64_t> partial(static_cast<std::size_t>(workers), 0);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      std::int64_t hits = 0;
      for (std::int64_t t = w; t < trials; t += workers) {
        RngStream rs(seed, static_cast<std::uint64_t>(t));
        if (trial_fn(rs)) ++hits;
      }
      partial[static_cast<std::size_t>(w)] = hits;
    });
  }
  for (auto& th : pool) th.join();
  std::int64_t total = 0;
  for (std::int64_t h : partial) total += h;
  return total;
}

Report finish_report(std::int64_t successes, std::int64_t trials, double confidence,
                     std::uint64_t seed, std::int64_t k, double runtime_seconds) {
  Report r;
  r.successes = successes;
  r.trials = trials;
  r.estimate = static_cast<double>(successes) / static_cast<double>(trials);
  std::tie(r.wilson_low, r.wilson_high) = wilson_interval(successes, trials, confidence);
  r.confidence = confidence;
  r.seed = seed;
  r.k = k;
  r.runtime_seconds = runtime_seconds;
  r.version = kVersion;
  return r;
}

}  // namespace

Report run_return_experiment(const RandomFn& xi, const RandomFn& gamma, const Label& a,
                             std::int64_t trials, std::uint64_t seed, int workers,
                             double confidence) {
  if (xi.codomain() != gamma.domain()) {
    throw std::invalid_argument("run_return_experiment: labels do not match");
  }
  const std::size_t ai = xi.domain_index(a);
  const std::size_t target = gamma.codomain_index(a);
  const auto start = std::chrono::steady_clock::now();
  const std::int64_t hits = count_successes(trials, seed, workers, [&](RngStream& rs) {
    const std::size_t u = rs.next_index(xi.row(ai));
    return rs.next_index(gamma.row(u)) == target;
  });
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return finish_report(hits, trials, confidence, seed, 1, secs);
}

Report run_classifier_experiment(const Dist& source, const Label& truth_class, std::int64_t k,
                                 std::int64_t trials, std::uint64_t seed,
                                 const Classifier& classify, int workers, double confidence) {
  if (k < 1) throw std::invalid_argument("run_classifier_experiment: k must be at least 1");
  const auto start = std::chrono::steady_clock::now();
  const std::int64_t hits = count_successes(trials, seed, workers, [&](RngStream& rs) {
    Counts c = sample_dist(source, k, rs);
    return classify(c, rs) == truth_class;
  });
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return finish_report(hits, trials, confidence, seed, k, secs);
}

Report run_mle_experiment(const ParamFamily& family, const ParamPoint& truth, std::int64_t k,
                          std::int64_t trials, std::uint64_t seed, int workers,
                          double confidence) {
  const Dist source = family.point(truth);
  return run_classifier_experiment(
      source, truth.cls, k, trials, seed,
      [&family](const Counts& c, RngStream& rs) { return parametric_mle(family, c, rs).winner; },
      workers, confidence);
}

nlohmann::ordered_json report_to_json(const Report& r, bool include_runtime) {
  nlohmann::ordered_json j;
  j["successes"] = r.successes;
  j["trials"] = r.trials;
  j["estimate"] = r.estimate;
  j["wilson_low"] = r.wilson_low;
  j["wilson_high"] = r.wilson_high;
  j["confidence"] = r.confidence;
  j["seed"] = r.seed;
  j["k"] = r.k;
  j["config"] = r.config;
  if (include_runtime) j["runtime_seconds"] = r.runtime_seconds;
  j["version"] = r.version;
  return j;
}

Report report_from_json(const nlohmann::ordered_json& j) {
  Report r;
  r.successes = j.at("successes").get<std::int64_t>();
  r.trials = j.at("trials").get<std::int64_t>();
  r.estimate = j.at("estimate").get<double>();
  r.wilson_low = j.at("wilson_low").get<double>();
  r.wilson_high = j.at("wilson_high").get<double>();
  r.confidence = j.at("confidence").get<double>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.k = j.at("k").get<std::int64_t>();
  r.config = j.at("config");
  if (j.contains("runtime_seconds")) r.runtime_seconds = j.at("runtime_seconds").get<double>();
  r.version = j.at("version").get<std::string>();
  return r;
}

namespace {

std::string format17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string report_to_csv(const Report& r) {
  std::ostringstream out;
  out << "success,trials,estimate,wilson_low,wilson_high,seed,k\n";
  out << r.successes << ',' << r.trials << ',' << format17(r.estimate) << ','
      << format17(r.wilson_low) << ',' << format17(r.wilson_high) << ',' << r.seed << ',' << r.k
      << '\n';
  return out.str();
}

Report report_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string header, row;
  if (!std::getline(in, header) || header != "success,trials,estimate,wilson_low,wilson_high,seed,k") {
    throw std::invalid_argument("report_from_csv: unexpected header");
  }
  if (!std::getline(in, row)) throw std::invalid_argument("report_from_csv: missing data row");
  std::istringstream cells(row);
  std::string cell;
  std::vector<std::string> fields;
  while (std::getline(cells, cell, ',')) fields.push_back(cell);
  if (fields.size() != 7) throw std::invalid_argument("report_from_csv: expected 7 fields");
  Report r;
  r.successes = std::stoll(fields[0]);
  r.trials = std::stoll(fields[1]);
  r.estimate = std::stod(fields[2]);
  r.wilson_low = std::stod(fields[3]);
  r.wilson_high = std::stod(fields[4]);
  r.seed = std::stoull(fields[5]);
  r.k = std::stoll(fields[6]);
  r.version = kVersion;
  return r;
}

void write_report(const Report& r, ReportFormat format, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_report: cannot open '" + path + "' for writing");
  if (format == ReportFormat::Json) {
    out << report_to_json(r).dump(2) << '\n';
  } else {
    out << report_to_csv(r);
  }
  if (!out) throw std::runtime_error("write_report: failed while writing '" + path + "'");
}

Report read_report(ReportFormat format, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_report: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  if (format == ReportFormat::Json) {
    return report_from_json(nlohmann::ordered_json::parse(buf.str()));
  }
  return report_from_csv(buf.str());
}

}  // namespace randinv
