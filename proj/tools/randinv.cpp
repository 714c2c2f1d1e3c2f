// Command-line front end: inverter construction, minimax values and bounds,
// composition checks, and seeded Monte Carlo experiments over matrix or
// family instances. All outputs are JSON (or CSV where noted); exit code 1
// flags malformed input, 2 numerical failure.

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "randinv/inversion.hpp"
#include "randinv/io.hpp"
#include "randinv/models.hpp"
#include "randinv/parametric.hpp"
#include "randinv/simulation.hpp"
#include "randinv/version.hpp"

using namespace randinv;
using nlohmann::ordered_json;

namespace {

void emit(const ordered_json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::invalid_argument("cannot open '" + out_path + "' for writing");
  out << j.dump(2) << '\n';
}

void emit_report(const Report& report, const std::string& out_path, const std::string& format) {
  if (format == "csv") {
    if (out_path.empty()) {
      std::cout << report_to_csv(report);
    } else {
      write_report(report, ReportFormat::Csv, out_path);
    }
    return;
  }
  emit(report_to_json(report), out_path);
}

ordered_json margins_json(const std::vector<Margin>& margins) {
  ordered_json arr = ordered_json::array();
  for (const auto& m : margins) {
    arr.push_back(ordered_json{{"a", m.a}, {"x", m.x}, {"margin", m.value}});
  }
  return arr;
}

ordered_json returns_json(const std::vector<Label>& domain, const std::vector<double>& r) {
  ordered_json obj;
  for (std::size_t i = 0; i < domain.size(); ++i) obj[domain[i]] = r[i];
  return obj;
}

std::vector<double> weights_for(const RandomFn& xi, const std::string& weights_path) {
  if (weights_path.empty()) return std::vector<double>(xi.domain_size(), 1.0);
  auto j = ordered_json::parse(read_text_file(weights_path));
  std::vector<double> w;
  w.reserve(xi.domain_size());
  for (const auto& a : xi.domain()) {
    if (!j.contains(a)) throw std::invalid_argument("weights file is missing label '" + a + "'");
    w.push_back(j.at(a).get<double>());
  }
  return w;
}

int cmd_invert(const std::string& matrix_path, const std::string& weights_path,
               const std::string& out_path) {
  auto xi = read_matrix_csv(matrix_path);
  auto sep = separates(xi);

  ordered_json j;
  j["separates"] = ordered_json{{"ok", sep.separates}, {"min_distance", sep.min_distance}};

  auto w = weights_for(xi, weights_path);
  auto map = map_estimator(xi, w);
  auto map_check = check_invertibility(xi, map);
  j["map"] = ordered_json{{"inverter", matrix_to_json(map)},
                          {"return_probabilities",
                           returns_json(xi.domain(), return_probabilities(xi, map))},
                          {"margins", margins_json(map_check.margins)},
                          {"invertible", map_check.invertible},
                          {"I1", map_check.i1},
                          {"I2", map_check.i2}};

  if (sep.separates) {
    auto rep = strict_inverter(xi);
    j["strict"] = ordered_json{{"inverter", matrix_to_json(rep.inverter)},
                               {"return_probabilities",
                                returns_json(xi.domain(), rep.return_probabilities)},
                               {"margins", margins_json(rep.margins)},
                               {"epsilon", rep.epsilon},
                               {"invertible", rep.invertible},
                               {"I1", rep.i1},
                               {"I2", rep.i2}};
  }
  emit(j, out_path);
  return 0;
}

int cmd_minimax(const std::string& matrix_path, const std::string& out_path) {
  auto xi = read_matrix_csv(matrix_path);
  auto res = minimax_inverter(xi);
  auto check = check_invertibility(xi, res.inverter);
  ordered_json j;
  j["value"] = res.value;
  j["mu"] = dist_to_json(res.least_favorable);
  j["margins"] = margins_json(check.margins);
  j["bounds"] = ordered_json{
      {"paper", separation_lower_bound(xi, BoundVariant::Paper)},
      {"conservative", separation_lower_bound(xi, BoundVariant::Conservative)}};
  j["duality_gap"] = res.duality_gap;
  j["dual_value"] = res.dual_value;
  j["inverter"] = matrix_to_json(res.inverter);
  j["return_probabilities"] = returns_json(xi.domain(), return_probabilities(xi, res.inverter));
  emit(j, out_path);
  return 0;
}

int cmd_bound(std::int64_t uplus, double epsilon, std::optional<double> delta,
              std::optional<double> d, const std::string& out_path) {
  if (!delta && !d) {
    throw std::invalid_argument("bound: supply --delta for the concentration size, --d for the "
                                "mle size, or both");
  }
  ordered_json j;
  j["uplus"] = uplus;
  j["epsilon"] = epsilon;
  if (delta) {
    j["delta"] = *delta;
    j["concentration_sample_size"] = concentration_sample_size(uplus, epsilon, *delta);
  }
  if (d) {
    j["d"] = *d;
    j["c1"] = mle_bound_constant();
    j["mle_sample_size"] = mle_sample_size(uplus, epsilon, *d);
  }
  emit(j, out_path);
  return 0;
}

int cmd_compose_check(const std::string& matrix_path, const std::string& out_path) {
  auto upsilon = read_matrix_csv(matrix_path);
  auto res = composition_rank_test(upsilon);
  ordered_json j;
  j["full"] = res.full;
  j["rank"] = res.rank;
  j["columns"] = upsilon.domain_size();
  if (res.null_vector) {
    j["null_vector"] = *res.null_vector;
    auto xi = composition_counterexample(upsilon, *res.null_vector);
    auto composed = compose(xi, upsilon);
    double maxdiff = 0.0;
    for (std::size_t z = 0; z < composed.codomain_size(); ++z) {
      maxdiff = std::max(maxdiff, std::abs(composed.entry(0, z) - composed.entry(1, z)));
    }
    j["counterexample"] = ordered_json{
        {"matrix", matrix_to_json(xi)},
        {"separation", separates(xi).min_distance},
        {"composed_row_max_difference", maxdiff}};
  }
  emit(j, out_path);
  return 0;
}

ParamPoint truth_from_json(const ordered_json& truth) {
  ParamPoint p;
  if (truth.contains("topology")) {
    // Tree instance form: {"topology":"12|34","pendant":[..4..],"central":x}.
    p.cls = truth.at("topology").get<std::string>();
    p.theta = truth.at("pendant").get<std::vector<double>>();
    if (p.theta.size() != 4) throw std::invalid_argument("truth: pendant needs four entries");
    p.theta.push_back(truth.at("central").get<double>());
    return p;
  }
  p.cls = truth.contains("class") ? truth.at("class").get<std::string>()
                                  : truth.at("label").get<std::string>();
  if (truth.contains("theta")) p.theta = truth.at("theta").get<std::vector<double>>();
  return p;
}

Report simulate_from_config(const ordered_json& config, int workers) {
  const auto seed = config.at("seed").get<std::uint64_t>();
  const auto trials = config.at("trials").get<std::int64_t>();
  const auto k = config.value("k", std::int64_t{1});
  const auto estimator = config.at("estimator").get<std::string>();
  const auto& instance = config.at("instance");
  const auto type = instance.at("type").get<std::string>();

  Report report;
  if (type == "matrix") {
    auto xi = read_matrix_csv(instance.at("path").get<std::string>());
    if (k > 1) xi = kfold_explicit(xi, static_cast<int>(k));
    RandomFn gamma = [&]() -> RandomFn {
      if (estimator == "map" || estimator == "mle") return map_estimator(xi);
      if (estimator == "minimax") return minimax_inverter(xi).inverter;
      if (estimator == "strict") return strict_inverter(xi).inverter;
      if (estimator == "custom") {
        return read_matrix_csv(config.at("estimator_matrix").get<std::string>());
      }
      throw std::invalid_argument("simulate: estimator '" + estimator +
                                  "' needs a family instance");
    }();
    const auto a = config.at("truth").at("label").get<std::string>();
    report = run_return_experiment(xi, gamma, a, trials, seed, workers);
    report.k = k;
  } else if (type == "family") {
    auto family = family_from_json(instance.at("family"));
    const ParamPoint truth = truth_from_json(config.at("truth"));
    if (estimator == "mle") {
      report = run_mle_experiment(*family, truth, k, trials, seed, workers);
    } else if (estimator == "pedestrian") {
      if (instance.at("family").at("type").get<std::string>() != "trig32") {
        throw std::invalid_argument("simulate: the pedestrian estimator is specific to trig32");
      }
      const int j = truth.theta.at(0) < std::numbers::pi / 2.0 ? 0 : 1;
      report = run_classifier_experiment(
          family->point(truth), truth.cls, k, trials, seed,
          [j](const Counts& c, RngStream&) { return models::trig_pedestrian(c, j); }, workers);
    } else {
      throw std::invalid_argument("simulate: estimator '" + estimator +
                                  "' needs a matrix instance");
    }
  } else {
    throw std::invalid_argument("simulate: unknown instance type '" + type + "'");
  }
  report.config = config;
  return report;
}

int cmd_simulate(const std::string& config_path, int workers, const std::string& out_path,
                 const std::string& format) {
  auto config = ordered_json::parse(read_text_file(config_path));
  auto report = simulate_from_config(config, workers);
  emit_report(report, out_path, format);
  return 0;
}

int cmd_example31(double delta, int n, std::int64_t k, std::int64_t trials, std::uint64_t seed,
                  int workers, const std::string& out_path, const std::string& format) {
  models::LinearFamily family(n, delta);
  auto report = run_mle_experiment(family, {"a", {}}, k, trials, seed, workers);
  report.config = ordered_json{{"command", "example31"}, {"delta", delta},   {"n", n},
                               {"k", k},                 {"trials", trials}, {"seed", seed},
                               {"smallness_condition_holds", models::linear_check_delta(delta)},
                               {"uplus", n + 1}};
  emit_report(report, out_path, format);
  return 0;
}

int cmd_example32(const std::string& truth_class, double t, std::int64_t k, std::int64_t trials,
                  std::uint64_t seed, const std::string& estimator, int workers,
                  const std::string& out_path, const std::string& format) {
  models::TrigFamily family;
  const ParamPoint truth{truth_class, {t}};
  Report report;
  if (estimator == "mle") {
    report = run_mle_experiment(family, truth, k, trials, seed, workers);
  } else if (estimator == "pedestrian") {
    const int j = t < std::numbers::pi / 2.0 ? 0 : 1;
    report = run_classifier_experiment(
        family.point(truth), truth.cls, k, trials, seed,
        [j](const Counts& c, RngStream&) { return models::trig_pedestrian(c, j); }, workers);
  } else {
    throw std::invalid_argument("example32: estimator must be 'mle' or 'pedestrian'");
  }
  report.config = ordered_json{{"command", "example32"}, {"class", truth_class}, {"t", t},
                               {"k", k},                 {"trials", trials},     {"seed", seed},
                               {"estimator", estimator}};
  const bool boundary = (truth_class == "a1" && t == std::numbers::pi / 4.0) ||
                        (truth_class == "a2" && t == 3.0 * std::numbers::pi / 4.0);
  if (boundary && k % 2 == 0) {
    report.config["analytic_boundary_success"] =
        (1.0 + models::trig_tie_probability(static_cast<int>(k))) / 2.0;
  }
  emit_report(report, out_path, format);
  return 0;
}

int cmd_cfn(const std::string& topology, std::vector<double> pendant, double central,
            std::int64_t k, std::int64_t trials, std::uint64_t seed, double epsilon, double f,
            double g, int workers, const std::string& out_path, const std::string& format,
            const std::string& dist_out) {
  if (pendant.size() == 1) pendant.assign(4, pendant[0]);
  if (pendant.size() != 4) {
    throw std::invalid_argument("cfn: --pendant takes one shared value or four values");
  }
  models::EdgeProbs ep;
  ep.pendant = {pendant[0], pendant[1], pendant[2], pendant[3]};
  ep.central = central;

  const auto topo = models::topology_from_label(topology);
  if (!dist_out.empty()) {
    auto dist = models::cfn_distribution(topo, ep);
    std::ofstream out(dist_out);
    if (!out) throw std::invalid_argument("cfn: cannot open '" + dist_out + "'");
    out << "pattern,probability\n";
    char buf[64];
    for (std::size_t c = 0; c < 16; ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", dist.prob(c));
      out << dist.labels()[c] << ',' << buf << '\n';
    }
  }

  models::CfnFamily family(std::make_pair(f, g));
  const ParamPoint truth{topology, {pendant[0], pendant[1], pendant[2], pendant[3], central}};
  auto report = run_mle_experiment(family, truth, k, trials, seed, workers);

  const double d_est = estimate_d(family, truth, 2);
  report.config = ordered_json{{"command", "cfn"},   {"topology", topology},
                               {"pendant", pendant}, {"central", central},
                               {"k", k},             {"trials", trials},
                               {"seed", seed},       {"epsilon", epsilon},
                               {"f", f},             {"g", g}};
  report.config["condition_P_holds"] = models::cfn_check_P(ep, f, g);
  report.config["d_upper_bound"] = d_est;
  if (d_est > 0.0) {
    // Sample size certified by the worst-case bound with |U+| <= 16; d_est is
    // a grid upper bound on the true separation, so the certified k is a floor.
    report.config["mle_sample_size_at_d_upper_bound"] =
        mle_sample_size(16, epsilon, std::min(2.0, d_est));
  }
  emit_report(report, out_path, format);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inversion of random functions over finite sets"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string matrix_path, weights_path, out_path, format = "json", config_path;
  int workers = 1;

  auto* invert = app.add_subcommand("invert", "Strict inverter and MAP comparison for a matrix");
  invert->add_option("--matrix", matrix_path, "matrix CSV")->required();
  invert->add_option("--weights", weights_path, "JSON object label -> positive weight");
  invert->add_option("--out", out_path, "output path (default stdout)");

  auto* minimax = app.add_subcommand("minimax", "Minimax inverter, prior, and bounds");
  minimax->add_option("--matrix", matrix_path, "matrix CSV")->required();
  minimax->add_option("--out", out_path, "output path (default stdout)");

  std::int64_t uplus = 0;
  double epsilon = 0.1;
  std::optional<double> delta_opt, d_opt;
  auto* bound = app.add_subcommand("bound", "Sample-size bounds");
  bound->add_option("--uplus", uplus, "support size |U+|")->required();
  bound->add_option("--epsilon", epsilon, "failure probability")->required();
  bound->add_option("--delta", delta_opt, "concentration radius");
  bound->add_option("--d", d_opt, "variational separation");
  bound->add_option("--out", out_path, "output path (default stdout)");

  auto* compose_check = app.add_subcommand("compose-check",
                                           "Rank test and counterexample for composition");
  compose_check->add_option("--matrix", matrix_path, "matrix CSV")->required();
  compose_check->add_option("--out", out_path, "output path (default stdout)");

  auto* simulate = app.add_subcommand("simulate", "Run a seeded experiment from a config file");
  simulate->add_option("--config", config_path, "experiment config JSON")->required();
  simulate->add_option("--workers", workers, "worker threads (does not change results)");
  simulate->add_option("--out", out_path, "output path (default stdout)");
  simulate->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  double delta31 = 0.1;
  int n31 = 1000;
  std::int64_t k_flag = 0, trials_flag = 0;
  std::uint64_t seed = 20240801;
  auto* ex31 = app.add_subcommand("example31", "Linear-growth family failure experiment");
  ex31->add_option("--delta", delta31, "class separation parameter");
  ex31->add_option("--n", n31, "number of nonzero outcomes");
  ex31->add_option("--k", k_flag, "samples per trial (default 100)");
  ex31->add_option("--trials", trials_flag, "trial count (default 1000)");
  ex31->add_option("--seed", seed, "master seed");
  ex31->add_option("--workers", workers, "worker threads");
  ex31->add_option("--out", out_path, "output path (default stdout)");
  ex31->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  std::string truth_class = "a1", estimator32 = "mle";
  double t32 = std::numbers::pi / 4.0;
  auto* ex32 = app.add_subcommand("example32", "Angular family boundary experiment");
  ex32->add_option("--class", truth_class, "a1 or a2")->check(CLI::IsMember({"a1", "a2"}));
  ex32->add_option("--t", t32, "angle parameter");
  ex32->add_option("--k", k_flag, "samples per trial (default 20)");
  ex32->add_option("--trials", trials_flag, "trial count (default 10000)");
  ex32->add_option("--seed", seed, "master seed");
  ex32->add_option("--estimator", estimator32, "mle or pedestrian")
      ->check(CLI::IsMember({"mle", "pedestrian"}));
  ex32->add_option("--workers", workers, "worker threads");
  ex32->add_option("--out", out_path, "output path (default stdout)");
  ex32->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  std::string topology = "12|34", dist_out;
  std::vector<double> pendant{0.15};
  double central = 0.15, f_cfn = 0.1, g_cfn = 0.3;
  auto* cfn = app.add_subcommand("cfn", "Four-leaf tree reconstruction experiment");
  cfn->add_option("--topology", topology, "12|34, 13|24 or 14|23")
      ->check(CLI::IsMember({"12|34", "13|24", "14|23"}));
  cfn->add_option("--pendant", pendant, "pendant substitution probability (1 or 4 values)");
  cfn->add_option("--central", central, "central substitution probability");
  cfn->add_option("--k", k_flag, "site patterns per trial (default 300)");
  cfn->add_option("--trials", trials_flag, "trial count (default 100)");
  cfn->add_option("--seed", seed, "master seed");
  cfn->add_option("--epsilon", epsilon, "failure probability for the sample-size report");
  cfn->add_option("--f", f_cfn, "central-edge lower bound in the separation condition");
  cfn->add_option("--g", g_cfn, "pendant-edge upper bound in the separation condition");
  cfn->add_option("--workers", workers, "worker threads");
  cfn->add_option("--out", out_path, "output path (default stdout)");
  cfn->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  cfn->add_option("--dist-out", dist_out, "write the 16-pattern distribution CSV here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // help/version exit clean, bad flags exit 1
  }

  try {
    if (invert->parsed()) return cmd_invert(matrix_path, weights_path, out_path);
    if (minimax->parsed()) return cmd_minimax(matrix_path, out_path);
    if (bound->parsed()) return cmd_bound(uplus, epsilon, delta_opt, d_opt, out_path);
    if (compose_check->parsed()) return cmd_compose_check(matrix_path, out_path);
    if (simulate->parsed()) return cmd_simulate(config_path, workers, out_path, format);
    if (ex31->parsed()) {
      return cmd_example31(delta31, n31, k_flag > 0 ? k_flag : 100,
                           trials_flag > 0 ? trials_flag : 1000, seed, workers, out_path, format);
    }
    if (ex32->parsed()) {
      return cmd_example32(truth_class, t32, k_flag > 0 ? k_flag : 20,
                           trials_flag > 0 ? trials_flag : 10000, seed, estimator32, workers,
                           out_path, format);
    }
    if (cfn->parsed()) {
      return cmd_cfn(topology, pendant, central, k_flag > 0 ? k_flag : 300,
                     trials_flag > 0 ? trials_flag : 100, seed, epsilon, f_cfn, g_cfn, workers,
                     out_path, format, dist_out);
    }
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::runtime_error& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
