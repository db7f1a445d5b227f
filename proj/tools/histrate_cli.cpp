// Command-line harness for the histogram-rule library: fitting, prediction,
// lemma-level verification and rate experiments over the synthetic families.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "histrate/errors.hpp"
#include "histrate/hist.hpp"
#include "histrate/margin.hpp"
#include "histrate/parallel.hpp"
#include "histrate/random.hpp"
#include "histrate/rates.hpp"
#include "histrate/risk.hpp"
#include "histrate/synth.hpp"

namespace {

using histrate::CellSet;
using histrate::ConfigError;
using histrate::GridSpec;
using histrate::HistogramClassifier;
using histrate::LabeledSample;
using histrate::SyntheticFamily;

struct FamilyConfig {
  std::string kind = "linear";
  int d = 1;
  double gamma = 1.0;
  double alpha = 2.0;  // power_mass only
  std::optional<histrate::BumpSpec> bump;
};

SyntheticFamily build_family(const FamilyConfig& cfg) {
  if (cfg.kind == "linear") return histrate::make_linear(cfg.d, cfg.gamma);
  if (cfg.kind == "power_mass")
    return histrate::make_power_mass(cfg.d, cfg.alpha, cfg.gamma);
  if (cfg.kind == "far_noise") {
    if (cfg.bump) return histrate::make_far_noise(cfg.d, cfg.gamma, *cfg.bump);
    return histrate::make_far_noise(cfg.d, cfg.gamma);
  }
  throw ConfigError("unknown family kind '" + cfg.kind +
                    "' (expected linear, power_mass or far_noise)");
}

void check_known_keys(const nlohmann::json& object,
                      const std::vector<std::string>& known,
                      const std::string& where) {
  for (const auto& [key, value] : object.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

std::string format_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file: " + path);
  out << content;
  if (!out) throw histrate::ComputeError("failed writing file: " + path);
}

// ---------------------------------------------------------------------------
// fit

int cmd_fit(const std::string& data_path, const FamilyConfig& family_cfg,
            bool family_given, std::size_t n, std::uint64_t seed, double s,
            const std::string& out_path) {
  LabeledSample data;
  int d = family_cfg.d;
  if (!data_path.empty()) {
    data = histrate::import_dataset(data_path, family_given ? d : 0);
    d = data.dim();
  } else {
    if (!family_given)
      throw ConfigError("fit needs either --data or a --family specification");
    if (n == 0) throw ConfigError("fit from a family needs --n >= 1");
    data = histrate::sample(build_family(family_cfg), n, seed);
  }
  const GridSpec grid = histrate::make_grid(d, s);
  const HistogramClassifier classifier = histrate::fit(data, grid);
  histrate::save_classifier(classifier, out_path);
  std::cout << "cells " << classifier.votes.size() << "\n";
  std::cout << "training_risk "
            << format_double(histrate::empirical_risk(classifier, data))
            << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// predict

int cmd_predict(const std::string& model_path, const std::string& data_path,
                const std::string& out_path) {
  const HistogramClassifier classifier = histrate::load_classifier(model_path);
  const auto [points, labels] =
      histrate::import_points(data_path, classifier.grid.d);
  std::string out;
  long errors = 0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const int pred = classifier.predict(points.row(i).transpose());
    out += pred > 0 ? "+1\n" : "-1\n";
    if (labels && (*labels)[i] != pred) ++errors;
  }
  if (out_path.empty())
    std::cout << out;
  else
    write_file(out_path, out);
  std::cout << "rows " << points.rows() << "\n";
  if (labels)
    std::cout << "empirical_risk "
              << format_double(static_cast<double>(errors) /
                               static_cast<double>(points.rows()))
              << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// verify

struct CheckOutcome {
  bool pass = true;
  std::string detail;
};

std::vector<std::pair<double, double>> sr_combinations() {
  std::vector<std::pair<double, double>> combos;
  for (double s : {1.0, 0.5, 0.25, 0.2}) {
    for (double factor : {0.5, 0.75, 1.0, 2.0, 3.0}) {
      combos.emplace_back(s, s * factor);
    }
  }
  return combos;  // 20 pairs, all with r >= s/2
}

CheckOutcome check_lemma_sets(const SyntheticFamily& family) {
  int cover_ok = 0;
  int purity_ok = 0;
  const auto combos = sr_combinations();
  for (const auto& [s, r] : combos) {
    const GridSpec grid = histrate::make_grid(family.d, s);
    const auto split = histrate::near_far_partition(family, grid, r);
    bool covered = true;
    for (const auto& idx : histrate::cells_meeting_x(grid)) {
      if (split.near.count(idx) == 0 && split.far.count(idx) == 0) {
        covered = false;
        break;
      }
    }
    cover_ok += covered;
    purity_ok += histrate::check_far_purity(split, family, grid);
  }
  CheckOutcome out;
  out.pass = cover_ok == static_cast<int>(combos.size()) &&
             purity_ok == static_cast<int>(combos.size());
  out.detail = "cover=" + std::to_string(cover_ok) + "/" +
               std::to_string(combos.size()) + " purity=" +
               std::to_string(purity_ok) + "/" + std::to_string(combos.size());
  return out;
}

CheckOutcome check_tube(const SyntheticFamily& family) {
  const double h = histrate::margin_profile(family).hausdorff_boundary;
  double max_ratio = 0.0;
  bool ok = true;
  for (int k = 1; k <= 20; ++k) {
    const double delta = 0.05 * k;
    const double volume = histrate::tube_volume(family, delta);
    const double bound = 4.0 * h * delta;
    ok = ok && volume <= bound + 1e-12;
    max_ratio = std::max(max_ratio, volume / bound);
  }
  CheckOutcome out;
  out.pass = ok;
  out.detail = "max_ratio=" + format_double(max_ratio);
  return out;
}

CheckOutcome check_variance(const SyntheticFamily& family, std::size_t trials,
                            std::uint64_t seed) {
  CheckOutcome out;
  double worst = 0.0;
  for (double r : {0.25, 0.5}) {
    const auto result = histrate::variance_bound_check(
        family, histrate::make_grid(family.d, 0.25), r, trials,
        histrate::derive_seed(seed, static_cast<std::uint64_t>(r * 4)));
    out.pass = out.pass && (result.holds || result.degenerate);
    worst = std::max(worst, result.worst_ratio);
  }
  out.detail = "worst_ratio=" + format_double(worst);
  return out;
}

CheckOutcome check_erm(const SyntheticFamily& family, std::size_t datasets,
                       std::uint64_t seed) {
  std::size_t passed = 0;
  for (std::size_t i = 0; i < datasets; ++i) {
    histrate::RandomStream rng(histrate::derive_seed(seed, i));
    const double s = (i % 2 == 0) ? 1.0 : 0.5;
    const std::size_t n = 4 + rng.bits() % 15;
    LabeledSample data;
    data.points.resize(static_cast<Eigen::Index>(n), family.d);
    data.labels.resize(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) {
      for (int k = 0; k < family.d; ++k)
        data.points(static_cast<Eigen::Index>(j), k) = rng.symmetric();
      data.labels[static_cast<Eigen::Index>(j)] = rng.coin() ? +1 : -1;
    }
    const GridSpec grid = histrate::make_grid(family.d, s);
    const auto classifier = histrate::fit(data, grid);
    const auto split = histrate::near_far_partition(family, grid, s / 2.0);
    const bool ok = histrate::erm_verify(classifier, data) &&
                    histrate::erm_verify(classifier, data, split.near) &&
                    histrate::erm_verify(classifier, data, split.far);
    passed += ok;
  }
  CheckOutcome out;
  out.pass = passed == datasets;
  out.detail =
      "datasets=" + std::to_string(passed) + "/" + std::to_string(datasets);
  return out;
}

CheckOutcome check_control(const SyntheticFamily& family, bool lower,
                           std::size_t samples, std::uint64_t seed) {
  const auto result = lower
                          ? histrate::check_lower_control(family, samples, seed)
                          : histrate::check_upper_control(family, samples, seed);
  CheckOutcome out;
  out.pass = result.holds;
  out.detail = "worst_ratio=" + format_double(result.worst_ratio);
  return out;
}

CheckOutcome check_risk_split(const SyntheticFamily& family,
                              std::size_t trials, std::uint64_t seed) {
  std::size_t passed = 0;
  const GridSpec grid = histrate::make_grid(family.d, 0.25);
  for (std::size_t i = 0; i < trials; ++i) {
    const double r = (i % 2 == 0) ? 0.25 : 0.5;
    const auto split = histrate::near_far_partition(family, grid, r);
    const auto classifier =
        histrate::random_cellwise_classifier(grid, histrate::derive_seed(seed, i));
    passed += histrate::risk_split_check(classifier, family, split).holds;
  }
  CheckOutcome out;
  out.pass = passed == trials;
  out.detail =
      "classifiers=" + std::to_string(passed) + "/" + std::to_string(trials);
  return out;
}

CheckOutcome check_approx_far(const SyntheticFamily& family) {
  double worst = 0.0;
  for (double s : {0.5, 0.25, 0.125}) {
    const GridSpec grid = histrate::make_grid(family.d, s);
    const auto classifier = histrate::infinite_sample_fit(family, grid);
    for (double factor : {0.5, 1.0, 2.0}) {
      const auto split = histrate::near_far_partition(family, grid, s * factor);
      const double excess =
          histrate::excess_risk_exact(classifier, family, split.far).excess;
      worst = std::max(worst, excess);
    }
  }
  CheckOutcome out;
  out.pass = worst == 0.0;
  out.detail = "max_far_excess=" + format_double(worst);
  return out;
}

int cmd_verify(const FamilyConfig& family_cfg, const std::string& checks_arg,
               std::size_t samples, std::size_t trials, std::uint64_t seed) {
  const SyntheticFamily family = build_family(family_cfg);
  std::vector<std::string> selected;
  const std::vector<std::string> all = {
      "lemma-sets", "tube", "variance", "erm", "lower-control",
      "upper-control", "risk-split", "approx-far"};
  if (checks_arg.empty() || checks_arg == "all") {
    selected = all;
  } else {
    std::stringstream stream(checks_arg);
    std::string name;
    while (std::getline(stream, name, ',')) {
      if (std::find(all.begin(), all.end(), name) == all.end())
        throw ConfigError("unknown check name '" + name + "'");
      selected.push_back(name);
    }
    if (selected.empty()) throw ConfigError("empty check selection");
  }
  bool all_pass = true;
  for (const std::string& name : selected) {
    CheckOutcome outcome;
    if (name == "lemma-sets") outcome = check_lemma_sets(family);
    else if (name == "tube") outcome = check_tube(family);
    else if (name == "variance") outcome = check_variance(family, trials, seed);
    else if (name == "erm") outcome = check_erm(family, trials, seed);
    else if (name == "lower-control")
      outcome = check_control(family, true, samples, seed);
    else if (name == "upper-control")
      outcome = check_control(family, false, samples, seed);
    else if (name == "risk-split")
      outcome = check_risk_split(family, std::min<std::size_t>(trials, 20), seed);
    else
      outcome = check_approx_far(family);
    std::cout << (outcome.pass ? "PASS " : "FAIL ") << name << " "
              << outcome.detail << "\n";
    all_pass = all_pass && outcome.pass;
  }
  return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// rates

struct RatesConfig {
  FamilyConfig family;
  std::string mode = "fixed_schedule";
  std::vector<std::size_t> ns = {512, 1024, 2048, 4096, 8192, 16384, 32768};
  std::size_t reps = 100;
  std::uint64_t seed = 1;
  double scale = 1.0;
  double tau = 3.0;
  std::optional<double> beta;  // overrides the profile's margin-noise exponent
  std::optional<double> s_override;
  unsigned threads = 0;
  std::string out_csv = "rates.csv";
  std::string out_json = "rates.json";
};

void apply_json_config(const std::string& path, RatesConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json config;
  try {
    in >> config;
  } catch (const nlohmann::json::exception& err) {
    throw ConfigError(std::string("config parse error: ") + err.what());
  }
  check_known_keys(config,
                   {"family", "mode", "ns", "reps", "seed", "scale", "tau",
                    "beta", "s_override", "threads", "out_csv", "out_json"},
                   "config");
  if (config.contains("family")) {
    const auto& fam = config["family"];
    check_known_keys(fam, {"kind", "d", "gamma", "alpha", "bump"},
                     "config.family");
    if (fam.contains("kind")) cfg.family.kind = fam["kind"].get<std::string>();
    if (fam.contains("d")) cfg.family.d = fam["d"].get<int>();
    if (fam.contains("gamma")) cfg.family.gamma = fam["gamma"].get<double>();
    if (fam.contains("alpha")) cfg.family.alpha = fam["alpha"].get<double>();
    if (fam.contains("bump")) {
      const auto& bump = fam["bump"];
      check_known_keys(bump, {"center", "radius", "depth"}, "config.family.bump");
      histrate::BumpSpec spec;
      const auto center = bump.at("center").get<std::vector<double>>();
      spec.center = Eigen::Map<const Eigen::VectorXd>(
          center.data(), static_cast<Eigen::Index>(center.size()));
      spec.radius = bump.value("radius", 0.15);
      spec.depth = bump.value("depth", 1.0);
      cfg.family.bump = std::move(spec);
    }
  }
  if (config.contains("mode")) cfg.mode = config["mode"].get<std::string>();
  if (config.contains("ns"))
    cfg.ns = config["ns"].get<std::vector<std::size_t>>();
  if (config.contains("reps")) cfg.reps = config["reps"].get<std::size_t>();
  if (config.contains("seed")) cfg.seed = config["seed"].get<std::uint64_t>();
  if (config.contains("scale")) cfg.scale = config["scale"].get<double>();
  if (config.contains("tau")) cfg.tau = config["tau"].get<double>();
  if (config.contains("beta")) cfg.beta = config["beta"].get<double>();
  if (config.contains("s_override"))
    cfg.s_override = config["s_override"].get<double>();
  if (config.contains("threads")) cfg.threads = config["threads"].get<unsigned>();
  if (config.contains("out_csv")) cfg.out_csv = config["out_csv"].get<std::string>();
  if (config.contains("out_json"))
    cfg.out_json = config["out_json"].get<std::string>();
}

void print_exponent_table(double alpha, double gamma, int d, double q) {
  const auto table = histrate::comparison_exponents(alpha, gamma, d, q);
  std::printf("%-18s %-12s %s\n", "method", "exponent", "log_factor");
  for (const char* name :
       {"ours", "svm", "kokr_plain", "kokr_dense", "bicodade_general",
        "bicodade_uniform", "auts_general", "ours_no_lc"}) {
    const auto& entry = table.at(name);
    std::printf("%-18s %-12.10g %s\n", name, entry.exponent,
                entry.log_factor ? "yes" : "no");
  }
}

int cmd_rates(const RatesConfig& cfg, bool exponents_only, double flag_alpha,
              bool alpha_given, double flag_q, bool q_given) {
  if (exponents_only) {
    const double alpha = alpha_given ? flag_alpha
                         : cfg.family.kind == "power_mass" ? cfg.family.alpha
                                                           : 1.0;
    const double q = q_given ? flag_q : alpha / cfg.family.gamma;
    print_exponent_table(alpha, cfg.family.gamma, cfg.family.d, q);
    return 0;
  }
  const SyntheticFamily family = build_family(cfg.family);
  const auto profile = histrate::margin_profile(family);
  auto params = histrate::rate_params(profile, family.d);
  if (cfg.beta) params.beta = *cfg.beta;
  histrate::ExperimentMode mode;
  if (cfg.mode == "fixed_schedule")
    mode = histrate::ExperimentMode::fixed_schedule;
  else if (cfg.mode == "tvhr")
    mode = histrate::ExperimentMode::tvhr;
  else
    throw ConfigError("unknown mode '" + cfg.mode +
                      "' (expected fixed_schedule or tvhr)");
  const auto result = histrate::run_rate_experiment(
      family, params, cfg.ns, cfg.reps, mode, cfg.scale, cfg.seed, cfg.threads,
      cfg.s_override);
  write_file(cfg.out_csv, histrate::experiment_csv(result));
  write_file(cfg.out_json,
             histrate::experiment_json(result, params, cfg.scale, cfg.seed));
  print_exponent_table(params.alpha, params.gamma, params.d, params.q);
  std::cout << "slope " << format_double(result.slope) << "\n";
  std::cout << "theoretical_exponent "
            << format_double(result.theoretical_exponent) << "\n";
  if (mode == histrate::ExperimentMode::fixed_schedule) {
    const std::size_t n_max = cfg.ns.back();
    const double s_last = cfg.s_override
                              ? *cfg.s_override
                              : histrate::s_schedule(n_max, params, cfg.scale);
    const auto consts = histrate::theoretical_constants(
        params.alpha, params.gamma, params.d, profile.hausdorff_boundary,
        profile.c_lc, profile.c_me);
    const auto bound = histrate::oracle_bound(
        s_last, static_cast<double>(n_max), cfg.tau, params.beta,
        profile.c_mne, consts, params);
    std::cout << "oracle_bound_at_n_max " << format_double(bound.value)
              << (bound.in_force ? " (in force)" : " (not in force)") << "\n";
  }
  std::cout << "wrote " << cfg.out_csv << " and " << cfg.out_json << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"histogram classification rules on cube partitions"};
  app.require_subcommand(1);

  // fit ----------------------------------------------------------------
  auto* fit_cmd = app.add_subcommand("fit", "fit a histogram classifier");
  std::string fit_data;
  FamilyConfig fit_family;
  std::size_t fit_n = 0;
  std::uint64_t fit_seed = 1;
  double fit_s = 0.0;
  std::string fit_out = "model.txt";
  fit_cmd->add_option("--data", fit_data, "labeled dataset file");
  auto* fit_family_opt =
      fit_cmd->add_option("--family", fit_family.kind, "synthetic family kind");
  fit_cmd->add_option("--d", fit_family.d, "dimension");
  fit_cmd->add_option("--gamma", fit_family.gamma, "noise-control exponent");
  fit_cmd->add_option("--alpha", fit_family.alpha, "power_mass mass exponent");
  fit_cmd->add_option("--n", fit_n, "sample size when fitting from a family");
  fit_cmd->add_option("--seed", fit_seed, "sampling seed");
  fit_cmd->add_option("--s", fit_s, "cell side length in (0,1]")->required();
  fit_cmd->add_option("--out", fit_out, "model output path");

  // predict --------------------------------------------------------------
  auto* predict_cmd = app.add_subcommand("predict", "predict with a saved model");
  std::string predict_model;
  std::string predict_data;
  std::string predict_out;
  predict_cmd->add_option("--model", predict_model, "model file")->required();
  predict_cmd->add_option("--data", predict_data, "dataset file")->required();
  predict_cmd->add_option("--out", predict_out,
                          "prediction output path (stdout when absent)");

  // verify ---------------------------------------------------------------
  auto* verify_cmd =
      app.add_subcommand("verify", "run lemma and margin-condition checks");
  FamilyConfig verify_family;
  std::string verify_checks;
  std::size_t verify_samples = 100000;
  std::size_t verify_trials = 100;
  std::uint64_t verify_seed = 1;
  verify_cmd->add_option("--family", verify_family.kind, "synthetic family kind");
  verify_cmd->add_option("--d", verify_family.d, "dimension");
  verify_cmd->add_option("--gamma", verify_family.gamma, "noise-control exponent");
  verify_cmd->add_option("--alpha", verify_family.alpha, "power_mass mass exponent");
  verify_cmd->add_option("--checks", verify_checks,
                         "comma-separated check names (default all)");
  verify_cmd->add_option("--samples", verify_samples, "Monte Carlo sample size");
  verify_cmd->add_option("--trials", verify_trials, "trial count per check");
  verify_cmd->add_option("--seed", verify_seed, "seed");

  // rates ----------------------------------------------------------------
  auto* rates_cmd =
      app.add_subcommand("rates", "run rate experiments / print exponents");
  RatesConfig rates_cfg;
  std::string rates_config_path;
  bool exponents_only = false;
  double rates_alpha = 1.0;
  double rates_q = 1.0;
  rates_cmd->add_option("--config", rates_config_path, "JSON experiment config");
  auto* rates_family_opt = rates_cmd->add_option(
      "--family", rates_cfg.family.kind, "synthetic family kind");
  auto* rates_d_opt = rates_cmd->add_option("--d", rates_cfg.family.d, "dimension");
  auto* rates_gamma_opt =
      rates_cmd->add_option("--gamma", rates_cfg.family.gamma, "noise-control exponent");
  auto* rates_alpha_opt =
      rates_cmd->add_option("--alpha", rates_alpha, "margin exponent (power_mass mass exponent)");
  auto* rates_mode_opt =
      rates_cmd->add_option("--mode", rates_cfg.mode, "fixed_schedule or tvhr");
  auto* rates_ns_opt =
      rates_cmd->add_option("--ns", rates_cfg.ns, "sample sizes (ascending)");
  auto* rates_reps_opt = rates_cmd->add_option("--reps", rates_cfg.reps, "repetitions per n");
  auto* rates_seed_opt = rates_cmd->add_option("--seed", rates_cfg.seed, "master seed");
  auto* rates_scale_opt =
      rates_cmd->add_option("--scale", rates_cfg.scale, "schedule scale factor");
  auto* rates_tau_opt = rates_cmd->add_option("--tau", rates_cfg.tau, "confidence parameter");
  auto* rates_beta_opt = rates_cmd->add_option(
      "--beta", rates_cfg.beta, "margin-noise exponent override");
  auto* rates_s_opt = rates_cmd->add_option("--s-override", rates_cfg.s_override,
                                            "fixed cell width overriding the schedule");
  auto* rates_threads_opt =
      rates_cmd->add_option("--threads", rates_cfg.threads, "worker cap (0 = all)");
  auto* rates_csv_opt = rates_cmd->add_option("--out", rates_cfg.out_csv, "CSV output path");
  auto* rates_json_opt =
      rates_cmd->add_option("--out-json", rates_cfg.out_json, "JSON summary path");
  rates_cmd->add_flag("--exponents-only", exponents_only,
                      "print the comparison exponent table and exit");
  auto* rates_q_opt = rates_cmd->add_option("--q", rates_q, "noise exponent for the table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::CallForAllHelp& help) {
    return app.exit(help);
  } catch (const CLI::ParseError& err) {
    std::cerr << err.what() << "\n";
    return 2;
  }

  try {
    if (fit_cmd->parsed())
      return cmd_fit(fit_data, fit_family, fit_family_opt->count() > 0, fit_n,
                     fit_seed, fit_s, fit_out);
    if (predict_cmd->parsed())
      return cmd_predict(predict_model, predict_data, predict_out);
    if (verify_cmd->parsed())
      return cmd_verify(verify_family, verify_checks, verify_samples,
                        verify_trials, verify_seed);
    if (rates_cmd->parsed()) {
      RatesConfig cfg;
      if (!rates_config_path.empty()) apply_json_config(rates_config_path, cfg);
      // Flags override whatever the config file provided.
      if (rates_family_opt->count()) cfg.family.kind = rates_cfg.family.kind;
      if (rates_d_opt->count()) cfg.family.d = rates_cfg.family.d;
      if (rates_gamma_opt->count()) cfg.family.gamma = rates_cfg.family.gamma;
      if (rates_alpha_opt->count()) cfg.family.alpha = rates_alpha;
      if (rates_mode_opt->count()) cfg.mode = rates_cfg.mode;
      if (rates_ns_opt->count()) cfg.ns = rates_cfg.ns;
      if (rates_reps_opt->count()) cfg.reps = rates_cfg.reps;
      if (rates_seed_opt->count()) cfg.seed = rates_cfg.seed;
      if (rates_scale_opt->count()) cfg.scale = rates_cfg.scale;
      if (rates_tau_opt->count()) cfg.tau = rates_cfg.tau;
      if (rates_beta_opt->count()) cfg.beta = rates_cfg.beta;
      if (rates_s_opt->count()) cfg.s_override = rates_cfg.s_override;
      if (rates_threads_opt->count()) cfg.threads = rates_cfg.threads;
      if (rates_csv_opt->count()) cfg.out_csv = rates_cfg.out_csv;
      if (rates_json_opt->count()) cfg.out_json = rates_cfg.out_json;
      return cmd_rates(cfg, exponents_only, rates_alpha,
                       rates_alpha_opt->count() > 0, rates_q,
                       rates_q_opt->count() > 0);
    }
  } catch (const ConfigError& err) {
    std::cerr << "configuration error: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 2;
}
