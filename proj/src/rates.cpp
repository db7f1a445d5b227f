#include "histrate/rates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include <nlohmann/json.hpp>

#include "histrate/errors.hpp"
#include "histrate/hist.hpp"
#include "histrate/parallel.hpp"
#include "histrate/random.hpp"
#include "histrate/risk.hpp"

namespace histrate {

namespace {

void check_rate_params(const RateParams& p) {
  if (!(p.alpha > 0.0)) throw ConfigError("rate params: alpha must be > 0");
  if (!(p.beta > 0.0)) throw ConfigError("rate params: beta must be > 0");
  if (p.gamma < 0.0) throw ConfigError("rate params: gamma must be >= 0");
  if (p.d < 1) throw ConfigError("rate params: dimension must be >= 1");
}

std::string format_sig(double v, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

}  // namespace

RateParams rate_params(const MarginProfile& profile, int d) {
  RateParams p;
  p.alpha = profile.alpha;
  p.beta = profile.beta;
  p.gamma = profile.gamma;
  p.d = d;
  p.q = profile.q;
  p.delta_star = profile.delta_star;
  check_rate_params(p);
  return p;
}

double our_exponent(const RateParams& params) {
  check_rate_params(params);
  if (!params.schedule_applicable())
    throw ConfigError(
        "rate out of regime: the fixed schedule requires beta <= kappa/gamma "
        "(beta = " +
        std::to_string(params.beta) +
        ", kappa/gamma = " + std::to_string(params.kappa() / params.gamma) +
        ")");
  const double kappa = params.kappa();
  const double g2 = params.gamma * params.gamma;
  return params.beta * kappa /
         (params.beta * (kappa + g2) + params.d * kappa);
}

double simplified_exponent(double alpha, double gamma, int d) {
  if (!(alpha > 0.0) || gamma < 0.0 || d < 1)
    throw ConfigError("simplified_exponent: bad parameters");
  return (alpha + gamma) /
         (alpha + 2.0 * gamma + d - gamma / (1.0 + gamma));
}

std::map<std::string, RateEntry> comparison_exponents(double alpha,
                                                      double gamma, int d,
                                                      double q) {
  if (!(alpha > 0.0) || !(gamma > 0.0) || d < 1)
    throw ConfigError("comparison_exponents: bad parameters");
  if (!(q > 0.0)) throw ConfigError("comparison_exponents: q must be > 0");
  std::map<std::string, RateEntry> table;
  table["ours"] = {simplified_exponent(alpha, gamma, d), false};
  table["svm"] = {(alpha + gamma) / (alpha + 2.0 * gamma + d), false};
  table["kokr_plain"] = {(alpha + gamma) / (alpha + 3.0 * gamma + d), false};
  table["kokr_dense"] = {(alpha + gamma) / (2.0 * gamma + d), false};
  table["bicodade_general"] = {(alpha + gamma) / (alpha + 2.0 * gamma + d),
                               true};
  table["bicodade_uniform"] = {(1.0 + gamma) / (2.0 * gamma + d), true};
  const double auts = gamma * (q + 1.0) / (gamma * (q + 2.0) + d);
  table["auts_general"] = {auts, false};
  table["ours_no_lc"] = {auts, false};
  return table;
}

double s_schedule(std::size_t n, const RateParams& params, double scale) {
  check_rate_params(params);
  if (!(scale > 0.0)) throw ConfigError("s_schedule: scale must be > 0");
  if (n == 0) throw ConfigError("s_schedule: n must be >= 1");
  const double kappa = params.kappa();
  const double g2 = params.gamma * params.gamma;
  const double exponent =
      kappa / (params.beta * (kappa + g2) + params.d * kappa);
  const double s = scale * std::pow(static_cast<double>(n), -exponent);
  return std::min(s, 1.0);
}

TheoreticalConstants theoretical_constants(double alpha, double gamma, int d,
                                           double hausdorff_boundary,
                                           double c_lc, double c_me) {
  if (!(alpha > 0.0) || d < 1 || !(hausdorff_boundary > 0.0) ||
      !(c_lc > 0.0) || !(c_me > 0.0))
    throw ConfigError("theoretical_constants: inputs must be positive");
  if (!(gamma > 0.0))
    throw ConfigError("theoretical_constants: gamma must be > 0");
  const double ag = alpha + gamma;
  const double c2 = ag / gamma * std::pow(c_me, alpha * gamma / ag) *
                    std::pow(gamma * c_lc / alpha, alpha / ag);
  TheoreticalConstants out;
  out.v = std::max(1.0, c2);
  out.c_hat = 32.0 * std::max(12.0 * hausdorff_boundary, 1.0) * out.v;
  const double noise_const = std::max(c_lc, std::pow(2.0, gamma));
  const double numerator = 16.0 * gamma * (alpha + 2.0 * gamma) *
                           std::pow(8.0, d + 1) * noise_const / ag;
  out.c_tilde = std::pow(numerator / std::pow(out.c_hat, ag / (alpha + 2.0 * gamma)),
                         ag / (ag + gamma * (alpha + 2.0 * gamma)));
  out.c_main = 128.0 * std::pow(8.0, d + 1) * noise_const *
               std::max(gamma * (alpha + 2.0 * gamma) / ag, 1.0) *
               std::pow(out.c_tilde, -gamma);
  return out;
}

OracleBoundValue oracle_bound(double s, double n, double tau, double beta,
                              double c_mne, const TheoreticalConstants& consts,
                              const RateParams& params) {
  check_rate_params(params);
  if (!(s > 0.0) || s > 1.0) throw ConfigError("oracle_bound: s must be in (0,1]");
  if (!(n >= 1.0)) throw ConfigError("oracle_bound: n must be >= 1");
  if (!(tau >= 1.0)) throw ConfigError("oracle_bound: tau must be >= 1");
  if (!(params.gamma > 0.0))
    throw ConfigError("oracle_bound: gamma must be > 0");
  const double kappa = params.kappa();
  const double g2 = params.gamma * params.gamma;
  OracleBoundValue out;
  out.approx_term = 6.0 * std::pow(c_mne * s, beta);
  out.estimation_term =
      consts.c_main *
      std::pow(tau / (std::pow(s, params.d) * n), kappa / (kappa + g2));
  out.value = out.approx_term + out.estimation_term;
  const double s_cap =
      std::pow(consts.c_tilde, (kappa + g2) / (kappa + g2 + params.d * params.gamma)) *
      std::pow(tau / n, params.gamma / (kappa + g2 + params.d * params.gamma));
  const double mass_floor =
      tau * std::pow(consts.c_tilde / std::min(params.delta_star / 3.0, 1.0),
                     (kappa + g2) / params.gamma);
  out.in_force = s <= s_cap && std::pow(s, params.d) * n >= mass_floor;
  return out;
}

LogLogFit fit_loglog(const std::vector<double>& xs,
                     const std::vector<double>& ys) {
  if (xs.size() != ys.size())
    throw ConfigError("fit_loglog: mismatched input lengths");
  if (xs.size() < 2) throw ConfigError("fit_loglog: needs at least 2 points");
  const auto n = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd response(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(xs[static_cast<std::size_t>(i)] > 0.0) ||
        !(ys[static_cast<std::size_t>(i)] > 0.0))
      throw ConfigError("fit_loglog: inputs must be strictly positive");
    design(i, 0) = 1.0;
    design(i, 1) = std::log(xs[static_cast<std::size_t>(i)]);
    response[i] = std::log(ys[static_cast<std::size_t>(i)]);
  }
  const Eigen::Vector2d coef =
      design.colPivHouseholderQr().solve(response);
  LogLogFit fit;
  fit.intercept = coef[0];
  fit.slope = coef[1];
  const double ss_res = (response - design * coef).squaredNorm();
  const double ss_tot =
      (response.array() - response.mean()).matrix().squaredNorm();
  fit.r_squared = ss_tot > 1e-300 ? 1.0 - ss_res / ss_tot
                                  : (ss_res < 1e-20 ? 1.0 : 0.0);
  return fit;
}

const char* mode_name(ExperimentMode mode) {
  return mode == ExperimentMode::fixed_schedule ? "fixed_schedule" : "tvhr";
}

RateExperimentResult run_rate_experiment(const SyntheticFamily& family,
                                         const RateParams& params,
                                         const std::vector<std::size_t>& ns,
                                         std::size_t reps, ExperimentMode mode,
                                         double scale, std::uint64_t seed,
                                         unsigned threads,
                                         std::optional<double> s_override) {
  check_rate_params(params);
  if (family.d != params.d)
    throw ConfigError("run_rate_experiment: family and params dimensions differ");
  if (ns.empty()) throw ConfigError("run_rate_experiment: empty n list");
  for (std::size_t i = 0; i + 1 < ns.size(); ++i)
    if (ns[i] >= ns[i + 1])
      throw ConfigError("run_rate_experiment: ns must be strictly increasing");
  if (reps == 0) throw ConfigError("run_rate_experiment: reps must be >= 1");
  if (!(scale > 0.0)) throw ConfigError("run_rate_experiment: scale must be > 0");

  RateExperimentResult result;
  result.mode = mode;
  result.theoretical_exponent = our_exponent(params);

  // Width grids are shared across repetitions of the same n.
  std::vector<SGrid> grids;
  if (mode == ExperimentMode::tvhr) {
    grids.reserve(ns.size());
    for (std::size_t n : ns) grids.push_back(make_s_grid(n, params.d));
  }

  std::vector<double> excess(ns.size() * reps, 0.0);
  parallel_for(excess.size(), threads, [&](std::size_t pair) {
    const std::size_t n_idx = pair / reps;
    const std::size_t rep = pair % reps;
    const std::size_t n = ns[n_idx];
    const std::uint64_t pair_seed = derive_seed(seed, n_idx, rep);
    const LabeledSample data = sample(family, n, pair_seed);
    HistogramClassifier classifier;
    if (mode == ExperimentMode::fixed_schedule) {
      const double s =
          s_override ? *s_override : s_schedule(n, params, scale);
      classifier = fit(data, make_grid(params.d, s));
    } else {
      classifier = tvhr_fit(data, grids[n_idx]).classifier;
    }
    excess[pair] = excess_risk_exact(classifier, family).excess;
  });

  std::vector<double> fit_ns;
  std::vector<double> fit_means;
  for (std::size_t n_idx = 0; n_idx < ns.size(); ++n_idx) {
    double sum = 0.0;
    for (std::size_t rep = 0; rep < reps; ++rep)
      sum += excess[n_idx * reps + rep];
    const double mean = sum / static_cast<double>(reps);
    double sq = 0.0;
    for (std::size_t rep = 0; rep < reps; ++rep) {
      const double dev = excess[n_idx * reps + rep] - mean;
      sq += dev * dev;
    }
    const double std_dev =
        reps > 1 ? std::sqrt(sq / static_cast<double>(reps - 1)) : 0.0;
    result.rows.push_back({ns[n_idx], mean, std_dev, reps});
    if (mean > 0.0) {
      fit_ns.push_back(static_cast<double>(ns[n_idx]));
      fit_means.push_back(mean);
    } else {
      result.excluded_ns.push_back(ns[n_idx]);
    }
  }
  const LogLogFit fit = fit_loglog(fit_ns, fit_means);
  result.slope = fit.slope;
  result.intercept = fit.intercept;
  result.r_squared = fit.r_squared;
  return result;
}

std::string experiment_csv(const RateExperimentResult& result) {
  std::string out = "n,mean_excess,std_excess,reps\n";
  for (const auto& row : result.rows) {
    out += std::to_string(row.n);
    out += ',';
    out += format_sig(row.mean_excess, 10);
    out += ',';
    out += format_sig(row.std_excess, 10);
    out += ',';
    out += std::to_string(row.reps);
    out += '\n';
  }
  return out;
}

std::string experiment_json(const RateExperimentResult& result,
                            const RateParams& params, double scale,
                            std::uint64_t seed) {
  nlohmann::json params_json{
      {"alpha", params.alpha}, {"beta", params.beta},
      {"gamma", params.gamma}, {"d", params.d},
      {"q", params.q},         {"kappa", params.kappa()},
      {"theta", params.theta()}, {"scale", scale},
      {"seed", seed}};
  std::vector<std::size_t> ns;
  std::size_t reps = 0;
  for (const auto& row : result.rows) {
    ns.push_back(row.n);
    reps = row.reps;
  }
  params_json["ns"] = ns;
  params_json["reps"] = reps;
  nlohmann::json summary{{"slope", result.slope},
                         {"intercept", result.intercept},
                         {"r_squared", result.r_squared},
                         {"theoretical_exponent", result.theoretical_exponent},
                         {"mode", mode_name(result.mode)},
                         {"params", params_json}};
  if (!result.excluded_ns.empty()) summary["excluded_ns"] = result.excluded_ns;
  return summary.dump(2) + "\n";
}

}  // namespace histrate
