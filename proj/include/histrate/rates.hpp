#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "histrate/synth.hpp"

namespace histrate {

/// Margin parameters of a distribution together with the derived exponents
/// kappa = (1+gamma)(alpha+gamma) and theta = alpha/(alpha+gamma).
struct RateParams {
  double alpha = 1.0;
  double beta = 2.0;
  double gamma = 1.0;
  int d = 1;
  double q = 1.0;
  double delta_star = 1.0;

  double kappa() const { return (1.0 + gamma) * (alpha + gamma); }
  double theta() const { return alpha / (alpha + gamma); }

  /// The fixed cell-width schedule requires beta <= kappa / gamma.
  bool schedule_applicable() const {
    return gamma == 0.0 || beta <= kappa() / gamma * (1.0 + 1e-12);
  }
};

RateParams rate_params(const MarginProfile& profile, int d);

/// Learning-rate exponent beta*kappa / (beta*(kappa+gamma^2) + d*kappa);
/// throws when the schedule constraint beta <= kappa/gamma fails.
double our_exponent(const RateParams& params);

/// Equivalent form (alpha+gamma) / (alpha+2*gamma+d - gamma/(1+gamma)),
/// valid when beta = alpha + gamma.
double simplified_exponent(double alpha, double gamma, int d);

struct RateEntry {
  double exponent = 0.0;
  bool log_factor = false;  // rate carries an extra log(n) factor
};

/// Rate exponents of the comparison methods, keyed by method name, plus
/// "ours" and the no-lower-control variant "ours_no_lc".
std::map<std::string, RateEntry> comparison_exponents(double alpha,
                                                      double gamma, int d,
                                                      double q);

/// Cell-width schedule scale * n^{-kappa/(beta*(kappa+gamma^2)+d*kappa)},
/// clamped into (0, 1].
double s_schedule(std::size_t n, const RateParams& params, double scale);

struct TheoreticalConstants {
  double c_tilde = 0.0;  // balancing constant of the oracle inequality
  double c_hat = 0.0;
  double c_main = 0.0;  // prefactor of the estimation term
  double v = 0.0;       // variance-bound prefactor max{1, c_2}
};

TheoreticalConstants theoretical_constants(double alpha, double gamma, int d,
                                           double hausdorff_boundary,
                                           double c_lc, double c_me);

struct OracleBoundValue {
  double value = 0.0;
  double approx_term = 0.0;
  double estimation_term = 0.0;
  bool in_force = false;  // the (s, n, tau) side conditions hold
};

/// Right-hand side 6*(c_MNE*s)^beta + c_main*(tau/(s^d n))^{kappa/(kappa+g^2)}
/// with the side conditions on s reported via in_force.
OracleBoundValue oracle_bound(double s, double n, double tau, double beta,
                              double c_mne, const TheoreticalConstants& consts,
                              const RateParams& params);

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares on (log x, log y); requires >= 2 positive points.
LogLogFit fit_loglog(const std::vector<double>& xs,
                     const std::vector<double>& ys);

enum class ExperimentMode { fixed_schedule, tvhr };

struct RateExperimentRow {
  std::size_t n = 0;
  double mean_excess = 0.0;
  double std_excess = 0.0;
  std::size_t reps = 0;
};

struct RateExperimentResult {
  std::vector<RateExperimentRow> rows;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double theoretical_exponent = 0.0;
  ExperimentMode mode = ExperimentMode::fixed_schedule;
  std::vector<std::size_t> excluded_ns;  // rows with zero mean, left out of the fit
};

/// Monte Carlo rate experiment: for every (n, repetition) draw a fresh
/// sample, fit (fixed schedule or TV-HR), take the exact excess risk, then
/// fit the log-log slope of the mean excess against n.  Per-pair seeds are
/// derived from the master seed, so results are bit-identical for any
/// thread count.
RateExperimentResult run_rate_experiment(
    const SyntheticFamily& family, const RateParams& params,
    const std::vector<std::size_t>& ns, std::size_t reps, ExperimentMode mode,
    double scale, std::uint64_t seed, unsigned threads = 0,
    std::optional<double> s_override = std::nullopt);

std::string experiment_csv(const RateExperimentResult& result);
std::string experiment_json(const RateExperimentResult& result,
                            const RateParams& params, double scale,
                            std::uint64_t seed);

const char* mode_name(ExperimentMode mode);

}  // namespace histrate
