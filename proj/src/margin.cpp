#include "histrate/margin.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "histrate/errors.hpp"
#include "histrate/rates.hpp"

namespace histrate {

namespace {

struct Axis1Range {
  double lo = 0.0;
  double hi = 0.0;
  bool empty = false;
};

// First-coordinate span of the cell clipped to [-1, 1] (closed hull).
Axis1Range axis1_span(const CellIndex& idx, const GridSpec& grid) {
  Axis1Range span;
  span.lo = std::max(idx.coords[0] * grid.s, -1.0);
  span.hi = std::min((idx.coords[0] + 1) * grid.s, 1.0);
  span.empty = span.lo > span.hi;
  return span;
}

// Range of the boundary distance |x_1| over the clipped cell.
std::pair<double, double> delta_range(const SyntheticFamily& family,
                                      const CellIndex& idx,
                                      const GridSpec& grid) {
  const Axis1Range span = axis1_span(idx, grid);
  const double lo_abs = std::abs(span.lo);
  const double hi_abs = std::abs(span.hi);
  double d_min = (span.lo <= 0.0 && span.hi >= 0.0) ? 0.0
                                                    : std::min(lo_abs, hi_abs);
  const double d_max = std::max(lo_abs, hi_abs);
  // A depth-1 bump makes the posterior exactly critical at its center, which
  // drops the distance there to zero.
  if (family.kind == FamilyKind::far_noise && family.bump->depth >= 1.0) {
    const CellBox box = cell_bounds(idx, grid);
    bool contains_center = true;
    for (int i = 0; i < grid.d; ++i) {
      const double lo = std::max(box.lower[i], -1.0);
      const double hi = std::min(box.upper[i], 1.0);
      if (family.bump->center[i] < lo || family.bump->center[i] > hi)
        contains_center = false;
    }
    if (contains_center) d_min = 0.0;
  }
  return {d_min, d_max};
}

void accumulate_estimates(const SyntheticFamily& family,
                          std::size_t sample_size,
                          const std::vector<double>& grid_values,
                          std::uint64_t seed, bool weight_by_noise,
                          bool threshold_on_noise, std::vector<double>& out) {
  if (sample_size == 0) throw ConfigError("estimator needs sample_size >= 1");
  if (grid_values.size() < 4)
    throw ConfigError("estimator grid needs at least 4 threshold values");
  for (double t : grid_values)
    if (!(t > 0.0) || t > 1.0)
      throw ConfigError("estimator thresholds must lie in (0, 1]");
  const LabeledSample data = sample(family, sample_size, seed);
  out.assign(grid_values.size(), 0.0);
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    const Eigen::VectorXd x = data.points.row(i);
    const double noise = noise_magnitude(family, x);
    const double key = threshold_on_noise ? noise : delta_eta(family, x);
    const double weight = weight_by_noise ? noise : 1.0;
    for (std::size_t j = 0; j < grid_values.size(); ++j)
      if (key < grid_values[j]) out[j] += weight;
  }
  for (double& v : out) v /= static_cast<double>(sample_size);
}

ExponentEstimate fit_exponent(const std::vector<double>& grid_values,
                              const std::vector<double>& estimates) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t j = 0; j < grid_values.size(); ++j) {
    if (estimates[j] > 0.0) {
      xs.push_back(grid_values[j]);
      ys.push_back(estimates[j]);
    }
  }
  if (xs.size() < 2)
    throw ComputeError(
        "exponent estimation failed: fewer than 2 thresholds with positive "
        "empirical mass");
  const LogLogFit fit = fit_loglog(xs, ys);
  ExponentEstimate est;
  est.exponent = fit.slope;
  est.constant = fit.slope != 0.0 ? std::exp(fit.intercept / fit.slope) : 0.0;
  est.r_squared = fit.r_squared;
  return est;
}

ControlCheck run_control_check(const SyntheticFamily& family,
                               std::size_t sample_size, std::uint64_t seed,
                               bool lower) {
  if (sample_size == 0) throw ConfigError("control check needs sample_size >= 1");
  const MarginProfile profile = margin_profile(family);
  const double budget = lower ? profile.c_lc : profile.c_uc;
  const LabeledSample data = sample(family, sample_size, seed);
  ControlCheck check;
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    const Eigen::VectorXd x = data.points.row(i);
    const double noise = noise_magnitude(family, x);
    const double dist_pow = std::pow(delta_eta(family, x), family.gamma);
    double ratio;
    if (lower) {
      if (noise <= 0.0) continue;  // vacuous on the boundary set
      ratio = dist_pow / noise;
    } else {
      if (dist_pow <= 0.0) continue;  // 0/0 convention on the boundary
      ratio = noise / dist_pow;
    }
    check.worst_ratio = std::max(check.worst_ratio, ratio);
  }
  check.holds = check.worst_ratio <= budget * (1.0 + 1e-9);
  return check;
}

}  // namespace

NearFarSplit near_far_partition(const SyntheticFamily& family,
                                const GridSpec& grid, double r) {
  if (family.d != grid.d)
    throw ConfigError("near_far_partition: family and grid dimensions differ");
  if (!(r >= grid.s / 2.0))
    throw ConfigError("near_far_partition requires r >= s/2, got r = " +
                      std::to_string(r) + ", s = " + std::to_string(grid.s));
  NearFarSplit split;
  split.r = r;
  for (const CellIndex& idx : cells_meeting_x(grid)) {
    const auto [d_min, d_max] = delta_range(family, idx, grid);
    if (d_max <= 3.0 * r) split.near.insert(idx);
    if (d_min >= r) split.far.insert(idx);
  }
  return split;
}

bool box_is_pure(const SyntheticFamily& family, const CellBox& box) {
  if (box.lower.size() != family.d)
    throw ConfigError("box_is_pure: box dimension does not match the family");
  const double lo = std::max(box.lower[0], -1.0);
  const double hi = std::min(box.upper[0], 1.0);
  if (lo > hi) return true;  // no mass in X at all
  return !(lo < 0.0 && hi > 0.0);
}

bool check_far_purity(const NearFarSplit& split, const SyntheticFamily& family,
                      const GridSpec& grid) {
  if (family.d != grid.d)
    throw ConfigError("check_far_purity: family and grid dimensions differ");
  for (const CellIndex& idx : split.far) {
    if (!box_is_pure(family, cell_bounds(idx, grid))) return false;
  }
  return true;
}

double tube_volume(const SyntheticFamily& family, double delta) {
  if (delta < 0.0) throw ConfigError("tube_volume: delta must be >= 0");
  // {|x_1| <= delta} /\ [-1,1]^d is a slab of width min(2*delta, 2).
  return std::min(2.0 * delta, 2.0) * std::ldexp(1.0, family.d - 1);
}

std::vector<double> default_t_grid() { return {0.5, 0.25, 0.1, 0.05, 0.02}; }

ExponentEstimate estimate_me(const SyntheticFamily& family,
                             std::size_t sample_size,
                             const std::vector<double>& t_grid,
                             std::uint64_t seed) {
  std::vector<double> estimates;
  accumulate_estimates(family, sample_size, t_grid, seed, false, false,
                       estimates);
  return fit_exponent(t_grid, estimates);
}

ExponentEstimate estimate_mne(const SyntheticFamily& family,
                              std::size_t sample_size,
                              const std::vector<double>& t_grid,
                              std::uint64_t seed) {
  std::vector<double> estimates;
  accumulate_estimates(family, sample_size, t_grid, seed, true, false,
                       estimates);
  return fit_exponent(t_grid, estimates);
}

ExponentEstimate estimate_ne(const SyntheticFamily& family,
                             std::size_t sample_size,
                             const std::vector<double>& eps_grid,
                             std::uint64_t seed) {
  std::vector<double> estimates;
  accumulate_estimates(family, sample_size, eps_grid, seed, false, true,
                       estimates);
  return fit_exponent(eps_grid, estimates);
}

ControlCheck check_lower_control(const SyntheticFamily& family,
                                 std::size_t sample_size, std::uint64_t seed) {
  return run_control_check(family, sample_size, seed, true);
}

ControlCheck check_upper_control(const SyntheticFamily& family,
                                 std::size_t sample_size, std::uint64_t seed) {
  return run_control_check(family, sample_size, seed, false);
}

}  // namespace histrate
