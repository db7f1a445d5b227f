#pragma once

#include <cstdint>
#include <vector>

#include "histrate/grid.hpp"
#include "histrate/synth.hpp"

namespace histrate {

/// Overlapping split of the cells meeting X into those whose cube stays
/// within distance 3r of the decision boundary (near) and those everywhere
/// at distance >= r from it (far).
struct NearFarSplit {
  double r = 0.0;
  CellSet near;
  CellSet far;
};

/// Classifies every cell meeting X by its exact per-cell range of the
/// distance to the decision boundary.  Requires r >= s/2.
NearFarSplit near_far_partition(const SyntheticFamily& family,
                                const GridSpec& grid, double r);

/// True iff the box, clipped to X, meets at most one of the two class
/// regions.
bool box_is_pure(const SyntheticFamily& family, const CellBox& box);

/// True iff no far cell intersects both class regions.
bool check_far_purity(const NearFarSplit& split, const SyntheticFamily& family,
                      const GridSpec& grid);

/// Exact Lebesgue volume of {x in X : distance to boundary <= delta}.
double tube_volume(const SyntheticFamily& family, double delta);

struct ExponentEstimate {
  double exponent = 0.0;
  double constant = 0.0;
  double r_squared = 0.0;
};

std::vector<double> default_t_grid();

/// Monte Carlo margin-exponent estimate: log-log slope of the empirical
/// tube mass P(delta_eta < t) over the t grid.
ExponentEstimate estimate_me(const SyntheticFamily& family,
                             std::size_t sample_size,
                             const std::vector<double>& t_grid,
                             std::uint64_t seed);

/// Margin-noise exponent: slope of the empirical noise-weighted tube mass.
ExponentEstimate estimate_mne(const SyntheticFamily& family,
                              std::size_t sample_size,
                              const std::vector<double>& t_grid,
                              std::uint64_t seed);

/// Noise exponent: slope of the empirical critical-noise mass
/// P(|2*eta - 1| < eps) over the eps grid.
ExponentEstimate estimate_ne(const SyntheticFamily& family,
                             std::size_t sample_size,
                             const std::vector<double>& eps_grid,
                             std::uint64_t seed);

struct ControlCheck {
  bool holds = true;
  double worst_ratio = 0.0;
};

/// Sampled check of delta^gamma <= c_LC * |2*eta - 1|.
ControlCheck check_lower_control(const SyntheticFamily& family,
                                 std::size_t sample_size, std::uint64_t seed);

/// Sampled check of |2*eta - 1| <= c_UC * delta^gamma.
ControlCheck check_upper_control(const SyntheticFamily& family,
                                 std::size_t sample_size, std::uint64_t seed);

}  // namespace histrate
