#pragma once

#include <cstdint>
#include <optional>

#include "histrate/hist.hpp"
#include "histrate/margin.hpp"
#include "histrate/synth.hpp"

namespace histrate {

enum class RiskMethod { exact, monte_carlo };

struct RiskReport {
  double risk = 0.0;
  double excess = 0.0;
  std::optional<CellSet> region;
  RiskMethod method = RiskMethod::exact;
  std::optional<double> std_error;
};

/// Classification loss 1{y * sign(t) <= 0} with sign(0) := +1, so
/// loss(+1, 0) = 0 and loss(-1, 0) = 1.
int classification_loss(int y, double t);

/// Mean classification loss over the sample; points whose cell lies outside
/// `region` contribute zero when a region is given.
double empirical_risk(const HistogramClassifier& classifier,
                      const LabeledSample& data,
                      const std::optional<CellSet>& region = std::nullopt);

/// Exact excess risk via the symmetric-difference identity: the noise mass
/// |2*eta - 1| integrated over the mislabeled part of each cell.  Region
/// defaults to every cell meeting X.
RiskReport excess_risk_exact(const HistogramClassifier& classifier,
                             const SyntheticFamily& family,
                             const std::optional<CellSet>& region = std::nullopt,
                             double quad_tol = 1e-10);

/// Monte Carlo excess-risk estimate over m fresh draws with the standard
/// error of the per-point loss difference.
RiskReport excess_risk_mc(const HistogramClassifier& classifier,
                          const SyntheticFamily& family, std::size_t m,
                          std::uint64_t seed);

struct RiskSplitCheck {
  double lhs = 0.0;
  double rhs_near = 0.0;
  double rhs_far = 0.0;
  bool holds = false;
};

/// Verifies excess_X <= excess_near + excess_far for a covering split.
RiskSplitCheck risk_split_check(const HistogramClassifier& classifier,
                                const SyntheticFamily& family,
                                const NearFarSplit& split);

struct VarianceBoundCheck {
  double worst_ratio = 0.0;
  bool holds = true;
  bool degenerate = false;  // empty far set, vacuously true
};

/// Checks E(h^2) <= (c_LC / r^gamma) * E(h) on the far set over random
/// cellwise classifiers, with both sides computed exactly.
VarianceBoundCheck variance_bound_check(const SyntheticFamily& family,
                                        const GridSpec& grid, double r,
                                        std::size_t trials,
                                        std::uint64_t seed);

/// Independent fair-coin label per cell meeting X.
HistogramClassifier random_cellwise_classifier(const GridSpec& grid,
                                               std::uint64_t seed);

}  // namespace histrate
