#include "histrate/risk.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "histrate/errors.hpp"
#include "histrate/random.hpp"

namespace histrate {

namespace {

// Part of the cell where the given label disagrees with the Bayes sign,
// i.e. the sub-box on the opposite side of the hyperplane x_1 = 0.
CellBox mislabeled_part(const CellBox& box, int label) {
  CellBox part = box;
  if (label > 0)
    part.upper[0] = std::min(part.upper[0], 0.0);
  else
    part.lower[0] = std::max(part.lower[0], 0.0);
  return part;
}

void check_dims(const HistogramClassifier& classifier,
                const SyntheticFamily& family) {
  if (classifier.grid.d != family.d)
    throw ConfigError("classifier and family dimensions differ");
}

}  // namespace

int classification_loss(int y, double t) {
  if (y != 1 && y != -1)
    throw ConfigError("classification_loss: label must be -1 or +1");
  const int sign_t = t >= 0.0 ? +1 : -1;
  return y * sign_t <= 0 ? 1 : 0;
}

double empirical_risk(const HistogramClassifier& classifier,
                      const LabeledSample& data,
                      const std::optional<CellSet>& region) {
  if (data.n() == 0) throw ConfigError("empirical_risk: empty sample");
  if (data.dim() != classifier.grid.d)
    throw ConfigError("empirical_risk: sample and classifier dimensions differ");
  long errors = 0;
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    const CellIndex idx = cell_of(data.points.row(i), classifier.grid);
    if (region && region->count(idx) == 0) continue;
    errors += classifier.label_of(idx) != data.labels[i];
  }
  return static_cast<double>(errors) / static_cast<double>(data.n());
}

RiskReport excess_risk_exact(const HistogramClassifier& classifier,
                             const SyntheticFamily& family,
                             const std::optional<CellSet>& region,
                             double quad_tol) {
  check_dims(classifier, family);
  RiskReport report;
  report.method = RiskMethod::exact;
  report.region = region;

  double excess = 0.0;
  double bayes_part = 0.0;
  auto add_cell = [&](const CellIndex& idx) {
    const CellBox box = cell_bounds(idx, classifier.grid);
    const CellBox bad = mislabeled_part(box, classifier.label_of(idx));
    excess += box_abs_noise_mass(family, bad, quad_tol);
    bayes_part += 0.5 * (box_px_mass(family, box) -
                         box_abs_noise_mass(family, box, quad_tol));
  };
  if (region) {
    for (const CellIndex& idx : *region) {
      if (idx.coords.size() != classifier.grid.d)
        throw ConfigError("excess_risk_exact: region cell dimension mismatch");
      add_cell(idx);
    }
  } else {
    for (const CellIndex& idx : cells_meeting_x(classifier.grid))
      add_cell(idx);
  }
  report.excess = excess;
  report.risk = bayes_part + excess;
  return report;
}

RiskReport excess_risk_mc(const HistogramClassifier& classifier,
                          const SyntheticFamily& family, std::size_t m,
                          std::uint64_t seed) {
  check_dims(classifier, family);
  if (m < 100) throw ConfigError("excess_risk_mc: needs at least 100 draws");
  const LabeledSample data = sample(family, m, seed);
  long classifier_errors = 0;
  long diff_sum = 0;
  long diff_sq_sum = 0;
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    const Eigen::VectorXd x = data.points.row(i);
    const int loss_c = classifier.predict(x) != data.labels[i];
    const int loss_b = bayes_label(family, x) != data.labels[i];
    const int diff = loss_c - loss_b;
    classifier_errors += loss_c;
    diff_sum += diff;
    diff_sq_sum += diff * diff;
  }
  const double n = static_cast<double>(m);
  const double mean = static_cast<double>(diff_sum) / n;
  const double var =
      (static_cast<double>(diff_sq_sum) - n * mean * mean) / (n - 1.0);
  RiskReport report;
  report.method = RiskMethod::monte_carlo;
  report.risk = static_cast<double>(classifier_errors) / n;
  report.excess = mean;
  report.std_error = std::sqrt(std::max(var, 0.0) / n);
  return report;
}

RiskSplitCheck risk_split_check(const HistogramClassifier& classifier,
                                const SyntheticFamily& family,
                                const NearFarSplit& split) {
  check_dims(classifier, family);
  for (const CellIndex& idx : cells_meeting_x(classifier.grid)) {
    if (split.near.count(idx) == 0 && split.far.count(idx) == 0)
      throw ConfigError(
          "risk_split_check: split does not cover all cells meeting X");
  }
  RiskSplitCheck check;
  check.lhs = excess_risk_exact(classifier, family).excess;
  check.rhs_near = excess_risk_exact(classifier, family, split.near).excess;
  check.rhs_far = excess_risk_exact(classifier, family, split.far).excess;
  check.holds = check.lhs <= check.rhs_near + check.rhs_far + 1e-12;
  return check;
}

HistogramClassifier random_cellwise_classifier(const GridSpec& grid,
                                               std::uint64_t seed) {
  RandomStream rng(seed);
  HistogramClassifier out;
  out.grid = grid;
  for (const CellIndex& idx : cells_meeting_x(grid))
    out.votes.emplace(idx, rng.coin() ? 1.0 : -1.0);
  return out;
}

VarianceBoundCheck variance_bound_check(const SyntheticFamily& family,
                                        const GridSpec& grid, double r,
                                        std::size_t trials,
                                        std::uint64_t seed) {
  const NearFarSplit split = near_far_partition(family, grid, r);
  VarianceBoundCheck check;
  if (split.far.empty()) {
    check.degenerate = true;
    return check;
  }
  const MarginProfile profile = margin_profile(family);
  const double budget =
      profile.c_lc / std::pow(r, family.gamma) * (1.0 + 1e-9);

  // Bayes side of a far cell; far cells never straddle x_1 = 0.
  std::vector<std::pair<CellIndex, int>> far_sides;
  far_sides.reserve(split.far.size());
  for (const CellIndex& idx : split.far) {
    const CellBox box = cell_bounds(idx, grid);
    const double lo = std::max(box.lower[0], -1.0);
    const double hi = std::min(box.upper[0], 1.0);
    far_sides.emplace_back(idx, lo + hi >= 0.0 ? +1 : -1);
  }

  for (std::size_t t = 0; t < trials; ++t) {
    const HistogramClassifier f =
        random_cellwise_classifier(grid, derive_seed(seed, t));
    double second_moment = 0.0;  // E(h^2) = P_X(far /\ {f != bayes})
    for (const auto& [idx, side] : far_sides) {
      if (f.label_of(idx) != side)
        second_moment += box_px_mass(family, cell_bounds(idx, grid));
    }
    const double first_moment =
        excess_risk_exact(f, family, split.far).excess;
    if (first_moment == 0.0 && second_moment == 0.0) continue;
    const double ratio = second_moment / first_moment;
    check.worst_ratio = std::max(check.worst_ratio, ratio);
  }
  check.holds = check.worst_ratio <= budget;
  return check;
}

}  // namespace histrate
