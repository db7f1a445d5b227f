#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "histrate/grid.hpp"
#include "histrate/synth.hpp"

namespace histrate {

/// Cellwise classifier: each stored cell carries its vote difference
/// (empirical f_{D,s} or infinite-sample f_{P,s}); the cell label is +1
/// exactly when the vote is >= 0, and absent cells use default_label.
struct HistogramClassifier {
  GridSpec grid;
  std::map<CellIndex, double> votes;
  int default_label = +1;

  int label_of(const CellIndex& idx) const {
    const auto it = votes.find(idx);
    if (it == votes.end()) return default_label;
    return it->second >= 0.0 ? +1 : -1;
  }

  int predict(const Eigen::VectorXd& x) const {
    return label_of(cell_of(x, grid));
  }
};

/// Majority-vote fit: vote(j) = (#{y=+1} - #{y=-1}) / n over the points in
/// cell j; only occupied cells are stored.
HistogramClassifier fit(const LabeledSample& data, const GridSpec& grid);

/// Infinite-sample rule: vote(j) is the exact signed noise mass of cell j,
/// stored for every cell meeting [-1,1]^d.  Closed form for linear and
/// power_mass; far_noise falls back to quadrature at quad_tol.
HistogramClassifier infinite_sample_fit(const SyntheticFamily& family,
                                        const GridSpec& grid,
                                        double quad_tol = 1e-10);

/// True iff the classifier's empirical risk (restricted to `region` when
/// given) attains the minimum over all 2^k labelings of the occupied cells.
/// Requires at most 20 occupied cells.
bool erm_verify(const HistogramClassifier& classifier,
                const LabeledSample& data,
                const std::optional<CellSet>& region = std::nullopt);

/// Candidate cell widths for the training-validation rule: the uniform
/// n^{-1/d}-net {k * n^{-1/d}} of (0, 1].
struct SGrid {
  std::vector<double> values;
};

SGrid make_s_grid(std::size_t n, int d);

struct TvhrFit {
  HistogramClassifier classifier;
  double chosen_s = 0.0;
  std::vector<std::pair<double, double>> table;  // (s, validation risk)
};

/// Training-validation histogram rule: fits on the first floor(n/2)+1
/// observations for every s in the grid, evaluates the classification risk
/// on the remainder, and keeps the minimizer (ties go to the smallest s).
TvhrFit tvhr_fit(const LabeledSample& data, const SGrid& s_grid);

std::string serialize_classifier(const HistogramClassifier& classifier);
HistogramClassifier parse_classifier(std::istream& in);
void save_classifier(const HistogramClassifier& classifier,
                     const std::string& path);
HistogramClassifier load_classifier(const std::string& path);

}  // namespace histrate
