#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <set>
#include <utility>
#include <vector>

namespace histrate {

/// Partition of R^d into half-open cubes [k*s, (k+1)*s) anchored at integer
/// multiples of the side length s.
struct GridSpec {
  int d = 1;
  double s = 1.0;
};

/// Validated constructor for GridSpec; requires d >= 1 and s in (0, 1].
GridSpec make_grid(int d, double s);

/// Integer address of one cube: cell j is the box prod_i [k_i*s, (k_i+1)*s).
struct CellIndex {
  Eigen::VectorXi coords;

  bool operator==(const CellIndex& other) const {
    return coords.size() == other.coords.size() && coords == other.coords;
  }
  bool operator<(const CellIndex& other) const;
};

struct CellBox {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

using CellSet = std::set<CellIndex>;

inline constexpr std::size_t kDefaultCellCap = 100000000;

/// Unique cell containing x: k_i = floor(x_i / s).
CellIndex cell_of(const Eigen::VectorXd& x, const GridSpec& grid);

CellBox cell_bounds(const CellIndex& idx, const GridSpec& grid);

/// Inclusive per-axis index range [k_lo, k_hi] of cells whose cube meets
/// [-1, 1]; identical for every axis.
std::pair<int, int> axis_cell_range(const GridSpec& grid);

/// All cell indices whose cube intersects [-1, 1]^d, in lexicographic order.
/// Cardinality is bounded by 8^d * s^{-d}; enumeration beyond cell_cap fails.
std::vector<CellIndex> cells_meeting_x(const GridSpec& grid,
                                       std::size_t cell_cap = kDefaultCellCap);

}  // namespace histrate
