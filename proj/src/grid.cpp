#include "histrate/grid.hpp"

#include <cmath>
#include <string>

#include "histrate/errors.hpp"

namespace histrate {

GridSpec make_grid(int d, double s) {
  if (d < 1) throw ConfigError("grid dimension must be >= 1, got " + std::to_string(d));
  if (!(s > 0.0) || s > 1.0)
    throw ConfigError("cell side length must lie in (0, 1], got " + std::to_string(s));
  return GridSpec{d, s};
}

bool CellIndex::operator<(const CellIndex& other) const {
  if (coords.size() != other.coords.size())
    return coords.size() < other.coords.size();
  for (Eigen::Index i = 0; i < coords.size(); ++i) {
    if (coords[i] != other.coords[i]) return coords[i] < other.coords[i];
  }
  return false;
}

CellIndex cell_of(const Eigen::VectorXd& x, const GridSpec& grid) {
  if (x.size() != grid.d)
    throw ConfigError("cell_of: point has " + std::to_string(x.size()) +
                      " coordinates, grid expects " + std::to_string(grid.d));
  CellIndex idx;
  idx.coords.resize(grid.d);
  for (int i = 0; i < grid.d; ++i)
    idx.coords[i] = static_cast<int>(std::floor(x[i] / grid.s));
  return idx;
}

CellBox cell_bounds(const CellIndex& idx, const GridSpec& grid) {
  if (idx.coords.size() != grid.d)
    throw ConfigError("cell_bounds: index has " +
                      std::to_string(idx.coords.size()) +
                      " coordinates, grid expects " + std::to_string(grid.d));
  CellBox box;
  box.lower.resize(grid.d);
  box.upper.resize(grid.d);
  for (int i = 0; i < grid.d; ++i) {
    box.lower[i] = idx.coords[i] * grid.s;
    box.upper[i] = (idx.coords[i] + 1) * grid.s;
  }
  return box;
}

std::pair<int, int> axis_cell_range(const GridSpec& grid) {
  const double s = grid.s;
  // Cell [k*s, (k+1)*s) meets [-1, 1] iff k*s <= 1 and (k+1)*s > -1.
  int k_lo = static_cast<int>(std::floor(-1.0 / s)) - 1;
  while ((k_lo + 1) * s <= -1.0) ++k_lo;
  int k_hi = static_cast<int>(std::floor(1.0 / s)) + 1;
  while (k_hi * s > 1.0) --k_hi;
  return {k_lo, k_hi};
}

std::vector<CellIndex> cells_meeting_x(const GridSpec& grid,
                                       std::size_t cell_cap) {
  const auto [k_lo, k_hi] = axis_cell_range(grid);
  const std::size_t per_axis = static_cast<std::size_t>(k_hi - k_lo + 1);
  double total = 1.0;
  for (int i = 0; i < grid.d; ++i) total *= static_cast<double>(per_axis);
  if (total > static_cast<double>(cell_cap))
    throw ConfigError("cells_meeting_x: enumeration of " +
                      std::to_string(total) + " cells exceeds cap of " +
                      std::to_string(cell_cap));

  std::vector<CellIndex> cells;
  cells.reserve(static_cast<std::size_t>(total));
  CellIndex cursor;
  cursor.coords = Eigen::VectorXi::Constant(grid.d, k_lo);
  for (;;) {
    cells.push_back(cursor);
    int axis = grid.d - 1;
    while (axis >= 0) {
      if (cursor.coords[axis] < k_hi) {
        ++cursor.coords[axis];
        break;
      }
      cursor.coords[axis] = k_lo;
      --axis;
    }
    if (axis < 0) break;
  }
  return cells;
}

}  // namespace histrate
