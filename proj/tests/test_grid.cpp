#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "histrate/errors.hpp"
#include "histrate/grid.hpp"
#include "histrate/random.hpp"

using namespace histrate;

namespace {

Eigen::VectorXd point1(double x) {
  Eigen::VectorXd p(1);
  p << x;
  return p;
}

Eigen::VectorXd point2(double x, double y) {
  Eigen::VectorXd p(2);
  p << x, y;
  return p;
}

}  // namespace

TEST_CASE("make_grid validates its inputs") {
  CHECK_NOTHROW(make_grid(1, 1.0));
  CHECK_NOTHROW(make_grid(3, 0.01));
  CHECK_THROWS_AS(make_grid(0, 0.5), ConfigError);
  CHECK_THROWS_AS(make_grid(1, 0.0), ConfigError);
  CHECK_THROWS_AS(make_grid(1, -0.5), ConfigError);
  CHECK_THROWS_AS(make_grid(1, 1.5), ConfigError);
}

TEST_CASE("cell_of maps points to floor indices") {
  CHECK(cell_of(point1(0.0), make_grid(1, 1.0)).coords[0] == 0);

  const CellIndex idx = cell_of(point2(-0.3, 0.7), make_grid(2, 0.5));
  CHECK(idx.coords[0] == -1);
  CHECK(idx.coords[1] == 1);

  // Boundary points belong to the right-hand cell of the half-open grid.
  CHECK(cell_of(point1(1.0), make_grid(1, 0.5)).coords[0] == 2);

  CHECK_THROWS_AS(cell_of(point1(0.0), make_grid(2, 0.5)), ConfigError);
}

TEST_CASE("cell_bounds returns the cube of a cell index") {
  const GridSpec unit = make_grid(1, 1.0);
  CellIndex zero;
  zero.coords = Eigen::VectorXi::Zero(1);
  const CellBox box = cell_bounds(zero, unit);
  CHECK(box.lower[0] == 0.0);
  CHECK(box.upper[0] == 1.0);

  CellIndex idx2;
  idx2.coords.resize(2);
  idx2.coords << -1, 1;
  const CellBox box2 = cell_bounds(idx2, make_grid(2, 0.5));
  CHECK(box2.lower[0] == doctest::Approx(-0.5));
  CHECK(box2.upper[0] == doctest::Approx(0.0));
  CHECK(box2.lower[1] == doctest::Approx(0.5));
  CHECK(box2.upper[1] == doctest::Approx(1.0));

  CellIndex two;
  two.coords.resize(1);
  two.coords << 2;
  const CellBox box3 = cell_bounds(two, make_grid(1, 0.5));
  CHECK(box3.lower[0] == doctest::Approx(1.0));
  CHECK(box3.upper[0] == doctest::Approx(1.5));

  CHECK_THROWS_AS(cell_bounds(two, make_grid(2, 0.5)), ConfigError);
}

TEST_CASE("cells_meeting_x enumerates exactly the cubes that touch X") {
  const auto cells1 = cells_meeting_x(make_grid(1, 1.0));
  REQUIRE(cells1.size() == 3);
  CHECK(cells1[0].coords[0] == -1);
  CHECK(cells1[1].coords[0] == 0);
  CHECK(cells1[2].coords[0] == 1);

  const auto cells_half = cells_meeting_x(make_grid(1, 0.5));
  REQUIRE(cells_half.size() == 5);
  CHECK(cells_half.front().coords[0] == -2);
  CHECK(cells_half.back().coords[0] == 2);

  CHECK(cells_meeting_x(make_grid(2, 1.0)).size() == 9);
}

TEST_CASE("cells_meeting_x honors the enumeration cap") {
  CHECK_THROWS_AS(cells_meeting_x(make_grid(2, 0.001), 1000), ConfigError);
}

TEST_CASE("cell cardinality bound 8^d s^-d") {
  for (int d : {1, 2, 3}) {
    for (double s : {1.0, 0.7, 0.5, 0.3, 0.25, 0.1}) {
      const auto cells = cells_meeting_x(make_grid(d, s));
      const double bound = std::pow(8.0, d) * std::pow(s, -d);
      CHECK(static_cast<double>(cells.size()) <= bound);
    }
  }
}

TEST_CASE("round trip: points land inside their own cell bounds") {
  RandomStream rng(7);
  for (int d : {1, 2, 3}) {
    const double s = d == 1 ? 0.3 : 0.5;
    const GridSpec grid = make_grid(d, s);
    const int reps = 10000 / d;
    for (int k = 0; k < reps; ++k) {
      Eigen::VectorXd x(d);
      for (int i = 0; i < d; ++i) x[i] = rng.symmetric();
      const CellIndex idx = cell_of(x, grid);
      const CellBox box = cell_bounds(idx, grid);
      for (int i = 0; i < d; ++i) {
        CHECK(x[i] >= box.lower[i]);
        CHECK(x[i] < box.upper[i]);
      }
    }
  }
}

TEST_CASE("cells are pairwise disjoint and cover X") {
  const GridSpec grid = make_grid(2, 0.5);
  const auto cells = cells_meeting_x(grid);
  for (std::size_t a = 0; a < cells.size(); ++a) {
    for (std::size_t b = a + 1; b < cells.size(); ++b) {
      const CellBox ba = cell_bounds(cells[a], grid);
      const CellBox bb = cell_bounds(cells[b], grid);
      bool separated = false;
      for (int i = 0; i < grid.d; ++i)
        separated = separated ||
                    ba.upper[i] <= bb.lower[i] || bb.upper[i] <= ba.lower[i];
      CHECK(separated);
    }
  }

  CellSet members(cells.begin(), cells.end());
  RandomStream rng(11);
  for (int k = 0; k < 10000; ++k) {
    Eigen::VectorXd x(2);
    x << rng.symmetric(), rng.symmetric();
    CHECK(members.count(cell_of(x, grid)) == 1);
  }
  // The right-edge boundary points also map into the enumerated set.
  CHECK(members.count(cell_of(point2(1.0, 1.0), grid)) == 1);
}
