#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "histrate/errors.hpp"
#include "histrate/hist.hpp"
#include "histrate/margin.hpp"
#include "histrate/random.hpp"
#include "histrate/risk.hpp"
#include "oracles.hpp"

using namespace histrate;

namespace {

Eigen::VectorXd point1(double x) {
  Eigen::VectorXd p(1);
  p << x;
  return p;
}

CellIndex cell1(int k) {
  CellIndex idx;
  idx.coords.resize(1);
  idx.coords << k;
  return idx;
}

HistogramClassifier constant_classifier(const GridSpec& grid, int label) {
  HistogramClassifier c;
  c.grid = grid;
  for (const auto& idx : cells_meeting_x(grid))
    c.votes[idx] = label > 0 ? 1.0 : -1.0;
  return c;
}

LabeledSample two_point_tie() {
  LabeledSample data;
  data.points.resize(2, 1);
  data.points << 0.5, 0.5;
  data.labels.resize(2);
  data.labels << +1, -1;
  return data;
}

}  // namespace

TEST_CASE("classification loss with the f >= 0 sign convention") {
  CHECK(classification_loss(+1, 0.7) == 0);
  CHECK(classification_loss(-1, 0.7) == 1);
  CHECK(classification_loss(+1, 0.0) == 0);
  CHECK(classification_loss(-1, 0.0) == 1);
  CHECK(classification_loss(+1, -0.3) == 1);
  CHECK_THROWS_AS(classification_loss(0, 0.5), ConfigError);
}

TEST_CASE("empirical risk, optionally restricted to a cell region") {
  const auto data = two_point_tie();
  const auto rule = fit(data, make_grid(1, 1.0));
  CHECK(empirical_risk(rule, data) == 0.5);

  CellSet elsewhere = {cell1(-1)};
  CHECK(empirical_risk(rule, data, elsewhere) == 0.0);

  // Noiseless Bayes-labeled data against the infinite-sample rule.
  const auto fam = make_linear(1, 1.0);
  auto noiseless = sample(fam, 500, 3);
  for (Eigen::Index i = 0; i < noiseless.n(); ++i)
    noiseless.labels[i] = bayes_label(fam, noiseless.points.row(i));
  const auto oracle_rule = infinite_sample_fit(fam, make_grid(1, 0.5));
  CHECK(empirical_risk(oracle_rule, noiseless) == 0.0);

  CHECK_THROWS_AS(empirical_risk(rule, LabeledSample{}), ConfigError);
}

TEST_CASE("exact excess risk") {
  const auto fam = make_linear(1, 1.0);

  // The infinite-sample rule on the anchored grid labels every cell like
  // Bayes, so its excess vanishes.
  const auto perfect = infinite_sample_fit(fam, make_grid(1, 1.0));
  CHECK(excess_risk_exact(perfect, fam).excess == 0.0);

  // Constant -1 misclassifies the whole positive class.
  for (int d : {1, 2}) {
    const auto fam_d = make_linear(d, 1.0);
    const auto wrong = constant_classifier(make_grid(d, 0.5), -1);
    const auto report = excess_risk_exact(wrong, fam_d);
    CHECK(report.excess == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(report.risk ==
          doctest::Approx(0.25 + bayes_risk(fam_d)).epsilon(1e-12));
  }

  // Against a quadrature oracle for a random classifier.
  for (const auto& fam_o :
       {make_linear(1, 2.0), make_power_mass(1, 2.0, 1.0), make_far_noise(1, 1.0)}) {
    const GridSpec grid = make_grid(1, 0.25);
    const auto rule = random_cellwise_classifier(grid, 77);
    const double expected = oracles::simpson(
        [&](double t) {
          const int pred = rule.predict(point1(t));
          const int bayes = bayes_label(fam_o, point1(t));
          if (pred == bayes) return 0.0;
          return noise_magnitude(fam_o, point1(t)) *
                 oracles::axis1_density(fam_o, t);
        },
        -1.0, 1.0, 40000);
    CHECK(excess_risk_exact(rule, fam_o).excess ==
          doctest::Approx(expected).epsilon(1e-5));
  }
}

TEST_CASE("Monte Carlo excess risk agrees with the exact oracle") {
  const auto fam = make_linear(1, 1.0);
  const auto wrong = constant_classifier(make_grid(1, 1.0), -1);
  const auto mc = excess_risk_mc(wrong, fam, 1000000, 5);
  REQUIRE(mc.std_error.has_value());
  CHECK(std::abs(mc.excess - 0.25) <= 3.0 * *mc.std_error);
  CHECK(mc.method == RiskMethod::monte_carlo);

  // The Bayes-matching rule has pointwise zero loss difference.
  const auto perfect = infinite_sample_fit(fam, make_grid(1, 0.5));
  const auto zero = excess_risk_mc(perfect, fam, 10000, 6);
  CHECK(zero.excess == 0.0);
  CHECK(*zero.std_error == 0.0);

  CHECK_THROWS_AS(excess_risk_mc(wrong, fam, 99, 1), ConfigError);

  std::size_t exceedances = 0;
  for (std::uint64_t trial = 0; trial < 5; ++trial) {
    const GridSpec grid = make_grid(1, 0.25);
    const auto rule = random_cellwise_classifier(grid, derive_seed(50, trial));
    const auto exact = excess_risk_exact(rule, fam);
    const auto estimate = excess_risk_mc(rule, fam, 200000, derive_seed(51, trial));
    exceedances +=
        std::abs(estimate.excess - exact.excess) > 3.0 * *estimate.std_error;
  }
  CHECK(exceedances <= 1);
}

TEST_CASE("risk splitting over near and far regions") {
  const auto fam = make_linear(1, 1.0);
  const GridSpec grid = make_grid(1, 0.25);
  const auto split = near_far_partition(fam, grid, 0.25);
  for (std::uint64_t trial = 0; trial < 10; ++trial) {
    const auto rule = random_cellwise_classifier(grid, derive_seed(60, trial));
    const auto check = risk_split_check(rule, fam, split);
    CHECK(check.holds);
    CHECK(check.lhs <= check.rhs_near + check.rhs_far + 1e-12);
  }

  // Disjoint cover: the sum is exactly additive.
  NearFarSplit disjoint;
  disjoint.r = 0.25;
  for (const auto& idx : cells_meeting_x(grid)) {
    if (idx.coords[0] >= 0)
      disjoint.near.insert(idx);
    else
      disjoint.far.insert(idx);
  }
  const auto rule = random_cellwise_classifier(grid, 61);
  const auto check = risk_split_check(rule, fam, disjoint);
  CHECK(check.lhs ==
        doctest::Approx(check.rhs_near + check.rhs_far).epsilon(1e-14));

  // Overlap double-counts mislabeled mass sitting inside it.
  NearFarSplit overlapping = disjoint;
  for (const auto& idx : cells_meeting_x(grid)) {
    overlapping.near.insert(idx);
    overlapping.far.insert(idx);
  }
  const auto wrong = constant_classifier(grid, -1);
  const auto strict = risk_split_check(wrong, fam, overlapping);
  CHECK(strict.holds);
  CHECK(strict.lhs < strict.rhs_near + strict.rhs_far);

  NearFarSplit gap;
  gap.r = 0.25;
  gap.near = disjoint.near;  // misses the negative cells
  CHECK_THROWS_AS(risk_split_check(rule, fam, gap), ConfigError);
}

TEST_CASE("variance bound: worked example and random classifiers") {
  const auto fam = make_linear(1, 1.0);
  const GridSpec grid = make_grid(1, 0.25);
  const double r = 0.25;
  const auto split = near_far_partition(fam, grid, r);

  // f == -1 misclassifies the positive far cells [0.25, 1] plus the face
  // cell {1}: second moment P_X([0.25, 1]) = 0.375, first moment
  // integral_{0.25}^{1} t/2 dt = 0.234375, ratio 1.6 <= c_LC / r = 4.
  const auto wrong = constant_classifier(grid, -1);
  double second = 0.0;
  for (const auto& idx : split.far) {
    const CellBox box = cell_bounds(idx, grid);
    const double lo = std::max(box.lower[0], -1.0);
    const double hi = std::min(box.upper[0], 1.0);
    if (lo + hi >= 0.0 && wrong.label_of(idx) != +1)
      second += box_px_mass(fam, box);
  }
  CHECK(second == doctest::Approx(0.375).epsilon(1e-14));
  const double first = excess_risk_exact(wrong, fam, split.far).excess;
  CHECK(first == doctest::Approx(0.234375).epsilon(1e-14));
  CHECK(second / first == doctest::Approx(1.6).epsilon(1e-12));
  CHECK(second / first <= 4.0);

  const auto bulk = variance_bound_check(fam, grid, r, 100, 9);
  CHECK(bulk.holds);
  CHECK_FALSE(bulk.degenerate);
  CHECK(bulk.worst_ratio <= 4.0 * (1.0 + 1e-9));
  CHECK(bulk.worst_ratio > 0.0);

  // r beyond every cell's reach leaves the far set empty.
  const auto degenerate =
      variance_bound_check(fam, make_grid(1, 1.0), 1.1, 10, 9);
  CHECK(degenerate.degenerate);
  CHECK(degenerate.holds);
}

TEST_CASE("random cellwise classifiers are deterministic in the seed") {
  const GridSpec grid = make_grid(2, 0.5);
  const auto a = random_cellwise_classifier(grid, 123);
  const auto b = random_cellwise_classifier(grid, 123);
  CHECK(a.votes == b.votes);
  CHECK(random_cellwise_classifier(grid, 124).votes != a.votes);
}
