#include "histrate/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "histrate/errors.hpp"
#include "histrate/quadrature.hpp"
#include "histrate/random.hpp"

namespace histrate {

namespace {

void check_family_basics(int d, double gamma) {
  if (d < 1) throw ConfigError("family dimension must be >= 1");
  if (!(gamma > 0.0)) throw ConfigError("family gamma must be > 0");
}

void check_point(const SyntheticFamily& family, const Eigen::VectorXd& x) {
  if (x.size() != family.d)
    throw ConfigError("point has " + std::to_string(x.size()) +
                      " coordinates, family expects " +
                      std::to_string(family.d));
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (std::abs(x[i]) > 1.0)
      throw ConfigError("point lies outside [-1,1]^d");
}

double smoothstep(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * (3.0 - 2.0 * t);
}

// Scaled distance to the bump center in the max norm; >= 1 outside the ball.
double bump_u(const BumpSpec& bump, const Eigen::VectorXd& x) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    m = std::max(m, std::abs(x[i] - bump.center[i]));
  return m / bump.radius;
}

// Posterior damping factor in [1 - depth, 1]; identically 1 off the ball.
double bump_factor(const BumpSpec& bump, const Eigen::VectorXd& x) {
  const double u = bump_u(bump, x);
  if (u >= 1.0) return 1.0;
  return 1.0 - bump.depth * smoothstep(1.0 - u);
}

// integral of |t|^p over [lo, hi]
double abs_pow_integral(double lo, double hi, double p) {
  auto g = [p](double t) { return std::copysign(std::pow(std::abs(t), p + 1.0), t); };
  return (g(hi) - g(lo)) / (p + 1.0);
}

// integral of sign(t)*|t|^p over [lo, hi]
double signed_pow_integral(double lo, double hi, double p) {
  return (std::pow(std::abs(hi), p + 1.0) - std::pow(std::abs(lo), p + 1.0)) /
         (p + 1.0);
}

struct ClippedBox {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  bool empty = false;
};

ClippedBox clip_to_domain(const SyntheticFamily& family, const CellBox& box) {
  if (box.lower.size() != family.d || box.upper.size() != family.d)
    throw ConfigError("box dimension does not match the family");
  ClippedBox out;
  out.lower.resize(family.d);
  out.upper.resize(family.d);
  for (int i = 0; i < family.d; ++i) {
    out.lower[i] = std::max(box.lower[i], -1.0);
    out.upper[i] = std::min(box.upper[i], 1.0);
    if (out.lower[i] > out.upper[i]) out.empty = true;
  }
  return out;
}

// Lebesgue integral of phi(x_1) * smoothstep(1 - |x - c|_inf / rho) over
// box /\ ball, reduced by the layer-cake identity to a single integral over
// the scaled radius w:  G(w) collects the closed-form box section integrals.
double bump_overlap_integral(const BumpSpec& bump, const ClippedBox& box,
                             double power, bool signed_phi, double tol) {
  const auto& c = bump.center;
  const double rho = bump.radius;
  const int d = static_cast<int>(c.size());
  for (int i = 0; i < d; ++i) {
    if (box.lower[i] > c[i] + rho || box.upper[i] < c[i] - rho) return 0.0;
  }
  auto section = [&](double w) {
    const double reach = w * rho;
    double lo1 = std::max(box.lower[0], c[0] - reach);
    double hi1 = std::min(box.upper[0], c[0] + reach);
    if (lo1 >= hi1) return 0.0;
    double value = signed_phi ? signed_pow_integral(lo1, hi1, power)
                              : abs_pow_integral(lo1, hi1, power);
    for (int i = 1; i < d; ++i) {
      const double len = std::min(box.upper[i], c[i] + reach) -
                         std::max(box.lower[i], c[i] - reach);
      if (len <= 0.0) return 0.0;
      value *= len;
    }
    return value;
  };
  auto integrand = [&](double w) {
    return 6.0 * w * (1.0 - w) * section(w);  // S'(1 - w) * G(w)
  };
  std::vector<double> breaks;
  for (int i = 0; i < d; ++i) {
    breaks.push_back(std::abs(c[i] - box.lower[i]) / rho);
    breaks.push_back(std::abs(box.upper[i] - c[i]) / rho);
  }
  breaks.push_back(std::abs(c[0]) / rho);  // |t|^p kink at t = 0
  return integrate_segments(integrand, 0.0, 1.0, std::move(breaks), tol);
}

// Product of the uniform-marginal lengths over axes >= 2 (density 1/2 each).
double tail_axes_mass(const ClippedBox& box) {
  double m = 1.0;
  for (Eigen::Index i = 1; i < box.lower.size(); ++i)
    m *= 0.5 * (box.upper[i] - box.lower[i]);
  return m;
}

}  // namespace

SyntheticFamily make_linear(int d, double gamma) {
  check_family_basics(d, gamma);
  return SyntheticFamily{FamilyKind::linear, d, gamma, 1.0, std::nullopt};
}

SyntheticFamily make_power_mass(int d, double alpha, double gamma) {
  check_family_basics(d, gamma);
  if (!(alpha > 0.0)) throw ConfigError("power_mass alpha must be > 0");
  return SyntheticFamily{FamilyKind::power_mass, d, gamma, alpha, std::nullopt};
}

SyntheticFamily make_far_noise(int d, double gamma) {
  check_family_basics(d, gamma);
  BumpSpec bump;
  bump.center = Eigen::VectorXd::Zero(d);
  bump.center[0] = 0.7;
  bump.radius = 0.15;
  bump.depth = 1.0 - 1e-9 / std::pow(0.7, gamma);
  return make_far_noise(d, gamma, std::move(bump));
}

SyntheticFamily make_far_noise(int d, double gamma, BumpSpec bump) {
  check_family_basics(d, gamma);
  if (bump.center.size() != d)
    throw ConfigError("bump center dimension does not match the family");
  if (!(bump.radius > 0.0)) throw ConfigError("bump radius must be > 0");
  if (!(bump.depth > 0.0) || bump.depth > 1.0)
    throw ConfigError("bump depth must lie in (0, 1]");
  if (!(bump.center[0] - bump.radius > 2.0 * bump.radius))
    throw ConfigError("bump ball must be contained in {x_1 > 2*radius}");
  for (int i = 0; i < d; ++i)
    if (std::abs(bump.center[i]) + bump.radius > 1.0)
      throw ConfigError("bump ball must be contained in [-1,1]^d");
  return SyntheticFamily{FamilyKind::far_noise, d, gamma, 1.0,
                         std::move(bump)};
}

double noise_magnitude(const SyntheticFamily& family,
                       const Eigen::VectorXd& x) {
  check_point(family, x);
  const double base = std::pow(std::abs(x[0]), family.gamma);
  if (family.kind == FamilyKind::far_noise)
    return base * bump_factor(*family.bump, x);
  return base;
}

double eta(const SyntheticFamily& family, const Eigen::VectorXd& x) {
  const double magnitude = noise_magnitude(family, x);
  return x[0] >= 0.0 ? 0.5 * (1.0 + magnitude) : 0.5 * (1.0 - magnitude);
}

double delta_eta(const SyntheticFamily& family, const Eigen::VectorXd& x) {
  check_point(family, x);
  if (family.kind == FamilyKind::far_noise && noise_magnitude(family, x) == 0.0)
    return 0.0;
  return std::abs(x[0]);
}

int bayes_label(const SyntheticFamily& family, const Eigen::VectorXd& x) {
  // 2*eta - 1 = sign(x_1) * noise_magnitude, so the sign rule reduces to
  // the first coordinate with the f >= 0 tie convention.
  const double magnitude = noise_magnitude(family, x);
  return (x[0] >= 0.0 || magnitude == 0.0) ? +1 : -1;
}

double bayes_risk(const SyntheticFamily& family, double quad_tol) {
  switch (family.kind) {
    case FamilyKind::linear:
      return 0.5 * family.gamma / (family.gamma + 1.0);
    case FamilyKind::power_mass:
      return 0.5 * family.gamma / (family.alpha + family.gamma);
    case FamilyKind::far_noise: {
      CellBox domain;
      domain.lower = Eigen::VectorXd::Constant(family.d, -1.0);
      domain.upper = Eigen::VectorXd::Constant(family.d, 1.0);
      const ClippedBox box = clip_to_domain(family, domain);
      const double corr = bump_overlap_integral(*family.bump, box,
                                                family.gamma, false, quad_tol);
      const double base = 0.5 * family.gamma / (family.gamma + 1.0);
      return base + 0.5 * std::ldexp(family.bump->depth * corr, -family.d);
    }
  }
  throw ComputeError("bayes_risk: unknown family kind");
}

MarginProfile margin_profile(const SyntheticFamily& family) {
  MarginProfile p;
  p.gamma = family.gamma;
  p.alpha = family.kind == FamilyKind::power_mass ? family.alpha : 1.0;
  p.beta = p.alpha + p.gamma;
  p.q = p.alpha / p.gamma;
  p.c_me = 1.0;
  p.c_mne = std::pow(p.alpha / (p.alpha + p.gamma), 1.0 / (p.alpha + p.gamma));
  p.c_lc = 1.0;
  p.c_uc = 1.0;
  p.c_ne = 1.0;
  p.hausdorff_boundary = std::ldexp(1.0, family.d - 1);
  p.delta_star = 1.0;
  p.lower_control_holds = family.kind != FamilyKind::far_noise;
  return p;
}

LabeledSample sample(const SyntheticFamily& family, std::size_t n,
                     std::uint64_t seed) {
  if (n == 0) throw ConfigError("sample: n must be >= 1 (empty sample)");
  RandomStream rng(seed);
  LabeledSample out;
  out.points.resize(static_cast<Eigen::Index>(n), family.d);
  out.labels.resize(static_cast<Eigen::Index>(n));
  const double inv_alpha = 1.0 / family.alpha;
  Eigen::VectorXd x(family.d);
  for (std::size_t i = 0; i < n; ++i) {
    for (int j = 0; j < family.d; ++j) {
      const double u = rng.symmetric();
      if (family.kind == FamilyKind::power_mass && j == 0)
        x[j] = std::copysign(std::pow(std::abs(u), inv_alpha), u);
      else
        x[j] = u;
    }
    const double e = eta(family, x);
    out.points.row(static_cast<Eigen::Index>(i)) = x;
    out.labels[static_cast<Eigen::Index>(i)] = rng.unit() < e ? +1 : -1;
  }
  return out;
}

double box_px_mass(const SyntheticFamily& family, const CellBox& box) {
  const ClippedBox b = clip_to_domain(family, box);
  if (b.empty) return 0.0;
  double axis1;
  if (family.kind == FamilyKind::power_mass) {
    auto cdf2 = [&](double t) {
      return std::copysign(std::pow(std::abs(t), family.alpha), t);
    };
    axis1 = 0.5 * (cdf2(b.upper[0]) - cdf2(b.lower[0]));
  } else {
    axis1 = 0.5 * (b.upper[0] - b.lower[0]);
  }
  return axis1 * tail_axes_mass(b);
}

double box_signed_noise_mass(const SyntheticFamily& family, const CellBox& box,
                             double quad_tol) {
  const ClippedBox b = clip_to_domain(family, box);
  if (b.empty) return 0.0;
  const double g = family.gamma;
  double axis1;
  if (family.kind == FamilyKind::power_mass) {
    const double a = family.alpha;
    axis1 = 0.5 * a * signed_pow_integral(b.lower[0], b.upper[0], a + g - 1.0);
  } else {
    axis1 = 0.5 * signed_pow_integral(b.lower[0], b.upper[0], g);
  }
  double value = axis1 * tail_axes_mass(b);
  if (family.kind == FamilyKind::far_noise) {
    const double corr =
        bump_overlap_integral(*family.bump, b, g, true, quad_tol);
    value -= std::ldexp(family.bump->depth * corr, -family.d);
  }
  return value;
}

double box_abs_noise_mass(const SyntheticFamily& family, const CellBox& box,
                          double quad_tol) {
  const ClippedBox b = clip_to_domain(family, box);
  if (b.empty) return 0.0;
  const double g = family.gamma;
  double axis1;
  if (family.kind == FamilyKind::power_mass) {
    const double a = family.alpha;
    axis1 = 0.5 * a * abs_pow_integral(b.lower[0], b.upper[0], a + g - 1.0);
  } else {
    axis1 = 0.5 * abs_pow_integral(b.lower[0], b.upper[0], g);
  }
  double value = axis1 * tail_axes_mass(b);
  if (family.kind == FamilyKind::far_noise) {
    const double corr =
        bump_overlap_integral(*family.bump, b, g, false, quad_tol);
    value -= std::ldexp(family.bump->depth * corr, -family.d);
  }
  return value;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(current);
      current.clear();
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      current.push_back(ch);
    }
  }
  fields.push_back(current);
  return fields;
}

double parse_real(const std::string& field, std::size_t row) {
  const char* begin = field.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw ConfigError("dataset parse error at row " + std::to_string(row) +
                      ": bad number '" + field + "'");
  return value;
}

struct ParsedRows {
  std::vector<std::vector<double>> coords;
  std::vector<int> labels;
  bool labeled = false;
};

ParsedRows parse_rows(const std::string& path, int expected_d,
                      bool allow_unlabeled) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dataset file: " + path);
  ParsedRows out;
  std::string line;
  std::size_t row = 0;
  int width = -1;  // fields per row, fixed after the first data row
  while (std::getline(in, line)) {
    ++row;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto fields = split_fields(line);
    if (width < 0) {
      width = static_cast<int>(fields.size());
      if (expected_d > 0) {
        if (allow_unlabeled && width == expected_d)
          out.labeled = false;
        else if (width == expected_d + 1)
          out.labeled = true;
        else
          throw ConfigError("dataset row " + std::to_string(row) + " has " +
                            std::to_string(width) + " fields, expected " +
                            std::to_string(expected_d + 1));
      } else {
        if (width < 2)
          throw ConfigError("dataset row " + std::to_string(row) +
                            " needs at least one coordinate and a label");
        out.labeled = true;
      }
    } else if (static_cast<int>(fields.size()) != width) {
      throw ConfigError("dataset row " + std::to_string(row) +
                        " has inconsistent field count");
    }
    const int dim = out.labeled ? width - 1 : width;
    std::vector<double> point(dim);
    for (int i = 0; i < dim; ++i) {
      point[i] = parse_real(fields[static_cast<std::size_t>(i)], row);
      if (std::abs(point[i]) > 1.0)
        throw ConfigError("dataset row " + std::to_string(row) +
                          " lies outside [-1,1]^d");
    }
    if (out.labeled) {
      const double raw = parse_real(fields.back(), row);
      if (raw != 1.0 && raw != -1.0)
        throw ConfigError("dataset row " + std::to_string(row) +
                          " has label outside {-1,+1}");
      out.labels.push_back(raw > 0 ? +1 : -1);
    }
    out.coords.push_back(std::move(point));
  }
  if (out.coords.empty())
    throw ConfigError("dataset file contains no observations: " + path);
  return out;
}

Eigen::MatrixXd rows_to_matrix(const std::vector<std::vector<double>>& rows) {
  Eigen::MatrixXd points(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j];
  return points;
}

}  // namespace

LabeledSample import_dataset(const std::string& path, int expected_d) {
  const ParsedRows rows = parse_rows(path, expected_d, false);
  LabeledSample out;
  out.points = rows_to_matrix(rows.coords);
  out.labels = Eigen::Map<const Eigen::VectorXi>(
      rows.labels.data(), static_cast<Eigen::Index>(rows.labels.size()));
  return out;
}

std::pair<Eigen::MatrixXd, std::optional<Eigen::VectorXi>> import_points(
    const std::string& path, int expected_d) {
  if (expected_d < 1) throw ConfigError("import_points requires expected_d >= 1");
  const ParsedRows rows = parse_rows(path, expected_d, true);
  std::optional<Eigen::VectorXi> labels;
  if (rows.labeled)
    labels = Eigen::Map<const Eigen::VectorXi>(
        rows.labels.data(), static_cast<Eigen::Index>(rows.labels.size()));
  return {rows_to_matrix(rows.coords), labels};
}

}  // namespace histrate
