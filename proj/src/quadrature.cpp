#include "histrate/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "histrate/errors.hpp"

namespace histrate {

namespace {

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1].
constexpr double kKronrodNodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
constexpr double kKronrodWeights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double kGaussWeights[4] = {0.129484966168870, 0.279705391489277,
                                     0.381830050505119, 0.417959183673469};

struct PanelResult {
  double kronrod = 0.0;
  double error = 0.0;
};

PanelResult panel(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(center - half * kKronrodNodes[i]);
    fv[14 - i] = f(center + half * kKronrodNodes[i]);
  }
  fv[7] = f(center);
  double kron = 0.0;
  for (int i = 0; i < 7; ++i) kron += kKronrodWeights[i] * (fv[i] + fv[14 - i]);
  kron += kKronrodWeights[7] * fv[7];
  kron *= half;
  double gauss = kGaussWeights[3] * fv[7];
  for (int i = 0; i < 3; ++i)
    gauss += kGaussWeights[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
  gauss *= half;
  return {kron, std::abs(kron - gauss)};
}

double integrate_panel(const std::function<double(double)>& f, double a,
                       double b, double tol, int depth) {
  const PanelResult r = panel(f, a, b);
  if (r.error <= tol || depth >= 48 || b - a < 1e-15 * (1.0 + std::abs(a)))
    return r.kronrod;
  const double mid = 0.5 * (a + b);
  return integrate_panel(f, a, mid, 0.5 * tol, depth + 1) +
         integrate_panel(f, mid, b, 0.5 * tol, depth + 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  if (!(b >= a)) throw ConfigError("integrate: empty or inverted interval");
  if (a == b) return 0.0;
  return integrate_panel(f, a, b, std::max(tol, 1e-300), 0);
}

double integrate_segments(const std::function<double(double)>& f, double a,
                          double b, std::vector<double> breakpoints,
                          double tol) {
  if (!(b >= a))
    throw ConfigError("integrate_segments: empty or inverted interval");
  breakpoints.erase(
      std::remove_if(breakpoints.begin(), breakpoints.end(),
                     [&](double t) { return !(t > a && t < b); }),
      breakpoints.end());
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.push_back(b);
  double total = 0.0;
  double lo = a;
  const double piece_tol = tol / static_cast<double>(breakpoints.size());
  for (double hi : breakpoints) {
    if (hi > lo) total += integrate(f, lo, hi, piece_tol);
    lo = hi;
  }
  return total;
}

}  // namespace histrate
