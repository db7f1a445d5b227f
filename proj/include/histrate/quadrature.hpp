#pragma once

#include <functional>
#include <vector>

namespace histrate {

/// Adaptive Gauss-Kronrod (7,15) integration of f over [a, b] to absolute
/// tolerance tol.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol);

/// Same, but the interval is pre-split at the given breakpoints so each
/// piece is smooth.  Breakpoints outside (a, b) are ignored.
double integrate_segments(const std::function<double(double)>& f, double a,
                          double b, std::vector<double> breakpoints,
                          double tol);

}  // namespace histrate
