#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "histrate/grid.hpp"

namespace histrate {

enum class FamilyKind { linear, power_mass, far_noise };

/// Smooth dip of the posterior toward 1/2 on a max-norm ball, used by the
/// far_noise family to place critical noise away from the decision boundary.
struct BumpSpec {
  Eigen::VectorXd center;
  double radius = 0.15;
  double depth = 1.0;
};

/// Exponents and constants of the margin conditions a family satisfies.
struct MarginProfile {
  double alpha = 1.0;   // margin exponent
  double beta = 2.0;    // margin-noise exponent
  double gamma = 1.0;   // noise-control exponent
  double q = 1.0;       // noise exponent
  double c_me = 1.0;
  double c_mne = 1.0;
  double c_lc = 1.0;
  double c_uc = 1.0;
  double c_ne = 1.0;
  double hausdorff_boundary = 1.0;  // H^{d-1} of the decision boundary
  double delta_star = 1.0;          // validity radius of the tube bound
  bool lower_control_holds = true;
};

/// Distribution on [-1,1]^d x {-1,+1} with analytic posterior eta, analytic
/// distance to the decision boundary, exact Bayes risk and a known margin
/// profile.  Immutable after construction; build via the make_* factories.
struct SyntheticFamily {
  FamilyKind kind = FamilyKind::linear;
  int d = 1;
  double gamma = 1.0;
  double alpha = 1.0;  // mass exponent, power_mass only
  std::optional<BumpSpec> bump;
};

/// Uniform marginal, |2*eta - 1| = |x_1|^gamma.
SyntheticFamily make_linear(int d, double gamma);

/// First coordinate with density (alpha/2)*|x_1|^{alpha-1}, same posterior.
SyntheticFamily make_power_mass(int d, double alpha, double gamma);

/// Linear family with eta pulled toward 1/2 inside the bump ball; violates
/// lower noise control while leaving the Bayes classifier unchanged.
SyntheticFamily make_far_noise(int d, double gamma);
SyntheticFamily make_far_noise(int d, double gamma, BumpSpec bump);

struct LabeledSample {
  Eigen::MatrixXd points;  // one row per observation
  Eigen::VectorXi labels;  // entries in {-1, +1}

  Eigen::Index n() const { return points.rows(); }
  int dim() const { return static_cast<int>(points.cols()); }
};

/// Posterior probability of label +1 at x; domain is [-1, 1]^d.
double eta(const SyntheticFamily& family, const Eigen::VectorXd& x);

/// |2*eta(x) - 1| in closed form, free of the cancellation that evaluating
/// eta first would introduce near the critical level.
double noise_magnitude(const SyntheticFamily& family, const Eigen::VectorXd& x);

/// Max-norm distance from x to the region of the opposite class; zero on the
/// decision boundary.
double delta_eta(const SyntheticFamily& family, const Eigen::VectorXd& x);

/// sign(2*eta - 1) with sign(0) := +1.
int bayes_label(const SyntheticFamily& family, const Eigen::VectorXd& x);

/// Integral of min(eta, 1 - eta) over the marginal; closed form for linear
/// and power_mass, quadrature for far_noise.
double bayes_risk(const SyntheticFamily& family, double quad_tol = 1e-10);

MarginProfile margin_profile(const SyntheticFamily& family);

/// Draws n i.i.d. observations.  Deterministic given the seed; distinct seeds
/// give independent streams.
LabeledSample sample(const SyntheticFamily& family, std::size_t n,
                     std::uint64_t seed);

/// Reads a labeled dataset: one row per observation, d comma-separated
/// coordinates followed by a label in {-1,+1}; '#' lines are skipped.
/// expected_d == 0 infers the dimension from the first data row.
LabeledSample import_dataset(const std::string& path, int expected_d = 0);

/// Reader for prediction inputs: rows may carry expected_d coordinates
/// (unlabeled) or expected_d + 1 fields (labeled).
std::pair<Eigen::MatrixXd, std::optional<Eigen::VectorXi>> import_points(
    const std::string& path, int expected_d);

// Closed-form integrals over an axis-aligned box (clipped to [-1,1]^d
// internally).  These carry the per-family marginal density.
//   box_px_mass:          P_X(box)
//   box_signed_noise_mass: integral of (2*eta - 1) dP_X
//   box_abs_noise_mass:    integral of |2*eta - 1| dP_X
double box_px_mass(const SyntheticFamily& family, const CellBox& box);
double box_signed_noise_mass(const SyntheticFamily& family, const CellBox& box,
                             double quad_tol = 1e-10);
double box_abs_noise_mass(const SyntheticFamily& family, const CellBox& box,
                          double quad_tol = 1e-10);

}  // namespace histrate
