#pragma once

// Diagnostics on traced curves: Ahlfors bounded-turning ratio, cone angle at
// the base, ray and real-axis angle fits, and the tip of self-similar slits
// as the attracting fixed point of the block map.

#include <cstddef>
#include <vector>

#include "loewner/driving.hpp"
#include "loewner/loewner.hpp"

namespace loewner {

enum class DiameterMode { endpoint_approx, exact_pairwise };
std::string to_string(DiameterMode m);

struct TurningReport {
  double ratio = 1.0;
  std::size_t i = 0;  ///< maximizing pair, indices into the curve
  std::size_t j = 0;
  double min_chord = 0.0;  ///< chords below this were excluded
  std::size_t points = 0;
  std::size_t pairs_used = 0;
  DiameterMode mode = DiameterMode::endpoint_approx;
};

/// max over pairs i < j of diam(gamma_i..gamma_j) / |gamma_i - gamma_j|.
/// endpoint_approx uses the larger distance from either endpoint (within a
/// factor 2 of the true diameter); exact_pairwise is limited to 5000 points.
/// min_chord < 0 selects 10 x curve.tolerance.
TurningReport bounded_turning(const TracedCurve& curve,
                              DiameterMode mode = DiameterMode::endpoint_approx,
                              double min_chord = -1.0);

/// Largest theta with arg(z - gamma_0) in [theta, pi - theta] for every point.
double cone_angle(const TracedCurve& curve);

struct AngleFit {
  double angle = 0.0;          ///< in (0, pi)
  double rms_deviation = 0.0;  ///< of the point arguments about the fitted ray
  std::size_t points = 0;
};

/// Least-squares ray through the base point gamma_0.
AngleFit segment_angle_fit(const TracedCurve& curve);

struct RealAxisApproach {
  double angle = 0.0;    ///< arg(gamma - x_hit), in (0, pi)
  double x_hit = 0.0;    ///< where the fitted line meets R
  double residual = 0.0; ///< rms distance of the points to the line
  std::size_t points = 0;
};

/// Line fit through the points with t in [t_from, t_to], intersected with R.
RealAxisApproach approach_angle(const TracedCurve& curve, double t_from, double t_to);

/// Angle of the ray generated by U = c sqrt(t).
double phi_of_c(double c);
/// Coefficient c generating the ray at angle phi in (0, pi).
double c_of_phi(double phi);

/// I(z) = f_{[0, 1 - d^2]}(a + d (z - a)) for a driver with
/// U(1 - d^2 + d^2 t) - a = d (U(t) - a), a = U(1). Maps gamma(t) to
/// gamma(1 - d^2 + d^2 t).
class SelfSimilarMap {
 public:
  SelfSimilarMap(StepSpan prefix, double d, double a);
  /// Discretizes f on [0, 1 - d^2] with d taken from f.self_similarity().
  SelfSimilarMap(const DrivingFunction& f, const SolverConfig& cfg);

  Complex operator()(Complex z) const;
  double ratio() const { return d_; }
  double center() const { return a_; }
  /// 1 - d^2: the block length.
  double block() const { return 1.0 - d_ * d_; }

 private:
  std::vector<Step> steps_;
  double d_;
  double a_;
};

struct TipEstimate {
  Complex tip;
  double residual = 0.0;  ///< |I(S) - S|
  double lambda = 0.0;    ///< contraction estimate from displacement ratios
  int iterations = 0;
  std::vector<double> residuals;
};

/// Fixed point of the block map, iterated from the traced gamma(1 - d^2).
/// Throws TipError when an iterate leaves the upper half-plane or the
/// displacements stop contracting.
TipEstimate tip_fixed_point(const DrivingFunction& f, const SolverConfig& cfg, double tol = 1e-8,
                            int max_iter = 200);
TipEstimate tip_fixed_point(const SelfSimilarMap& map, Complex z0, double tol = 1e-8,
                            int max_iter = 200);

struct LogLinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Least squares of log(y) against x; y must be positive.
LogLinearFit log_linear_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace loewner
