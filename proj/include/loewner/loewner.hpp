#pragma once

// Discretized chordal Loewner flow.
//
// The driver is replaced by a step function; over a step of length dt with
// frozen value u the flow is the vertical-slit map
//
//     g(z) = u + sqrt((z - u)^2 + 4 dt),      g^{-1}(w) = u + sqrt((w - u)^2 - 4 dt),
//
// with the square root taken in the closed upper half-plane. Composing the
// steps in time order gives g_T; composing inverse steps in reverse order
// gives f_T = g_T^{-1}.

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "loewner/driving.hpp"

namespace loewner {

using Complex = std::complex<double>;

enum class RefinementPolicy { uniform, dyadic_adaptive };
std::string to_string(RefinementPolicy p);
RefinementPolicy refinement_policy_from_string(const std::string& s);

struct SolverConfig {
  double base_step = 1e-4;
  RefinementPolicy policy = RefinementPolicy::dyadic_adaptive;
  /// Cap on |U(t_{k+1}) - U(t_k)| / sqrt(dt_k) per adaptive step.
  double kappa = 0.05;
  /// 0 selects the exact tip u_k + 2i sqrt(dt_k) of the last slit.
  double tip_offset = 0.0;
  double far_field_radius = 100.0;
  /// Adaptive bisection stops below this step length.
  double min_step = 1e-12;
  std::size_t max_steps = std::size_t{1} << 30;
  /// trace() emits at most about this many step boundaries (plus requested times).
  std::size_t max_trace_points = 2000;

  void validate() const;
  /// Halved steps: base_step/2, kappa/sqrt(2), min_step/2.
  SolverConfig refined() const;
};

struct Step {
  double u;   ///< frozen driver value (midpoint sample)
  double dt;  ///< step length
};

using StepSpan = std::span<const Step>;

/// Ordered elementary slit maps covering [t_begin, t_begin + T].
class MapSequence {
 public:
  MapSequence(std::vector<Step> steps, std::vector<double> times, double u_begin = 0.0,
              double u_end = 0.0);

  StepSpan steps() const { return steps_; }
  std::size_t size() const { return steps_.size(); }
  const std::vector<double>& times() const { return times_; }
  double t_begin() const { return times_.front(); }
  double total_time() const { return times_.back() - times_.front(); }
  /// Exact driver values at the two ends of the covered interval.
  double u_begin() const { return u_begin_; }
  double u_end() const { return u_end_; }

  /// Steps covering [t_begin, times[k]].
  StepSpan prefix(std::size_t k) const { return StepSpan(steps_).first(k); }
  /// Steps covering [times[k], end].
  StepSpan suffix(std::size_t k) const { return StepSpan(steps_).subspan(k); }
  /// Index k with times[k] == t (to 1e-12 relative); throws DomainError otherwise.
  std::size_t boundary_index(double t) const;

 private:
  std::vector<Step> steps_;
  std::vector<double> times_;
  double u_begin_ = 0.0;
  double u_end_ = 0.0;
};

/// Piecewise-constant discretization of f over [t_begin, t_begin + T].
/// Driver breakpoints and `extra_breaks` become step boundaries.
MapSequence discretize(const DrivingFunction& f, double T, const SolverConfig& cfg,
                       const std::vector<double>& extra_breaks = {});

/// Square root on the closed upper half-plane. A radicand on the positive
/// real axis takes the real root with the sign of `side`.
Complex upper_sqrt(Complex w, double side);

/// g_T(z). For Im z > 0 a result collapsing onto the real axis raises
/// SwallowedError. For real z the point must stay on its side of every u_k.
Complex forward_map(StepSpan steps, Complex z);
inline Complex forward_map(const MapSequence& seq, Complex z) {
  return forward_map(seq.steps(), z);
}

/// f_T(w) = g_T^{-1}(w) for Im w >= 0. A real w inside the band
/// |w - u_k| < 2 sqrt(dt_k) of some reverse step raises OnHullError.
Complex inverse_map(StepSpan steps, Complex w);
inline Complex inverse_map(const MapSequence& seq, Complex w) {
  return inverse_map(seq.steps(), w);
}

/// g_T(z) - z accumulated from stable per-step increments.
Complex forward_displacement(StepSpan steps, Complex z);

struct CurvePoint {
  double t;
  Complex z;
};

struct TracedCurve {
  std::vector<CurvePoint> points;
  std::string driver;
  SolverConfig config;
  std::size_t steps = 0;
  /// Pointwise difference against a refined run; 0 when not measured.
  double tolerance = 0.0;
};

/// gamma(t_k) at step boundary k (k >= 1), gamma(t_0) = u(t_0).
Complex trace_point(const MapSequence& seq, const DrivingFunction& f, std::size_t k,
                    const SolverConfig& cfg);

/// Curve through the tips of the growing hull. Emits the base point, about
/// cfg.max_trace_points evenly strided step boundaries, every time in
/// `sample_times` and the final tip.
TracedCurve trace(const DrivingFunction& f, double T, const SolverConfig& cfg,
                  const std::vector<double>& sample_times = {});
TracedCurve trace(const MapSequence& seq, const DrivingFunction& f, const SolverConfig& cfg,
                  const std::vector<double>& sample_times = {});

/// gamma(t_begin + T) only.
Complex tip(const DrivingFunction& f, double T, const SolverConfig& cfg);

/// |tip(cfg) - tip(cfg.refined())|: the trace tolerance at the active step.
double tip_tolerance(const DrivingFunction& f, double T, const SolverConfig& cfg);

/// max |gamma_cfg(t) - gamma_refined(t)| over `checkpoints` evenly spaced
/// times and the tip: the pointwise trace tolerance of the whole curve.
double curve_tolerance(const DrivingFunction& f, double T, const SolverConfig& cfg,
                       int checkpoints = 16);

struct HcapEstimate {
  double value = 0.0;  ///< Richardson combination 2 b(2R) - b(R)
  double error = 0.0;  ///< |b(2R) - b(R)|
  double at_R = 0.0;
  double at_2R = 0.0;
  double radius = 0.0;
  bool far_field_warning = false;  ///< R and 2R estimates differ by more than 10%
};

/// Half-plane capacity from Re[z (g(z) - z)] averaged over z = R e^{i theta},
/// theta in {pi/4, pi/2, 3pi/4}.
HcapEstimate hcap_estimate(const MapSequence& seq, double R);
HcapEstimate hcap_estimate(const DrivingFunction& f, double T, const SolverConfig& cfg);

}  // namespace loewner
