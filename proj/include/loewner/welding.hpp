#pragma once

// Backward flow on the real line, the welding homeomorphism, and numerical
// weldedness checks.
//
// Backward time s runs the steps of a MapSequence in reverse. A real seed x0
// hits the singularity when a reverse-step radicand (x - u_k)^2 - 4 dt_k turns
// negative; inside that step the constant-driver solution gives the exact
// hit time.

#include <optional>
#include <string>
#include <vector>

#include "loewner/driving.hpp"
#include "loewner/loewner.hpp"

namespace loewner {

enum class Side { left, right };
std::string to_string(Side s);

struct HittingRecord {
  double x0 = 0.0;
  std::optional<double> hit_time;  ///< backward time of absorption, if any
  std::optional<std::size_t> hit_step;
  Side side = Side::left;          ///< relative to U(T)
  double terminal_gap = 0.0;       ///< |x(T) - U(0)| when the seed survives
};

HittingRecord backward_hit(const MapSequence& seq, double x0);
HittingRecord backward_hit(const DrivingFunction& f, double T, double x0, const SolverConfig& cfg);

struct WeldingPair {
  double x0;  ///< left seed, x0 < U(T)
  double y0;  ///< right seed, y0 > U(T)
  double s;   ///< common backward hit time
};

struct WeldingMap {
  std::vector<WeldingPair> pairs;  ///< sorted by s
  double u_T = 0.0;
  double a = 0.0;  ///< domain [a, b]: the pair absorbed at s = T
  double b = 0.0;
  /// Target hit times whose seeds could not be produced (non-strict mode).
  std::vector<std::pair<double, std::string>> failures;

  /// Monotone piecewise-linear welding homeomorphism on [a, b].
  double operator()(double x) const;
};

/// Geometric ladder of n hit times in [T * s_min_fraction, T].
std::vector<double> hit_time_ladder(double T, int n, double s_min_fraction = 1e-4);

/// Seeds absorbed together at each target hit time. They are obtained by
/// running the real forward flow from both edges of the slit base
/// u_k -/+ 2 sqrt(sigma) at the matching step. A seed that reaches the
/// singularity again raises InconsistencyError, or is recorded in
/// `failures` when strict is false.
WeldingMap welding_map(const MapSequence& seq, const std::vector<double>& hit_times,
                       bool strict = true);
WeldingMap welding_map(const DrivingFunction& f, double T, int n_pairs, const SolverConfig& cfg,
                       bool strict = true);

/// Seed on `side` absorbed at backward time s, by bisection on the monotone
/// map distance -> hit time. Throws InconsistencyError when the bracket
/// cannot be established or monotonicity fails.
double bisect_seed(const MapSequence& seq, double s, Side side,
                   double tol = 1e-10, int max_iter = 200);

enum class WeldVerdict { welded, not_welded, inconclusive };
std::string to_string(WeldVerdict v);

struct GapSample {
  double tau;
  Side side;
  std::vector<std::pair<double, double>> gaps;  ///< (delta, |x(T) - U(T)|)
  double extrapolated = 0.0;                    ///< linear extrapolation to delta = 0
  double floor = 0.0;                           ///< min(gaps, max(extrapolated, 0))
  std::optional<double> hit_delta;              ///< set when the flow hit the singularity
};

struct WeldCheckReport {
  WeldVerdict verdict = WeldVerdict::inconclusive;
  double epsilon_floor = 0.0;  ///< min floor over all tau and sides
  double epsilon_min = 0.0;    ///< threshold used for the verdict
  double trace_tolerance = 0.0;
  double amplitude = 0.0;      ///< delta scale
  std::vector<GapSample> samples;
  std::vector<std::string> audit;
};

/// Forward real flow from U(tau) +/- delta to T. Gap floors above
/// epsilon_min at every tau give "welded"; a hit gives "not-welded".
/// epsilon_min <= 0 selects 10 x tip_tolerance(f, T, cfg).
WeldCheckReport is_welded(const DrivingFunction& f, double T, const std::vector<double>& tau_grid,
                          const std::vector<double>& offsets, const SolverConfig& cfg,
                          double epsilon_min = 0.0);
/// Defaults: tau in {0, 0.5, 0.75, 0.9} T, offsets {1e-2, 1e-3, 1e-4} x amplitude.
WeldCheckReport is_welded(const DrivingFunction& f, double T, const SolverConfig& cfg);

struct LemmaAudit {
  int n;
  double s_n;
  double t_n;
  double upper_max;  ///< max U over [s_n, 1]
  double lower_min;  ///< min U over [t_n, 1]
  double expr_s;     ///< 4(1 - s_n) + U(s_n)^2 - 2 U(s_n) upper_max
  double expr_t;     ///< 4(1 - t_n) + U(t_n)^2 - 2 U(t_n) lower_min
};

struct LemmaReport {
  std::vector<LemmaAudit> rows;
  bool all_positive = false;
};

/// The two inequalities of the sufficient weldedness condition at t = 1,
/// evaluated on the driver translated so that U(1) = 0.
LemmaReport lemma_stran_check(const DrivingFunction& f, const std::vector<double>& s_seq,
                              const std::vector<double>& t_seq, int grid_per_interval = 4096);

struct CorollaryReport {
  bool holds = false;
  std::vector<std::string> audit;
};

/// U(s_n) <= U(1) <= U(t_n) for every n. Together with weldedness of K_t for
/// t < 1 this gives weldedness of K_1.
CorollaryReport corollary_sign_check(const DrivingFunction& f, const std::vector<double>& s_seq,
                                     const std::vector<double>& t_seq);

/// r_n = 1 - 2^-n for n = 1..count.
std::vector<double> dyadic_sequence(int count);

struct QuasisymmetryEstimate {
  double M = 1.0;
  double x = 0.0;
  double t = 0.0;
  bool unbounded = false;
};

/// max over sampled (x, t) of max(rho, 1/rho) with
/// rho = |h(x+t) - h(x)| / |h(x) - h(x-t)|.
QuasisymmetryEstimate quasisymmetry_estimate(const WeldingMap& h);

}  // namespace loewner
