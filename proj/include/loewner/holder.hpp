#pragma once

// Hölder-1/2 analysis of driving functions: global Lip(1/2) norm on a grid,
// one-sided quotients on geometric h-ladders, and the regular/irregular
// classification against the constant 4.
//
// Nothing here claims a true limsup or liminf. Every estimate is a finite
// maximum or minimum over an explicit set of pairs, which is returned
// alongside the value so it can be recomputed.

#include <string>
#include <utility>
#include <vector>

#include "loewner/driving.hpp"

namespace loewner {

/// Strictly decreasing list of positive step lengths h.
struct Ladder {
  std::vector<double> rungs;

  /// h_start, h_start*ratio, ... down to h_min (inclusive, up to roundoff).
  static Ladder geometric(double h_start, double ratio, double h_min);
  /// Union of two ladders, duplicates removed.
  static Ladder merge(const Ladder& a, const Ladder& b);
};

/// Default one-sided ladder: ratio 1/2 from 3/4 of the available span, 20 rungs.
Ladder default_ladder(double span);
/// Default classification ladder: the one-sided ladder merged with a
/// ratio 2^(-1/8) ladder from the full span, down to the same h_min.
Ladder classification_ladder(double span, double h_min);

struct OneSidedEstimate {
  double t0 = 0.0;
  double sup = 0.0;     ///< max quotient over the ladder
  double finest = 0.0;  ///< quotient at the smallest rung (limsup proxy)
  std::vector<std::pair<double, double>> rungs;  ///< (h, quotient)
};

/// max over all pairs s != t of a uniform grid on [t_begin, T] of
/// |U(t) - U(s)| / sqrt|t - s|.
double holder_global(const DrivingFunction& f, int grid_size);

/// sup over the ladder of |U(t0) - U(t0 - h)| / sqrt(h).
OneSidedEstimate holder_left_at(const DrivingFunction& f, double t0, const Ladder& ladder);
OneSidedEstimate holder_left_at(const DrivingFunction& f, double t0, double h_min);
OneSidedEstimate holder_left_at(const DrivingFunction& f, double t0);

/// sup over the ladder of |U(t0 + h) - U(t0)| / sqrt(h).
OneSidedEstimate holder_right_at(const DrivingFunction& f, double t0, const Ladder& ladder);
OneSidedEstimate holder_right_at(const DrivingFunction& f, double t0, double h_min);
OneSidedEstimate holder_right_at(const DrivingFunction& f, double t0);

enum class Regularity { regular, irregular, neither_estimable };
std::string to_string(Regularity r);

struct RegularityVerdict {
  double t0 = 0.0;
  Regularity verdict = Regularity::neither_estimable;
  double liminf_proxy = 0.0;  ///< min quotient over the finest decade of h
  double limsup_proxy = 0.0;  ///< max quotient over the finest decade of h
  double h_lo = 0.0;          ///< finest decade is [h_lo, h_hi]
  double h_hi = 0.0;
  /// Every rung of the ladder exceeds 4 + margin.
  bool exceeds_threshold_all_scales = false;
  double margin = 0.05;
  std::vector<std::pair<double, double>> rungs;  ///< (h, left quotient)
};

RegularityVerdict classify_regularity(const DrivingFunction& f, double t0, const Ladder& ladder,
                                      double margin = 0.05);
RegularityVerdict classify_regularity(const DrivingFunction& f, double t0, double margin = 0.05);

struct HolderReport {
  double global_norm = 0.0;
  int grid_size = 0;
  std::vector<std::pair<double, double>> left_at;   ///< (t0, ladder sup)
  std::vector<std::pair<double, double>> right_at;  ///< (t0, ladder sup)
  double window = 0.0;                              ///< smallest h used
  std::vector<RegularityVerdict> classification;
};

/// Global norm plus one-sided estimates and classification at each query
/// time. The reported global norm is the supremum over the union of the grid
/// pairs and every ladder pair, so it dominates each pointwise estimate.
HolderReport holder_report(const DrivingFunction& f, const std::vector<double>& times,
                           int grid_size = 1025);

}  // namespace loewner
