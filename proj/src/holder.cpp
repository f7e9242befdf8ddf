#include "loewner/holder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "loewner/errors.hpp"

namespace loewner {

namespace {

constexpr int kDefaultRungs = 20;
constexpr double kThreshold = 4.0;

void check_resolution(double t0, double h_min) {
  const double eps = std::numeric_limits<double>::epsilon();
  if (!(h_min > 64.0 * eps * std::max(1.0, std::abs(t0))))
    throw ResolutionError("h_min=" + std::to_string(h_min) +
                          " is below the time resolution at t0=" + std::to_string(t0));
}

OneSidedEstimate one_sided(const DrivingFunction& f, double t0, const Ladder& ladder, int dir) {
  if (ladder.rungs.empty()) throw DomainError("empty h-ladder");
  check_resolution(t0, ladder.rungs.back());
  OneSidedEstimate est;
  est.t0 = t0;
  const double u0 = f.eval(t0);
  for (double h : ladder.rungs) {
    const double q = std::abs(f.eval(t0 + dir * h) - u0) / std::sqrt(h);
    est.rungs.emplace_back(h, q);
    est.sup = std::max(est.sup, q);
  }
  est.finest = est.rungs.back().second;
  return est;
}

double left_span(const DrivingFunction& f, double t0) {
  if (!(t0 > f.t_begin() && t0 <= f.horizon()))
    throw DomainError("left Hölder estimate needs t_begin < t0 <= T");
  return t0 - f.t_begin();
}

double right_span(const DrivingFunction& f, double t0) {
  if (!(t0 >= f.t_begin() && t0 < f.horizon()))
    throw DomainError("right Hölder estimate needs t_begin <= t0 < T");
  return f.horizon() - t0;
}

double default_h_min(double span) { return 0.75 * span * std::ldexp(1.0, -(kDefaultRungs - 1)); }

}  // namespace

Ladder Ladder::geometric(double h_start, double ratio, double h_min) {
  if (!(h_start > 0 && ratio > 0 && ratio < 1 && h_min > 0))
    throw DomainError("geometric ladder needs h_start > 0, 0 < ratio < 1, h_min > 0");
  Ladder l;
  for (int k = 0;; ++k) {
    const double h = h_start * std::pow(ratio, k);
    if (h < h_min * (1.0 - 1e-9)) break;
    l.rungs.push_back(h);
  }
  if (l.rungs.empty()) throw DomainError("geometric ladder: h_min exceeds h_start");
  return l;
}

Ladder Ladder::merge(const Ladder& a, const Ladder& b) {
  Ladder l;
  l.rungs = a.rungs;
  l.rungs.insert(l.rungs.end(), b.rungs.begin(), b.rungs.end());
  std::sort(l.rungs.begin(), l.rungs.end(), std::greater<>());
  l.rungs.erase(std::unique(l.rungs.begin(), l.rungs.end(),
                            [](double x, double y) { return std::abs(x - y) <= 1e-15 * x; }),
                l.rungs.end());
  return l;
}

Ladder default_ladder(double span) {
  return Ladder::geometric(0.75 * span, 0.5, default_h_min(span));
}

Ladder classification_ladder(double span, double h_min) {
  return Ladder::merge(Ladder::geometric(0.75 * span, 0.5, h_min),
                       Ladder::geometric(span, std::pow(2.0, -0.125), h_min));
}

double holder_global(const DrivingFunction& f, int grid_size) {
  if (grid_size < 2) throw DomainError("holder_global needs grid_size >= 2");
  const double a = f.t_begin();
  const double b = f.horizon();
  const int n = grid_size;
  std::vector<double> t(n), u(n);
  for (int i = 0; i < n; ++i) {
    t[i] = (i == n - 1) ? b : a + (b - a) * i / (n - 1);
    u[i] = f.eval(t[i]);
  }
  double best = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      best = std::max(best, std::abs(u[j] - u[i]) / std::sqrt(t[j] - t[i]));
  return best;
}

OneSidedEstimate holder_left_at(const DrivingFunction& f, double t0, const Ladder& ladder) {
  left_span(f, t0);
  return one_sided(f, t0, ladder, -1);
}

OneSidedEstimate holder_left_at(const DrivingFunction& f, double t0, double h_min) {
  const double span = left_span(f, t0);
  if (!(h_min > 0 && h_min < span)) throw DomainError("holder_left_at needs 0 < h_min < t0");
  check_resolution(t0, h_min);
  return one_sided(f, t0, Ladder::geometric(0.75 * span, 0.5, h_min), -1);
}

OneSidedEstimate holder_left_at(const DrivingFunction& f, double t0) {
  return one_sided(f, t0, default_ladder(left_span(f, t0)), -1);
}

OneSidedEstimate holder_right_at(const DrivingFunction& f, double t0, const Ladder& ladder) {
  right_span(f, t0);
  return one_sided(f, t0, ladder, +1);
}

OneSidedEstimate holder_right_at(const DrivingFunction& f, double t0, double h_min) {
  const double span = right_span(f, t0);
  if (!(h_min > 0 && h_min < span)) throw DomainError("holder_right_at needs 0 < h_min < T - t0");
  check_resolution(t0, h_min);
  return one_sided(f, t0, Ladder::geometric(0.75 * span, 0.5, h_min), +1);
}

OneSidedEstimate holder_right_at(const DrivingFunction& f, double t0) {
  return one_sided(f, t0, default_ladder(right_span(f, t0)), +1);
}

std::string to_string(Regularity r) {
  switch (r) {
    case Regularity::regular: return "regular";
    case Regularity::irregular: return "irregular";
    case Regularity::neither_estimable: return "neither-estimable";
  }
  return "unknown";
}

RegularityVerdict classify_regularity(const DrivingFunction& f, double t0, const Ladder& ladder,
                                      double margin) {
  const OneSidedEstimate est = holder_left_at(f, t0, ladder);
  RegularityVerdict v;
  v.t0 = t0;
  v.margin = margin;
  v.rungs = est.rungs;
  v.h_lo = est.rungs.back().first;
  v.h_hi = 10.0 * v.h_lo;
  v.liminf_proxy = std::numeric_limits<double>::infinity();
  v.limsup_proxy = 0.0;
  v.exceeds_threshold_all_scales = true;
  for (const auto& [h, q] : est.rungs) {
    if (q <= kThreshold + margin) v.exceeds_threshold_all_scales = false;
    if (h > v.h_hi) continue;
    v.liminf_proxy = std::min(v.liminf_proxy, q);
    v.limsup_proxy = std::max(v.limsup_proxy, q);
  }
  if (v.limsup_proxy < kThreshold - margin)
    v.verdict = Regularity::regular;
  else if (v.liminf_proxy < kThreshold - margin && v.limsup_proxy >= kThreshold + margin)
    v.verdict = Regularity::irregular;
  else
    v.verdict = Regularity::neither_estimable;
  return v;
}

RegularityVerdict classify_regularity(const DrivingFunction& f, double t0, double margin) {
  const double span = left_span(f, t0);
  return classify_regularity(f, t0, classification_ladder(span, default_h_min(span)), margin);
}

HolderReport holder_report(const DrivingFunction& f, const std::vector<double>& times,
                           int grid_size) {
  HolderReport r;
  r.grid_size = grid_size;
  r.global_norm = holder_global(f, grid_size);
  r.window = std::numeric_limits<double>::infinity();
  for (double t : times) {
    if (t > f.t_begin()) {
      const auto left = holder_left_at(f, t);
      r.left_at.emplace_back(t, left.sup);
      r.global_norm = std::max(r.global_norm, left.sup);
      r.window = std::min(r.window, left.rungs.back().first);
      auto cls = classify_regularity(f, t);
      for (const auto& [h, q] : cls.rungs) r.global_norm = std::max(r.global_norm, q);
      r.window = std::min(r.window, cls.h_lo);
      r.classification.push_back(std::move(cls));
    }
    if (t < f.horizon()) {
      const auto right = holder_right_at(f, t);
      r.right_at.emplace_back(t, right.sup);
      r.global_norm = std::max(r.global_norm, right.sup);
      r.window = std::min(r.window, right.rungs.back().first);
    }
  }
  if (!std::isfinite(r.window)) r.window = 0.0;
  return r;
}

}  // namespace loewner
