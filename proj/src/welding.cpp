#include "loewner/welding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "loewner/errors.hpp"

namespace loewner {

namespace {

double sgn(Side s) { return s == Side::left ? -1.0 : 1.0; }

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

// Step k with times[k] <= t < times[k+1]; the last step for t == end.
std::size_t step_containing(const MapSequence& seq, double t) {
  const auto& ts = seq.times();
  auto it = std::upper_bound(ts.begin(), ts.end(), t);
  if (it == ts.begin()) return 0;
  const auto k = static_cast<std::size_t>(it - ts.begin()) - 1;
  return std::min(k, seq.size() - 1);
}

// Real forward flow through steps [k, N); returns false when the point
// reaches the singularity.
bool flow_real(StepSpan steps, std::size_t k, double side, double& x) {
  for (; k < steps.size(); ++k) {
    const double d = x - steps[k].u;
    if (d * side <= 0) return false;
    x = steps[k].u + side * std::sqrt(d * d + 4.0 * steps[k].dt);
  }
  return true;
}

double hit_or_inf(const MapSequence& seq, double x0) {
  const auto rec = backward_hit(seq, x0);
  return rec.hit_time ? *rec.hit_time : std::numeric_limits<double>::infinity();
}

}  // namespace

std::string to_string(Side s) { return s == Side::left ? "left" : "right"; }

std::string to_string(WeldVerdict v) {
  switch (v) {
    case WeldVerdict::welded: return "welded";
    case WeldVerdict::not_welded: return "not-welded";
    case WeldVerdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

HittingRecord backward_hit(const MapSequence& seq, double x0) {
  const double u_T = seq.u_end();
  if (x0 == u_T) throw DomainError("backward_hit: seed must differ from U(T)");
  HittingRecord rec;
  rec.x0 = x0;
  rec.side = x0 < u_T ? Side::left : Side::right;
  const double side = sgn(rec.side);
  const auto steps = seq.steps();
  const auto& ts = seq.times();
  const double t_end = ts.back();
  double x = x0;
  for (std::size_t k = steps.size(); k-- > 0;) {
    const double elapsed = t_end - ts[k + 1];
    const double d = x - steps[k].u;
    if (d * side <= 0) {
      rec.hit_time = elapsed;
      rec.hit_step = k;
      return rec;
    }
    const double rad = d * d - 4.0 * steps[k].dt;
    // Seeds absorbed exactly at a step boundary land here up to roundoff.
    if (rad <= 16.0 * std::numeric_limits<double>::epsilon() * d * d) {
      rec.hit_time = elapsed + 0.25 * d * d;
      rec.hit_step = k;
      return rec;
    }
    x = steps[k].u + side * std::sqrt(rad);
  }
  rec.terminal_gap = std::abs(x - seq.u_begin());
  return rec;
}

HittingRecord backward_hit(const DrivingFunction& f, double T, double x0, const SolverConfig& cfg) {
  return backward_hit(discretize(f, T, cfg), x0);
}

double WeldingMap::operator()(double x) const {
  std::vector<std::pair<double, double>> knots;
  knots.reserve(2 * pairs.size() + 1);
  knots.emplace_back(u_T, u_T);
  for (const auto& p : pairs) {
    knots.emplace_back(p.x0, p.y0);
    knots.emplace_back(p.y0, p.x0);
  }
  std::sort(knots.begin(), knots.end());
  if (x <= knots.front().first) return knots.front().second;
  if (x >= knots.back().first) return knots.back().second;
  auto it = std::upper_bound(knots.begin(), knots.end(), std::make_pair(x, -INFINITY),
                             [](const auto& l, const auto& r) { return l.first < r.first; });
  const auto& [x1, y1] = *it;
  const auto& [x0, y0] = *(it - 1);
  const double w = (x - x0) / (x1 - x0);
  return y0 + w * (y1 - y0);
}

std::vector<double> hit_time_ladder(double T, int n, double s_min_fraction) {
  if (n < 1) throw DomainError("hit_time_ladder needs n >= 1");
  if (!(s_min_fraction > 0 && s_min_fraction <= 1))
    throw DomainError("hit_time_ladder needs 0 < s_min_fraction <= 1");
  std::vector<double> s;
  for (int j = 0; j < n; ++j) {
    const double e = n == 1 ? 0.0 : static_cast<double>(n - 1 - j) / (n - 1);
    s.push_back(j == n - 1 ? T : T * std::pow(s_min_fraction, e));
  }
  return s;
}

WeldingMap welding_map(const MapSequence& seq, const std::vector<double>& hit_times, bool strict) {
  WeldingMap h;
  h.u_T = seq.u_end();
  const double t_end = seq.times().back();
  const double total = seq.total_time();
  const auto steps = seq.steps();
  std::vector<double> targets = hit_times;
  std::sort(targets.begin(), targets.end());
  for (double s : targets) {
    if (!(s > 0 && s <= total * (1 + 1e-12)))
      throw DomainError("welding_map: hit time " + fmt(s) + " outside (0, T]");
    const double tau = std::max(seq.t_begin(), t_end - s);
    std::size_t k = step_containing(seq, tau);
    double sigma = std::min(seq.times()[k + 1] - tau, steps[k].dt);
    double x = 0.0;
    double y = 0.0;
    auto seed = [&] {
      x = steps[k].u - 2.0 * std::sqrt(sigma);
      y = steps[k].u + 2.0 * std::sqrt(sigma);
      return flow_real(steps, k + 1, -1.0, x) && flow_real(steps, k + 1, +1.0, y) &&
             x < h.u_T && h.u_T < y;
    };
    bool ok = seed();
    if (!ok && k + 1 < steps.size()) {
      // The next driver jump overtakes a seed placed just before a step
      // boundary; the nearest realized hit time is the boundary itself.
      ++k;
      sigma = steps[k].dt;
      s = t_end - seq.times()[k];
      ok = seed();
    }
    if (!ok) {
      const std::string msg = "welding_map: seeds for hit time s=" + fmt(s) +
                              " reach the singularity again or fall on one side of U(T)";
      if (strict) throw InconsistencyError(msg, s);
      h.failures.emplace_back(s, msg);
      continue;
    }
    h.pairs.push_back({x, y, s});
  }
  if (!h.pairs.empty()) {
    h.a = h.pairs.back().x0;
    h.b = h.pairs.back().y0;
  } else {
    h.a = h.b = h.u_T;
  }
  return h;
}

WeldingMap welding_map(const DrivingFunction& f, double T, int n_pairs, const SolverConfig& cfg,
                       bool strict) {
  return welding_map(discretize(f, T, cfg), hit_time_ladder(T, n_pairs), strict);
}

double bisect_seed(const MapSequence& seq, double s, Side side, double tol, int max_iter) {
  const double u_T = seq.u_end();
  const double dir = sgn(side);
  const double T = seq.total_time();
  if (!(s > 0 && s <= T)) throw DomainError("bisect_seed: hit time outside (0, T]");
  double lo = 0.0;
  double hi = 2.0 * std::sqrt(s);
  double hit_hi = hit_or_inf(seq, u_T + dir * hi);
  for (int i = 0; hit_hi <= s; ++i) {
    if (i > 60) throw InconsistencyError("bisect_seed: no bracket for s=" + fmt(s), s);
    lo = hi;
    hi *= 2.0;
    const double next = hit_or_inf(seq, u_T + dir * hi);
    if (next < hit_hi)
      throw InconsistencyError("bisect_seed: hit time not monotone near s=" + fmt(s), s);
    hit_hi = next;
  }
  double hit_lo = lo > 0 ? hit_or_inf(seq, u_T + dir * lo) : 0.0;
  double mid = 0.5 * (lo + hi);
  for (int i = 0; i < max_iter; ++i) {
    mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double hm = hit_or_inf(seq, u_T + dir * mid);
    if (hm < hit_lo || hm > hit_hi)
      throw InconsistencyError("bisect_seed: hit time not monotone near s=" + fmt(s), s);
    if (std::abs(hm - s) <= tol * T && std::isfinite(hm)) break;
    if (hm <= s) {
      lo = mid;
      hit_lo = hm;
    } else {
      hi = mid;
      hit_hi = hm;
    }
  }
  return u_T + dir * mid;
}

WeldCheckReport is_welded(const DrivingFunction& f, double T, const std::vector<double>& tau_grid,
                          const std::vector<double>& offsets, const SolverConfig& cfg,
                          double epsilon_min) {
  if (offsets.empty()) throw DomainError("is_welded: need at least one offset");
  const double t0 = f.t_begin();
  std::vector<double> deltas = offsets;
  std::sort(deltas.begin(), deltas.end(), std::greater<>());
  if (!(deltas.back() > 0)) throw DomainError("is_welded: offsets must be positive");
  // Steps right after each tau are graded down to the scale of the smallest
  // offset so the frozen driver value cannot jump past the seed.
  std::vector<double> abs_tau;
  std::vector<double> breaks;
  for (double tau : tau_grid) {
    if (!(tau >= 0 && tau < T)) throw DomainError("is_welded: tau outside [0, T)");
    abs_tau.push_back(t0 + tau);
    breaks.push_back(t0 + tau);
    for (double h = 1e-2 * deltas.back() * deltas.back(); h < cfg.base_step && tau + h < T; h *= 2)
      breaks.push_back(t0 + tau + h);
  }
  const MapSequence seq = discretize(f, T, cfg, breaks);
  const auto steps = seq.steps();
  const double u_T = seq.u_end();

  WeldCheckReport rep;
  rep.trace_tolerance = tip_tolerance(f, T, cfg);
  rep.epsilon_min = epsilon_min > 0 ? epsilon_min : 10.0 * rep.trace_tolerance;
  rep.epsilon_floor = std::numeric_limits<double>::infinity();
  rep.audit.push_back("epsilon_min=" + fmt(rep.epsilon_min) + " (10 x tip tolerance " +
                      fmt(rep.trace_tolerance) + " unless given)");
  bool any_hit = false;
  bool all_above = true;
  for (std::size_t i = 0; i < abs_tau.size(); ++i) {
    const std::size_t k = seq.boundary_index(abs_tau[i]);
    const double u_tau = f.eval(abs_tau[i]);
    for (Side side : {Side::left, Side::right}) {
      GapSample g;
      g.tau = tau_grid[i];
      g.side = side;
      for (double delta : deltas) {
        double x = u_tau + sgn(side) * delta;
        if (!flow_real(steps, k, sgn(side), x)) {
          g.hit_delta = delta;
          break;
        }
        g.gaps.emplace_back(delta, std::abs(x - u_T));
      }
      if (g.hit_delta) {
        any_hit = true;
        g.floor = 0.0;
        rep.audit.push_back("tau=" + fmt(g.tau) + " side=" + to_string(side) +
                            ": real flow hit the singularity for delta=" + fmt(*g.hit_delta));
      } else {
        double floor = std::numeric_limits<double>::infinity();
        for (const auto& [d, gap] : g.gaps) floor = std::min(floor, gap);
        if (g.gaps.size() >= 2) {
          const auto& [d1, g1] = g.gaps[g.gaps.size() - 2];
          const auto& [d2, g2] = g.gaps.back();
          g.extrapolated = g2 - d2 * (g1 - g2) / (d1 - d2);
        } else {
          g.extrapolated = g.gaps.back().second;
        }
        g.floor = std::min(floor, std::max(g.extrapolated, 0.0));
      }
      if (!(g.floor > rep.epsilon_min)) all_above = false;
      rep.epsilon_floor = std::min(rep.epsilon_floor, g.floor);
      rep.samples.push_back(std::move(g));
    }
  }
  if (any_hit)
    rep.verdict = WeldVerdict::not_welded;
  else if (all_above)
    rep.verdict = WeldVerdict::welded;
  else
    rep.verdict = WeldVerdict::inconclusive;
  return rep;
}

WeldCheckReport is_welded(const DrivingFunction& f, double T, const SolverConfig& cfg) {
  const double t0 = f.t_begin();
  double lo = f.eval(t0);
  double hi = lo;
  constexpr int kGrid = 1024;
  for (int i = 1; i <= kGrid; ++i) {
    const double u = f.eval(t0 + T * i / kGrid);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  const double amplitude = std::max(hi - lo, std::sqrt(T));
  auto rep = is_welded(f, T, {0.0, 0.5 * T, 0.75 * T, 0.9 * T},
                       {1e-2 * amplitude, 1e-3 * amplitude, 1e-4 * amplitude}, cfg);
  rep.amplitude = amplitude;
  return rep;
}

LemmaReport lemma_stran_check(const DrivingFunction& f, const std::vector<double>& s_seq,
                              const std::vector<double>& t_seq, int grid_per_interval) {
  if (s_seq.size() != t_seq.size()) throw DomainError("lemma check: sequences differ in length");
  const double a = f.t_begin();
  const double T = f.horizon();
  for (std::size_t i = 0; i < s_seq.size(); ++i) {
    if (!(s_seq[i] > a && s_seq[i] < T && t_seq[i] > a && t_seq[i] < T))
      throw DomainError("lemma check: sequence values must lie in (0, 1)");
    if (i > 0 && (s_seq[i] <= s_seq[i - 1] || t_seq[i] <= t_seq[i - 1]))
      throw DomainError("lemma check: sequences must be increasing");
  }
  const double u_end = f.eval(T);
  auto U = [&](double t) { return f.eval(t) - u_end; };
  auto extremum = [&](double from, bool want_max) {
    double best = U(from);
    auto take = [&](double t) {
      const double u = U(t);
      best = want_max ? std::max(best, u) : std::min(best, u);
    };
    take(T);
    for (int i = 1; i < grid_per_interval; ++i) take(from + (T - from) * i / grid_per_interval);
    for (double b : f.breakpoints(from, T)) take(b);
    return best;
  };
  LemmaReport rep;
  rep.all_positive = true;
  for (std::size_t i = 0; i < s_seq.size(); ++i) {
    LemmaAudit row{};
    row.n = static_cast<int>(i + 1);
    row.s_n = s_seq[i];
    row.t_n = t_seq[i];
    row.upper_max = extremum(s_seq[i], true);
    row.lower_min = extremum(t_seq[i], false);
    const double us = U(s_seq[i]);
    const double ut = U(t_seq[i]);
    row.expr_s = 4.0 * (T - s_seq[i]) + us * us - 2.0 * us * row.upper_max;
    row.expr_t = 4.0 * (T - t_seq[i]) + ut * ut - 2.0 * ut * row.lower_min;
    if (!(row.expr_s > 0 && row.expr_t > 0)) rep.all_positive = false;
    rep.rows.push_back(row);
  }
  return rep;
}

CorollaryReport corollary_sign_check(const DrivingFunction& f, const std::vector<double>& s_seq,
                                     const std::vector<double>& t_seq) {
  CorollaryReport rep;
  rep.holds = true;
  const double u_end = f.eval(f.horizon());
  const double tol = 1e-12 * std::max(1.0, std::abs(u_end));
  for (std::size_t i = 0; i < s_seq.size(); ++i) {
    const double us = f.eval(s_seq[i]);
    if (us > u_end + tol) {
      rep.holds = false;
      rep.audit.push_back("n=" + std::to_string(i + 1) + ": U(s_n)=" + fmt(us) + " > U(1)");
    }
  }
  for (std::size_t i = 0; i < t_seq.size(); ++i) {
    const double ut = f.eval(t_seq[i]);
    if (ut < u_end - tol) {
      rep.holds = false;
      rep.audit.push_back("n=" + std::to_string(i + 1) + ": U(t_n)=" + fmt(ut) + " < U(1)");
    }
  }
  rep.audit.push_back(rep.holds ? "sign condition holds on all given n; with K_t welded for t < 1, "
                                  "K_1 is welded"
                                : "sign condition fails");
  return rep;
}

std::vector<double> dyadic_sequence(int count) {
  std::vector<double> r;
  for (int n = 1; n <= count; ++n) r.push_back(1.0 - std::ldexp(1.0, -n));
  return r;
}

QuasisymmetryEstimate quasisymmetry_estimate(const WeldingMap& h) {
  if (h.pairs.size() < 20) throw DomainError("quasisymmetry_estimate needs at least 20 pairs");
  const double a = h.a;
  const double b = h.b;
  std::vector<double> xs;
  for (const auto& p : h.pairs) {
    xs.push_back(p.x0);
    xs.push_back(p.y0);
  }
  xs.push_back(h.u_T);
  constexpr int kGrid = 200;
  for (int i = 1; i < kGrid; ++i) xs.push_back(a + (b - a) * i / kGrid);

  QuasisymmetryEstimate best;
  for (double x : xs) {
    for (int k = 0; k <= 40; ++k) {
      const double t = 0.5 * (b - a) * std::pow(2.0, -0.5 * k);
      if (x - t < a || x + t > b) continue;
      const double hx = h(x);
      const double num = std::abs(h(x + t) - hx);
      const double den = std::abs(hx - h(x - t));
      if (den < 1e-14 || num < 1e-14) {
        best.unbounded = true;
        best.M = std::numeric_limits<double>::infinity();
        best.x = x;
        best.t = t;
        return best;
      }
      const double rho = std::max(num / den, den / num);
      if (rho > best.M) {
        best.M = rho;
        best.x = x;
        best.t = t;
      }
    }
  }
  return best;
}

}  // namespace loewner
