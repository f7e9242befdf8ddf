#include "loewner/loewner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "loewner/errors.hpp"

namespace loewner {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double sign_of(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

Complex square(Complex w) {
  const double a = w.real();
  const double b = w.imag();
  return {(a - b) * (a + b), 2.0 * a * b};
}

struct Refiner {
  const DrivingFunction& f;
  const SolverConfig& cfg;
  std::vector<Step>& steps;
  std::vector<double>& times;

  void emit(double t0, double t1) {
    if (steps.size() >= cfg.max_steps)
      throw ResolutionError("discretization exceeds " + std::to_string(cfg.max_steps) + " steps");
    steps.push_back({f.eval(t0 + 0.5 * (t1 - t0)), t1 - t0});
    times.push_back(t1);
  }

  void run(double t0, double u0, double t1, double u1) {
    const double dt = t1 - t0;
    const double floor = std::max(cfg.min_step, 8.0 * kEps * std::max(1.0, std::abs(t1)));
    if (cfg.policy == RefinementPolicy::uniform || std::abs(u1 - u0) <= cfg.kappa * std::sqrt(dt) ||
        0.5 * dt < floor) {
      emit(t0, t1);
      return;
    }
    const double m = t0 + 0.5 * dt;
    const double um = f.eval(m);
    run(t0, u0, m, um);
    run(m, um, t1, u1);
  }
};

}  // namespace

std::string to_string(RefinementPolicy p) {
  return p == RefinementPolicy::uniform ? "uniform" : "dyadic-adaptive";
}

RefinementPolicy refinement_policy_from_string(const std::string& s) {
  if (s == "uniform") return RefinementPolicy::uniform;
  if (s == "dyadic-adaptive" || s == "adaptive") return RefinementPolicy::dyadic_adaptive;
  throw ParameterError("unknown refinement policy '" + s + "'");
}

void SolverConfig::validate() const {
  if (!(base_step > 0)) throw ParameterError("solver: base_step must be positive");
  if (!(kappa > 0)) throw ParameterError("solver: kappa must be positive");
  if (!(tip_offset >= 0)) throw ParameterError("solver: tip_offset must be nonnegative");
  if (!(far_field_radius > 0)) throw ParameterError("solver: far_field_radius must be positive");
  if (!(min_step > 0)) throw ParameterError("solver: min_step must be positive");
  if (max_trace_points < 1) throw ParameterError("solver: max_trace_points must be >= 1");
}

SolverConfig SolverConfig::refined() const {
  SolverConfig c = *this;
  c.base_step *= 0.5;
  c.kappa /= std::numbers::sqrt2;
  c.min_step *= 0.5;
  return c;
}

MapSequence::MapSequence(std::vector<Step> steps, std::vector<double> times, double u_begin,
                         double u_end)
    : steps_(std::move(steps)), times_(std::move(times)), u_begin_(u_begin), u_end_(u_end) {
  if (times_.size() != steps_.size() + 1)
    throw ParameterError("map sequence: need one more time than steps");
}

std::size_t MapSequence::boundary_index(double t) const {
  const auto it = std::lower_bound(times_.begin(), times_.end(), t);
  const double tol = 1e-12 * std::max(1.0, std::abs(t));
  std::size_t best = times_.size();
  double dist = tol;
  for (auto cand : {it, it == times_.begin() ? it : it - 1}) {
    if (cand == times_.end()) continue;
    if (std::abs(*cand - t) <= dist) {
      dist = std::abs(*cand - t);
      best = static_cast<std::size_t>(cand - times_.begin());
    }
  }
  if (best == times_.size())
    throw DomainError("t=" + std::to_string(t) + " is not a step boundary of the sequence");
  return best;
}

MapSequence discretize(const DrivingFunction& f, double T, const SolverConfig& cfg,
                       const std::vector<double>& extra_breaks) {
  cfg.validate();
  if (!(T > 0)) throw DomainError("discretize: horizon must be positive");
  const double a = f.t_begin();
  const double end = a + T;
  if (end > f.horizon() * (1 + 1e-12) + 1e-12)
    throw DomainError("discretize: horizon exceeds the driver's domain");

  const auto n_base = static_cast<std::size_t>(
      std::max(1.0, std::ceil(T / cfg.base_step - 1e-9)));
  std::vector<double> nodes;
  nodes.reserve(n_base + 1);
  for (std::size_t i = 0; i < n_base; ++i)
    nodes.push_back(a + T * static_cast<double>(i) / static_cast<double>(n_base));
  nodes.push_back(end);
  for (double b : f.breakpoints(a, end)) nodes.push_back(b);
  for (double b : extra_breaks)
    if (b > a && b < end) nodes.push_back(b);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  std::vector<Step> steps;
  std::vector<double> times{a};
  steps.reserve(nodes.size());
  times.reserve(nodes.size());
  Refiner refiner{f, cfg, steps, times};
  double u_prev = f.eval(nodes.front());
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const double u_next = f.eval(nodes[i]);
    refiner.run(nodes[i - 1], u_prev, nodes[i], u_next);
    u_prev = u_next;
  }
  return MapSequence(std::move(steps), std::move(times), f.eval(a), f.eval(end));
}

Complex upper_sqrt(Complex w, double side) {
  const double a = w.real();
  const double b = w.imag();
  const double m = std::sqrt(a * a + b * b);
  if (m == 0.0) return {0.0, 0.0};
  if (a >= 0) {
    const double t = std::sqrt(0.5 * (m + a));
    const double im = b / (2.0 * t);
    if (im > 0) return {t, im};
    if (im < 0) return {-t, -im};
    return {side < 0 ? -t : t, 0.0};
  }
  const double t = std::sqrt(0.5 * (m - a));
  return {b / (2.0 * t), t};
}

Complex forward_map(StepSpan steps, Complex z) {
  if (z.imag() < 0) throw DomainError("forward_map: point below the real axis");
  if (z.imag() > 0) {
    for (std::size_t k = 0; k < steps.size(); ++k) {
      const Complex w = z - steps[k].u;
      const Complex r = upper_sqrt(square(w) + 4.0 * steps[k].dt, sign_of(w.real()));
      z = steps[k].u + r;
      if (!(z.imag() > 0)) throw SwallowedError("forward_map: point swallowed", k);
    }
    return z;
  }
  double x = z.real();
  if (steps.empty()) return z;
  const double side = sign_of(x - steps.front().u);
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const double d = x - steps[k].u;
    if (d * side <= 0) throw SwallowedError("forward_map: real point reached the singularity", k);
    x = steps[k].u + side * std::sqrt(d * d + 4.0 * steps[k].dt);
  }
  return {x, 0.0};
}

Complex inverse_map(StepSpan steps, Complex w) {
  if (w.imag() < 0) throw DomainError("inverse_map: point below the real axis");
  if (w.imag() > 0) {
    for (std::size_t k = steps.size(); k-- > 0;) {
      const Complex d = w - steps[k].u;
      w = steps[k].u + upper_sqrt(square(d) - 4.0 * steps[k].dt, sign_of(d.real()));
    }
    return w;
  }
  double x = w.real();
  for (std::size_t k = steps.size(); k-- > 0;) {
    const double d = x - steps[k].u;
    const double rad = d * d - 4.0 * steps[k].dt;
    if (rad < 0) throw OnHullError("inverse_map: boundary point lies on the hull", k);
    x = steps[k].u + sign_of(d) * std::sqrt(rad);
  }
  return {x, 0.0};
}

Complex forward_displacement(StepSpan steps, Complex z) {
  if (!(z.imag() > 0)) throw DomainError("forward_displacement needs Im z > 0");
  Complex sum{0.0, 0.0};
  Complex comp{0.0, 0.0};
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const Complex w = z - steps[k].u;
    const Complex r = upper_sqrt(square(w) + 4.0 * steps[k].dt, sign_of(w.real()));
    const Complex inc = 4.0 * steps[k].dt / (r + w);
    // Kahan summation, componentwise.
    const Complex y = inc - comp;
    const Complex t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    z = steps[k].u + r;
  }
  return sum;
}

Complex trace_point(const MapSequence& seq, const DrivingFunction& f, std::size_t k,
                    const SolverConfig& cfg) {
  if (k > seq.size()) throw DomainError("trace_point: step index out of range");
  if (k == 0) return {f.eval(seq.t_begin()), 0.0};
  if (cfg.tip_offset == 0.0) {
    const Step& last = seq.steps()[k - 1];
    return inverse_map(seq.prefix(k - 1), Complex(last.u, 2.0 * std::sqrt(last.dt)));
  }
  return inverse_map(seq.prefix(k), Complex(f.eval(seq.times()[k]), cfg.tip_offset));
}

TracedCurve trace(const MapSequence& seq, const DrivingFunction& f, const SolverConfig& cfg,
                  const std::vector<double>& sample_times) {
  const std::size_t n = seq.size();
  const std::size_t stride = std::max<std::size_t>(1, (n + cfg.max_trace_points - 1) /
                                                          cfg.max_trace_points);
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k <= n; k += stride) idx.push_back(k);
  idx.push_back(n);
  for (double t : sample_times) idx.push_back(seq.boundary_index(t));
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());

  TracedCurve curve;
  curve.driver = f.describe();
  curve.config = cfg;
  curve.steps = n;
  curve.points.reserve(idx.size());
  for (std::size_t k : idx) curve.points.push_back({seq.times()[k], trace_point(seq, f, k, cfg)});
  return curve;
}

TracedCurve trace(const DrivingFunction& f, double T, const SolverConfig& cfg,
                  const std::vector<double>& sample_times) {
  const MapSequence seq = discretize(f, T, cfg, sample_times);
  return trace(seq, f, cfg, sample_times);
}

Complex tip(const DrivingFunction& f, double T, const SolverConfig& cfg) {
  const MapSequence seq = discretize(f, T, cfg);
  return trace_point(seq, f, seq.size(), cfg);
}

double tip_tolerance(const DrivingFunction& f, double T, const SolverConfig& cfg) {
  return std::abs(tip(f, T, cfg) - tip(f, T, cfg.refined()));
}

double curve_tolerance(const DrivingFunction& f, double T, const SolverConfig& cfg,
                       int checkpoints) {
  if (checkpoints < 1) throw DomainError("curve_tolerance needs at least one checkpoint");
  std::vector<double> ts;
  for (int i = 1; i < checkpoints; ++i) ts.push_back(f.t_begin() + T * i / checkpoints);
  const MapSequence coarse = discretize(f, T, cfg, ts);
  const SolverConfig fine_cfg = cfg.refined();
  const MapSequence fine = discretize(f, T, fine_cfg, ts);
  ts.push_back(f.t_begin() + T);
  double worst = 0.0;
  for (double t : ts) {
    const Complex a = trace_point(coarse, f, coarse.boundary_index(t), cfg);
    const Complex b = trace_point(fine, f, fine.boundary_index(t), fine_cfg);
    worst = std::max(worst, std::abs(a - b));
  }
  return worst;
}

HcapEstimate hcap_estimate(const MapSequence& seq, double R) {
  if (!(R > 0)) throw DomainError("hcap_estimate: radius must be positive");
  const double center = seq.size() ? seq.steps().front().u : 0.0;
  const double pi = std::numbers::pi;
  auto b_at = [&](double radius) {
    double acc = 0.0;
    for (double theta : {pi / 4, pi / 2, 3 * pi / 4}) {
      const Complex rel = std::polar(radius, theta);
      acc += (rel * forward_displacement(seq.steps(), center + rel)).real();
    }
    return acc / 3.0;
  };
  HcapEstimate est;
  est.radius = R;
  est.at_R = b_at(R);
  est.at_2R = b_at(2 * R);
  est.value = 2.0 * est.at_2R - est.at_R;
  est.error = std::abs(est.at_2R - est.at_R);
  est.far_field_warning = est.error > 0.1 * std::abs(est.at_2R);
  return est;
}

HcapEstimate hcap_estimate(const DrivingFunction& f, double T, const SolverConfig& cfg) {
  return hcap_estimate(discretize(f, T, cfg), cfg.far_field_radius);
}

}  // namespace loewner
