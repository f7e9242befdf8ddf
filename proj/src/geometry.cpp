#include "loewner/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "loewner/errors.hpp"

namespace loewner {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kExactLimit = 5000;

// Principal axis of the second moments of `v` about `center`.
Complex principal_axis(const std::vector<Complex>& v, Complex center) {
  double sxx = 0, syy = 0, sxy = 0;
  for (Complex z : v) {
    const Complex w = z - center;
    sxx += w.real() * w.real();
    syy += w.imag() * w.imag();
    sxy += w.real() * w.imag();
  }
  const double theta = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
  Complex dir = std::polar(1.0, theta);
  if (dir.imag() < 0 || (dir.imag() == 0 && dir.real() < 0)) dir = -dir;
  return dir;
}

}  // namespace

std::string to_string(DiameterMode m) {
  return m == DiameterMode::endpoint_approx ? "endpoint-approx" : "exact-pairwise";
}

TurningReport bounded_turning(const TracedCurve& curve, DiameterMode mode, double min_chord) {
  const auto& p = curve.points;
  const std::size_t n = p.size();
  if (n < 3) throw DomainError("bounded_turning needs at least 3 points");
  if (mode == DiameterMode::exact_pairwise && n > kExactLimit)
    throw DomainError("exact-pairwise turning is limited to 5000 points");
  TurningReport rep;
  rep.mode = mode;
  rep.points = n;
  rep.min_chord = min_chord >= 0 ? min_chord : 10.0 * curve.tolerance;
  rep.ratio = 0.0;

  auto consider = [&](std::size_t i, std::size_t j, double diam, double chord) {
    if (chord < rep.min_chord || chord == 0.0) return;
    ++rep.pairs_used;
    const double r = diam / chord;
    if (r > rep.ratio) {
      rep.ratio = r;
      rep.i = i;
      rep.j = j;
    }
  };

  // Row i of the table over j > i, built from row i + 1.
  std::vector<double> row(n, 0.0);
  for (std::size_t i = n - 1; i-- > 0;) {
    if (mode == DiameterMode::endpoint_approx) {
      // row[j] = max_{i<=k<=j} |g_k - g_j|; reach = max_{i<=k<=j} |g_k - g_i|.
      double reach = 0.0;
      for (std::size_t j = i + 1; j < n; ++j) {
        const double chord = std::abs(p[j].z - p[i].z);
        row[j] = std::max(row[j], chord);
        reach = std::max(reach, chord);
        consider(i, j, std::max(reach, row[j]), chord);
      }
    } else {
      // row[j] = diam(g_i..g_j) = max(diam(i+1..j), diam(i..j-1), |g_i - g_j|).
      double left = 0.0;
      for (std::size_t j = i + 1; j < n; ++j) {
        const double chord = std::abs(p[j].z - p[i].z);
        left = std::max({row[j], left, chord});
        row[j] = left;
        consider(i, j, left, chord);
      }
    }
  }
  if (rep.pairs_used == 0) throw DegenerateCurveError("bounded_turning: every chord was excluded");
  return rep;
}

double cone_angle(const TracedCurve& curve) {
  if (curve.points.empty()) throw DomainError("cone_angle of an empty curve");
  const Complex base = curve.points.front().z;
  double theta = kPi / 2;
  for (std::size_t k = 1; k < curve.points.size(); ++k) {
    const Complex w = curve.points[k].z - base;
    if (w == Complex{}) continue;
    const double a = std::arg(w);
    theta = std::min({theta, a, kPi - a});
  }
  return std::max(theta, 0.0);
}

AngleFit segment_angle_fit(const TracedCurve& curve) {
  const auto& p = curve.points;
  if (p.size() < 10) throw DomainError("segment_angle_fit needs at least 10 points");
  const Complex base = p.front().z;
  std::vector<Complex> v;
  for (std::size_t k = 1; k < p.size(); ++k)
    if (p[k].z != base) v.push_back(p[k].z);
  if (v.empty()) throw DegenerateCurveError("segment_angle_fit: all points at the base");
  // Second moments about the base point itself, so the line passes through it.
  AngleFit fit;
  fit.angle = std::arg(principal_axis(v, base));
  double acc = 0.0;
  for (Complex z : v) {
    const double dev = std::arg(z - base) - fit.angle;
    acc += dev * dev;
  }
  fit.points = v.size();
  fit.rms_deviation = std::sqrt(acc / static_cast<double>(v.size()));
  return fit;
}

RealAxisApproach approach_angle(const TracedCurve& curve, double t_from, double t_to) {
  std::vector<Complex> v;
  for (const auto& cp : curve.points)
    if (cp.t >= t_from && cp.t <= t_to) v.push_back(cp.z);
  if (v.size() < 3) throw DomainError("approach_angle needs at least 3 points in the window");
  Complex mean{};
  for (Complex z : v) mean += z;
  mean /= static_cast<double>(v.size());
  const Complex dir = principal_axis(v, mean);
  if (std::abs(dir.imag()) < 1e-15)
    throw DegenerateCurveError("approach_angle: fitted line is parallel to R");
  RealAxisApproach r;
  r.points = v.size();
  r.x_hit = mean.real() - mean.imag() * dir.real() / dir.imag();
  r.angle = std::arg(dir);
  double acc = 0.0;
  for (Complex z : v) {
    const Complex w = z - mean;
    const double off = w.imag() * dir.real() - w.real() * dir.imag();
    acc += off * off;
  }
  r.residual = std::sqrt(acc / static_cast<double>(v.size()));
  return r;
}

double phi_of_c(double c) { return 0.5 * kPi * (1.0 - c / std::sqrt(c * c + 16.0)); }

double c_of_phi(double phi) {
  if (!(phi > 0 && phi < kPi)) throw DomainError("c_of_phi needs 0 < phi < pi");
  return 2.0 * (kPi - 2.0 * phi) / std::sqrt(phi * (kPi - phi));
}

SelfSimilarMap::SelfSimilarMap(StepSpan prefix, double d, double a)
    : steps_(prefix.begin(), prefix.end()), d_(d), a_(a) {
  if (!(d > 0 && d < 1)) throw ParameterError("self-similar map needs 0 < d < 1");
}

SelfSimilarMap::SelfSimilarMap(const DrivingFunction& f, const SolverConfig& cfg) : d_(0), a_(0) {
  const auto d = f.self_similarity();
  if (!d) throw ParameterError("driver " + f.describe() + " is not self-similar");
  if (f.t_begin() != 0.0 || std::abs(f.horizon() - 1.0) > 1e-12)
    throw ParameterError("self-similar map needs a driver on [0, 1]");
  d_ = *d;
  a_ = f.eval(1.0);
  const MapSequence seq = discretize(f, block(), cfg);
  steps_.assign(seq.steps().begin(), seq.steps().end());
}

Complex SelfSimilarMap::operator()(Complex z) const {
  return inverse_map(steps_, a_ + d_ * (z - a_));
}

TipEstimate tip_fixed_point(const SelfSimilarMap& map, Complex z0, double tol, int max_iter) {
  TipEstimate est;
  Complex z = z0;
  double prev = 0.0;
  int growing = 0;
  for (int k = 1; k <= max_iter; ++k) {
    const Complex next = map(z);
    if (!(next.imag() > 0))
      throw TipError("tip iteration left the upper half-plane at iterate " + std::to_string(k),
                     TipError::Reason::left_half_plane);
    const double r = std::abs(next - z);
    est.residuals.push_back(r);
    if (k > 1 && prev > 0) {
      const double ratio = r / prev;
      if (r > 1e-3 * tol) est.lambda = ratio;
      growing = ratio >= 1.0 ? growing + 1 : 0;
      if (growing >= 10)
        throw TipError("tip iteration is not contracting", TipError::Reason::divergence);
    }
    prev = r;
    z = next;
    est.iterations = k;
    if (r < tol) {
      est.tip = z;
      est.residual = std::abs(map(z) - z);
      return est;
    }
  }
  throw TipError("tip iteration did not reach tolerance in " + std::to_string(max_iter) +
                     " iterates",
                 TipError::Reason::divergence);
}

TipEstimate tip_fixed_point(const DrivingFunction& f, const SolverConfig& cfg, double tol,
                            int max_iter) {
  const SelfSimilarMap map(f, cfg);
  return tip_fixed_point(map, tip(f, map.block(), cfg), tol, max_iter);
}

LogLinearFit log_linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("log_linear_fit needs >= 2 pairs");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  std::vector<double> ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(y[i] > 0)) throw DomainError("log_linear_fit needs positive values");
    ly.push_back(std::log(y[i]));
    sx += x[i];
    sy += ly.back();
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  LogLinearFit fit;
  fit.slope = sxx > 0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0 ? sxy * sxy / (sxx * syy) : 1.0;
  return fit;
}

}  // namespace loewner
