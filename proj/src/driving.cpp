#include "loewner/driving.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "loewner/errors.hpp"

namespace loewner {

namespace {

constexpr double kDomainTol = 1e-12;
// Below this distance to t = 1 a d-similar driver is clamped to V = 0.
constexpr double kDSimilarFloor = 1e-14;

std::string fmt(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

// Dyadic level n of s in (0, 1]: 2^-(n+1) < s <= 2^-n.
int dyadic_level(double s) {
  int n = static_cast<int>(std::floor(-std::log2(s)));
  if (n < 0) n = 0;
  while (n > 0 && s > std::ldexp(1.0, -n)) --n;
  while (s <= std::ldexp(1.0, -(n + 1))) ++n;
  return n;
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double dsimilar_value(const drivers::DSimilar& ds, double t) {
  double s = 1.0 - t;
  if (s <= kDSimilarFloor) return 0.0;
  const double d2 = ds.d * ds.d;
  const double lo = ds.piece.front_t();
  double scale = 1.0;
  while (s < lo) {
    s /= d2;
    scale *= ds.d;
  }
  s = std::clamp(s, lo, ds.piece.back_t());
  return scale * ds.piece(s);
}

double example32_value(const drivers::CompositeExample& ex, double t) {
  const double s = 1.0 - t;
  if (s <= 0.0) return 0.0;
  const int n = dyadic_level(s);
  const double arg = 2.0 - std::ldexp(s, n + 1);
  return theorem14_value(ex.base.C, std::clamp(arg, 0.0, 1.0)) * std::pow(2.0, -0.5 * n);
}

void theorem14_breakpoints(int depth, double a, double b, double t0, double scale,
                           std::vector<double>& out) {
  // Breakpoints of the zigzag mapped by t -> t0 + scale * t.
  for (int n = 0; n <= depth; ++n) {
    const double r = t0 + scale * (1.0 - std::ldexp(1.0, -n));
    const double w = t0 + scale * (1.0 - 3.0 * std::ldexp(1.0, -(n + 2)));
    if (n > 0 && r > a && r < b) out.push_back(r);
    if (n < depth && w > a && w < b) out.push_back(w);
  }
}

}  // namespace

std::string to_string(DriverKind kind) {
  switch (kind) {
    case DriverKind::constant: return "constant";
    case DriverKind::sqrt_forward: return "sqrt_forward";
    case DriverKind::sqrt_backward: return "sqrt_backward";
    case DriverKind::theorem14: return "theorem14";
    case DriverKind::d_similar: return "d_similar";
    case DriverKind::composite_example: return "composite_example";
    case DriverKind::sampled: return "sampled";
  }
  return "unknown";
}

SampledFunction::SampledFunction(std::vector<double> t, std::vector<double> u) {
  if (t.size() != u.size()) throw ParameterError("sampled driver: t and u differ in length");
  if (t.size() < 2) throw ParameterError("sampled driver: need at least two samples");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(t[i]) || !std::isfinite(u[i]))
      throw ParameterError("sampled driver: non-finite sample at row " + std::to_string(i));
    if (i > 0 && !(t[i] > t[i - 1]))
      throw ParameterError("sampled driver: t-grid not strictly increasing at row " +
                           std::to_string(i));
  }
  data_ = std::make_shared<const Data>(Data{std::move(t), std::move(u)});
}

double SampledFunction::operator()(double t) const {
  const auto& ts = data_->t;
  const auto& us = data_->u;
  if (t <= ts.front()) return us.front();
  if (t >= ts.back()) return us.back();
  const auto it = std::upper_bound(ts.begin(), ts.end(), t);
  const std::size_t j = static_cast<std::size_t>(it - ts.begin());
  const std::size_t i = j - 1;
  const double w = (t - ts[i]) / (ts[j] - ts[i]);
  return us[i] + w * (us[j] - us[i]);
}

double theorem14_value(double C, double t) {
  const double s = 1.0 - t;
  if (s <= 0.0) return 0.0;
  const int n = dyadic_level(s);
  const double p = std::ldexp(1.0, -n);
  const double slope = C * std::sqrt(3.0 * std::ldexp(1.0, n + 2));
  if (s >= 0.75 * p) return slope * (p - s);  // rising part [r_n, w_n]
  return slope * (s - 0.5 * p);               // falling part [w_n, r_{n+1}]
}

DrivingFunction::DrivingFunction(Variant v, double offset) : v_(std::move(v)), offset_(offset) {
  if (!std::isfinite(offset_)) throw ParameterError("driver offset must be finite");
  if (horizon() <= t_begin()) throw ParameterError("driver horizon must exceed its start");
}

DrivingFunction DrivingFunction::constant(double u, double horizon) {
  if (!(horizon > 0)) throw ParameterError("constant driver: horizon must be positive");
  return DrivingFunction(drivers::Constant{u, horizon});
}

DrivingFunction DrivingFunction::sqrt_forward(double c, double horizon) {
  if (!(horizon > 0)) throw ParameterError("sqrt driver: horizon must be positive");
  return DrivingFunction(drivers::SqrtForward{c, horizon});
}

DrivingFunction DrivingFunction::sqrt_backward(double c, double horizon) {
  if (!(horizon > 0)) throw ParameterError("backsqrt driver: horizon must be positive");
  return DrivingFunction(drivers::SqrtBackward{c, horizon});
}

DrivingFunction DrivingFunction::sampled(std::vector<double> t, std::vector<double> u) {
  return DrivingFunction(drivers::Sampled{SampledFunction(std::move(t), std::move(u))});
}

DriverKind DrivingFunction::kind() const {
  return std::visit(overloaded{
                        [](const drivers::Constant&) { return DriverKind::constant; },
                        [](const drivers::SqrtForward&) { return DriverKind::sqrt_forward; },
                        [](const drivers::SqrtBackward&) { return DriverKind::sqrt_backward; },
                        [](const drivers::Theorem14&) { return DriverKind::theorem14; },
                        [](const drivers::DSimilar&) { return DriverKind::d_similar; },
                        [](const drivers::CompositeExample&) {
                          return DriverKind::composite_example;
                        },
                        [](const drivers::Sampled&) { return DriverKind::sampled; },
                    },
                    v_);
}

double DrivingFunction::t_begin() const {
  if (const auto* s = std::get_if<drivers::Sampled>(&v_)) return s->f.front_t();
  return 0.0;
}

double DrivingFunction::horizon() const {
  return std::visit(overloaded{
                        [](const drivers::Constant& d) { return d.horizon; },
                        [](const drivers::SqrtForward& d) { return d.horizon; },
                        [](const drivers::SqrtBackward& d) { return d.horizon; },
                        [](const drivers::Sampled& d) { return d.f.back_t(); },
                        [](const auto&) { return 1.0; },
                    },
                    v_);
}

double DrivingFunction::eval_raw(double t) const {
  return std::visit(
      overloaded{
          [](const drivers::Constant& d) { return d.u; },
          [t](const drivers::SqrtForward& d) { return d.c * std::sqrt(std::max(t, 0.0)); },
          [t](const drivers::SqrtBackward& d) {
            return d.c * std::sqrt(std::max(d.horizon - t, 0.0));
          },
          [t](const drivers::Theorem14& d) { return theorem14_value(d.C, t); },
          [t](const drivers::DSimilar& d) { return dsimilar_value(d, t); },
          [t](const drivers::CompositeExample& d) { return example32_value(d, t); },
          [t](const drivers::Sampled& d) { return d.f(t); },
      },
      v_);
}

double DrivingFunction::eval(double t) const {
  const double a = t_begin();
  const double b = horizon();
  const double tol = kDomainTol * std::max({1.0, std::abs(a), std::abs(b)});
  if (!(t >= a - tol && t <= b + tol)) {
    std::ostringstream os;
    os << "driver evaluated at t=" << fmt(t) << " outside [" << fmt(a) << ", " << fmt(b) << "]";
    throw DomainError(os.str());
  }
  return eval_raw(std::clamp(t, a, b)) + offset_;
}

std::map<std::string, double> DrivingFunction::params() const {
  std::map<std::string, double> p = std::visit(
      overloaded{
          [](const drivers::Constant& d) {
            return std::map<std::string, double>{{"u", d.u}, {"T", d.horizon}};
          },
          [](const drivers::SqrtForward& d) {
            return std::map<std::string, double>{{"c", d.c}, {"T", d.horizon}};
          },
          [](const drivers::SqrtBackward& d) {
            return std::map<std::string, double>{{"c", d.c}, {"T", d.horizon}};
          },
          [](const drivers::Theorem14& d) {
            return std::map<std::string, double>{{"C", d.C}, {"depth", double(d.depth)}};
          },
          [](const drivers::DSimilar& d) {
            return std::map<std::string, double>{{"d", d.d}, {"depth", double(d.depth)}};
          },
          [](const drivers::CompositeExample& d) {
            return std::map<std::string, double>{{"C", d.base.C},
                                                 {"depth", double(d.base.depth)}};
          },
          [](const drivers::Sampled&) { return std::map<std::string, double>{}; },
      },
      v_);
  if (offset_ != 0.0) p["a"] = offset_;
  return p;
}

std::vector<double> DrivingFunction::breakpoints(double a, double b) const {
  std::vector<double> out;
  std::visit(overloaded{
                 [](const drivers::Constant&) {},
                 [](const drivers::SqrtForward&) {},
                 [](const drivers::SqrtBackward&) {},
                 [&](const drivers::Theorem14& d) {
                   theorem14_breakpoints(d.depth, a, b, 0.0, 1.0, out);
                 },
                 [&](const drivers::DSimilar& d) {
                   const double d2 = d.d * d.d;
                   double scale = 1.0;
                   for (int k = 0; k <= d.depth; ++k, scale *= d2) {
                     for (double s : d.piece.t()) {
                       const double t = 1.0 - s * scale;
                       if (t > a && t < b) out.push_back(t);
                     }
                   }
                 },
                 [&](const drivers::CompositeExample& d) {
                   const int depth = d.base.depth;
                   for (int n = 0; n <= depth; ++n) {
                     const double r = 1.0 - std::ldexp(1.0, -n);
                     if (n > 0 && r > a && r < b) out.push_back(r);
                     if (n < depth)
                       theorem14_breakpoints(depth - n - 1, a, b, r, std::ldexp(1.0, -(n + 1)),
                                             out);
                   }
                 },
                 [&](const drivers::Sampled& d) {
                   for (double t : d.f.t())
                     if (t > a && t < b) out.push_back(t);
                 },
             },
             v_);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<double> DrivingFunction::self_similarity() const {
  if (std::holds_alternative<drivers::Theorem14>(v_)) return 1.0 / std::sqrt(2.0);
  if (const auto* d = std::get_if<drivers::DSimilar>(&v_)) return d->d;
  if (const auto* c = std::get_if<drivers::Constant>(&v_); c && c->horizon == 1.0)
    return 1.0 / std::sqrt(2.0);
  return std::nullopt;
}

double DrivingFunction::resolved_horizon() const {
  return std::visit(overloaded{
                        [](const drivers::Theorem14& d) { return 1.0 - std::ldexp(1.0, -d.depth); },
                        [](const drivers::CompositeExample& d) {
                          return 1.0 - std::ldexp(1.0, -d.base.depth);
                        },
                        [](const drivers::DSimilar& d) {
                          return 1.0 - std::pow(d.d * d.d, d.depth);
                        },
                        [this](const auto&) { return horizon(); },
                    },
                    v_);
}

std::string DrivingFunction::describe() const {
  std::string s = std::visit(
      overloaded{
          [](const drivers::Constant& d) {
            return "const:u=" + fmt(d.u) + (d.horizon != 1.0 ? ",T=" + fmt(d.horizon) : "");
          },
          [](const drivers::SqrtForward& d) {
            return "sqrt:c=" + fmt(d.c) + (d.horizon != 1.0 ? ",T=" + fmt(d.horizon) : "");
          },
          [](const drivers::SqrtBackward& d) {
            return "backsqrt:c=" + fmt(d.c) + (d.horizon != 1.0 ? ",T=" + fmt(d.horizon) : "");
          },
          [](const drivers::Theorem14& d) {
            return "theorem14:C=" + fmt(d.C) +
                   (d.depth != 24 ? ",depth=" + std::to_string(d.depth) : "");
          },
          [](const drivers::DSimilar& d) {
            return "dsimilar:d=" + fmt(d.d) + ",knots=" + std::to_string(d.piece.t().size());
          },
          [](const drivers::CompositeExample& d) {
            return "example32:C=" + fmt(d.base.C) +
                   (d.base.depth != 24 ? ",depth=" + std::to_string(d.base.depth) : "");
          },
          [](const drivers::Sampled& d) {
            return "sampled:n=" + std::to_string(d.f.t().size());
          },
      },
      v_);
  if (offset_ != 0.0) s += ",a=" + fmt(offset_);
  return s;
}

DrivingFunction make_theorem14(double C, int depth) {
  if (!(C > 0) || !std::isfinite(C)) throw ParameterError("theorem14 driver: C must be positive");
  if (depth < 1 || depth > 60) throw ParameterError("theorem14 driver: depth must be in [1, 60]");
  return DrivingFunction(drivers::Theorem14{C, depth});
}

DrivingFunction make_d_similar(double d, const SampledFunction& piece, int depth) {
  if (!(d > 0 && d < 1)) throw ParameterError("d-similar driver: d must lie in (0, 1)");
  if (depth < 1) throw ParameterError("d-similar driver: depth must be positive");
  const double d2 = d * d;
  if (std::abs(piece.front_t() - d2) > 1e-12 || std::abs(piece.back_t() - 1.0) > 1e-12)
    throw ParameterError("d-similar driver: boundary piece must cover exactly [d^2, 1]");
  const double residual = piece(piece.front_t()) - d * piece(piece.back_t());
  const double scale = std::max(1.0, std::abs(piece(piece.back_t())));
  if (std::abs(residual) > 1e-9 * scale) {
    std::ostringstream os;
    os << "d-similar driver: V(d^2) - d V(1) = " << fmt(residual) << " violates the endpoint relation";
    throw ConstructionError(os.str(), residual);
  }
  return DrivingFunction(drivers::DSimilar{d, piece, depth});
}

DrivingFunction make_example32(const DrivingFunction& base) {
  const auto* t14 = std::get_if<drivers::Theorem14>(&base.variant());
  if (!t14 || base.offset() != 0.0)
    throw ParameterError("example32 driver: base must be an untranslated theorem14 driver");
  return DrivingFunction(drivers::CompositeExample{*t14});
}

}  // namespace loewner
