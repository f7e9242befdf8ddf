#pragma once

// Driving functions U : [t_begin, T] -> R for the chordal Loewner equation.
//
// Every driver is an immutable value; evaluation is pure. Closed-form kinds
// are evaluated exactly, sampled drivers by linear interpolation.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace loewner {

enum class DriverKind {
  constant,
  sqrt_forward,
  sqrt_backward,
  theorem14,
  d_similar,
  composite_example,
  sampled,
};

std::string to_string(DriverKind kind);

/// Piecewise-linear function through strictly increasing knots.
class SampledFunction {
 public:
  SampledFunction(std::vector<double> t, std::vector<double> u);

  double operator()(double t) const;
  double front_t() const { return data_->t.front(); }
  double back_t() const { return data_->t.back(); }
  const std::vector<double>& t() const { return data_->t; }
  const std::vector<double>& u() const { return data_->u; }

 private:
  struct Data {
    std::vector<double> t;
    std::vector<double> u;
  };
  std::shared_ptr<const Data> data_;
};

namespace drivers {

struct Constant {
  double u = 0.0;
  double horizon = 1.0;
};

/// U(t) = c * sqrt(t): a straight ray at angle phi(c).
struct SqrtForward {
  double c = 0.0;
  double horizon = 1.0;
};

/// U(t) = c * sqrt(T - t).
struct SqrtBackward {
  double c = 0.0;
  double horizon = 1.0;
};

/// Zigzag on [0,1]: zero at r_n = 1 - 2^-n, peak C*sqrt(3/2^(n+2)) at
/// w_n = 1 - 3*2^-(n+2), linear in between, U(1) = 0.
struct Theorem14 {
  double C = 1.0;
  int depth = 24;
};

/// U(1-s) = V(s) with d*V(s/d^2) = V(s); V given on [d^2, 1].
struct DSimilar {
  double d = 0.5;
  SampledFunction piece;
  int depth = 24;
};

/// Copies of a Theorem14 driver glued on the dyadic intervals
/// [1 - 2^-n, 1 - 2^-(n+1)], each rescaled to keep the Loewner scaling.
struct CompositeExample {
  Theorem14 base;
};

struct Sampled {
  SampledFunction f;
};

}  // namespace drivers

class DrivingFunction {
 public:
  using Variant = std::variant<drivers::Constant, drivers::SqrtForward, drivers::SqrtBackward,
                               drivers::Theorem14, drivers::DSimilar,
                               drivers::CompositeExample, drivers::Sampled>;

  explicit DrivingFunction(Variant v, double offset = 0.0);

  static DrivingFunction constant(double u, double horizon = 1.0);
  static DrivingFunction sqrt_forward(double c, double horizon = 1.0);
  static DrivingFunction sqrt_backward(double c, double horizon = 1.0);
  static DrivingFunction sampled(std::vector<double> t, std::vector<double> u);

  /// Throws DomainError when t lies outside [t_begin, horizon].
  double eval(double t) const;
  double operator()(double t) const { return eval(t); }

  DriverKind kind() const;
  double t_begin() const;
  double horizon() const;
  /// Additive level offset a: the driver evaluates to U(t) + a.
  double offset() const { return offset_; }
  DrivingFunction translated(double a) const { return DrivingFunction(v_, offset_ + a); }

  /// Kind-specific parameters, in a stable order.
  std::map<std::string, double> params() const;

  /// Kinks of the driver inside (a, b), sorted. Closed-form drivers offer
  /// them down to their configured depth only.
  std::vector<double> breakpoints(double a, double b) const;

  /// Ratio d of the self-similarity U(1 - d^2 + t) - U(1) = d (U(t/d^2) - U(1))
  /// on [0, d^2], when the driver has one.
  std::optional<double> self_similarity() const;

  /// Latest time up to which the breakpoints resolve the driver.
  double resolved_horizon() const;

  /// Inline spec string such as "theorem14:C=5".
  std::string describe() const;

  const Variant& variant() const { return v_; }

 private:
  double eval_raw(double t) const;

  Variant v_;
  double offset_ = 0.0;
};

DrivingFunction make_theorem14(double C, int depth = 24);

/// Extends V on [d^2, 1] to all of [0, 1] by d*V(s/d^2) = V(s) and returns
/// U(t) = V(1 - t). Throws ConstructionError when V(d^2) != d V(1).
DrivingFunction make_d_similar(double d, const SampledFunction& piece, int depth = 24);

/// V(t) = U((t - (1 - 2^-n)) 2^(n+1)) / sqrt(2^n) on [1 - 2^-n, 1 - 2^-(n+1)].
DrivingFunction make_example32(const DrivingFunction& base);

/// Closed-form value of the zigzag driver, U(1) = 0.
double theorem14_value(double C, double t);

}  // namespace loewner
