#include <doctest.h>

#include <cmath>
#include <numbers>

#include "loewner/driving.hpp"
#include "loewner/errors.hpp"
#include "support.hpp"

using namespace loewner;

namespace {

// Zigzag through its defining nodes, interpolated independently of the
// library's closed form.
double zigzag_oracle(double C, double t) {
  if (t >= 1.0) return 0.0;
  for (int n = 0; n < 60; ++n) {
    const double r0 = 1.0 - std::ldexp(1.0, -n);
    const double r1 = 1.0 - std::ldexp(1.0, -(n + 1));
    const double w = 1.0 - 3.0 * std::ldexp(1.0, -(n + 2));
    const double peak = C * std::sqrt(3.0 / std::ldexp(1.0, n + 2));
    if (t <= w) return peak * (t - r0) / (w - r0);
    if (t <= r1) return peak * (r1 - t) / (r1 - w);
  }
  return 0.0;
}

}  // namespace

TEST_CASE("closed-form drivers evaluate exactly") {
  CHECK(DrivingFunction::sqrt_forward(2.0).eval(0.25) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(DrivingFunction::sqrt_backward(5.0).eval(0.75) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(DrivingFunction::constant(1.5).eval(0.3) == 1.5);

  const auto u = make_theorem14(5.0);
  CHECK(u.eval(0.25) == doctest::Approx(5.0 * std::sqrt(0.75)).epsilon(1e-14));
  CHECK(u.eval(0.625) == doctest::Approx(5.0 * std::sqrt(3.0 / 8.0)).epsilon(1e-14));
  CHECK(u.eval(1.0) == 0.0);
  for (int n = 0; n <= 10; ++n) CHECK(u.eval(1.0 - std::ldexp(1.0, -n)) == 0.0);
  for (double C : {0.5, 1.0, 7.0}) CHECK(make_theorem14(C).eval(1.0) == 0.0);
}

TEST_CASE("theorem14 peaks sit at w_n") {
  const double C = 5.0;
  const auto u = make_theorem14(C);
  for (int n = 0; n <= 20; ++n) {
    const double w = 1.0 - 3.0 * std::ldexp(1.0, -(n + 2));
    CHECK(u.eval(w) == doctest::Approx(C * std::sqrt(3.0 / std::ldexp(1.0, n + 2))).epsilon(1e-12));
  }
}

TEST_CASE("theorem14 matches the node interpolation oracle") {
  auto g = testing::rng(11);
  for (double C : {1.0, 5.0, 10.0}) {
    const auto u = make_theorem14(C);
    for (int i = 0; i < 2000; ++i) {
      const double t = testing::uniform(g, 0.0, 1.0);
      CHECK(u.eval(t) == doctest::Approx(zigzag_oracle(C, t)).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("theorem14 self-similarity U(t/2 + 1/2) = U(t)/sqrt(2)") {
  auto g = testing::rng(12);
  const auto u = make_theorem14(5.0);
  for (int i = 0; i < 5000; ++i) {
    const double t = testing::uniform(g, 0.0, 1.0);
    CHECK(std::abs(u.eval(0.5 * t + 0.5) - u.eval(t) / std::sqrt(2.0)) < 1e-12);
  }
  CHECK(u.self_similarity().value() == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("domain and parameter errors") {
  const auto u = make_theorem14(5.0);
  CHECK_THROWS_AS(u.eval(-0.1), DomainError);
  CHECK_THROWS_AS(u.eval(1.1), DomainError);
  CHECK_THROWS_AS(DrivingFunction::sqrt_forward(1.0, 2.0).eval(2.5), DomainError);
  CHECK_NOTHROW(u.eval(1.0 + 1e-13));
  CHECK_THROWS_AS(make_theorem14(0.0), ParameterError);
  CHECK_THROWS_AS(make_theorem14(-1.0), ParameterError);
  CHECK_THROWS_AS(make_theorem14(1.0, 0), ParameterError);
  CHECK_THROWS_AS(DrivingFunction::constant(0.0, 0.0), ParameterError);
}

TEST_CASE("sampled drivers interpolate linearly and reject bad grids") {
  const auto f = DrivingFunction::sampled({0.0, 0.5, 1.0}, {0.0, 1.0, -1.0});
  CHECK(f.eval(0.25) == doctest::Approx(0.5));
  CHECK(f.eval(0.75) == doctest::Approx(0.0));
  CHECK(f.eval(1.0) == -1.0);
  CHECK(f.kind() == DriverKind::sampled);
  CHECK(f.breakpoints(0.0, 1.0) == std::vector<double>{0.5});
  CHECK_THROWS_AS(DrivingFunction::sampled({0.0, 0.5, 0.5}, {0, 1, 2}), ParameterError);
  CHECK_THROWS_AS(DrivingFunction::sampled({0.0, 0.6, 0.5}, {0, 1, 2}), ParameterError);
  CHECK_THROWS_AS(DrivingFunction::sampled({0.0}, {0}), ParameterError);
  CHECK_THROWS_AS(DrivingFunction::sampled({0.0, 1.0}, {0}), ParameterError);

  const auto shifted = DrivingFunction::sampled({0.3, 0.8, 1.3}, {0.0, 1.0, -1.0});
  CHECK(shifted.t_begin() == 0.3);
  CHECK(shifted.eval(0.55) == doctest::Approx(0.5));
  CHECK_THROWS_AS(shifted.eval(0.2), DomainError);
}

TEST_CASE("translation adds a level offset") {
  const auto u = make_theorem14(2.0).translated(0.7);
  CHECK(u.eval(0.25) == doctest::Approx(2.0 * std::sqrt(0.75) + 0.7));
  CHECK(u.eval(1.0) == doctest::Approx(0.7));
  CHECK(u.params().at("a") == 0.7);
  CHECK(u.describe() == "theorem14:C=2,a=0.7");
}

TEST_CASE("breakpoints of theorem14 are the nodes r_n and w_n") {
  const auto u = make_theorem14(1.0, 6);
  const auto b = u.breakpoints(0.0, 1.0);
  for (int n = 1; n <= 6; ++n)
    CHECK(std::find(b.begin(), b.end(), 1.0 - std::ldexp(1.0, -n)) != b.end());
  for (int n = 0; n < 6; ++n)
    CHECK(std::find(b.begin(), b.end(), 1.0 - 3.0 * std::ldexp(1.0, -(n + 2))) != b.end());
  CHECK(std::is_sorted(b.begin(), b.end()));
  CHECK(u.resolved_horizon() == 1.0 - std::ldexp(1.0, -6));
}

TEST_CASE("d-similar driver with the theorem14 piece reproduces theorem14") {
  const double C = 5.0;
  const double d = 1.0 / std::sqrt(2.0);
  // V(s) = U(1 - s) on [1/2, 1]: the level-0 tent.
  const SampledFunction piece({0.5, 0.75, 1.0}, {0.0, C * std::sqrt(0.75), 0.0});
  const auto v = make_d_similar(d, piece);
  const auto u = make_theorem14(C);
  double worst = 0.0;
  for (int i = 0; i <= 10000; ++i) {
    const double t = i / 10000.0;
    worst = std::max(worst, std::abs(v.eval(t) - u.eval(t)));
  }
  CHECK(worst < 1e-12);
  CHECK(v.self_similarity().value() == doctest::Approx(d));
}

TEST_CASE("d-similar extension of 2 sqrt(s) with d = 1/2") {
  std::vector<double> s, val;
  for (int i = 0; i <= 4096; ++i) {
    s.push_back(0.25 + 0.75 * i / 4096);
    val.push_back(2.0 * std::sqrt(s.back()));
  }
  s.back() = 1.0;
  const auto u = make_d_similar(0.5, SampledFunction(s, val));
  auto g = testing::rng(13);
  for (int i = 0; i < 2000; ++i) {
    const double t = testing::uniform(g, 1e-10, 0.25);
    // Exact self-similarity of the extension.
    CHECK(std::abs(0.5 * u.eval(1.0 - t / 0.25) - u.eval(1.0 - t)) < 1e-12);
    // And agreement with the closed form up to interpolation error.
    CHECK(std::abs(u.eval(1.0 - t) - 2.0 * std::sqrt(t)) < 1e-6);
  }
  CHECK(u.eval(1.0) == 0.0);
}

TEST_CASE("d-similar: zero piece, bad endpoint relation") {
  const auto zero = make_d_similar(0.6, SampledFunction({0.36, 1.0}, {0.0, 0.0}));
  for (double t : {0.0, 0.3, 0.9, 0.999999, 1.0}) CHECK(zero.eval(t) == 0.0);

  try {
    make_d_similar(0.5, SampledFunction({0.25, 1.0}, {1.0, 1.0}));
    FAIL("expected a construction error");
  } catch (const ConstructionError& e) {
    CHECK(e.residual() == doctest::Approx(0.5));
  }
  CHECK_THROWS_AS(make_d_similar(1.5, SampledFunction({0.25, 1.0}, {0.0, 0.0})), ParameterError);
  CHECK_THROWS_AS(make_d_similar(0.5, SampledFunction({0.3, 1.0}, {0.0, 0.0})), ParameterError);
}

TEST_CASE("example32 driver") {
  const auto base = make_theorem14(5.0);
  const auto v = make_example32(base);
  CHECK(v.eval(0.0) == 0.0);
  CHECK(v.eval(1.0) == 0.0);
  for (int n = 0; n <= 8; ++n) CHECK(std::abs(v.eval(1.0 - std::ldexp(1.0, -n))) < 1e-12);

  // Continuity at the joints: the two one-sided formulas meet.
  for (int n = 1; n <= 8; ++n) {
    const double j = 1.0 - std::ldexp(1.0, -n);
    const double left = base.eval(std::min(1.0, (j - (1.0 - std::ldexp(1.0, -(n - 1)))) *
                                                    std::ldexp(1.0, n))) /
                        std::sqrt(std::ldexp(1.0, n - 1));
    const double right = base.eval(0.0) / std::sqrt(std::ldexp(1.0, n));
    CHECK(std::abs(left - right) < 1e-12);
    // Near a joint the driver is Hölder-1/2 with constant C sqrt(6).
    for (double h : {1e-4, 1e-8, 1e-12}) {
      CHECK(std::abs(v.eval(j - h)) <= 5.0 * std::sqrt(6.0 * h) * (1 + 1e-9));
      CHECK(std::abs(v.eval(j + h)) <= 5.0 * std::sqrt(6.0 * h) * (1 + 1e-9));
    }
  }

  // On [0, 1/2] the driver is the base run at double speed.
  auto g = testing::rng(14);
  for (int i = 0; i < 2000; ++i) {
    const double t = testing::uniform(g, 0.0, 0.5);
    CHECK(std::abs(v.eval(t) - base.eval(2.0 * t)) < 1e-12);
  }
  // Generic segment n against the displayed formula.
  for (int i = 0; i < 2000; ++i) {
    const int n = static_cast<int>(testing::uniform(g, 0.0, 9.0));
    const double lo = 1.0 - std::ldexp(1.0, -n);
    const double t = lo + testing::uniform(g, 0.0, 1.0) * std::ldexp(1.0, -(n + 1));
    const double expect = base.eval(std::min(1.0, (t - lo) * std::ldexp(1.0, n + 1))) /
                          std::sqrt(std::ldexp(1.0, n));
    CHECK(std::abs(v.eval(t) - expect) < 1e-10);
  }
  CHECK_THROWS_AS(make_example32(DrivingFunction::constant(0.0)), ParameterError);
}

TEST_CASE("describe gives the inline spec") {
  CHECK(make_theorem14(5.0).describe() == "theorem14:C=5");
  CHECK(DrivingFunction::sqrt_forward(2.0).describe() == "sqrt:c=2");
  CHECK(DrivingFunction::sqrt_backward(5.0).describe() == "backsqrt:c=5");
  CHECK(DrivingFunction::constant(0.0).describe() == "const:u=0");
  CHECK(make_example32(make_theorem14(5.0)).describe() == "example32:C=5");
  CHECK(DrivingFunction::sqrt_forward(0.1, 0.5).describe() == "sqrt:c=0.1,T=0.5");
  CHECK(make_theorem14(3.0, 12).describe() == "theorem14:C=3,depth=12");
}
