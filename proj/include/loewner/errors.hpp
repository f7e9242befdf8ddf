#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace loewner {

/// Base of every error raised by the library.
class LoewnerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of an operation (e.g. t outside [0,T]).
class DomainError : public LoewnerError {
 public:
  using LoewnerError::LoewnerError;
};

/// Invalid construction parameter (e.g. C <= 0).
class ParameterError : public LoewnerError {
 public:
  using LoewnerError::LoewnerError;
};

/// A computation would need more resolution than doubles or the step budget allow.
class ResolutionError : public LoewnerError {
 public:
  using LoewnerError::LoewnerError;
};

/// A constructed object violates its defining relation; carries the residual.
class ConstructionError : public LoewnerError {
 public:
  ConstructionError(const std::string& what, double residual)
      : LoewnerError(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Forward map: the point was absorbed by the hull at the given step.
class SwallowedError : public LoewnerError {
 public:
  SwallowedError(const std::string& what, std::size_t step)
      : LoewnerError(what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// Inverse map: a real boundary point lies on the hull at the given reverse step.
class OnHullError : public LoewnerError {
 public:
  OnHullError(const std::string& what, std::size_t step)
      : LoewnerError(what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// Monotonicity of a welding computation was violated numerically.
class InconsistencyError : public LoewnerError {
 public:
  InconsistencyError(const std::string& what, double hit_time)
      : LoewnerError(what), hit_time_(hit_time) {}
  double hit_time() const noexcept { return hit_time_; }

 private:
  double hit_time_;
};

/// Every candidate pair of a curve was excluded.
class DegenerateCurveError : public LoewnerError {
 public:
  using LoewnerError::LoewnerError;
};

/// Fixed-point iteration for the self-similar tip failed.
class TipError : public LoewnerError {
 public:
  enum class Reason { left_half_plane, divergence };
  TipError(const std::string& what, Reason reason)
      : LoewnerError(what), reason_(reason) {}
  Reason reason() const noexcept { return reason_; }

 private:
  Reason reason_;
};

}  // namespace loewner
