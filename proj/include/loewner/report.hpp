#pragma once

#include <string>

#include "loewner/driving.hpp"
#include "loewner/io.hpp"
#include "loewner/loewner.hpp"

namespace loewner {

inline constexpr const char* kVersion = "1.0.0";

struct DiagnoseOptions {
  /// Horizon for tracing and welding; 0 selects the driver's resolved horizon.
  double T = 0.0;
  int holder_grid = 1025;
};

struct DiagnosticsReport {
  io::Json json;
  int sections_ok = 0;
  int sections_failed = 0;
};

/// Hölder analysis, weld check, trace metadata, turning ratio, cone angle,
/// capacity and (for self-similar drivers) the tip. Each section carries a
/// "status" of "ok" or "error" and the resolution it was computed at.
DiagnosticsReport diagnose(const DrivingFunction& f, const SolverConfig& cfg,
                           const DiagnoseOptions& opt = {});

}  // namespace loewner
