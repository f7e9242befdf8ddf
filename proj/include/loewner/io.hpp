#pragma once

// Text formats: driver CSV and JSON descriptors, inline driver specs,
// key = value config files, curve and welding CSV, SVG plots, and JSON
// serialization of the reports.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include <json.hpp>

#include "loewner/driving.hpp"
#include "loewner/geometry.hpp"
#include "loewner/holder.hpp"
#include "loewner/loewner.hpp"
#include "loewner/welding.hpp"

namespace loewner::io {

using Json = nlohmann::ordered_json;

/// CSV with header `t,u`; strictly increasing t.
DrivingFunction read_driver_csv(std::istream& in);
DrivingFunction load_driver_csv(const std::filesystem::path& path);
/// Sampled drivers write their knots; others n + 1 evenly spaced samples.
void write_driver_csv(std::ostream& out, const DrivingFunction& f, int n = 1024);

/// {"kind": ..., "params": {...}, "T": ...}; sampled drivers add "samples"
/// as [[t, u], ...] and d-similar drivers add "piece".
Json driver_to_json(const DrivingFunction& f);
DrivingFunction driver_from_json(const Json& j);

/// Inline spec ("theorem14:C=5", "sqrt:c=2,T=0.5", "backsqrt:c=5",
/// "const:u=0", "example32:C=5", "file:driver.csv", "file:driver.json"),
/// or a JSON descriptor given verbatim. Throws ParameterError.
DrivingFunction parse_driver_spec(const std::string& spec);

/// `key = value` lines; '#' starts a comment. Throws ParameterError on
/// malformed lines.
std::map<std::string, std::string> read_key_values(std::istream& in);
/// Applies and removes the solver keys (dt or base_step, kappa, policy,
/// tip_offset, far_field_radius, min_step, max_steps, max_trace_points).
void apply_solver_settings(std::map<std::string, std::string>& kv, SolverConfig& cfg);
double parse_number(const std::string& key, const std::string& value);

/// %.17g, shortest form that round-trips.
std::string format_double(double x);

/// Header `t,re,im`.
void write_curve_csv(std::ostream& out, const TracedCurve& curve);
TracedCurve read_curve_csv(std::istream& in);
/// Header `x0,y0,s`.
void write_welding_csv(std::ostream& out, const WeldingMap& h);
/// Polyline of the curve over the real axis, with axes and ticks.
void write_curve_svg(std::ostream& out, const TracedCurve& curve);

Json to_json(const SolverConfig& cfg);
Json to_json(const OneSidedEstimate& e);
Json to_json(const RegularityVerdict& v);
Json to_json(const HolderReport& r);
Json to_json(const WeldCheckReport& r);
Json to_json(const TurningReport& r);
Json to_json(const TipEstimate& t);
Json to_json(const HcapEstimate& h);
Json to_json(const LemmaReport& r);
Json to_json(const CorollaryReport& r);
Json to_json(const QuasisymmetryEstimate& q);

}  // namespace loewner::io
