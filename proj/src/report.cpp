#include "loewner/report.hpp"

#include <functional>

#include "loewner/errors.hpp"
#include "loewner/geometry.hpp"
#include "loewner/holder.hpp"
#include "loewner/welding.hpp"

namespace loewner {

DiagnosticsReport diagnose(const DrivingFunction& f, const SolverConfig& cfg,
                           const DiagnoseOptions& opt) {
  cfg.validate();
  const double T = opt.T > 0 ? opt.T : f.resolved_horizon() - f.t_begin();
  DiagnosticsReport rep;
  io::Json& j = rep.json;
  j["version"] = kVersion;
  j["driver"] = io::driver_to_json(f);
  j["descriptor"] = f.describe();
  j["T"] = T;
  j["config"] = io::to_json(cfg);

  auto section = [&](const char* name, const std::function<io::Json()>& body) {
    io::Json s;
    try {
      s = body();
      s["status"] = "ok";
      ++rep.sections_ok;
    } catch (const std::exception& e) {
      s = io::Json{{"status", "error"}, {"message", e.what()}};
      ++rep.sections_failed;
    }
    j[name] = s;
  };

  section("holder", [&] {
    std::vector<double> times;
    const double a = f.t_begin();
    const double b = f.horizon();
    for (int k = 0; k <= 4; ++k) times.push_back(k == 4 ? b : a + (b - a) * k / 4);
    io::Json s = io::to_json(holder_report(f, times, opt.holder_grid));
    s["left_at_horizon"] = holder_left_at(f, b).sup;
    return s;
  });

  std::optional<TracedCurve> curve;
  section("trace", [&] {
    curve = trace(f, T, cfg);
    curve->tolerance = curve_tolerance(f, T, cfg);
    const Complex tip = curve->points.back().z;
    return io::Json{{"steps", curve->steps},
                    {"points", curve->points.size()},
                    {"tolerance", curve->tolerance},
                    {"base", io::Json{{"re", curve->points.front().z.real()},
                                      {"im", curve->points.front().z.imag()}}},
                    {"tip", io::Json{{"re", tip.real()}, {"im", tip.imag()}}}};
  });

  section("weld", [&] {
    io::Json s = io::to_json(is_welded(f, T, cfg));
    s["T"] = T;
    return s;
  });

  section("turning", [&] {
    if (!curve) throw LoewnerError("no traced curve");
    return io::to_json(bounded_turning(*curve));
  });

  section("cone", [&] {
    if (!curve) throw LoewnerError("no traced curve");
    return io::Json{{"angle", cone_angle(*curve)}};
  });

  section("hcap", [&] {
    io::Json s = io::to_json(hcap_estimate(f, T, cfg));
    s["expected"] = 2.0 * T;
    return s;
  });

  if (f.self_similarity() && f.t_begin() == 0.0 && f.horizon() == 1.0)
    section("tip", [&] { return io::to_json(tip_fixed_point(f, cfg)); });

  j["sections"] = io::Json{{"ok", rep.sections_ok}, {"failed", rep.sections_failed}};
  return rep;
}

}  // namespace loewner
