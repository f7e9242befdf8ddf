// loewner: trace, weld and diagnose chordal Loewner hulls from the command line.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "loewner/errors.hpp"
#include "loewner/geometry.hpp"
#include "loewner/io.hpp"
#include "loewner/report.hpp"
#include "loewner/welding.hpp"

namespace {

using namespace loewner;

enum Exit { kOk = 0, kFailure = 1, kInvalid = 2, kResolution = 3, kNotWelded = 4, kInconclusive = 5 };

struct Common {
  std::string spec;
  std::optional<double> T;
  std::optional<double> dt;
  std::optional<double> kappa;
  std::optional<std::string> config;
  std::vector<std::string> out;
};

struct Settings {
  DrivingFunction f;
  SolverConfig cfg;
  double T;
  std::map<std::string, std::string> extra;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("driver", c.spec,
                  "Driver spec: theorem14:C=5, sqrt:c=2, backsqrt:c=5, const:u=0, example32:C=5, "
                  "file:driver.csv, file:driver.json or a JSON descriptor")
      ->required();
  cmd->add_option("--T", c.T, "Horizon (default: the driver's resolved horizon)");
  cmd->add_option("--dt", c.dt, "Base step");
  cmd->add_option("--kappa", c.kappa, "Adaptive cap on |dU|/sqrt(dt)");
  cmd->add_option("--config", c.config, "key = value config file");
  cmd->add_option("--out", c.out, "Output file; repeatable, format from the extension");
}

Settings resolve(const Common& c) {
  Settings s{io::parse_driver_spec(c.spec), SolverConfig{}, 0.0, {}};
  if (c.config) {
    std::ifstream in(*c.config);
    if (!in) throw ParameterError("cannot open config file " + *c.config);
    s.extra = io::read_key_values(in);
    io::apply_solver_settings(s.extra, s.cfg);
  }
  if (c.dt) s.cfg.base_step = *c.dt;
  if (c.kappa) s.cfg.kappa = *c.kappa;
  s.cfg.validate();
  s.T = s.f.resolved_horizon() - s.f.t_begin();
  if (auto it = s.extra.find("T"); it != s.extra.end()) {
    s.T = io::parse_number("T", it->second);
    s.extra.erase(it);
  }
  if (c.T) s.T = *c.T;
  if (!(s.T > 0)) throw ParameterError("horizon T must be positive");
  return s;
}

std::string extension(const std::string& path) {
  const auto dot = path.rfind('.');
  return dot == std::string::npos ? "" : path.substr(dot);
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  body(out);
  if (!out) throw std::runtime_error("error writing " + path);
}

void write_json(std::ostream& out, const io::Json& j) { out << j.dump(2) << '\n'; }

int run_trace(const Common& c) {
  const Settings s = resolve(c);
  if (!s.extra.empty()) throw ParameterError("unknown config key '" + s.extra.begin()->first + "'");
  TracedCurve curve = trace(s.f, s.T, s.cfg);
  if (c.out.empty()) {
    io::write_curve_csv(std::cout, curve);
    return kOk;
  }
  for (const auto& path : c.out) {
    const std::string ext = extension(path);
    if (ext == ".csv") {
      write_file(path, [&](std::ostream& o) { io::write_curve_csv(o, curve); });
    } else if (ext == ".svg") {
      write_file(path, [&](std::ostream& o) { io::write_curve_svg(o, curve); });
    } else if (ext == ".json") {
      const Complex tip = curve.points.back().z;
      io::Json j{{"version", kVersion},
                 {"driver", io::driver_to_json(s.f)},
                 {"descriptor", s.f.describe()},
                 {"T", s.T},
                 {"config", io::to_json(s.cfg)},
                 {"steps", curve.steps},
                 {"points", curve.points.size()},
                 {"tip", io::Json{{"re", tip.real()}, {"im", tip.imag()}}}};
      write_file(path, [&](std::ostream& o) { write_json(o, j); });
    } else {
      throw ParameterError("trace: unsupported output '" + path + "' (use .csv, .svg or .json)");
    }
  }
  return kOk;
}

int run_weld(const Common& c, std::optional<int> pairs_flag) {
  Settings s = resolve(c);
  int pairs = 50;
  if (auto it = s.extra.find("pairs"); it != s.extra.end()) {
    pairs = static_cast<int>(io::parse_number("pairs", it->second));
    s.extra.erase(it);
  }
  if (pairs_flag) pairs = *pairs_flag;
  if (!s.extra.empty()) throw ParameterError("unknown config key '" + s.extra.begin()->first + "'");
  if (pairs < 1) throw ParameterError("--pairs must be positive");

  const WeldingMap h = welding_map(discretize(s.f, s.T, s.cfg), hit_time_ladder(s.T, pairs), false);
  const WeldCheckReport rep = is_welded(s.f, s.T, s.cfg);
  io::Json j{{"version", kVersion},
             {"driver", io::driver_to_json(s.f)},
             {"descriptor", s.f.describe()},
             {"T", s.T},
             {"config", io::to_json(s.cfg)},
             {"pairs", h.pairs.size()},
             {"domain", io::Json::array({h.a, h.b})},
             {"u_T", h.u_T}};
  io::Json failures = io::Json::array();
  for (const auto& [hs, msg] : h.failures) failures.push_back(io::Json{{"s", hs}, {"message", msg}});
  j["failures"] = failures;
  j["check"] = io::to_json(rep);

  if (c.out.empty()) {
    write_json(std::cout, j);
  }
  for (const auto& path : c.out) {
    const std::string ext = extension(path);
    if (ext == ".csv")
      write_file(path, [&](std::ostream& o) { io::write_welding_csv(o, h); });
    else if (ext == ".json")
      write_file(path, [&](std::ostream& o) { write_json(o, j); });
    else
      throw ParameterError("weld: unsupported output '" + path + "' (use .csv or .json)");
  }
  switch (rep.verdict) {
    case WeldVerdict::welded: return kOk;
    case WeldVerdict::not_welded: return kNotWelded;
    case WeldVerdict::inconclusive: return kInconclusive;
  }
  return kFailure;
}

int run_diagnose(const Common& c) {
  const Settings s = resolve(c);
  if (!s.extra.empty()) throw ParameterError("unknown config key '" + s.extra.begin()->first + "'");
  const DiagnosticsReport rep = diagnose(s.f, s.cfg, DiagnoseOptions{s.T});
  if (c.out.empty()) write_json(std::cout, rep.json);
  for (const auto& path : c.out) {
    if (extension(path) != ".json")
      throw ParameterError("diagnose: unsupported output '" + path + "' (use .json)");
    write_file(path, [&](std::ostream& o) { write_json(o, rep.json); });
  }
  return rep.sections_ok > 0 ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chordal Loewner hulls: trace, weld and diagnose driving functions"};
  app.set_version_flag("--version", std::string(loewner::kVersion));
  app.require_subcommand(1);

  Common trace_opts, weld_opts, diag_opts;
  std::optional<int> pairs;
  auto* trace_cmd = app.add_subcommand("trace", "Trace the hull curve to CSV/SVG");
  add_common(trace_cmd, trace_opts);
  auto* weld_cmd = app.add_subcommand("weld", "Welding map and weld check");
  add_common(weld_cmd, weld_opts);
  weld_cmd->add_option("--pairs", pairs, "Number of welding pairs (default 50)");
  auto* diag_cmd = app.add_subcommand("diagnose", "Full diagnostics report as JSON");
  add_common(diag_cmd, diag_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  try {
    if (*trace_cmd) return run_trace(trace_opts);
    if (*weld_cmd) return run_weld(weld_opts, pairs);
    if (*diag_cmd) return run_diagnose(diag_opts);
  } catch (const loewner::ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const loewner::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const loewner::LoewnerError& e) {
    std::cerr << "resolution failure: " << e.what() << '\n';
    return kResolution;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}
