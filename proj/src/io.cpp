#include "loewner/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "loewner/errors.hpp"

namespace loewner::io {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Json complex_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

Json pairs_json(const std::vector<std::pair<double, double>>& v, const char* a, const char* b) {
  Json arr = Json::array();
  for (const auto& [x, y] : v) arr.push_back(Json{{a, x}, {b, y}});
  return arr;
}

SampledFunction sampled_from_json(const Json& arr, const char* what) {
  if (!arr.is_array()) throw ParameterError(std::string(what) + " must be an array of [t, u]");
  std::vector<double> t, u;
  for (const auto& row : arr) {
    if (!row.is_array() || row.size() != 2)
      throw ParameterError(std::string(what) + " rows must be [t, u]");
    t.push_back(row[0].get<double>());
    u.push_back(row[1].get<double>());
  }
  return SampledFunction(std::move(t), std::move(u));
}

Json sampled_to_json(const SampledFunction& f) {
  Json arr = Json::array();
  for (std::size_t i = 0; i < f.t().size(); ++i) arr.push_back(Json::array({f.t()[i], f.u()[i]}));
  return arr;
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_number(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (v.empty() || used != v.size() || !std::isfinite(x))
    throw ParameterError("invalid number for '" + key + "': '" + value + "'");
  return x;
}

DrivingFunction read_driver_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "t,u")
    throw ParameterError("driver CSV must start with the header 't,u'");
  std::vector<double> t, u;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 2)
      throw ParameterError("driver CSV row " + std::to_string(row) + ": expected two columns");
    t.push_back(parse_number("t", cells[0]));
    u.push_back(parse_number("u", cells[1]));
  }
  return DrivingFunction::sampled(std::move(t), std::move(u));
}

DrivingFunction load_driver_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open " + path.string());
  return read_driver_csv(in);
}

void write_driver_csv(std::ostream& out, const DrivingFunction& f, int n) {
  out << "t,u\n";
  if (const auto* s = std::get_if<drivers::Sampled>(&f.variant())) {
    for (std::size_t i = 0; i < s->f.t().size(); ++i)
      out << format_double(s->f.t()[i]) << ',' << format_double(f.eval(s->f.t()[i])) << '\n';
    return;
  }
  if (n < 1) throw DomainError("write_driver_csv needs n >= 1");
  const double a = f.t_begin();
  const double b = f.horizon();
  for (int i = 0; i <= n; ++i) {
    const double t = i == n ? b : a + (b - a) * i / n;
    out << format_double(t) << ',' << format_double(f.eval(t)) << '\n';
  }
}

Json driver_to_json(const DrivingFunction& f) {
  Json j;
  j["kind"] = to_string(f.kind());
  Json params = Json::object();
  for (const auto& [k, v] : f.params())
    if (k != "T") params[k] = v;
  j["params"] = params;
  j["T"] = f.horizon();
  if (const auto* s = std::get_if<drivers::Sampled>(&f.variant())) j["samples"] = sampled_to_json(s->f);
  if (const auto* d = std::get_if<drivers::DSimilar>(&f.variant())) j["piece"] = sampled_to_json(d->piece);
  return j;
}

DrivingFunction driver_from_json(const Json& j) {
  try {
    if (!j.is_object() || !j.contains("kind")) throw ParameterError("driver JSON needs a 'kind'");
    const std::string kind = j.at("kind").get<std::string>();
    const Json params = j.value("params", Json::object());
    auto num = [&](const char* key, double def) {
      return params.contains(key) ? params.at(key).get<double>() : def;
    };
    auto depth = [&] {
      const double d = num("depth", 24);
      if (d != std::floor(d)) throw ParameterError("depth must be an integer");
      return static_cast<int>(d);
    };
    const double T = j.contains("T") ? j.at("T").get<double>() : 1.0;
    const double a = num("a", 0.0);
    DrivingFunction f = [&]() -> DrivingFunction {
      if (kind == "constant") return DrivingFunction::constant(num("u", 0.0), T);
      if (kind == "sqrt_forward") return DrivingFunction::sqrt_forward(num("c", 0.0), T);
      if (kind == "sqrt_backward") return DrivingFunction::sqrt_backward(num("c", 0.0), T);
      if (kind == "theorem14") return make_theorem14(num("C", 1.0), depth());
      if (kind == "composite_example") return make_example32(make_theorem14(num("C", 1.0), depth()));
      if (kind == "d_similar") {
        if (!j.contains("piece")) throw ParameterError("d_similar driver needs a 'piece'");
        return make_d_similar(num("d", 0.5), sampled_from_json(j.at("piece"), "piece"), depth());
      }
      if (kind == "sampled") {
        if (!j.contains("samples")) throw ParameterError("sampled driver needs 'samples'");
        const auto s = sampled_from_json(j.at("samples"), "samples");
        return DrivingFunction::sampled(s.t(), s.u());
      }
      throw ParameterError("unknown driver kind '" + kind + "'");
    }();
    return a != 0.0 ? f.translated(a) : f;
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("malformed driver JSON: ") + e.what());
  }
}

DrivingFunction parse_driver_spec(const std::string& raw) {
  const std::string spec = trim(raw);
  if (spec.empty()) throw ParameterError("empty driver spec");
  if (spec.front() == '{') {
    Json j;
    try {
      j = Json::parse(spec);
    } catch (const nlohmann::json::exception& e) {
      throw ParameterError(std::string("malformed driver JSON: ") + e.what());
    }
    return driver_from_json(j);
  }
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw ParameterError("driver spec '" + spec + "' must look like kind:key=value");
  const std::string kind = spec.substr(0, colon);
  const std::string rest = spec.substr(colon + 1);
  if (kind == "file") {
    const std::filesystem::path path(rest);
    if (path.extension() == ".json") {
      try {
        return driver_from_json(Json::parse(read_file(path)));
      } catch (const nlohmann::json::exception& e) {
        throw ParameterError(std::string("malformed driver JSON: ") + e.what());
      }
    }
    return load_driver_csv(path);
  }

  std::map<std::string, double> kv;
  for (const auto& item : split(rest, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ParameterError("driver spec item '" + item + "' lacks '='");
    const std::string key = trim(item.substr(0, eq));
    kv[key] = parse_number(key, item.substr(eq + 1));
  }
  auto take = [&](const char* key, double def) {
    auto it = kv.find(key);
    if (it == kv.end()) return def;
    const double v = it->second;
    kv.erase(it);
    return v;
  };
  auto take_depth = [&] {
    const double d = take("depth", 24);
    if (d != std::floor(d)) throw ParameterError("depth must be an integer");
    return static_cast<int>(d);
  };
  const double a = take("a", 0.0);
  auto f = [&]() -> DrivingFunction {
    if (kind == "const" || kind == "constant") {
      const double u = take("u", 0.0);
      return DrivingFunction::constant(u, take("T", 1.0));
    }
    if (kind == "sqrt") {
      const double c = take("c", 0.0);
      return DrivingFunction::sqrt_forward(c, take("T", 1.0));
    }
    if (kind == "backsqrt") {
      const double c = take("c", 0.0);
      return DrivingFunction::sqrt_backward(c, take("T", 1.0));
    }
    if (kind == "theorem14") {
      const double C = take("C", 1.0);
      return make_theorem14(C, take_depth());
    }
    if (kind == "example32") {
      const double C = take("C", 1.0);
      return make_example32(make_theorem14(C, take_depth()));
    }
    throw ParameterError("unknown driver kind '" + kind + "'");
  }();
  if (!kv.empty())
    throw ParameterError("unknown parameter '" + kv.begin()->first + "' for driver kind '" + kind +
                         "'");
  return a != 0.0 ? f.translated(a) : f;
}

std::map<std::string, std::string> read_key_values(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParameterError("config line " + std::to_string(row) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    if (key.empty()) throw ParameterError("config line " + std::to_string(row) + ": empty key");
    kv[key] = value;
  }
  return kv;
}

void apply_solver_settings(std::map<std::string, std::string>& kv, SolverConfig& cfg) {
  auto take = [&](const std::string& key, auto apply) {
    auto it = kv.find(key);
    if (it == kv.end()) return;
    apply(it->second);
    kv.erase(it);
  };
  auto count = [](const std::string& key, const std::string& v) {
    const double x = parse_number(key, v);
    if (!(x >= 1) || x != std::floor(x)) throw ParameterError(key + " must be a positive integer");
    return static_cast<std::size_t>(x);
  };
  take("dt", [&](const std::string& v) { cfg.base_step = parse_number("dt", v); });
  take("base_step", [&](const std::string& v) { cfg.base_step = parse_number("base_step", v); });
  take("kappa", [&](const std::string& v) { cfg.kappa = parse_number("kappa", v); });
  take("policy", [&](const std::string& v) { cfg.policy = refinement_policy_from_string(v); });
  take("tip_offset", [&](const std::string& v) { cfg.tip_offset = parse_number("tip_offset", v); });
  take("far_field_radius",
       [&](const std::string& v) { cfg.far_field_radius = parse_number("far_field_radius", v); });
  take("min_step", [&](const std::string& v) { cfg.min_step = parse_number("min_step", v); });
  take("max_steps", [&](const std::string& v) { cfg.max_steps = count("max_steps", v); });
  take("max_trace_points",
       [&](const std::string& v) { cfg.max_trace_points = count("max_trace_points", v); });
}

void write_curve_csv(std::ostream& out, const TracedCurve& curve) {
  out << "t,re,im\n";
  for (const auto& p : curve.points)
    out << format_double(p.t) << ',' << format_double(p.z.real()) << ','
        << format_double(p.z.imag()) << '\n';
}

TracedCurve read_curve_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "t,re,im")
    throw ParameterError("curve CSV must start with the header 't,re,im'");
  TracedCurve c;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 3) throw ParameterError("curve CSV rows need three columns");
    c.points.push_back({parse_number("t", cells[0]),
                        Complex(parse_number("re", cells[1]), parse_number("im", cells[2]))});
  }
  return c;
}

void write_welding_csv(std::ostream& out, const WeldingMap& h) {
  out << "x0,y0,s\n";
  for (const auto& p : h.pairs)
    out << format_double(p.x0) << ',' << format_double(p.y0) << ',' << format_double(p.s) << '\n';
}

void write_curve_svg(std::ostream& out, const TracedCurve& curve) {
  double xmin = 0, xmax = 0, ymax = 0;
  bool first = true;
  for (const auto& p : curve.points) {
    if (first) {
      xmin = xmax = p.z.real();
      first = false;
    }
    xmin = std::min(xmin, p.z.real());
    xmax = std::max(xmax, p.z.real());
    ymax = std::max(ymax, p.z.imag());
  }
  double span = std::max({xmax - xmin, ymax, 1e-12});
  const double pad = 0.08 * span;
  const double x0 = xmin - pad;
  const double w = (xmax - xmin) + 2 * pad;
  const double h = ymax + 2 * pad;
  constexpr double kWidth = 800.0;
  const double scale = kWidth / std::max(w, h);
  const double W = w * scale;
  const double H = h * scale;
  auto sx = [&](double x) { return (x - x0) * scale; };
  auto sy = [&](double y) { return H - (y + pad) * scale; };
  char buf[128];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return std::string(buf);
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(W) << "\" height=\""
      << num(H) << "\" viewBox=\"0 0 " << num(W) << ' ' << num(H) << "\">\n";
  out << "<title>" << curve.driver << "</title>\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // Axes: the real line and a vertical axis at Re = 0 when it is in view.
  out << "<line x1=\"0\" y1=\"" << num(sy(0)) << "\" x2=\"" << num(W) << "\" y2=\"" << num(sy(0))
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  if (x0 <= 0 && 0 <= x0 + w)
    out << "<line x1=\"" << num(sx(0)) << "\" y1=\"0\" x2=\"" << num(sx(0)) << "\" y2=\""
        << num(H) << "\" stroke=\"gray\" stroke-width=\"0.5\"/>\n";
  const double tick = std::pow(10.0, std::floor(std::log10(span)));
  for (double t = std::ceil(x0 / tick) * tick; t <= x0 + w; t += tick) {
    out << "<line x1=\"" << num(sx(t)) << "\" y1=\"" << num(sy(0) - 4) << "\" x2=\"" << num(sx(t))
        << "\" y2=\"" << num(sy(0) + 4) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << num(sx(t)) << "\" y=\"" << num(std::min(H - 2, sy(0) + 16))
        << "\" font-size=\"11\" text-anchor=\"middle\">" << format_double(std::round(t / tick) * tick)
        << "</text>\n";
  }
  out << "<polyline fill=\"none\" stroke=\"navy\" stroke-width=\"1.2\" points=\"";
  for (const auto& p : curve.points) out << num(sx(p.z.real())) << ',' << num(sy(p.z.imag())) << ' ';
  out << "\"/>\n</svg>\n";
}

Json to_json(const SolverConfig& cfg) {
  return Json{{"base_step", cfg.base_step},
              {"policy", to_string(cfg.policy)},
              {"kappa", cfg.kappa},
              {"tip_offset", cfg.tip_offset},
              {"far_field_radius", cfg.far_field_radius},
              {"min_step", cfg.min_step},
              {"max_steps", cfg.max_steps},
              {"max_trace_points", cfg.max_trace_points}};
}

Json to_json(const OneSidedEstimate& e) {
  return Json{{"t0", e.t0},
              {"sup", e.sup},
              {"finest", e.finest},
              {"rungs", pairs_json(e.rungs, "h", "quotient")}};
}

Json to_json(const RegularityVerdict& v) {
  return Json{{"t0", v.t0},
              {"verdict", to_string(v.verdict)},
              {"liminf_proxy", v.liminf_proxy},
              {"limsup_proxy", v.limsup_proxy},
              {"h_range", Json::array({v.h_lo, v.h_hi})},
              {"exceeds_threshold_all_scales", v.exceeds_threshold_all_scales},
              {"margin", v.margin},
              {"rungs", pairs_json(v.rungs, "h", "quotient")}};
}

Json to_json(const HolderReport& r) {
  Json cls = Json::array();
  for (const auto& c : r.classification) cls.push_back(to_json(c));
  return Json{{"global_norm", r.global_norm},
              {"grid_size", r.grid_size},
              {"window", r.window},
              {"left_at", pairs_json(r.left_at, "t", "estimate")},
              {"right_at", pairs_json(r.right_at, "t", "estimate")},
              {"classification", cls}};
}

Json to_json(const WeldCheckReport& r) {
  Json samples = Json::array();
  for (const auto& g : r.samples) {
    Json s{{"tau", g.tau},
           {"side", to_string(g.side)},
           {"gaps", pairs_json(g.gaps, "delta", "gap")},
           {"extrapolated", g.extrapolated},
           {"floor", g.floor}};
    s["hit_delta"] = g.hit_delta ? Json(*g.hit_delta) : Json(nullptr);
    samples.push_back(s);
  }
  return Json{{"verdict", to_string(r.verdict)},
              {"epsilon_floor", r.epsilon_floor},
              {"epsilon_min", r.epsilon_min},
              {"trace_tolerance", r.trace_tolerance},
              {"amplitude", r.amplitude},
              {"samples", samples},
              {"audit", r.audit}};
}

Json to_json(const TurningReport& r) {
  return Json{{"ratio", r.ratio},
              {"pair", Json::array({r.i, r.j})},
              {"min_chord", r.min_chord},
              {"points", r.points},
              {"pairs_used", r.pairs_used},
              {"mode", to_string(r.mode)}};
}

Json to_json(const TipEstimate& t) {
  return Json{{"tip", complex_json(t.tip)},
              {"residual", t.residual},
              {"lambda", t.lambda},
              {"iterations", t.iterations}};
}

Json to_json(const HcapEstimate& h) {
  return Json{{"value", h.value},
              {"error", h.error},
              {"at_R", h.at_R},
              {"at_2R", h.at_2R},
              {"radius", h.radius},
              {"far_field_warning", h.far_field_warning}};
}

Json to_json(const LemmaReport& r) {
  Json rows = Json::array();
  for (const auto& a : r.rows)
    rows.push_back(Json{{"n", a.n},
                        {"s_n", a.s_n},
                        {"t_n", a.t_n},
                        {"upper_max", a.upper_max},
                        {"lower_min", a.lower_min},
                        {"expr_s", a.expr_s},
                        {"expr_t", a.expr_t}});
  return Json{{"all_positive", r.all_positive}, {"rows", rows}};
}

Json to_json(const CorollaryReport& r) { return Json{{"holds", r.holds}, {"audit", r.audit}}; }

Json to_json(const QuasisymmetryEstimate& q) {
  return Json{{"M", q.unbounded ? Json(nullptr) : Json(q.M)},
              {"unbounded", q.unbounded},
              {"x", q.x},
              {"t", q.t}};
}

}  // namespace loewner::io
