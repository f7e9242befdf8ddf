#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "loewner/errors.hpp"
#include "loewner/io.hpp"
#include "loewner/report.hpp"
#include "support.hpp"

using namespace loewner;

namespace {

void check_same_driver(const DrivingFunction& a, const DrivingFunction& b) {
  CHECK(a.kind() == b.kind());
  CHECK(a.t_begin() == b.t_begin());
  CHECK(a.horizon() == b.horizon());
  const double t0 = a.t_begin();
  const double t1 = a.horizon();
  for (int k = 0; k <= 64; ++k) {
    const double t = t0 + (t1 - t0) * k / 64;
    CHECK(a(t) == b(t));
  }
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("loewner_test_" + name);
}

}  // namespace

TEST_CASE("format_double round-trips") {
  auto g = testing::rng(3);
  for (int k = 0; k < 1000; ++k) {
    const double x = std::ldexp(testing::uniform(g, -1, 1), static_cast<int>(testing::uniform(g, -60, 60)));
    CHECK(io::parse_number("x", io::format_double(x)) == x);
  }
  CHECK(io::format_double(0.5) == "0.5");
  CHECK_THROWS_AS(io::parse_number("x", "1.5abc"), ParameterError);
  CHECK_THROWS_AS(io::parse_number("x", ""), ParameterError);
  CHECK_THROWS_AS(io::parse_number("x", "nan"), ParameterError);
}

TEST_CASE("driver CSV round trip is bit exact") {
  auto g = testing::rng(5);
  const auto f = testing::random_sampled(g, 200, 0.75, 1.3, 0.125);
  std::stringstream ss;
  io::write_driver_csv(ss, f);
  const auto back = io::read_driver_csv(ss);
  check_same_driver(f, back);
}

TEST_CASE("driver CSV rejects bad input") {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return io::read_driver_csv(in);
  };
  CHECK_THROWS_AS(parse("x,y\n0,0\n1,1\n"), ParameterError);
  CHECK_THROWS_AS(parse("t,u\n0,0\n1\n"), ParameterError);
  CHECK_THROWS_AS(parse("t,u\n0,0\n1,abc\n"), ParameterError);
  CHECK_THROWS_AS(parse("t,u\n0,0\n0,1\n"), LoewnerError);
  CHECK_THROWS_AS(parse("t,u\n0,0\n"), LoewnerError);
  CHECK_THROWS_AS(io::load_driver_csv("/nonexistent/driver.csv"), ParameterError);
}

TEST_CASE("driver JSON round trip") {
  auto g = testing::rng(9);
  const std::vector<DrivingFunction> fs{
      DrivingFunction::constant(0.3, 2.0),        DrivingFunction::sqrt_forward(2.0),
      DrivingFunction::sqrt_backward(5.0, 0.5),   make_theorem14(5.0, 12),
      make_example32(make_theorem14(1.0, 10)),    testing::random_sampled(g, 50, 1.0, 1.0),
      DrivingFunction::sqrt_forward(1.0).translated(0.25)};
  for (const auto& f : fs) {
    const auto j = io::driver_to_json(f);
    check_same_driver(f, io::driver_from_json(j));
    check_same_driver(f, io::parse_driver_spec(j.dump()));
  }
}

TEST_CASE("driver JSON rejects bad input") {
  CHECK_THROWS_AS(io::parse_driver_spec("{not json"), ParameterError);
  CHECK_THROWS_AS(io::parse_driver_spec(R"({"params": {}})"), ParameterError);
  CHECK_THROWS_AS(io::parse_driver_spec(R"({"kind": "spiral"})"), ParameterError);
  CHECK_THROWS_AS(io::parse_driver_spec(R"({"kind": "sampled"})"), ParameterError);
  CHECK_THROWS_AS(io::parse_driver_spec(R"({"kind": "sampled", "samples": [[0, 1, 2]]})"),
                  ParameterError);
}

TEST_CASE("inline driver specs") {
  check_same_driver(io::parse_driver_spec("const:u=0.5"), DrivingFunction::constant(0.5));
  check_same_driver(io::parse_driver_spec("constant:u=0.5,T=3"), DrivingFunction::constant(0.5, 3.0));
  check_same_driver(io::parse_driver_spec("sqrt:c=2"), DrivingFunction::sqrt_forward(2.0));
  check_same_driver(io::parse_driver_spec(" sqrt:c=2, T=0.5 "),
                    DrivingFunction::sqrt_forward(2.0, 0.5));
  check_same_driver(io::parse_driver_spec("backsqrt:c=5"), DrivingFunction::sqrt_backward(5.0));
  check_same_driver(io::parse_driver_spec("theorem14:C=5"), make_theorem14(5.0));
  check_same_driver(io::parse_driver_spec("theorem14:C=5,depth=8"), make_theorem14(5.0, 8));
  check_same_driver(io::parse_driver_spec("example32:C=5"), make_example32(make_theorem14(5.0)));
  check_same_driver(io::parse_driver_spec("sqrt:c=1,a=2"),
                    DrivingFunction::sqrt_forward(1.0).translated(2.0));

  CHECK_THROWS_AS(io::parse_driver_spec(""), ParameterError);
  CHECK_THROWS_AS(io::parse_driver_spec("sqrt"), ParameterError);
  CHECK_THROWS_AS(io::parse_driver_spec("spiral:c=1"), ParameterError);
  CHECK_THROWS_AS(io::parse_driver_spec("sqrt:k=1"), ParameterError);
  CHECK_THROWS_AS(io::parse_driver_spec("sqrt:c"), ParameterError);
  CHECK_THROWS_AS(io::parse_driver_spec("sqrt:c=x"), ParameterError);
  CHECK_THROWS_AS(io::parse_driver_spec("theorem14:C=5,depth=2.5"), ParameterError);
  CHECK_THROWS_AS(io::parse_driver_spec("file:/nonexistent.csv"), ParameterError);
}

TEST_CASE("file driver specs") {
  auto g = testing::rng(13);
  const auto f = testing::random_sampled(g, 30, 1.0, 1.0);
  const auto csv = temp_file("driver.csv");
  const auto json = temp_file("driver.json");
  {
    std::ofstream out(csv);
    io::write_driver_csv(out, f);
    std::ofstream jout(json);
    jout << io::driver_to_json(f).dump();
  }
  check_same_driver(io::parse_driver_spec("file:" + csv.string()), f);
  check_same_driver(io::parse_driver_spec("file:" + json.string()), f);
  std::filesystem::remove(csv);
  std::filesystem::remove(json);
}

TEST_CASE("config files") {
  std::istringstream in(
      "# solver\n"
      "dt = 1e-3\n"
      "kappa=0.5   # tighter\n"
      "policy = \"uniform\"\n"
      "max_trace_points = 100\n"
      "\n"
      "T = 0.5\n");
  auto kv = io::read_key_values(in);
  CHECK(kv.size() == 5);
  CHECK(kv.at("policy") == "uniform");
  SolverConfig cfg;
  io::apply_solver_settings(kv, cfg);
  CHECK(cfg.base_step == 1e-3);
  CHECK(cfg.kappa == 0.5);
  CHECK(cfg.policy == RefinementPolicy::uniform);
  CHECK(cfg.max_trace_points == 100);
  // Non-solver keys are left for the caller.
  REQUIRE(kv.size() == 1);
  CHECK(kv.at("T") == "0.5");

  std::istringstream bad("dt 1e-3\n");
  CHECK_THROWS_AS(io::read_key_values(bad), ParameterError);
  std::istringstream empty_key(" = 3\n");
  CHECK_THROWS_AS(io::read_key_values(empty_key), ParameterError);
  std::map<std::string, std::string> steps{{"max_steps", "2.5"}};
  CHECK_THROWS_AS(io::apply_solver_settings(steps, cfg), ParameterError);
  std::map<std::string, std::string> policy{{"policy", "random"}};
  CHECK_THROWS_AS(io::apply_solver_settings(policy, cfg), ParameterError);
}

TEST_CASE("curve CSV round trip is bit exact") {
  SolverConfig cfg;
  cfg.max_trace_points = 50;
  const auto curve = trace(DrivingFunction::sqrt_forward(1.5), 1.0, cfg);
  std::stringstream ss;
  io::write_curve_csv(ss, curve);
  const auto back = io::read_curve_csv(ss);
  REQUIRE(back.points.size() == curve.points.size());
  for (std::size_t k = 0; k < curve.points.size(); ++k) {
    CHECK(back.points[k].t == curve.points[k].t);
    CHECK(back.points[k].z == curve.points[k].z);
  }
  std::istringstream bad("t,x,y\n0,0,0\n");
  CHECK_THROWS_AS(io::read_curve_csv(bad), ParameterError);
}

TEST_CASE("welding CSV") {
  SolverConfig cfg;
  const auto h = welding_map(DrivingFunction::sqrt_forward(1.0), 1.0, 10, cfg);
  std::ostringstream out;
  io::write_welding_csv(out, h);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "x0,y0,s");
  int rows = 0;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string x0, y0, s;
    std::getline(row, x0, ',');
    std::getline(row, y0, ',');
    std::getline(row, s, ',');
    CHECK(io::parse_number("x0", x0) == h.pairs[rows].x0);
    CHECK(io::parse_number("s", s) == h.pairs[rows].s);
    ++rows;
  }
  CHECK(rows == 10);
}

TEST_CASE("SVG output is a well formed document") {
  SolverConfig cfg;
  cfg.max_trace_points = 40;
  const auto curve = trace(DrivingFunction::sqrt_forward(2.0), 1.0, cfg);
  std::ostringstream out;
  io::write_curve_svg(out, curve);
  const std::string svg = out.str();
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("nan") == std::string::npos);
  CHECK(svg.find("inf") == std::string::npos);
}

TEST_CASE("diagnostics report") {
  SolverConfig cfg;
  const auto f = DrivingFunction::sqrt_forward(1.0);
  const auto rep = diagnose(f, cfg);
  CHECK(rep.sections_failed == 0);
  for (const char* s : {"holder", "trace", "weld", "turning", "cone", "hcap"}) {
    REQUIRE(rep.json.contains(s));
    CHECK(rep.json[s]["status"] == "ok");
  }
  CHECK(rep.json["weld"]["verdict"] == "welded");
  CHECK(rep.json["hcap"]["expected"] == 2.0);
  CHECK(!rep.json.contains("tip"));
  // Deterministic to the last digit.
  CHECK(diagnose(f, cfg).json.dump() == rep.json.dump());
}

TEST_CASE("diagnostics report records section failures") {
  SolverConfig cfg;
  cfg.max_steps = 10;
  const auto rep = diagnose(DrivingFunction::sqrt_forward(1.0), cfg);
  CHECK(rep.sections_failed > 0);
  CHECK(rep.json["trace"]["status"] == "error");
  CHECK(rep.json["trace"]["message"].get<std::string>().size() > 0);
}
