// Copyright 2026 The rpm-dilation Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "rpm/experiment.hpp"

using namespace rpm;

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("rpm_test_" + name);
}

ExperimentConfig parse_text(const std::string& text,
                            const std::vector<ConfigOverride>& overrides = {}) {
  std::istringstream in(text);
  return parse_config(in, "test.cfg", overrides);
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an rpm::Error");
  return ErrorKind::ValidationError;
}

std::vector<std::vector<std::string>> read_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

// Minimal well-formedness check: balanced tags, quoted attributes, one root.
bool well_formed_xml(const std::string& s) {
  std::vector<std::string> stack;
  std::size_t i = 0;
  int roots = 0;
  while (i < s.size()) {
    if (s[i] != '<') {
      if (stack.empty() && !std::isspace(static_cast<unsigned char>(s[i]))) return false;
      ++i;
      continue;
    }
    const std::size_t close = s.find('>', i);
    if (close == std::string::npos) return false;
    std::string tag = s.substr(i + 1, close - i - 1);
    i = close + 1;
    if (tag.starts_with("?")) continue;
    if (tag.starts_with("/")) {
      if (stack.empty() || stack.back() != tag.substr(1)) return false;
      stack.pop_back();
      continue;
    }
    if (std::count(tag.begin(), tag.end(), '"') % 2 != 0) return false;
    const bool self_closing = tag.ends_with("/");
    const std::string name = tag.substr(0, tag.find_first_of(" /"));
    if (name.empty()) return false;
    if (stack.empty()) ++roots;
    if (!self_closing) stack.push_back(name);
  }
  return stack.empty() && roots == 1;
}

std::size_t count_of(const std::string& haystack, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string::npos;
       pos = haystack.find(needle, pos + 1)) {
    ++n;
  }
  return n;
}

ExperimentConfig small_config(std::vector<double> grid) {
  ExperimentConfig cfg = default_config();
  cfg.theta_grid = std::move(grid);
  return cfg;
}

}  // namespace

TEST_CASE("parse_config defaults") {
  const ExperimentConfig cfg = parse_config(std::nullopt);
  CHECK(cfg.field.Ax == 1e-4);
  CHECK(cfg.field.Az == 2e-4);
  CHECK(cfg.field.B0 == 5e-5);
  CHECK(cfg.field.gamma == 9.27e-24);
  CHECK(cfg.field.hbar == 1.05457e-32);
  CHECK(cfg.field.kd == 1e4);
  CHECK(cfg.dt == 5e-5);
  CHECK(cfg.n_steps == 15);
  CHECK(cfg.mode == MeasureMode::Analytic);
  REQUIRE(cfg.theta_grid.size() == 21);
  CHECK(cfg.theta_grid.front() == 0.0);
  CHECK(cfg.theta_grid.back() == std::numbers::pi);
  CHECK(cfg.theta_grid[10] == doctest::Approx(std::numbers::pi / 2));
}

TEST_CASE("parse_config precedence and keys") {
  const std::string text =
      "# comment line\n"
      "Ax = 2e-4   # trailing comment\n"
      "dt=2.5e-5\n"
      "n_steps=30\n"
      "\n"
      "theta_points = 5\n"
      "mode = sampled\n"
      "shots = 1000\n"
      "seed = 12\n";
  const ExperimentConfig cfg = parse_text(text, {{"theta", "1.5707963", "--theta"},
                                                  {"n_steps", "40", "--steps"}});
  CHECK(cfg.field.Ax == 2e-4);
  CHECK(cfg.field.Ay == 2e-4);
  CHECK(cfg.field.Az == 4e-4);
  CHECK(cfg.dt == 2.5e-5);
  CHECK(cfg.n_steps == 40);
  CHECK(cfg.field.theta == 1.5707963);
  CHECK(cfg.theta_grid.size() == 5);
  CHECK(cfg.mode == MeasureMode::Sampled);
  CHECK(cfg.shots == 1000);
  CHECK(cfg.seed == 12);

  const ExperimentConfig explicit_grid = parse_text("theta_grid = 0, 0.5 ,1.0\nAz=1e-4\n");
  CHECK(explicit_grid.theta_grid == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(explicit_grid.field.Az == 1e-4);
  CHECK(explicit_grid.field.Ax == 1e-4);
}

TEST_CASE("parse_config errors") {
  CHECK(kind_of([] { parse_text("kd = -1\n"); }) == ErrorKind::ValidationError);
  CHECK(kind_of([] { parse_text("dt = 0\n"); }) == ErrorKind::ValidationError);
  CHECK(kind_of([] { parse_text("theta_grid = 4.0\n"); }) == ErrorKind::ValidationError);
  CHECK(kind_of([] { parse_text("theta_points = 0\n"); }) == ErrorKind::ValidationError);
  CHECK(kind_of([] { parse_text("mode = fast\n"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse_text("dt = abc\n"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse_text("just words\n"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse_config(std::string("/nonexistent/rpm.cfg")); }) ==
        ErrorKind::IoFailure);

  try {
    parse_text("B0 = 1e-5\nfrobnicate = 3\n");
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ParseError);
    CHECK(std::string(e.what()).find("test.cfg:2") != std::string::npos);
    CHECK(std::string(e.what()).find("frobnicate") != std::string::npos);
  }
  try {
    parse_text("", {{"dt", "fast", "--dt"}});
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("--dt") != std::string::npos);
  }
}

TEST_CASE("run_angle_sweep") {
  const ExperimentConfig cfg = small_config({0.0, std::numbers::pi / 4, std::numbers::pi / 2,
                                             std::numbers::pi});
  const SweepResult r = run_angle_sweep(cfg);
  REQUIRE(r.quantum.theta.size() == 4);
  CHECK(r.quantum.theta.front() == 0.0);
  CHECK(r.quantum.theta.back() == std::numbers::pi);
  CHECK(r.quantum.source == Source::Quantum);
  CHECK(r.oracle.source == Source::Oracle);
  REQUIRE(r.oracle.converged.size() == 4);
  for (const auto* c : {&r.quantum, &r.oracle}) {
    for (std::size_t i = 0; i < c->theta.size(); ++i) {
      CHECK(c->singlet[i] >= 0.0);
      CHECK(c->triplet[i] >= 0.0);
      CHECK(c->singlet[i] + c->triplet[i] <= 1.0 + 1e-9);
    }
  }
  // Quantum endpoint agrees with a direct trajectory run.
  const auto rec = run_trajectory(default_params(std::numbers::pi / 2));
  CHECK(r.quantum.singlet[2] == rec.singlet_yield.back());
  // Oracle at 7.5e-4 s still has population in flight: recorded, not thrown.
  CHECK_FALSE(r.oracle.converged[2]);
}

TEST_CASE("default sweep is angle dependent and continuous") {
  const SweepResult r = run_angle_sweep(default_config());
  REQUIRE(r.oracle.theta.size() == 21);
  const auto [lo, hi] = std::minmax_element(r.quantum.singlet.begin(), r.quantum.singlet.end());
  CHECK(*hi - *lo > 0.01);
  for (std::size_t i = 1; i < r.oracle.theta.size(); ++i) {
    CHECK(std::abs(r.oracle.singlet[i] - r.oracle.singlet[i - 1]) < 0.1);
    CHECK(std::abs(r.oracle.triplet[i] - r.oracle.triplet[i - 1]) < 0.1);
  }
  // B(theta) and B(pi - theta) differ by a reflection the Hamiltonian is
  // symmetric under.
  for (std::size_t i = 0; i < 21; ++i) {
    CHECK(r.oracle.singlet[i] == doctest::Approx(r.oracle.singlet[20 - i]).epsilon(1e-9));
  }
}

TEST_CASE("run_dynamics") {
  const DynamicsResult r = run_dynamics(default_config(), std::numbers::pi / 2);
  REQUIRE(r.quantum.times.size() == 16);
  REQUIRE(r.oracle.times.size() == 16);
  for (std::size_t i = 0; i < 16; ++i) CHECK(r.quantum.times[i] == r.oracle.times[i]);
  for (std::size_t i = 1; i < 16; ++i) {
    CHECK(r.quantum.singlet_yield[i] >= r.quantum.singlet_yield[i - 1] - 1e-12);
    CHECK(r.quantum.triplet_yield[i] >= r.quantum.triplet_yield[i - 1] - 1e-12);
    CHECK(r.oracle.singlet_yield[i] >= r.oracle.singlet_yield[i - 1] - 1e-12);
  }
}

TEST_CASE("CSV output") {
  SUBCASE("empty curve is header only") {
    YieldCurve empty;
    const auto path = temp_file("empty.csv");
    emit_csv(empty, path.string());
    CHECK(slurp(path) == "theta_rad,singlet_yield,triplet_yield,source\n");
    std::filesystem::remove(path);
  }
  SUBCASE("trajectory round trip") {
    const DynamicsResult r = run_dynamics(default_config(), 1.2);
    const auto path = temp_file("dyn.csv");
    emit_csv(r, path.string());
    const auto rows = read_csv(slurp(path));
    REQUIRE(rows.size() == 1 + 2 * 16);
    REQUIRE(rows[0].size() == 14);
    CHECK(rows[0][0] == "time_s");
    CHECK(rows[0][1] == "pop_0");
    CHECK(rows[0][10] == "pop_9");
    CHECK(rows[0][11] == "singlet_yield");
    CHECK(rows[0][13] == "source");
    for (std::size_t i = 0; i < 16; ++i) {
      const auto& q = rows[1 + i];
      const auto& o = rows[17 + i];
      CHECK(q[13] == "quantum");
      CHECK(o[13] == "oracle");
      CHECK(std::abs(std::stod(q[0]) - r.quantum.times[i]) <= 1e-11);
      for (int k = 0; k < 10; ++k) {
        CHECK(std::abs(std::stod(q[1 + k]) - r.quantum.diagonals[i](k)) <= 1e-11);
        CHECK(std::abs(std::stod(o[1 + k]) - r.oracle.diagonals[i](k)) <= 1e-11);
      }
      CHECK(std::abs(std::stod(q[11]) - r.quantum.singlet_yield[i]) <= 1e-11);
      CHECK(std::abs(std::stod(o[12]) - r.oracle.triplet_yield[i]) <= 1e-11);
    }
    std::filesystem::remove(path);
  }
  SUBCASE("12 significant digits") {
    YieldCurve c;
    c.theta = {std::numbers::pi};
    c.singlet = {1.0 / 3.0};
    c.triplet = {0.0};
    std::ostringstream os;
    write_csv(os, c, false);
    CHECK(os.str() == "3.14159265359,0.333333333333,0,quantum\n");
  }
  SUBCASE("byte-identical reruns in sampled mode") {
    ExperimentConfig cfg = small_config({0.3, 1.9});
    cfg.mode = MeasureMode::Sampled;
    cfg.shots = 2000;
    cfg.seed = 5;
    const auto a = temp_file("a.csv"), b = temp_file("b.csv"), c = temp_file("c.csv");
    emit_csv(run_angle_sweep(cfg), a.string());
    emit_csv(run_angle_sweep(cfg), b.string());
    cfg.seed = 6;
    emit_csv(run_angle_sweep(cfg), c.string());
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a) != slurp(c));
    for (const auto& p : {a, b, c}) std::filesystem::remove(p);
  }
  SUBCASE("unwritable path") {
    CHECK(kind_of([] { emit_csv(YieldCurve{}, "/nonexistent-dir/out.csv"); }) ==
          ErrorKind::IoFailure);
  }
}

TEST_CASE("SVG output") {
  SUBCASE("sweep markers") {
    const SweepResult r = run_angle_sweep(small_config({0.0, 0.7, 1.4, 2.1, 2.8}));
    std::ostringstream os;
    write_plot(os, r);
    const std::string svg = os.str();
    CHECK(well_formed_xml(svg));
    CHECK(count_of(svg, "<circle class=\"marker\"") == 5 * 2);
    CHECK(count_of(svg, "<polyline class=\"oracle\"") == 2);
    CHECK(svg.find("theta (rad)") != std::string::npos);
    CHECK(svg.find("yield (population)") != std::string::npos);
  }
  SUBCASE("single point") {
    const SweepResult r = run_angle_sweep(small_config({1.0}));
    const auto path = temp_file("one.svg");
    emit_plot(r, path.string());
    const std::string svg = slurp(path);
    CHECK(well_formed_xml(svg));
    // One marker per series.
    CHECK(count_of(svg, "<circle class=\"marker\"") == 2);
    std::filesystem::remove(path);
  }
  SUBCASE("dynamics") {
    const DynamicsResult r = run_dynamics(default_config(), std::numbers::pi / 2);
    std::ostringstream os;
    write_plot(os, r);
    const std::string svg = os.str();
    CHECK(well_formed_xml(svg));
    CHECK(count_of(svg, "<circle class=\"marker\"") == 16 * 2);
    CHECK(svg.find("time (s)") != std::string::npos);
  }
  CHECK(!well_formed_xml("<svg><g></svg>"));
}
