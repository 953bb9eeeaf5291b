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

#include "rpm/experiment.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "rpm/parallel.hpp"

namespace rpm {

const char* source_name(Source s) {
  return s == Source::Quantum ? "quantum" : "oracle";
}

std::vector<double> uniform_theta_grid(int points, double lo, double hi) {
  std::vector<double> grid;
  if (points <= 0) return grid;
  if (points == 1) return {lo};
  grid.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    grid.push_back(i + 1 == points ? hi : lo + (hi - lo) * i / (points - 1));
  }
  return grid;
}

ExperimentConfig default_config() {
  ExperimentConfig cfg;
  cfg.field.theta = std::numbers::pi / 2;
  cfg.theta_grid = uniform_theta_grid(kDefaultThetaPoints);
  return cfg;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorKind::ValidationError, "config: " + what);
  };
  try {
    field.validate();
  } catch (const Error& e) {
    fail(e.what());
  }
  if (theta_grid.empty()) fail("theta_grid must be non-empty");
  for (double t : theta_grid) {
    if (!(t >= 0.0 && t <= std::numbers::pi + 1e-12)) fail("theta_grid values must lie in [0, pi]");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) fail("dt must be > 0");
  if (n_steps < 1) fail("n_steps must be >= 1");
  if (!(field.kd * dt <= 1.0)) fail("kd*dt must be <= 1");
  if (mode == MeasureMode::Sampled && shots < 1) fail("shots must be >= 1");
}

namespace {

[[noreturn]] void parse_fail(const std::string& context, const std::string& what) {
  throw Error(ErrorKind::ParseError, context + ": " + what);
}

double to_double(const std::string& text, const std::string& context) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
    parse_fail(context, "expected a number, got '" + text + "'");
  }
  return v;
}

long long to_integer(const std::string& text, const std::string& context) {
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(text.c_str(), &end, 10);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
    parse_fail(context, "expected an integer, got '" + text + "'");
  }
  return v;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct GridSpec {
  std::optional<std::vector<double>> explicit_grid;
  int points = kDefaultThetaPoints;
  double lo = 0.0;
  double hi = std::numbers::pi;
};

struct Pending {
  bool ax = false, ay = false, az = false;
};

void apply(ExperimentConfig& cfg, GridSpec& grid, Pending& seen, const std::string& key,
           const std::string& value, const std::string& context) {
  FieldParams& f = cfg.field;
  if (key == "Ax") { f.Ax = to_double(value, context); seen.ax = true; }
  else if (key == "Ay") { f.Ay = to_double(value, context); seen.ay = true; }
  else if (key == "Az") { f.Az = to_double(value, context); seen.az = true; }
  else if (key == "B0") f.B0 = to_double(value, context);
  else if (key == "theta") f.theta = to_double(value, context);
  else if (key == "phi") f.phi = to_double(value, context);
  else if (key == "gamma") f.gamma = to_double(value, context);
  else if (key == "hbar") f.hbar = to_double(value, context);
  else if (key == "kd") f.kd = to_double(value, context);
  else if (key == "dt") cfg.dt = to_double(value, context);
  else if (key == "n_steps") cfg.n_steps = static_cast<int>(to_integer(value, context));
  else if (key == "shots") cfg.shots = to_integer(value, context);
  else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_integer(value, context));
  else if (key == "out_csv") cfg.out_csv = value;
  else if (key == "out_plot") cfg.out_plot = value;
  else if (key == "theta_points") grid.points = static_cast<int>(to_integer(value, context));
  else if (key == "theta_min") grid.lo = to_double(value, context);
  else if (key == "theta_max") grid.hi = to_double(value, context);
  else if (key == "mode") {
    try {
      cfg.mode = parse_mode(value);
    } catch (const Error& e) {
      parse_fail(context, e.what());
    }
  } else if (key == "theta_grid") {
    std::vector<double> values;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (!item.empty()) values.push_back(to_double(item, context));
    }
    grid.explicit_grid = std::move(values);
  } else {
    parse_fail(context, "unknown key '" + key + "'");
  }
}

}  // namespace

ExperimentConfig parse_config(std::istream& in, const std::string& origin,
                              const std::vector<ConfigOverride>& overrides) {
  ExperimentConfig cfg = default_config();
  GridSpec grid;
  Pending seen;

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string context = origin + ":" + std::to_string(lineno);
    const auto eq = line.find('=');
    if (eq == std::string::npos) parse_fail(context, "expected key=value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) parse_fail(context, "empty key");
    apply(cfg, grid, seen, key, trim(line.substr(eq + 1)), context);
  }
  for (const auto& o : overrides) {
    apply(cfg, grid, seen, o.key, o.value, o.flag.empty() ? o.key : o.flag);
  }

  if (seen.ax && !seen.ay) cfg.field.Ay = cfg.field.Ax;
  if (seen.ax && !seen.az) cfg.field.Az = 2.0 * cfg.field.Ax;
  cfg.theta_grid = grid.explicit_grid ? *grid.explicit_grid
                                      : uniform_theta_grid(grid.points, grid.lo, grid.hi);
  cfg.validate();
  return cfg;
}

ExperimentConfig parse_config(const std::optional<std::string>& path,
                              const std::vector<ConfigOverride>& overrides) {
  if (!path) {
    std::istringstream empty;
    return parse_config(empty, "<defaults>", overrides);
  }
  std::ifstream in(*path);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot open config " + *path);
  return parse_config(in, *path, overrides);
}

SweepResult run_angle_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.theta_grid.size();
  SweepResult out;
  out.quantum.source = Source::Quantum;
  out.oracle.source = Source::Oracle;
  out.quantum.theta = out.oracle.theta = cfg.theta_grid;
  out.quantum.singlet.resize(n);
  out.quantum.triplet.resize(n);
  out.oracle.singlet.resize(n);
  out.oracle.triplet.resize(n);
  std::vector<char> converged(n, 0);

  const double horizon = cfg.n_steps * cfg.dt;
  parallel_for(n, [&](std::size_t i) {
    FieldParams p = cfg.field;
    p.theta = cfg.theta_grid[i];
    const auto rec = run_trajectory(p, cfg.n_steps, cfg.dt, cfg.mode, cfg.shots,
                                    derive_seed(cfg.seed, i, 0));
    out.quantum.singlet[i] = rec.singlet_yield.back();
    out.quantum.triplet[i] = rec.triplet_yield.back();
    const auto y = oracle_yields(p, horizon, cfg.dt);
    out.oracle.singlet[i] = y.singlet;
    out.oracle.triplet[i] = y.triplet;
    converged[i] = y.converged ? 1 : 0;
  });
  out.oracle.converged.assign(converged.begin(), converged.end());
  return out;
}

DynamicsResult run_dynamics(const ExperimentConfig& cfg, double theta) {
  cfg.validate();
  FieldParams p = cfg.field;
  p.theta = theta;
  DynamicsResult out;
  out.theta = theta;
  out.quantum = run_trajectory(p, cfg.n_steps, cfg.dt, cfg.mode, cfg.shots, cfg.seed);
  out.oracle = exact_trajectory(p, cfg.n_steps, cfg.dt);
  return out;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

template <typename Writer>
void write_file(const std::string& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot open " + path + " for writing");
  writer(out);
  out.flush();
  if (!out) throw Error(ErrorKind::IoFailure, "write failed: " + path);
}

}  // namespace

void write_csv(std::ostream& os, const TrajectoryRecord& rec, Source source, bool header) {
  if (header) {
    os << "time_s";
    for (int i = 0; i < kModelDim; ++i) os << ",pop_" << i;
    os << ",singlet_yield,triplet_yield,source\n";
  }
  for (std::size_t r = 0; r < rec.times.size(); ++r) {
    os << fmt12(rec.times[r]);
    const RealVector& d = rec.diagonals[r];
    for (Eigen::Index i = 0; i < d.size(); ++i) os << ',' << fmt12(d(i));
    os << ',' << fmt12(rec.singlet_yield[r]) << ',' << fmt12(rec.triplet_yield[r]) << ','
       << source_name(source) << '\n';
  }
}

void write_csv(std::ostream& os, const YieldCurve& curve, bool header) {
  if (header) os << "theta_rad,singlet_yield,triplet_yield,source\n";
  for (std::size_t i = 0; i < curve.theta.size(); ++i) {
    os << fmt12(curve.theta[i]) << ',' << fmt12(curve.singlet[i]) << ','
       << fmt12(curve.triplet[i]) << ',' << source_name(curve.source) << '\n';
  }
}

void emit_csv(const TrajectoryRecord& rec, Source source, const std::string& path) {
  write_file(path, [&](std::ostream& os) { write_csv(os, rec, source); });
}

void emit_csv(const YieldCurve& curve, const std::string& path) {
  write_file(path, [&](std::ostream& os) { write_csv(os, curve); });
}

void emit_csv(const DynamicsResult& result, const std::string& path) {
  write_file(path, [&](std::ostream& os) {
    write_csv(os, result.quantum, Source::Quantum);
    write_csv(os, result.oracle, Source::Oracle, false);
  });
}

void emit_csv(const SweepResult& result, const std::string& path) {
  write_file(path, [&](std::ostream& os) {
    write_csv(os, result.quantum);
    write_csv(os, result.oracle, false);
  });
}

// ---------------------------------------------------------------------------
// SVG

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 20, kTop = 30, kBottom = 60;
constexpr const char* kSingletColor = "#1f4fd8";
constexpr const char* kTripletColor = "#d62728";

struct Series {
  const std::vector<double>* x;
  const std::vector<double>* y;
  const char* color;
  const char* name;
};

class Plot {
 public:
  Plot(std::vector<double> xs, std::string x_label, std::string title)
      : x_label_(std::move(x_label)), title_(std::move(title)) {
    if (xs.empty()) xs.push_back(0.0);
    x_lo_ = *std::min_element(xs.begin(), xs.end());
    x_hi_ = *std::max_element(xs.begin(), xs.end());
    if (x_hi_ - x_lo_ <= 0.0) {
      const double pad = x_lo_ == 0.0 ? 0.5 : std::abs(x_lo_) * 0.5;
      x_lo_ -= pad;
      x_hi_ += pad;
    }
  }

  void line(const Series& s) { lines_.push_back(s); }
  void markers(const Series& s) { markers_.push_back(s); }

  void write(std::ostream& os) const {
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
       << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight
       << "\">\n"
       << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
       << "\" fill=\"white\"/>\n"
       << "<text x=\"" << kWidth / 2 << "\" y=\"18\" text-anchor=\"middle\" "
          "font-family=\"sans-serif\" font-size=\"14\">"
       << title_ << "</text>\n";
    axes(os);
    for (const auto& s : lines_) {
      os << "<polyline class=\"oracle\" fill=\"none\" stroke=\"" << s.color
         << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < s.x->size(); ++i) {
        if (i) os << ' ';
        os << num(px((*s.x)[i])) << ',' << num(py((*s.y)[i]));
      }
      os << "\"><title>" << s.name << "</title></polyline>\n";
    }
    for (const auto& s : markers_) {
      for (std::size_t i = 0; i < s.x->size(); ++i) {
        os << "<circle class=\"marker\" cx=\"" << num(px((*s.x)[i])) << "\" cy=\""
           << num(py((*s.y)[i])) << "\" r=\"3.5\" fill=\"" << s.color << "\"/>\n";
      }
    }
    legend(os);
    os << "</svg>\n";
  }

 private:
  static std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
  }
  double px(double x) const {
    return kLeft + (x - x_lo_) / (x_hi_ - x_lo_) * (kWidth - kLeft - kRight);
  }
  double py(double y) const {
    return kHeight - kBottom - std::clamp(y, 0.0, 1.0) * (kHeight - kTop - kBottom);
  }

  void axes(std::ostream& os) const {
    const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
    os << "<g stroke=\"black\" stroke-width=\"1\">\n"
       << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1 << "\" y2=\"" << y0
       << "\"/>\n"
       << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\"" << y1
       << "\"/>\n</g>\n";
    os << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    for (int i = 0; i <= 4; ++i) {
      const double yv = i / 4.0;
      os << "<text x=\"" << x0 - 6 << "\" y=\"" << num(py(yv) + 4)
         << "\" text-anchor=\"end\">" << fmt_tick(yv) << "</text>\n";
      const double xv = x_lo_ + (x_hi_ - x_lo_) * i / 4.0;
      os << "<text x=\"" << num(px(xv)) << "\" y=\"" << y0 + 16
         << "\" text-anchor=\"middle\">" << fmt_tick(xv) << "</text>\n";
    }
    os << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << kHeight - 20
       << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label_ << "</text>\n"
       << "<text x=\"18\" y=\"" << (y0 + y1) / 2 << "\" text-anchor=\"middle\" "
       << "font-size=\"13\" transform=\"rotate(-90 18 " << (y0 + y1) / 2
       << ")\">yield (population)</text>\n</g>\n";
  }

  void legend(std::ostream& os) const {
    const double x = kWidth - kRight - 150;
    double y = kTop + 12;
    os << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    for (const auto& [color, name] :
         {std::pair{kSingletColor, "singlet"}, std::pair{kTripletColor, "triplet"}}) {
      os << "<line x1=\"" << x << "\" y1=\"" << y << "\" x2=\"" << x + 20 << "\" y2=\""
         << y << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n"
         << "<text x=\"" << x + 26 << "\" y=\"" << y + 4 << "\">" << name
         << " (line: exact, dots: quantum)</text>\n";
      y += 16;
    }
    os << "</g>\n";
  }

  static std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
  }

  std::string x_label_;
  std::string title_;
  double x_lo_ = 0.0, x_hi_ = 1.0;
  std::vector<Series> lines_;
  std::vector<Series> markers_;
};

}  // namespace

void write_plot(std::ostream& os, const SweepResult& r) {
  Plot plot(r.quantum.theta, "theta (rad)", "Final yields vs field angle");
  plot.line({&r.oracle.theta, &r.oracle.singlet, kSingletColor, "exact singlet"});
  plot.line({&r.oracle.theta, &r.oracle.triplet, kTripletColor, "exact triplet"});
  plot.markers({&r.quantum.theta, &r.quantum.singlet, kSingletColor, "quantum singlet"});
  plot.markers({&r.quantum.theta, &r.quantum.triplet, kTripletColor, "quantum triplet"});
  plot.write(os);
}

void write_plot(std::ostream& os, const DynamicsResult& r) {
  char title[64];
  std::snprintf(title, sizeof(title), "Yield dynamics at theta = %.4g rad", r.theta);
  Plot plot(r.quantum.times, "time (s)", title);
  plot.line({&r.oracle.times, &r.oracle.singlet_yield, kSingletColor, "exact singlet"});
  plot.line({&r.oracle.times, &r.oracle.triplet_yield, kTripletColor, "exact triplet"});
  plot.markers({&r.quantum.times, &r.quantum.singlet_yield, kSingletColor, "quantum singlet"});
  plot.markers({&r.quantum.times, &r.quantum.triplet_yield, kTripletColor, "quantum triplet"});
  plot.write(os);
}

void emit_plot(const SweepResult& result, const std::string& path) {
  write_file(path, [&](std::ostream& os) { write_plot(os, result); });
}

void emit_plot(const DynamicsResult& result, const std::string& path) {
  write_file(path, [&](std::ostream& os) { write_plot(os, result); });
}

}  // namespace rpm
