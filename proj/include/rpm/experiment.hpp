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

#ifndef RPM_EXPERIMENT_HPP_
#define RPM_EXPERIMENT_HPP_

#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rpm/dilation.hpp"
#include "rpm/evolution.hpp"
#include "rpm/exact_oracle.hpp"
#include "rpm/spin_model.hpp"

namespace rpm {

enum class Source { Quantum, Oracle };
const char* source_name(Source s);

inline constexpr int kDefaultThetaPoints = 21;

struct ExperimentConfig {
  FieldParams field = default_params();  // field.theta is the dynamics angle
  std::vector<double> theta_grid;
  double dt = kDefaultDt;
  int n_steps = kDefaultSteps;
  MeasureMode mode = MeasureMode::Analytic;
  std::int64_t shots = kDefaultShots;
  std::uint64_t seed = 0;
  std::string out_csv;
  std::string out_plot;

  /// Throws ValidationError naming the violated invariant.
  void validate() const;
};

std::vector<double> uniform_theta_grid(int points, double lo = 0.0, double hi = std::numbers::pi);

/// Table defaults with the 21-point grid on [0, pi].
ExperimentConfig default_config();

/// One `key=value` pair supplied on the command line; `flag` is used only
/// for error context.
struct ConfigOverride {
  std::string key;
  std::string value;
  std::string flag;
};

/// Flat `key=value` text, `#` comments, blank lines ignored. Keys:
///   Ax Ay Az B0 theta phi gamma hbar kd
///   theta_grid (comma list) | theta_points theta_min theta_max
///   dt n_steps mode shots seed out_csv out_plot
/// Setting Ax alone keeps Ay = Ax and Az = 2 Ax.
/// Precedence: overrides > file > defaults. Unknown keys are rejected.
ExperimentConfig parse_config(std::istream& in, const std::string& origin,
                              const std::vector<ConfigOverride>& overrides = {});
ExperimentConfig parse_config(const std::optional<std::string>& path,
                              const std::vector<ConfigOverride>& overrides = {});

struct YieldCurve {
  std::vector<double> theta;
  std::vector<double> singlet;
  std::vector<double> triplet;
  Source source = Source::Quantum;
  /// Oracle only: per-theta steady-state check outcome (NotConverged is
  /// recorded here instead of thrown).
  std::vector<bool> converged;
};

struct SweepResult {
  YieldCurve quantum;
  YieldCurve oracle;
};

struct DynamicsResult {
  double theta = 0.0;
  TrajectoryRecord quantum;
  TrajectoryRecord oracle;
};

/// Final yields at t = n_steps * dt for every grid angle, both paths.
/// Grid points run in parallel; output order follows the grid.
SweepResult run_angle_sweep(const ExperimentConfig& cfg);

DynamicsResult run_dynamics(const ExperimentConfig& cfg, double theta);

// CSV: header always present, values printed with 12 significant digits.
//   trajectory: time_s,pop_0..pop_9,singlet_yield,triplet_yield,source
//   curve:      theta_rad,singlet_yield,triplet_yield,source
void write_csv(std::ostream& os, const TrajectoryRecord& rec, Source source,
               bool header = true);
void write_csv(std::ostream& os, const YieldCurve& curve, bool header = true);

void emit_csv(const TrajectoryRecord& rec, Source source, const std::string& path);
void emit_csv(const YieldCurve& curve, const std::string& path);
void emit_csv(const DynamicsResult& result, const std::string& path);
void emit_csv(const SweepResult& result, const std::string& path);

/// Standalone SVG: quantum values as circle markers, oracle values as
/// polylines, singlet blue and triplet red.
void write_plot(std::ostream& os, const SweepResult& result);
void write_plot(std::ostream& os, const DynamicsResult& result);
void emit_plot(const SweepResult& result, const std::string& path);
void emit_plot(const DynamicsResult& result, const std::string& path);

}  // namespace rpm

#endif  // RPM_EXPERIMENT_HPP_
