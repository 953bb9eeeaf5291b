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

#ifndef RPM_EVOLUTION_HPP_
#define RPM_EVOLUTION_HPP_

// Iterated Kraus evolution as an ensemble of pure-state branches. After n
// steps a branch holds E_{k_n} ... E_{k_1} v_i (run through the dilated
// circuits), so that
//
//   diag(rho_n) = sum_i p_i sum_{k_1..k_n} diag(|phi_ik><phi_ik|).
//
// Once a branch has taken a decay operator (k >= 1) its amplitude sits on
// a shelf; further decay operators annihilate it and E0 acts as identity,
// so it is only advanced with E0. This keeps 8n + 1 branches instead of 9^n.

#include <cstdint>
#include <vector>

#include "rpm/dilation.hpp"
#include "rpm/kraus_channel.hpp"
#include "rpm/spin_model.hpp"

namespace rpm {

inline constexpr double kPruneThreshold = 1e-14;

struct Branch {
  ComplexVector state;       // padded circuit output (unweighted)
  std::vector<int> lineage;  // Kraus indices applied, oldest first
  double weight = 1.0;       // probability of the source pure state
  bool live = true;

  /// True once any decay operator (index >= 1) has been applied.
  bool shelved() const;
};

struct BranchEnsemble {
  std::vector<Branch> branches;
  int step_count = 0;
  double dt = 0.0;
  int base_dim = 0;
  int padded_dim = 0;
  /// Children generated in the last step before pruning (structural count).
  std::size_t generated_last_step = 0;

  std::size_t live_count() const;
};

struct PureComponent {
  double weight;
  ComplexVector state;
};

struct StepOptions {
  double prune_threshold = kPruneThreshold;
  /// Advance shelved branches with E0 only. Valid for channels where
  /// E_i E_j = 0 for all decay pairs and E0 is identity on their image.
  bool shelf_shortcut = true;
};

/// Throws BadDecomposition unless weights are positive, sum to 1 within
/// 1e-12, and states are unit norm and of equal dimension.
BranchEnsemble init_ensemble(const std::vector<PureComponent>& components);

/// One dilation per Kraus operator of `step`, in order.
std::vector<DilatedUnitary> dilate_step(const KrausStep& step);

/// Throws MismatchedDilation when a dilation's top-left block is not the
/// corresponding Kraus operator.
BranchEnsemble step_ensemble(const BranchEnsemble& e, const KrausStep& step,
                             const std::vector<DilatedUnitary>& dilations,
                             const StepOptions& options = {});

/// sum over branches of weight * (first-half populations).
RealVector diag_populations(const BranchEnsemble& e, MeasureMode mode,
                            std::int64_t shots = kDefaultShots,
                            std::uint64_t seed = 0);

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<RealVector> diagonals;
  std::vector<double> singlet_yield;
  std::vector<double> triplet_yield;
  std::vector<std::size_t> live_branches;

  void append(double t, const RealVector& diag, std::size_t live);
};

inline constexpr int kDefaultSteps = 15;
inline constexpr double kDefaultDt = 5e-5;

/// Model -> Kraus step -> 9 dilations (built once) -> n_steps ensemble
/// steps from the singlet initial state, recording every step including t=0.
TrajectoryRecord run_trajectory(const FieldParams& p, int n_steps = kDefaultSteps,
                                double dt = kDefaultDt,
                                MeasureMode mode = MeasureMode::Analytic,
                                std::int64_t shots = kDefaultShots,
                                std::uint64_t seed = 0);

}  // namespace rpm

#endif  // RPM_EVOLUTION_HPP_
