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

#include "rpm/evolution.hpp"

#include <cmath>
#include <string>

#include "rpm/parallel.hpp"

namespace rpm {

bool Branch::shelved() const {
  for (int k : lineage) {
    if (k != 0) return true;
  }
  return false;
}

std::size_t BranchEnsemble::live_count() const {
  std::size_t n = 0;
  for (const auto& b : branches) n += b.live ? 1 : 0;
  return n;
}

BranchEnsemble init_ensemble(const std::vector<PureComponent>& components) {
  auto fail = [](const std::string& what) {
    throw Error(ErrorKind::BadDecomposition, "init_ensemble: " + what);
  };
  if (components.empty()) fail("no components");
  const Eigen::Index dim = components.front().state.size();
  if (dim < 1) fail("empty state");
  double total = 0.0;
  for (const auto& c : components) {
    if (!(c.weight > 0.0)) fail("weights must be positive");
    if (c.state.size() != dim) fail("states differ in dimension");
    if (std::abs(c.state.norm() - 1.0) > 1e-12) fail("states must be unit norm");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) fail("weights sum to " + std::to_string(total));

  BranchEnsemble e;
  e.base_dim = static_cast<int>(dim);
  e.padded_dim = qubit_padded_dim(e.base_dim);
  for (const auto& c : components) {
    Branch b;
    b.state = ComplexVector::Zero(e.padded_dim);
    b.state.head(dim) = c.state;
    b.weight = c.weight;
    e.branches.push_back(std::move(b));
  }
  return e;
}

std::vector<DilatedUnitary> dilate_step(const KrausStep& step) {
  std::vector<DilatedUnitary> out(step.operators.size());
  parallel_for(out.size(), [&](std::size_t k) { out[k] = dilate(step.operators[k]); });
  return out;
}

BranchEnsemble step_ensemble(const BranchEnsemble& e, const KrausStep& step,
                             const std::vector<DilatedUnitary>& dilations,
                             const StepOptions& options) {
  if (dilations.size() != step.operators.size()) {
    throw Error(ErrorKind::MismatchedDilation,
                "step_ensemble: " + std::to_string(dilations.size()) +
                    " dilations for " + std::to_string(step.operators.size()) +
                    " Kraus operators");
  }
  for (std::size_t k = 0; k < dilations.size(); ++k) {
    const auto& d = dilations[k];
    const auto& op = step.operators[k];
    if (d.base_dim != e.base_dim || d.padded_dim != e.padded_dim ||
        op.rows() != e.base_dim ||
        d.matrix.topLeftCorner(d.base_dim, d.base_dim) != op) {
      throw Error(ErrorKind::MismatchedDilation,
                  "step_ensemble: dilation " + std::to_string(k) +
                      " does not embed its Kraus operator");
    }
  }

  const std::size_t parents = e.branches.size();
  std::vector<std::vector<Branch>> children(parents);
  parallel_for(parents, [&](std::size_t i) {
    const Branch& parent = e.branches[i];
    if (!parent.live) return;
    const ComplexVector input = parent.state.head(e.base_dim);
    const std::size_t fanout =
        (options.shelf_shortcut && parent.shelved()) ? 1 : dilations.size();
    children[i].reserve(fanout);
    for (std::size_t k = 0; k < fanout; ++k) {
      Branch child;
      child.state = apply_to_state(dilations[k], input);
      child.lineage = parent.lineage;
      child.lineage.push_back(static_cast<int>(k));
      child.weight = parent.weight;
      child.live =
          child.state.head(e.base_dim).squaredNorm() >= options.prune_threshold;
      children[i].push_back(std::move(child));
    }
  });

  BranchEnsemble next;
  next.step_count = e.step_count + 1;
  next.dt = step.dt;
  next.base_dim = e.base_dim;
  next.padded_dim = e.padded_dim;
  for (auto& group : children) {
    next.generated_last_step += group.size();
    for (auto& child : group) {
      if (child.live) next.branches.push_back(std::move(child));
    }
  }
  return next;
}

RealVector diag_populations(const BranchEnsemble& e, MeasureMode mode,
                            std::int64_t shots, std::uint64_t seed) {
  const std::size_t n = e.branches.size();
  std::vector<RealVector> parts(n);
  parallel_for(n, [&](std::size_t i) {
    const Branch& b = e.branches[i];
    const auto m = measure_populations(
        b.state, mode, shots,
        derive_seed(seed, static_cast<std::uint64_t>(e.step_count), i));
    parts[i] = b.weight * m.populations.head(e.base_dim);
  });
  // Fixed summation order keeps the result bit-reproducible.
  RealVector total = RealVector::Zero(e.base_dim);
  for (const auto& p : parts) total += p;
  return total;
}

void TrajectoryRecord::append(double t, const RealVector& diag, std::size_t live) {
  times.push_back(t);
  diagonals.push_back(diag);
  singlet_yield.push_back(diag(kSingletShelf));
  triplet_yield.push_back(diag(kTripletShelf));
  live_branches.push_back(live);
}

TrajectoryRecord run_trajectory(const FieldParams& p, int n_steps, double dt,
                                MeasureMode mode, std::int64_t shots,
                                std::uint64_t seed) {
  if (n_steps < 1) {
    throw Error(ErrorKind::ValidationError, "run_trajectory: n_steps must be >= 1");
  }
  if (!(dt > 0.0)) {
    throw Error(ErrorKind::ValidationError, "run_trajectory: dt must be > 0");
  }
  const KrausStep step = build_kraus_step(p, dt);
  const auto dilations = dilate_step(step);

  BranchEnsemble e = init_ensemble({{1.0, initial_state()}});
  e.dt = dt;
  TrajectoryRecord rec;
  rec.append(0.0, diag_populations(e, mode, shots, seed), e.live_count());
  for (int s = 1; s <= n_steps; ++s) {
    e = step_ensemble(e, step, dilations);
    rec.append(s * dt, diag_populations(e, mode, shots, seed), e.live_count());
  }
  return rec;
}

}  // namespace rpm
