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

#include "rpm/kraus_channel.hpp"

#include <cmath>
#include <string>

namespace rpm {

std::vector<ComplexMatrix> build_decay_kraus(double kd, double dt,
                                             const std::vector<ComplexMatrix>& projectors) {
  const double rate = kd * dt;
  if (!(rate >= 0.0 && rate <= 1.0)) {
    throw Error(ErrorKind::InvalidStep,
                "build_decay_kraus: kd*dt = " + std::to_string(rate) +
                    " outside [0, 1]");
  }
  if (projectors.empty()) {
    throw Error(ErrorKind::DimensionMismatch, "build_decay_kraus: no projectors");
  }
  const Eigen::Index n = projectors.front().rows();
  ComplexMatrix occupied = ComplexMatrix::Zero(n, n);
  for (const auto& p : projectors) occupied += p.adjoint() * p;

  std::vector<ComplexMatrix> out;
  out.reserve(projectors.size() + 1);
  out.push_back(psd_sqrt<double>(ComplexMatrix::Identity(n, n) - rate * occupied));
  const double amp = std::sqrt(rate);
  for (const auto& p : projectors) out.push_back(amp * p);
  return out;
}

ComplexMatrix coherent_step_unitary(const ComplexMatrix& h, double dt, double hbar) {
  require_hermitian(h, "coherent_step_unitary");
  if (h.rows() != kModelDim) {
    throw Error(ErrorKind::DimensionMismatch,
                "coherent_step_unitary: expected a 10x10 Hamiltonian");
  }
  const auto shelf_rows = h.bottomRows(kModelDim - kSpinDim);
  const auto shelf_cols = h.rightCols(kModelDim - kSpinDim);
  if (!shelf_rows.isZero(0.0) || !shelf_cols.isZero(0.0)) {
    throw Error(ErrorKind::InvalidGenerator,
                "coherent_step_unitary: Hamiltonian couples the shelf states");
  }
  ComplexMatrix u = ComplexMatrix::Identity(kModelDim, kModelDim);
  const ComplexMatrix spin_block = h.topLeftCorner(kSpinDim, kSpinDim);
  u.topLeftCorner(kSpinDim, kSpinDim) = unitary_exp<double>(spin_block, dt / hbar);
  return u;
}

KrausStep compose_effective(const std::vector<ComplexMatrix>& decay,
                            const ComplexMatrix& unitary, double dt) {
  KrausStep step;
  step.dt = dt;
  step.coherent_unitary = unitary;
  step.operators.reserve(decay.size());
  for (const auto& m : decay) step.operators.push_back(m * unitary);
  return step;
}

double validate_completeness(const KrausStep& step) {
  const Eigen::Index n = step.operators.empty()
                             ? step.coherent_unitary.rows()
                             : step.operators.front().rows();
  ComplexMatrix sum = ComplexMatrix::Zero(n, n);
  for (const auto& e : step.operators) sum += e.adjoint() * e;
  return (sum - ComplexMatrix::Identity(n, n)).norm();
}

KrausStep build_kraus_step(const FieldParams& p, double dt) {
  p.validate();
  const auto decay = build_decay_kraus(p.kd, dt, decay_projectors());
  const auto u = coherent_step_unitary(build_hamiltonian(p), dt, p.hbar);
  KrausStep step = compose_effective(decay, u, dt);
  const double defect = validate_completeness(step);
  if (defect > kCompletenessTol) {
    throw Error(ErrorKind::InvalidStep,
                "build_kraus_step: completeness defect " + std::to_string(defect));
  }
  return step;
}

ComplexMatrix apply_channel(const KrausStep& step, const ComplexMatrix& rho) {
  ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (const auto& e : step.operators) out += e * rho * e.adjoint();
  return out;
}

}  // namespace rpm
