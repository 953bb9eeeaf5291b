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

#ifndef RPM_KRAUS_CHANNEL_HPP_
#define RPM_KRAUS_CHANNEL_HPP_

#include <vector>

#include "rpm/linalg.hpp"
#include "rpm/spin_model.hpp"

namespace rpm {

inline constexpr int kNumKraus = 9;
/// Callers treat a completeness defect above this as fatal.
inline constexpr double kCompletenessTol = 1e-10;

/// One time step of the discretized channel. `operators` holds E0..E8 with
/// E_k = M_k * U, i.e. the coherent step acts first, then the decay.
struct KrausStep {
  double dt = 0.0;
  std::vector<ComplexMatrix> operators;
  ComplexMatrix coherent_unitary;
};

/// Decay Kraus set M0 = sqrt(I - kd dt sum P^dag P), M_k = sqrt(kd dt) P_k.
/// Throws InvalidStep unless 0 <= kd*dt <= 1.
std::vector<ComplexMatrix> build_decay_kraus(double kd, double dt,
                                             const std::vector<ComplexMatrix>& projectors);

/// exp(-i H dt / hbar). H must have a zero shelf block; the spin block is
/// exponentiated on its own so the shelf block of U is exactly I.
ComplexMatrix coherent_step_unitary(const ComplexMatrix& h, double dt, double hbar);

KrausStep compose_effective(const std::vector<ComplexMatrix>& decay,
                            const ComplexMatrix& unitary, double dt);

/// ||sum_k E_k^dag E_k - I||_F.
double validate_completeness(const KrausStep& step);

/// Full model -> channel pipeline for one parameter set.
KrausStep build_kraus_step(const FieldParams& p, double dt);

/// rho -> sum_k E_k rho E_k^dag.
ComplexMatrix apply_channel(const KrausStep& step, const ComplexMatrix& rho);

}  // namespace rpm

#endif  // RPM_KRAUS_CHANNEL_HPP_
