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

#ifndef RPM_SPIN_MODEL_HPP_
#define RPM_SPIN_MODEL_HPP_

// Ten-level radical pair model: two electron spins and one nuclear spin-1/2
// (8 states) plus the singlet and triplet shelving states.
//
// Basis order used everywhere:
//   0 (s,up)  1 (t0,up)  2 (t+,up)  3 (t-,up)
//   4 (s,dn)  5 (t0,dn)  6 (t+,dn)  7 (t-,dn)
//   8 |S> shelf          9 |T> shelf
//
// The 8-dim product basis is electron-1 (x) electron-2 (x) nucleus with
// up = 0, dn = 1, i.e. index = 4*e1 + 2*e2 + n.

#include <array>
#include <string_view>
#include <vector>

#include "rpm/linalg.hpp"

namespace rpm {

inline constexpr int kSpinDim = 8;
inline constexpr int kModelDim = 10;
inline constexpr int kSingletShelf = 8;
inline constexpr int kTripletShelf = 9;
inline constexpr int kNumProjectors = 8;

/// Physical parameters. SI units: Tesla, radians, J/T, J*s, 1/s.
struct FieldParams {
  double Ax = 1e-4;
  double Ay = 1e-4;
  double Az = 2e-4;
  double B0 = 5e-5;
  double theta = 0.0;
  double phi = 0.0;
  double gamma = 9.27e-24;
  // Default reproduces the reference parameter set, which is 100x the
  // physical constant; set to 1.054571817e-34 for SI physics.
  double hbar = 1.05457e-32;
  double kd = 1e4;

  /// Throws ValidationError naming the first violated invariant.
  void validate() const;
};

/// Table defaults with Ax = Ay = Az/2 at the given angles.
FieldParams default_params(double theta = 0.0, double phi = 0.0);

struct BasisConvention {
  std::array<std::string_view, kModelDim> labels;
  /// Columns are the singlet-triplet (x) nuclear kets expressed in the
  /// 8-dim product basis (8x8, unitary).
  ComplexMatrix change_of_basis;
};

const BasisConvention& basis_convention();

/// Spin-1/2 operators S = sigma/2, index 0..2 for x, y, z.
ComplexMatrix spin_half(int axis);

/// Hamiltonian in the 8-dim product basis (Joules).
ComplexMatrix product_hamiltonian(const FieldParams& p);

/// 10x10 Hamiltonian in the model basis; shelf rows/columns are zero.
ComplexMatrix build_hamiltonian(const FieldParams& p);

/// P1..P8 in enumeration order (P_k maps spin state k-1 to its shelf).
std::vector<ComplexMatrix> decay_projectors();

/// Electron singlet (x) (|up> - |dn>)/sqrt(2), as a 10-dim model vector.
ComplexVector initial_state();

}  // namespace rpm

#endif  // RPM_SPIN_MODEL_HPP_
