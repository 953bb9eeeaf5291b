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

#include "rpm/spin_model.hpp"

#include <cmath>
#include <string>

namespace rpm {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::ValidationError, "FieldParams: " + what);
}

ComplexMatrix identity2() { return ComplexMatrix::Identity(2, 2); }

// Electron-pair kets in the 2-electron product basis |e1 e2>, up = 0.
ComplexVector electron_ket(int which) {
  const double r = 1.0 / std::sqrt(2.0);
  ComplexVector v = ComplexVector::Zero(4);
  switch (which) {
    case 0: v << 0, r, -r, 0; break;  // s
    case 1: v << 0, r, r, 0; break;   // t0
    case 2: v << 1, 0, 0, 0; break;   // t+
    case 3: v << 0, 0, 0, 1; break;   // t-
  }
  return v;
}

BasisConvention make_convention() {
  BasisConvention b{{"s,up", "t0,up", "t+,up", "t-,up", "s,dn", "t0,dn",
                     "t+,dn", "t-,dn", "S", "T"},
                    ComplexMatrix::Zero(kSpinDim, kSpinDim)};
  for (int k = 0; k < kSpinDim; ++k) {
    ComplexVector nuclear = ComplexVector::Zero(2);
    nuclear(k / 4) = 1.0;
    b.change_of_basis.col(k) = kron<double>(electron_ket(k % 4), nuclear);
  }
  return b;
}

}  // namespace

void FieldParams::validate() const {
  for (double v : {Ax, Ay, Az, B0, theta, phi, gamma, hbar, kd}) {
    require(std::isfinite(v), "all values must be finite");
  }
  require(B0 >= 0.0, "B0 >= 0");
  require(kd >= 0.0, "kd >= 0");
  require(hbar > 0.0, "hbar > 0");
}

FieldParams default_params(double theta, double phi) {
  FieldParams p;
  p.theta = theta;
  p.phi = phi;
  return p;
}

const BasisConvention& basis_convention() {
  static const BasisConvention b = make_convention();
  return b;
}

ComplexMatrix spin_half(int axis) {
  ComplexMatrix s(2, 2);
  const cdouble i{0.0, 1.0};
  switch (axis) {
    case 0: s << 0, 0.5, 0.5, 0; break;
    case 1: s << 0, -0.5 * i, 0.5 * i, 0; break;
    case 2: s << 0.5, 0, 0, -0.5; break;
    default: throw Error(ErrorKind::ValidationError, "spin_half: axis must be 0..2");
  }
  return s;
}

ComplexMatrix product_hamiltonian(const FieldParams& p) {
  p.validate();
  const ComplexMatrix id = identity2();
  const std::array<double, 3> hyperfine{p.Ax, p.Ay, p.Az};
  const std::array<double, 3> field{
      p.B0 * std::cos(p.phi) * std::sin(p.theta),
      p.B0 * std::sin(p.phi) * std::sin(p.theta), p.B0 * std::cos(p.theta)};

  ComplexMatrix h = ComplexMatrix::Zero(kSpinDim, kSpinDim);
  for (int a = 0; a < 3; ++a) {
    const ComplexMatrix s = spin_half(a);
    // I . A . S1 with diagonal A couples matching components only.
    h += hyperfine[a] * kron<double>(kron<double>(s, id), s);
    h += field[a] * (kron<double>(kron<double>(s, id), id) +
                     kron<double>(kron<double>(id, s), id));
  }
  return p.gamma * h;
}

ComplexMatrix build_hamiltonian(const FieldParams& p) {
  const ComplexMatrix& c = basis_convention().change_of_basis;
  ComplexMatrix h = ComplexMatrix::Zero(kModelDim, kModelDim);
  h.topLeftCorner(kSpinDim, kSpinDim) = c.adjoint() * product_hamiltonian(p) * c;
  // Remove rounding asymmetry from the basis change.
  h = ((h + h.adjoint()) * 0.5).eval();
  return h;
}

std::vector<ComplexMatrix> decay_projectors() {
  std::vector<ComplexMatrix> out;
  out.reserve(kNumProjectors);
  for (int k = 0; k < kNumProjectors; ++k) {
    ComplexMatrix m = ComplexMatrix::Zero(kModelDim, kModelDim);
    const bool singlet = (k % 4) == 0;
    m(singlet ? kSingletShelf : kTripletShelf, k) = 1.0;
    out.push_back(std::move(m));
  }
  return out;
}

ComplexVector initial_state() {
  ComplexVector v = ComplexVector::Zero(kModelDim);
  const double r = 1.0 / std::sqrt(2.0);
  v(0) = r;
  v(4) = -r;
  return v;
}

}  // namespace rpm
