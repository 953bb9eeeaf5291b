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

#ifndef RPM_EXACT_ORACLE_HPP_
#define RPM_EXACT_ORACLE_HPP_

// Reference propagation of the Lindblad equation
//
//   d rho/dt = -(i/hbar)[H, rho] + kd sum_i (P_i rho P_i^dag - 1/2 {P_i^dag P_i, rho})
//
// on column-stacked density matrices: vec(A rho B) = (B^T (x) A) vec(rho).

#include <vector>

#include "rpm/evolution.hpp"
#include "rpm/linalg.hpp"
#include "rpm/spin_model.hpp"

namespace rpm {

struct Superoperator {
  ComplexMatrix matrix;  // d^2 x d^2, units 1/s
  int dim = 0;           // d
};

ComplexVector vec(const ComplexMatrix& rho);
ComplexMatrix unvec(const ComplexVector& v, int dim);

Superoperator build_liouvillian(const ComplexMatrix& h,
                                const std::vector<ComplexMatrix>& projectors,
                                double kd, double hbar);

Superoperator build_liouvillian(const FieldParams& p);

/// Row vector r with r . vec(rho) = tr(rho).
ComplexMatrix trace_functional(int dim);

enum class Propagator { Expm, Rk4 };

inline constexpr int kDefaultRk4Substeps = 10000;

/// Throws BadDensityMatrix unless rho is Hermitian, trace 1 and PSD
/// (each within 1e-10, min eigenvalue >= -1e-9).
void require_density_matrix(const ComplexMatrix& rho);

/// rho(t) from rho0. Expm uses exp(L t) by Taylor scaling-and-squaring,
/// Rk4 uses `substeps` uniform classic Runge-Kutta steps. The result is
/// symmetrized to be exactly Hermitian.
ComplexMatrix propagate_exact(const Superoperator& l, const ComplexMatrix& rho0,
                              double t, Propagator method = Propagator::Expm,
                              int substeps = kDefaultRk4Substeps);

ComplexMatrix initial_density();

/// Exact diagonals at t = 0, dt, ..., n_steps*dt from the singlet state.
TrajectoryRecord exact_trajectory(const FieldParams& p, int n_steps, double dt);

struct YieldEstimate {
  double singlet = 0.0;
  double triplet = 0.0;
  /// max_i |d rho_ii / dt| * check_interval at t_final.
  double drift = 0.0;
  bool converged = false;
};

inline constexpr double kSteadyStateTol = 1e-6;

/// Shelf populations of the exact solution at t_final with a steady-state
/// diagnostic; never throws NotConverged.
YieldEstimate oracle_yields(const FieldParams& p, double t_final,
                            double check_interval = kDefaultDt,
                            double tol = kSteadyStateTol);

/// As oracle_yields, but throws NotConverged when the drift check fails.
YieldEstimate steady_state_yields(const FieldParams& p, double t_final,
                                  double check_interval = kDefaultDt,
                                  double tol = kSteadyStateTol);

}  // namespace rpm

#endif  // RPM_EXACT_ORACLE_HPP_
