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

#include "rpm/exact_oracle.hpp"

#include <cmath>
#include <string>

namespace rpm {

ComplexVector vec(const ComplexMatrix& rho) {
  // Eigen is column-major, so the raw storage is already column-stacked.
  return Eigen::Map<const ComplexVector>(rho.data(), rho.size());
}

ComplexMatrix unvec(const ComplexVector& v, int dim) {
  if (v.size() != static_cast<Eigen::Index>(dim) * dim) {
    throw Error(ErrorKind::DimensionMismatch, "unvec: size mismatch");
  }
  return Eigen::Map<const ComplexMatrix>(v.data(), dim, dim);
}

Superoperator build_liouvillian(const ComplexMatrix& h,
                                const std::vector<ComplexMatrix>& projectors,
                                double kd, double hbar) {
  require_hermitian(h, "build_liouvillian");
  if (!(kd >= 0.0)) throw Error(ErrorKind::ValidationError, "build_liouvillian: kd < 0");
  const Eigen::Index d = h.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  const cdouble minus_i_over_hbar{0.0, -1.0 / hbar};

  Superoperator l;
  l.dim = static_cast<int>(d);
  l.matrix = minus_i_over_hbar *
             (kron<double>(id, h) - kron<double>(h.transpose(), id));
  for (const auto& p : projectors) {
    const ComplexMatrix pp = p.adjoint() * p;
    l.matrix += kd * (kron<double>(p.conjugate(), p) -
                      0.5 * kron<double>(id, pp) -
                      0.5 * kron<double>(pp.transpose(), id));
  }
  return l;
}

Superoperator build_liouvillian(const FieldParams& p) {
  return build_liouvillian(build_hamiltonian(p), decay_projectors(), p.kd, p.hbar);
}

ComplexMatrix trace_functional(int dim) {
  ComplexMatrix r = ComplexMatrix::Zero(1, static_cast<Eigen::Index>(dim) * dim);
  for (int i = 0; i < dim; ++i) r(0, i * dim + i) = 1.0;
  return r;
}

void require_density_matrix(const ComplexMatrix& rho) {
  auto fail = [](const std::string& what) {
    throw Error(ErrorKind::BadDensityMatrix, "density matrix: " + what);
  };
  if (rho.rows() < 1 || rho.rows() != rho.cols()) fail("not square");
  if (!rho.allFinite()) fail("non-finite entries");
  if (hermiticity_defect<double>(rho) > 1e-10) fail("not Hermitian");
  if (std::abs(rho.trace() - 1.0) > 1e-10) fail("trace != 1");
  const ComplexMatrix sym = (rho + rho.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(sym, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues()(0) < -1e-9) fail("not positive semidefinite");
}

namespace {

ComplexVector rk4(const ComplexMatrix& l, ComplexVector y, double t, int substeps) {
  const double h = t / substeps;
  for (int s = 0; s < substeps; ++s) {
    const ComplexVector k1 = l * y;
    const ComplexVector k2 = l * (y + 0.5 * h * k1);
    const ComplexVector k3 = l * (y + 0.5 * h * k2);
    const ComplexVector k4 = l * (y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return y;
}

}  // namespace

ComplexMatrix propagate_exact(const Superoperator& l, const ComplexMatrix& rho0,
                              double t, Propagator method, int substeps) {
  require_density_matrix(rho0);
  if (rho0.rows() != l.dim) {
    throw Error(ErrorKind::DimensionMismatch, "propagate_exact: dimension mismatch");
  }
  if (!(t >= 0.0)) throw Error(ErrorKind::ValidationError, "propagate_exact: t < 0");
  if (t == 0.0) return rho0;

  ComplexVector out;
  if (method == Propagator::Expm) {
    const ComplexMatrix lt = l.matrix * t;
    out = expm_taylor<double>(lt) * vec(rho0);
  } else {
    if (substeps < 1) {
      throw Error(ErrorKind::ValidationError, "propagate_exact: substeps must be >= 1");
    }
    out = rk4(l.matrix, vec(rho0), t, substeps);
  }
  const ComplexMatrix rho = unvec(out, l.dim);
  return (rho + rho.adjoint()) * 0.5;
}

ComplexMatrix initial_density() {
  const ComplexVector psi = initial_state();
  return psi * psi.adjoint();
}

TrajectoryRecord exact_trajectory(const FieldParams& p, int n_steps, double dt) {
  if (n_steps < 1 || !(dt > 0.0)) {
    throw Error(ErrorKind::ValidationError, "exact_trajectory: need n_steps >= 1, dt > 0");
  }
  const Superoperator l = build_liouvillian(p);
  const ComplexMatrix rho0 = initial_density();
  TrajectoryRecord rec;
  for (int s = 0; s <= n_steps; ++s) {
    const ComplexMatrix rho = propagate_exact(l, rho0, s * dt);
    rec.append(s * dt, rho.diagonal().real(), 0);
  }
  return rec;
}

YieldEstimate oracle_yields(const FieldParams& p, double t_final, double check_interval,
                            double tol) {
  const Superoperator l = build_liouvillian(p);
  const ComplexMatrix rho = propagate_exact(l, initial_density(), t_final);
  const ComplexMatrix rate = unvec(l.matrix * vec(rho), l.dim);

  YieldEstimate y;
  y.singlet = rho(kSingletShelf, kSingletShelf).real();
  y.triplet = rho(kTripletShelf, kTripletShelf).real();
  y.drift = rate.diagonal().real().cwiseAbs().maxCoeff() * check_interval;
  y.converged = y.drift < tol;
  return y;
}

YieldEstimate steady_state_yields(const FieldParams& p, double t_final,
                                  double check_interval, double tol) {
  YieldEstimate y = oracle_yields(p, t_final, check_interval, tol);
  if (!y.converged) {
    throw Error(ErrorKind::NotConverged,
                "steady_state_yields: drift " + std::to_string(y.drift) +
                    " at t = " + std::to_string(t_final) + " s exceeds " +
                    std::to_string(tol));
  }
  return y;
}

}  // namespace rpm
