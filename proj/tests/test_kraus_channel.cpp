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

#include <doctest.h>

#include <numbers>
#include <random>

#include "rpm/kraus_channel.hpp"
#include "rpm/spin_model.hpp"
#include "test_support.hpp"

using namespace rpm;

namespace {

ComplexMatrix completeness_sum(const std::vector<ComplexMatrix>& ops) {
  ComplexMatrix sum = ComplexMatrix::Zero(ops.front().rows(), ops.front().cols());
  for (const auto& m : ops) sum += m.adjoint() * m;
  return sum;
}

const ComplexMatrix kI10 = ComplexMatrix::Identity(10, 10);

}  // namespace

TEST_CASE("build_decay_kraus") {
  const auto ps = decay_projectors();

  SUBCASE("no decay") {
    const auto ms = build_decay_kraus(1e4, 0.0, ps);
    REQUIRE(ms.size() == 9);
    CHECK((ms[0] - kI10).norm() <= 1e-15);
    for (int k = 1; k < 9; ++k) CHECK(ms[static_cast<std::size_t>(k)].isZero(0.0));
  }
  SUBCASE("half decay probability per step") {
    const auto ms = build_decay_kraus(1e4, 5e-5, ps);
    ComplexMatrix m0 = ComplexMatrix::Zero(10, 10);
    m0.diagonal() << std::sqrt(0.5), std::sqrt(0.5), std::sqrt(0.5), std::sqrt(0.5),
        std::sqrt(0.5), std::sqrt(0.5), std::sqrt(0.5), std::sqrt(0.5), 1, 1;
    CHECK((ms[0] - m0).norm() <= 1e-15);
    for (std::size_t k = 1; k < 9; ++k) {
      CHECK((ms[k] - std::sqrt(0.5) * ps[k - 1]).norm() == 0.0);
    }
  }
  SUBCASE("completeness for any admissible rate") {
    for (double rate : {0.0, 1e-6, 0.013, 0.25, 0.5, 0.77, 0.999, 1.0}) {
      const auto ms = build_decay_kraus(1.0, rate, ps);
      CHECK((completeness_sum(ms) - kI10).norm() <= 1e-13);
    }
  }
  SUBCASE("rates outside [0, 1] are rejected") {
    for (double dt : {-1e-5, 1.5e-4}) {
      try {
        build_decay_kraus(1e4, dt, ps);
        FAIL("expected InvalidStep");
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidStep);
      }
    }
  }
}

TEST_CASE("coherent_step_unitary") {
  const FieldParams p = default_params(std::numbers::pi / 2);

  SUBCASE("zero Hamiltonian") {
    CHECK(coherent_step_unitary(ComplexMatrix::Zero(10, 10), 5e-5, p.hbar) == kI10);
  }
  SUBCASE("shelf block is exactly the identity") {
    const ComplexMatrix u = coherent_step_unitary(build_hamiltonian(p), 5e-5, p.hbar);
    CHECK(u.bottomRightCorner(2, 2) == ComplexMatrix::Identity(2, 2));
    CHECK(u.topRightCorner(8, 2).isZero(0.0));
    CHECK(u.bottomLeftCorner(2, 8).isZero(0.0));
    CHECK((u.adjoint() * u - kI10).norm() <= 1e-10);
  }
  SUBCASE("agrees with a Pade series oracle") {
    const ComplexMatrix h = build_hamiltonian(p);
    const ComplexMatrix u = coherent_step_unitary(h, 5e-5, p.hbar);
    const ComplexMatrix ref = test::pade_expm(cdouble(0.0, -5e-5 / p.hbar) * h);
    CHECK((u - ref).norm() <= 1e-12);
  }
  SUBCASE("rejects shelf coupling and non-Hermitian input") {
    ComplexMatrix h = build_hamiltonian(p);
    h(8, 0) = h(0, 8) = 1e-27;
    try {
      coherent_step_unitary(h, 5e-5, p.hbar);
      FAIL("expected InvalidGenerator");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InvalidGenerator);
    }
    ComplexMatrix bad = ComplexMatrix::Zero(10, 10);
    bad(0, 1) = 1.0;
    try {
      coherent_step_unitary(bad, 5e-5, p.hbar);
      FAIL("expected NotHermitian");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NotHermitian);
    }
  }
}

TEST_CASE("compose_effective") {
  const auto ms = build_decay_kraus(1e4, 5e-5, decay_projectors());

  SUBCASE("identity coherent step") {
    const KrausStep step = compose_effective(ms, kI10, 5e-5);
    for (std::size_t k = 0; k < 9; ++k) CHECK(step.operators[k] == ms[k]);
  }
  SUBCASE("E1 has a single dense shelf row") {
    const KrausStep step = build_kraus_step(default_params(std::numbers::pi / 2), 5e-5);
    const ComplexMatrix& e1 = step.operators[1];
    for (int r = 0; r < 10; ++r) {
      for (int c = 0; c < 10; ++c) {
        if (r == 8 && c < 8) {
          CHECK(std::abs(e1(r, c)) > 0.0);
        } else {
          CHECK(e1(r, c) == cdouble(0.0));
        }
      }
    }
    // Row norm^2 = kd dt because U is unitary on the spin block.
    CHECK(e1.row(8).squaredNorm() == doctest::Approx(0.5).epsilon(1e-14));
  }
  SUBCASE("completeness survives arbitrary unitaries") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 20; ++trial) {
      const KrausStep step = compose_effective(ms, test::random_unitary(rng, 10), 5e-5);
      CHECK((completeness_sum(step.operators) - kI10).norm() <= 1e-12);
    }
  }
}

TEST_CASE("validate_completeness") {
  KrausStep step = build_kraus_step(default_params(std::numbers::pi / 2), 5e-5);
  CHECK(validate_completeness(step) <= 1e-12);

  KrausStep doubled = step;
  doubled.operators[1] *= 2.0;
  CHECK(validate_completeness(doubled) > 1e-10);

  KrausStep zero = step;
  for (auto& e : zero.operators) e.setZero();
  CHECK(validate_completeness(zero) == doctest::Approx(std::sqrt(10.0)));
}

TEST_CASE("channel properties over random states") {
  std::mt19937_64 rng(97);
  std::uniform_real_distribution<double> ang(0.0, std::numbers::pi);
  for (int trial = 0; trial < 20; ++trial) {
    const KrausStep step = build_kraus_step(default_params(ang(rng), ang(rng)), 5e-5);
    const ComplexMatrix rho = test::random_density(rng, 10);
    const ComplexMatrix out = apply_channel(step, rho);
    CHECK(std::abs(out.trace() - 1.0) <= 1e-12);
    CHECK(test::min_eigenvalue(out) >= -1e-10);
  }
}

TEST_CASE("shelved population is absorbed") {
  const KrausStep step = build_kraus_step(default_params(1.1), 5e-5);
  ComplexMatrix rho = ComplexMatrix::Zero(10, 10);
  rho(8, 8) = 0.3;
  rho(9, 9) = 0.7;
  const ComplexMatrix out = apply_channel(step, rho);
  CHECK((out.diagonal() - rho.diagonal()).norm() <= 1e-12);
}

TEST_CASE("decay Kraus products vanish exactly") {
  for (double theta : {0.0, 0.4, std::numbers::pi / 2, 2.9}) {
    const KrausStep step = build_kraus_step(default_params(theta, 0.3), 5e-5);
    for (std::size_t i = 1; i < 9; ++i) {
      for (std::size_t j = 1; j < 9; ++j) {
        const ComplexMatrix prod = step.operators[i] * step.operators[j];
        CHECK(prod.isZero(0.0));
      }
    }
  }
}
