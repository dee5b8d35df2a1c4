// Copyright 2026 The rbreuse Authors
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

#include <catch2/catch_amalgamated.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <random>

#include "rbreuse/liouville.hpp"
#include "testutil.hpp"

namespace rbreuse::test_liouville {

using testutil::amplitude_damping_kraus;
using testutil::max_abs_diff;
using testutil::phase_damping_kraus;

TEST_CASE("ptm_from_kraus matches the dense superoperator oracle") {
  SECTION("identity") {
    const auto m = ptm_from_kraus(KrausSet(1, {Eigen::MatrixXcd::Identity(2, 2)}));
    CHECK(max_abs_diff(m.matrix(), Eigen::MatrixXd::Identity(4, 4)) < 1e-15);
  }
  SECTION("amplitude damping p=0.36") {
    const KrausSet k(1, amplitude_damping_kraus(0.36));
    const auto m = ptm_from_kraus(k);
    CHECK(max_abs_diff(m.matrix(), testutil::oracle_ptm(k)) < 1e-14);
    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(4, 4);
    expected(0, 0) = 1.0;
    expected(1, 1) = 0.6;
    expected(2, 2) = 0.6;
    expected(3, 3) = 0.36;
    expected(3, 0) = 0.64;
    CHECK(max_abs_diff(m.matrix(), expected) < 1e-14);
  }
  SECTION("phase damping p=0.25") {
    const KrausSet k(1, phase_damping_kraus(0.25));
    const auto m = ptm_from_kraus(k);
    CHECK(max_abs_diff(m.matrix(), testutil::oracle_ptm(k)) < 1e-14);
    Eigen::Vector4d diag(1.0, 0.5, 0.5, 1.0);
    CHECK(max_abs_diff(m.matrix(), Eigen::MatrixXd(diag.asDiagonal())) < 1e-14);
  }
  SECTION("random two-qubit channel") {
    std::mt19937_64 gen(5);
    const KrausSet k = testutil::random_kraus(2, 3, gen);
    CHECK(max_abs_diff(ptm_from_kraus(k).matrix(), testutil::oracle_ptm(k)) < 1e-12);
  }
}

TEST_CASE("invalid Kraus sets are rejected") {
  auto ops = amplitude_damping_kraus(0.5);
  ops[1] *= 1.01;
  CHECK_THROWS_AS(KrausSet(1, ops), DomainError);
  CHECK_THROWS_AS(KrausSet(2, amplitude_damping_kraus(0.5)), ShapeError);
  CHECK_THROWS_AS(KrausSet(1, {}), DomainError);
}

TEST_CASE("ptm_from_unitary") {
  SECTION("identity") {
    const auto m = ptm_from_unitary(Eigen::MatrixXcd::Identity(4, 4), 2);
    CHECK(max_abs_diff(m.matrix(), Eigen::MatrixXd::Identity(16, 16)) < 1e-15);
    CHECK(quality_parameter(m) == 1.0);
  }
  SECTION("Pauli Z") {
    Eigen::MatrixXcd z(2, 2);
    z << 1, 0, 0, -1;
    const auto m = ptm_from_unitary(z, 1);
    CHECK(max_abs_diff(m.matrix(), testutil::oracle_ptm(KrausSet(1, {z}))) < 1e-15);
    Eigen::Vector4d diag(1.0, -1.0, -1.0, 1.0);
    CHECK(max_abs_diff(m.matrix(), Eigen::MatrixXd(diag.asDiagonal())) < 1e-15);
    CHECK(m.is_orthogonal());
  }
  SECTION("exp(i pi/2 SWAP) permutes Pauli strings") {
    const Eigen::MatrixXcd swap = testutil::swap_matrix();
    const Eigen::MatrixXcd u = (Complex{0.0, M_PI / 2} * swap).exp();
    const auto m = ptm_from_unitary(u, 2);
    Eigen::MatrixXd perm = Eigen::MatrixXd::Zero(16, 16);
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) perm(4 * b + a, 4 * a + b) = 1.0;
    }
    CHECK(max_abs_diff(m.matrix(), perm) < 1e-12);
    CHECK(m.is_orthogonal(1e-10));
  }
  SECTION("non-unitary input") {
    Eigen::MatrixXcd bad = Eigen::MatrixXcd::Identity(2, 2);
    bad(0, 0) = 1.1;
    CHECK_THROWS_AS(ptm_from_unitary(bad, 1), DomainError);
  }
}

TEST_CASE("apply propagates density matrices") {
  const StateVec zero = StateVec::zeros(1);
  SECTION("identity channel") {
    const auto out = apply(PauliTransferMatrix::identity(1), zero);
    CHECK(max_abs_diff(out.coefficients(), zero.coefficients()) == 0.0);
  }
  SECTION("depolarizing on |0><0|") {
    const double p = 0.7;
    Eigen::Vector4d diag(1.0, p, p, p);
    const PauliTransferMatrix dep(1, Eigen::MatrixXd(diag.asDiagonal()));
    const auto out = apply(dep, zero);
    // Oracle: rho' = p rho + (1 - p) I / 2, expanded directly.
    const Eigen::MatrixXcd rho = zero.density();
    const Eigen::MatrixXcd expected_rho =
        p * rho + (1 - p) * 0.5 * Eigen::MatrixXcd::Identity(2, 2);
    CHECK(max_abs_diff(out.coefficients(), pauli_coefficients(expected_rho, 1)) < 1e-15);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(max_abs_diff(out.coefficients(), Eigen::Vector4d(r, 0, 0, p * r)) < 1e-15);
  }
  SECTION("Z maps |+> to |->") {
    Eigen::MatrixXcd z(2, 2);
    z << 1, 0, 0, -1;
    const auto plus = StateVec::from_ket(Eigen::Vector2cd(1, 1), 1);
    const auto minus = StateVec::from_ket(Eigen::Vector2cd(1, -1), 1);
    const auto out = apply(ptm_from_unitary(z, 1), plus);
    CHECK(max_abs_diff(out.coefficients(), minus.coefficients()) < 1e-15);
  }
  SECTION("shape mismatch") {
    CHECK_THROWS_AS(apply(PauliTransferMatrix::identity(2), zero), ShapeError);
  }
}

TEST_CASE("compose") {
  std::mt19937_64 gen(17);
  const auto m = ptm_from_kraus(testutil::random_kraus(1, 2, gen));
  CHECK(max_abs_diff(compose(m, PauliTransferMatrix::identity(1)).matrix(),
                     m.matrix()) == 0.0);

  Eigen::MatrixXcd z(2, 2);
  z << 1, 0, 0, -1;
  const auto zz = compose(ptm_from_unitary(z, 1), ptm_from_unitary(z, 1));
  CHECK(max_abs_diff(zz.matrix(), Eigen::MatrixXd::Identity(4, 4)) < 1e-15);

  SECTION("phase damping after amplitude damping equals the composed Kraus set") {
    const auto la = amplitude_damping_kraus(0.999);
    const auto lp = phase_damping_kraus(0.99);
    std::vector<Eigen::MatrixXcd> joint;
    for (const auto& e : lp) {
      for (const auto& k : la) joint.push_back(e * k);
    }
    const auto composed =
        compose(ptm_from_kraus(KrausSet(1, lp)), ptm_from_kraus(KrausSet(1, la)));
    CHECK(max_abs_diff(composed.matrix(),
                       testutil::oracle_ptm(KrausSet(1, joint))) < 1e-14);
  }
  CHECK_THROWS_AS(compose(m, PauliTransferMatrix::identity(2)), ShapeError);
}

TEST_CASE("expectation") {
  const auto q0 = EffectVec::zeros(1);
  CHECK(expectation(q0, StateVec::zeros(1)) == Catch::Approx(1.0).margin(1e-15));
  CHECK(expectation(q0, StateVec::maximally_mixed(1)) ==
        Catch::Approx(0.5).margin(1e-15));

  // SWAP |01><01| = |10><10|, orthogonal to |00>.
  Eigen::VectorXcd ket01 = Eigen::VectorXcd::Zero(4);
  ket01[1] = 1.0;
  const auto swapped =
      apply(ptm_from_unitary(testutil::swap_matrix(), 2), StateVec::from_ket(ket01, 2));
  CHECK(expectation(EffectVec::zeros(2), swapped) == Catch::Approx(0.0).margin(1e-15));

  SECTION("non-physical pairs are reported") {
    Eigen::Vector4d c(1.0 / std::sqrt(2.0), 0.0, 0.0, 2.0);
    const StateVec fake(1, c);  // unit trace but not positive
    CHECK_THROWS_AS(StateVec::from_coefficients(c, 1), DomainError);
    CHECK_THROWS_AS(expectation(q0, fake), NumericalViolation);
  }
  SECTION("effects outside [0, I] are rejected") {
    Eigen::MatrixXcd two = 2.0 * Eigen::MatrixXcd::Identity(2, 2);
    CHECK_THROWS_AS(EffectVec::from_operator(two, 1), DomainError);
  }
}

TEST_CASE("quality parameter and average fidelity") {
  CHECK(quality_parameter(PauliTransferMatrix::identity(2)) == 1.0);
  for (double p : {0.0, 0.3, 0.95}) {
    Eigen::VectorXd diag = Eigen::VectorXd::Constant(16, p);
    diag[0] = 1.0;
    const PauliTransferMatrix dep(2, Eigen::MatrixXd(diag.asDiagonal()));
    CHECK(quality_parameter(dep) == Catch::Approx(p).margin(1e-15));
  }

  SECTION("amplitude damping p=0.36 against the fidelity oracles") {
    const KrausSet k(1, amplitude_damping_kraus(0.36));
    const double f = quality_parameter(ptm_from_kraus(k));
    CHECK(f == Catch::Approx(0.52).margin(1e-14));

    // The six Pauli eigenstates form a 2-design, so their mean fidelity is
    // the exact Haar average.
    const double f_design =
        (2.0 * testutil::mean_state_fidelity(k, testutil::octahedron_states()) - 1.0);
    CHECK(f_design == Catch::Approx(0.52).margin(1e-14));

    std::mt19937_64 gen(3);
    const auto haar = testutil::haar_states(1, 200000, gen);
    const double f_mc = 2.0 * testutil::mean_state_fidelity(k, haar) - 1.0;
    CHECK(f_mc == Catch::Approx(0.52).margin(2e-3));
  }

  CHECK(avg_fidelity(1.0, 1) == 1.0);
  CHECK(avg_fidelity(0.0, 1) == 0.5);
  CHECK(avg_fidelity(0.52, 1) == Catch::Approx(0.76).margin(1e-15));
  CHECK(avg_fidelity(0.0, 2) == 0.25);
}

TEST_CASE("transfer matrix invariants on random channels") {
  std::mt19937_64 gen(2024);
  for (int n = 1; n <= 2; ++n) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto a = ptm_from_kraus(testutil::random_kraus(n, 2, gen));
      const auto b = ptm_from_kraus(testutil::random_kraus(n, 3, gen));
      const auto c = ptm_from_kraus(testutil::random_kraus(n, 1, gen));
      CHECK(max_abs_diff(compose(compose(a, b), c).matrix(),
                         compose(a, compose(b, c)).matrix()) < 1e-12);

      const auto s = StateVec::from_density(testutil::haar_states(n, 1, gen)[0], n);
      CHECK(max_abs_diff(apply(compose(a, b), s).coefficients(),
                         apply(a, apply(b, s)).coefficients()) < 1e-12);

      CHECK(a.matrix().row(0).isApprox(Eigen::RowVectorXd::Unit(a.matrix().cols(), 0)));
      CHECK(a.matrix().cwiseAbs().maxCoeff() <= 1.0 + 1e-9);

      // single-unitary Kraus set
      const KrausSet u(n, {testutil::random_kraus(n, 1, gen).operators()[0]});
      CHECK(max_abs_diff(ptm_from_kraus(u).matrix(),
                         ptm_from_unitary(u.operators()[0], n).matrix()) < 1e-12);
      CHECK(ptm_from_kraus(u).is_orthogonal());
    }
  }

  SECTION("probabilities stay in [0,1] for 1000 random pure states") {
    const auto channel = ptm_from_kraus(testutil::random_kraus(2, 4, gen));
    const auto q = EffectVec::zeros(2);
    const auto states = testutil::haar_states(2, 1000, gen);
    for (const auto& rho : states) {
      const auto out = apply(channel, StateVec::from_density(rho, 2));
      const double raw = q.coefficients().dot(out.coefficients());
      CHECK(raw >= -1e-9);
      CHECK(raw <= 1.0 + 1e-9);
    }
  }
}

}  // namespace rbreuse::test_liouville
