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

#include <unsupported/Eigen/KroneckerProduct>

#include <deque>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "rbreuse/clifford.hpp"
#include "testutil.hpp"

namespace rbreuse::test_clifford {

namespace {

// Hashable fingerprint of a tableau.
std::string key(const CliffordGate& g) {
  std::string out;
  for (const auto& p : g.images()) {
    out += std::to_string(p.x) + ',' + std::to_string(p.z) + ',' +
           std::to_string(p.phase) + ';';
  }
  return out;
}

std::string ptm_key(const PauliTransferMatrix& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.matrix().size(); ++i) {
    const double v = m.matrix().data()[i];
    out += v > 0.5 ? '+' : (v < -0.5 ? '-' : '0');
  }
  return out;
}

Eigen::MatrixXcd on_qubit(const Eigen::MatrixXcd& u, int n, int q) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (int k = 0; k < n; ++k) {
    const Eigen::MatrixXcd f = k == q ? u : Eigen::MatrixXcd::Identity(2, 2);
    out = Eigen::kroneckerProduct(out, f).eval();
  }
  return out;
}

Eigen::MatrixXcd hadamard_u() {
  Eigen::MatrixXcd h(2, 2);
  h << 1, 1, 1, -1;
  return h / std::sqrt(2.0);
}

Eigen::MatrixXcd phase_u() {
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(2, 2);
  s(0, 0) = 1.0;
  s(1, 1) = std::complex<double>(0.0, 1.0);
  return s;
}

Eigen::MatrixXcd cnot01_u() {
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(4, 4);
  c(0, 0) = c(1, 1) = c(2, 3) = c(3, 2) = 1.0;
  return c;
}

// Closure of a generating set by breadth-first search on tableaux.
std::set<std::string> closure(const std::vector<CliffordGate>& generators) {
  const int n = generators.front().n_qubits();
  std::set<std::string> seen{key(CliffordGate(n))};
  std::deque<CliffordGate> frontier{CliffordGate(n)};
  while (!frontier.empty()) {
    const CliffordGate g = frontier.front();
    frontier.pop_front();
    for (const auto& s : generators) {
      CliffordGate next = compose(s, g);
      if (seen.insert(key(next)).second) frontier.push_back(std::move(next));
    }
  }
  return seen;
}

}  // namespace

TEST_CASE("group orders") {
  CHECK(clifford_group_order(1) == 24);
  CHECK(clifford_group_order(2) == 11520);
  CHECK(symplectic_group_order(3) == 1451520);
}

TEST_CASE("index enumeration is a bijection onto the generated group") {
  for (int n : {1, 2}) {
    const std::uint64_t order = clifford_group_order(n);
    std::set<std::string> tableaux;
    std::set<std::string> ptms;
    for (std::uint64_t i = 0; i < order; ++i) {
      const CliffordGate g = clifford_from_index(n, i);
      REQUIRE(g.is_symplectic());
      tableaux.insert(key(g));
      ptms.insert(ptm_key(g.ptm()));
    }
    CHECK(tableaux.size() == order);
    CHECK(ptms.size() == order);

    std::vector<CliffordGate> gens;
    for (int q = 0; q < n; ++q) {
      gens.push_back(gates::hadamard(n, q));
      gens.push_back(gates::phase(n, q));
    }
    if (n == 2) gens.push_back(gates::cnot(2, 0, 1));
    CHECK(closure(gens) == tableaux);
  }
  CHECK_THROWS_AS(clifford_from_index(1, 24), DomainError);
}

TEST_CASE("three-qubit samples are valid tableaux") {
  CounterRng rng(5, StreamDomain::kTest, 3, 0);
  for (int i = 0; i < 2000; ++i) {
    const CliffordGate g = sample_uniform(3, rng);
    REQUIRE(g.is_symplectic());
    REQUIRE(compose(g, inverse(g)).is_identity());
  }
}

TEST_CASE("uniform sampling") {
  SECTION("single qubit frequencies") {
    std::map<std::string, int> counts;
    CounterRng rng(2024, StreamDomain::kTest, 1, 0);
    const int draws = 24000;
    for (int i = 0; i < draws; ++i) ++counts[key(sample_uniform(1, rng))];
    REQUIRE(counts.size() == 24);
    double chi2 = 0.0;
    for (const auto& [k, c] : counts) chi2 += (c - 1000.0) * (c - 1000.0) / 1000.0;
    CHECK(chi2 < 49.73);  // 0.999 quantile, 23 dof
  }
  SECTION("two qubit draws") {
    CounterRng rng(99, StreamDomain::kTest, 2, 0);
    std::set<std::string> distinct;
    for (int i = 0; i < 100000; ++i) {
      const CliffordGate g = sample_uniform(2, rng);
      REQUIRE(g.is_symplectic());
      distinct.insert(key(g));
    }
    // About 11520 exp(-1e5 / 11520) ~ 2 elements stay unseen on average.
    CHECK(distinct.size() >= 11500);
  }
  SECTION("determinism") {
    CounterRng a(7, StreamDomain::kTest, 0, 1);
    CounterRng b(7, StreamDomain::kTest, 0, 1);
    for (int i = 0; i < 100; ++i) CHECK(sample_uniform(2, a) == sample_uniform(2, b));
  }
}

TEST_CASE("inverse") {
  CHECK(inverse(CliffordGate(2)).is_identity());
  const CliffordGate h = gates::hadamard(1, 0);
  CHECK(inverse(h) == h);
  CHECK(compose(h, h).is_identity());
  const CliffordGate s = gates::phase(1, 0);
  CHECK(inverse(s) == compose(s, compose(s, s)));

  for (int n : {1, 2}) {
    for (std::uint64_t i = 0; i < clifford_group_order(n); i += (n == 1 ? 1 : 7)) {
      const CliffordGate g = clifford_from_index(n, i);
      const CliffordGate gi = inverse(g);
      REQUIRE(compose(g, gi).is_identity());
      REQUIRE(compose(gi, g).is_identity());
      REQUIRE(testutil::max_abs_diff(gi.ptm().matrix(),
                                     g.ptm().matrix().inverse()) < 1e-12);
    }
  }
}

TEST_CASE("tableau products follow transfer matrix products") {
  CounterRng rng(11, StreamDomain::kTest, 4, 0);
  for (int i = 0; i < 500; ++i) {
    const CliffordGate a = sample_uniform(2, rng);
    const CliffordGate b = sample_uniform(2, rng);
    REQUIRE(compose(a, b).ptm().matrix() ==
            compose(a.ptm(), b.ptm()).matrix());
  }
}

TEST_CASE("standard gates match their unitaries") {
  CHECK(testutil::max_abs_diff(gates::hadamard(1, 0).ptm().matrix(),
                               ptm_from_unitary(hadamard_u(), 1).matrix()) < 1e-12);
  CHECK(testutil::max_abs_diff(gates::phase(1, 0).ptm().matrix(),
                               ptm_from_unitary(phase_u(), 1).matrix()) < 1e-12);
  for (int q : {0, 1}) {
    CHECK(testutil::max_abs_diff(
              gates::hadamard(2, q).ptm().matrix(),
              ptm_from_unitary(on_qubit(hadamard_u(), 2, q), 2).matrix()) < 1e-12);
    CHECK(testutil::max_abs_diff(
              gates::phase(2, q).ptm().matrix(),
              ptm_from_unitary(on_qubit(phase_u(), 2, q), 2).matrix()) < 1e-12);
  }
  CHECK(testutil::max_abs_diff(gates::cnot(2, 0, 1).ptm().matrix(),
                               ptm_from_unitary(cnot01_u(), 2).matrix()) < 1e-12);
  Eigen::MatrixXcd x(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  z << 1, 0, 0, -1;
  CHECK(testutil::max_abs_diff(gates::pauli_x(1, 0).ptm().matrix(),
                               ptm_from_unitary(x, 1).matrix()) < 1e-12);
  CHECK(testutil::max_abs_diff(gates::pauli_z(1, 0).ptm().matrix(),
                               ptm_from_unitary(z, 1).matrix()) < 1e-12);
}

TEST_CASE("sequence inverse") {
  CounterRng rng(3, StreamDomain::kTest, 5, 0);
  for (int n : {1, 2, 3}) {
    const GateSequence seq = GateSequence::sample(n, 20, rng);
    CliffordGate expected(n);
    for (const auto& g : seq.gates) expected = compose(expected, inverse(g));
    CHECK(seq.inverse_gate == expected);

    // Noiseless propagation returns |0><0| exactly.
    Eigen::VectorXcd ket = Eigen::VectorXcd::Zero(dimension(n));
    ket[0] = 1.0;
    const StateVec rho = StateVec::from_ket(ket, n);
    StateVec s = rho;
    for (const auto& g : seq.gates) s = apply(g.ptm(), s);
    s = apply(seq.inverse_gate.ptm(), s);
    const EffectVec q = EffectVec::from_operator(rho.density(), n);
    CHECK(expectation(q, s) == Catch::Approx(1.0).margin(1e-12));
  }
  CHECK_THROWS_AS(sequence_inverse(std::span<const CliffordGate>{}), DomainError);
}

TEST_CASE("Clifford twirl of a channel is depolarizing") {
  for (int n : {1, 2}) {
    const auto kraus =
        KrausSet(n, testutil::tensor_power_kraus(testutil::amplitude_damping_kraus(0.8), n));
    const PauliTransferMatrix lambda = ptm_from_kraus(kraus);
    const int dd = pauli_count(n);
    Eigen::MatrixXd twirl = Eigen::MatrixXd::Zero(dd, dd);
    const std::uint64_t order = clifford_group_order(n);
    for (std::uint64_t i = 0; i < order; ++i) {
      const Eigen::MatrixXd c = clifford_from_index(n, i).ptm().matrix();
      twirl += c.transpose() * lambda.matrix() * c;
    }
    twirl /= static_cast<double>(order);
    const double f = quality_parameter(lambda);
    Eigen::MatrixXd expected = f * Eigen::MatrixXd::Identity(dd, dd);
    expected(0, 0) = 1.0;
    CHECK(testutil::max_abs_diff(twirl, expected) < 1e-12);
  }
}

}  // namespace rbreuse::test_clifford
