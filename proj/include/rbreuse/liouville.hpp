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

#pragma once

// Liouville (Pauli transfer matrix) representation.
//
// Operators on n qubits are expanded in the normalized Pauli basis
// sigma_i = P_i / sqrt(d), d = 2^n, with P_i running lexicographically over
// {I, X, Y, Z}^n and qubit 0 as the leftmost tensor factor.  Index i has
// base-4 digits (qubit 0 most significant) with I=0, X=1, Y=2, Z=3.
//
// A channel L becomes the real matrix M_ij = Tr(sigma_i L(sigma_j)); a state
// rho the vector s_i = Tr(sigma_i rho); an effect Q the vector q_i =
// Tr(sigma_i Q).  Then Tr(Q L(rho)) = q . (M s), and composition of
// channels is the matrix product.
//
// The quality parameter of a channel is the depolarizing parameter of its
// twirl over a unitary 2-design.  Twirling keeps the (0,0) entry and
// replaces the unital block by its average diagonal, so
//   f = (Tr(M) - 1) / (d^2 - 1),
// which for the global depolarizing channel diag(1, p, ..., p) returns p.

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "rbreuse/error.hpp"

namespace rbreuse {

using Complex = std::complex<double>;

inline constexpr int kMaxQubits = 3;

// Tolerances for constructions, propagation and probabilities.
inline constexpr double kConstructionTol = 1e-10;
inline constexpr double kPropagationTol = 1e-12;
inline constexpr double kProbabilitySlack = 1e-9;

inline int dimension(int n_qubits) { return 1 << n_qubits; }
inline int pauli_count(int n_qubits) { return 1 << (2 * n_qubits); }

inline void require_qubits(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw DomainError("unsupported qubit count " + std::to_string(n_qubits) +
                      " (supported: 1.." + std::to_string(kMaxQubits) + ")");
  }
}

namespace detail {

inline std::array<Eigen::Matrix2cd, 4> single_qubit_paulis() {
  const Complex i{0.0, 1.0};
  Eigen::Matrix2cd id, x, y, z;
  id << 1, 0, 0, 1;
  x << 0, 1, 1, 0;
  y << 0, -i, i, 0;
  z << 1, 0, 0, -1;
  return {id, x, y, z};
}

inline std::vector<Eigen::MatrixXcd> build_basis(int n_qubits) {
  const auto paulis = single_qubit_paulis();
  const double norm = 1.0 / std::sqrt(static_cast<double>(dimension(n_qubits)));
  std::vector<Eigen::MatrixXcd> basis;
  basis.reserve(pauli_count(n_qubits));
  for (int idx = 0; idx < pauli_count(n_qubits); ++idx) {
    Eigen::MatrixXcd op = Eigen::MatrixXcd::Identity(1, 1);
    for (int q = 0; q < n_qubits; ++q) {
      const int digit = (idx >> (2 * (n_qubits - 1 - q))) & 3;
      Eigen::MatrixXcd next = Eigen::kroneckerProduct(op, paulis[digit]).eval();
      op = std::move(next);
    }
    basis.push_back(op * norm);
  }
  return basis;
}

}  // namespace detail

/// Normalized Pauli basis for n qubits, in canonical order.
inline const std::vector<Eigen::MatrixXcd>& pauli_basis(int n_qubits) {
  require_qubits(n_qubits);
  static const auto cache = [] {
    std::array<std::vector<Eigen::MatrixXcd>, kMaxQubits + 1> all;
    for (int n = 1; n <= kMaxQubits; ++n) all[n] = detail::build_basis(n);
    return all;
  }();
  return cache[n_qubits];
}

/// Label such as "IX" or "ZZ" for a basis index.
inline std::string pauli_label(int index, int n_qubits) {
  static constexpr char kNames[] = {'I', 'X', 'Y', 'Z'};
  std::string label(n_qubits, 'I');
  for (int q = 0; q < n_qubits; ++q) {
    label[q] = kNames[(index >> (2 * (n_qubits - 1 - q))) & 3];
  }
  return label;
}

/// Real Pauli coefficients Tr(sigma_i op) of a Hermitian operator.
inline Eigen::VectorXd pauli_coefficients(const Eigen::MatrixXcd& op,
                                          int n_qubits) {
  const int d = dimension(n_qubits);
  if (op.rows() != d || op.cols() != d) {
    throw ShapeError("operator is not " + std::to_string(d) + "x" +
                     std::to_string(d));
  }
  const auto& basis = pauli_basis(n_qubits);
  Eigen::VectorXd out(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Complex c = (basis[i] * op).trace();
    if (std::abs(c.imag()) > kConstructionTol) {
      throw DomainError("operator is not Hermitian");
    }
    out[static_cast<Eigen::Index>(i)] = c.real();
  }
  return out;
}

inline Eigen::MatrixXcd operator_from_coefficients(const Eigen::VectorXd& c,
                                                   int n_qubits) {
  const auto& basis = pauli_basis(n_qubits);
  if (c.size() != static_cast<Eigen::Index>(basis.size())) {
    throw ShapeError("coefficient vector has wrong length");
  }
  Eigen::MatrixXcd op =
      Eigen::MatrixXcd::Zero(dimension(n_qubits), dimension(n_qubits));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    op += c[static_cast<Eigen::Index>(i)] * basis[i];
  }
  return op;
}

/// Real d^2 x d^2 transfer matrix of a trace-preserving channel.
class PauliTransferMatrix {
 public:
  /// Validates trace preservation (row 0 is the unit row) and the entry
  /// bound |M_ij| <= 1.
  PauliTransferMatrix(int n_qubits, Eigen::MatrixXd entries)
      : n_qubits_(n_qubits), m_(std::move(entries)) {
    require_qubits(n_qubits);
    const int dd = pauli_count(n_qubits);
    if (m_.rows() != dd || m_.cols() != dd) {
      throw ShapeError("transfer matrix must be " + std::to_string(dd) + "x" +
                       std::to_string(dd));
    }
    for (int j = 0; j < dd; ++j) {
      const double expected = j == 0 ? 1.0 : 0.0;
      if (std::abs(m_(0, j) - expected) > kPropagationTol) {
        throw DomainError("transfer matrix is not trace preserving");
      }
    }
    if (m_.cwiseAbs().maxCoeff() > 1.0 + kProbabilitySlack) {
      throw DomainError("transfer matrix entry exceeds the CPTP bound");
    }
  }

  static PauliTransferMatrix identity(int n_qubits) {
    require_qubits(n_qubits);
    return {n_qubits, Eigen::MatrixXd::Identity(pauli_count(n_qubits),
                                                pauli_count(n_qubits))};
  }

  int n_qubits() const { return n_qubits_; }
  const Eigen::MatrixXd& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  bool is_orthogonal(double tol = kConstructionTol) const {
    const auto gram = m_.transpose() * m_;
    return (gram - Eigen::MatrixXd::Identity(m_.rows(), m_.cols()))
               .cwiseAbs()
               .maxCoeff() <= tol;
  }

 private:
  int n_qubits_;
  Eigen::MatrixXd m_;
};

/// Density operator in the Pauli basis.  Coefficient 0 is 1/sqrt(d).
class StateVec {
 public:
  StateVec(int n_qubits, Eigen::VectorXd coefficients)
      : n_qubits_(n_qubits), c_(std::move(coefficients)) {
    require_qubits(n_qubits);
    if (c_.size() != pauli_count(n_qubits)) {
      throw ShapeError("state vector has wrong length");
    }
    const double unit = 1.0 / std::sqrt(static_cast<double>(dimension(n_qubits)));
    if (std::abs(c_[0] - unit) > kPropagationTol) {
      throw DomainError("state does not have unit trace");
    }
  }

  /// From a density matrix; checks Hermiticity, unit trace and positivity.
  static StateVec from_density(const Eigen::MatrixXcd& rho, int n_qubits) {
    check_positive(rho, "density matrix");
    return {n_qubits, pauli_coefficients(rho, n_qubits)};
  }

  /// From explicit Pauli coefficients; checks the result is a density matrix.
  static StateVec from_coefficients(const Eigen::VectorXd& c, int n_qubits) {
    StateVec s(n_qubits, c);
    check_positive(operator_from_coefficients(c, n_qubits), "state");
    return s;
  }

  static StateVec from_ket(const Eigen::VectorXcd& ket, int n_qubits) {
    const Eigen::VectorXcd v = ket.normalized();
    return from_density(v * v.adjoint(), n_qubits);
  }

  /// |0...0><0...0|
  static StateVec zeros(int n_qubits) {
    require_qubits(n_qubits);
    Eigen::VectorXcd ket = Eigen::VectorXcd::Zero(dimension(n_qubits));
    ket[0] = 1.0;
    return from_ket(ket, n_qubits);
  }

  static StateVec maximally_mixed(int n_qubits) {
    require_qubits(n_qubits);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(pauli_count(n_qubits));
    c[0] = 1.0 / std::sqrt(static_cast<double>(dimension(n_qubits)));
    return {n_qubits, c};
  }

  int n_qubits() const { return n_qubits_; }
  const Eigen::VectorXd& coefficients() const { return c_; }
  Eigen::MatrixXcd density() const {
    return operator_from_coefficients(c_, n_qubits_);
  }

 private:
  static void check_positive(const Eigen::MatrixXcd& op, const char* what) {
    if ((op - op.adjoint()).cwiseAbs().maxCoeff() > kConstructionTol) {
      throw DomainError(std::string(what) + " is not Hermitian");
    }
    if (std::abs(op.trace() - Complex{1.0, 0.0}) > kConstructionTol) {
      throw DomainError(std::string(what) + " does not have unit trace");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(op);
    if (eig.eigenvalues().minCoeff() < -kProbabilitySlack) {
      throw DomainError(std::string(what) + " is not positive semidefinite");
    }
  }

  int n_qubits_;
  Eigen::VectorXd c_;
};

/// POVM element Q with 0 <= Q <= I, in the Pauli basis.
class EffectVec {
 public:
  /// Checks the operator inequality 0 <= Q <= I, which is equivalent to
  /// Tr(Q rho) in [0, 1] for every state.
  static EffectVec from_operator(const Eigen::MatrixXcd& q, int n_qubits) {
    if ((q - q.adjoint()).cwiseAbs().maxCoeff() > kConstructionTol) {
      throw DomainError("effect is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(q);
    if (eig.eigenvalues().minCoeff() < -kProbabilitySlack ||
        eig.eigenvalues().maxCoeff() > 1.0 + kProbabilitySlack) {
      throw DomainError("effect eigenvalues must lie in [0, 1]");
    }
    return EffectVec(n_qubits, pauli_coefficients(q, n_qubits));
  }

  static EffectVec from_coefficients(const Eigen::VectorXd& c, int n_qubits) {
    require_qubits(n_qubits);
    if (c.size() != pauli_count(n_qubits)) {
      throw ShapeError("effect vector has wrong length");
    }
    return from_operator(operator_from_coefficients(c, n_qubits), n_qubits);
  }

  /// Projector onto |0...0>.
  static EffectVec zeros(int n_qubits) {
    require_qubits(n_qubits);
    Eigen::MatrixXcd q =
        Eigen::MatrixXcd::Zero(dimension(n_qubits), dimension(n_qubits));
    q(0, 0) = 1.0;
    return from_operator(q, n_qubits);
  }

  int n_qubits() const { return n_qubits_; }
  const Eigen::VectorXd& coefficients() const { return c_; }

  /// Tr(Q) = sqrt(d) * q_0.
  double trace() const {
    return std::sqrt(static_cast<double>(dimension(n_qubits_))) * c_[0];
  }

 private:
  EffectVec(int n_qubits, Eigen::VectorXd c)
      : n_qubits_(n_qubits), c_(std::move(c)) {}

  int n_qubits_;
  Eigen::VectorXd c_;
};

/// Kraus representation; sum K^dagger K = I within kConstructionTol.
class KrausSet {
 public:
  KrausSet(int n_qubits, std::vector<Eigen::MatrixXcd> ops)
      : n_qubits_(n_qubits), ops_(std::move(ops)) {
    require_qubits(n_qubits);
    const int d = dimension(n_qubits);
    if (ops_.empty()) throw DomainError("Kraus set is empty");
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(d, d);
    for (const auto& k : ops_) {
      if (k.rows() != d || k.cols() != d) {
        throw ShapeError("Kraus operator is not " + std::to_string(d) + "x" +
                         std::to_string(d));
      }
      sum += k.adjoint() * k;
    }
    if ((sum - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff() >
        kConstructionTol) {
      throw DomainError("Kraus completeness violated: sum K^dagger K != I");
    }
  }

  int n_qubits() const { return n_qubits_; }
  const std::vector<Eigen::MatrixXcd>& operators() const { return ops_; }

 private:
  int n_qubits_;
  std::vector<Eigen::MatrixXcd> ops_;
};

inline PauliTransferMatrix ptm_from_kraus(const KrausSet& kraus) {
  const int n = kraus.n_qubits();
  const auto& basis = pauli_basis(n);
  const int dd = pauli_count(n);
  Eigen::MatrixXd m(dd, dd);
  for (int j = 0; j < dd; ++j) {
    Eigen::MatrixXcd image =
        Eigen::MatrixXcd::Zero(dimension(n), dimension(n));
    for (const auto& k : kraus.operators()) {
      image += k * basis[j] * k.adjoint();
    }
    for (int i = 0; i < dd; ++i) {
      // Tr(sigma_i X) as an elementwise sum; sigma_i is Hermitian.
      const Complex c = (basis[i].transpose().cwiseProduct(image)).sum();
      if (std::abs(c.imag()) > kPropagationTol) {
        throw NumericalViolation("transfer matrix entry is not real");
      }
      m(i, j) = c.real();
    }
  }
  return {n, std::move(m)};
}

inline PauliTransferMatrix ptm_from_unitary(const Eigen::MatrixXcd& u,
                                            int n_qubits) {
  require_qubits(n_qubits);
  const int d = dimension(n_qubits);
  if (u.rows() != d || u.cols() != d) throw ShapeError("unitary has wrong shape");
  if ((u.adjoint() * u - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff() >
      kConstructionTol) {
    throw DomainError("matrix is not unitary");
  }
  return ptm_from_kraus(KrausSet(n_qubits, {u}));
}

inline StateVec apply(const PauliTransferMatrix& m, const StateVec& s) {
  if (m.n_qubits() != s.n_qubits()) throw ShapeError("qubit count mismatch");
  return {s.n_qubits(), m.matrix() * s.coefficients()};
}

/// Matrix of a after b (b acts first).
inline PauliTransferMatrix compose(const PauliTransferMatrix& a,
                                   const PauliTransferMatrix& b) {
  if (a.n_qubits() != b.n_qubits()) throw ShapeError("qubit count mismatch");
  return {a.n_qubits(), a.matrix() * b.matrix()};
}

/// Channel acting on a joint register; `a` acts on the leading qubits.
inline PauliTransferMatrix tensor(const PauliTransferMatrix& a,
                                  const PauliTransferMatrix& b) {
  Eigen::MatrixXd m = Eigen::kroneckerProduct(a.matrix(), b.matrix()).eval();
  return {a.n_qubits() + b.n_qubits(), std::move(m)};
}

/// Clamps a probability computed with rounding error to [0, 1]; anything
/// further out than kProbabilitySlack is a physics error.
inline double checked_probability(double p) {
  if (p < -kProbabilitySlack || p > 1.0 + kProbabilitySlack) {
    throw NumericalViolation("probability " + std::to_string(p) +
                             " outside [0, 1]");
  }
  return std::clamp(p, 0.0, 1.0);
}

/// Tr(Q rho).
inline double expectation(const EffectVec& q, const StateVec& s) {
  if (q.n_qubits() != s.n_qubits()) throw ShapeError("qubit count mismatch");
  return checked_probability(q.coefficients().dot(s.coefficients()));
}

inline double quality_parameter(const PauliTransferMatrix& m) {
  const double dd = pauli_count(m.n_qubits());
  return (m.matrix().trace() - 1.0) / (dd - 1.0);
}

/// F_avg = f + (1 - f) / d.
inline double avg_fidelity(double f, int n_qubits) {
  return f + (1.0 - f) / dimension(n_qubits);
}

}  // namespace rbreuse
