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

// n-qubit Clifford gates as stabilizer tableaux.
//
// A gate C is stored through the images C X_q C^dagger and C Z_q C^dagger of
// the 2n generators.  Each image is a signed Hermitian Pauli, kept in the
// "XZ form" i^k X^x Z^z (x, z are qubit bitmasks), for which products are
// trivial:
//   (i^a X^x1 Z^z1)(i^b X^x2 Z^z2) = i^(a + b + 2|z1 & x2|) X^(x1^x2) Z^(z1^z2).
// The Hermitian Pauli with bits (x, z) is i^|x & z| X^x Z^z, so the sign bit
// of an image is (k - |x & z|) / 2 mod 2.
//
// Uniform sampling enumerates the group: an index in [0, |Sp(2n,2)| * 4^n)
// selects a symplectic matrix through the Koenig-Smolin construction
// (J. Math. Phys. 55, 122202) and 2n sign bits.  Drawing the index
// uniformly therefore samples the Clifford group modulo global phase
// exactly uniformly.

#include <Eigen/Dense>

#include <array>
#include <bit>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "rbreuse/error.hpp"
#include "rbreuse/liouville.hpp"
#include "rbreuse/rng.hpp"

namespace rbreuse {

/// i^phase X^x Z^z on up to kMaxQubits qubits.
struct PauliWord {
  std::uint32_t x = 0;
  std::uint32_t z = 0;
  std::uint8_t phase = 0;

  friend bool operator==(const PauliWord&, const PauliWord&) = default;
};

inline PauliWord multiply(const PauliWord& a, const PauliWord& b) {
  const int swaps = std::popcount(a.z & b.x);
  return {a.x ^ b.x, a.z ^ b.z,
          static_cast<std::uint8_t>((a.phase + b.phase + 2 * swaps) & 3)};
}

/// The Hermitian Pauli with the given bits, optionally negated.
inline PauliWord hermitian_pauli(std::uint32_t x, std::uint32_t z,
                                 bool negative = false) {
  return {x, z,
          static_cast<std::uint8_t>((std::popcount(x & z) + (negative ? 2 : 0)) & 3)};
}

/// Index of the Pauli string with bits (x, z) in the canonical basis order.
inline int pauli_index(std::uint32_t x, std::uint32_t z, int n_qubits) {
  int idx = 0;
  for (int q = 0; q < n_qubits; ++q) {
    const int xb = (x >> q) & 1;
    const int zb = (z >> q) & 1;
    const int digit = xb ? (zb ? 2 : 1) : (zb ? 3 : 0);
    idx = idx * 4 + digit;
  }
  return idx;
}

inline std::pair<std::uint32_t, std::uint32_t> pauli_bits(int index,
                                                          int n_qubits) {
  std::uint32_t x = 0;
  std::uint32_t z = 0;
  for (int q = 0; q < n_qubits; ++q) {
    const int digit = (index >> (2 * (n_qubits - 1 - q))) & 3;
    if (digit == 1 || digit == 2) x |= 1u << q;
    if (digit == 2 || digit == 3) z |= 1u << q;
  }
  return {x, z};
}

/// Sign of a Hermitian-up-to-sign Pauli word; throws if it is not Hermitian.
inline bool is_negative(const PauliWord& p) {
  const int rel = (p.phase - std::popcount(p.x & p.z)) & 3;
  if (rel & 1) throw NumericalViolation("Pauli word is not Hermitian");
  return rel == 2;
}

class CliffordGate;
inline PauliTransferMatrix to_ptm(const CliffordGate& g);
inline CliffordGate compose(const CliffordGate& a, const CliffordGate& b);
inline CliffordGate inverse(const CliffordGate& g);
inline CliffordGate clifford_from_index(int n_qubits, std::uint64_t index);

class CliffordGate {
 public:
  /// Identity on n qubits.
  explicit CliffordGate(int n_qubits) : n_(n_qubits) {
    require_qubits(n_qubits);
    for (int q = 0; q < n_; ++q) {
      images_[2 * q] = hermitian_pauli(1u << q, 0);
      images_[2 * q + 1] = hermitian_pauli(0, 1u << q);
    }
  }

  /// Gate with the given generator images, ordered X_0, Z_0, X_1, Z_1, ...
  /// Throws unless each image is a signed Hermitian Pauli and the images
  /// satisfy the canonical commutation relations.
  static CliffordGate from_images(int n_qubits,
                                  std::span<const PauliWord> images) {
    CliffordGate g(n_qubits);
    if (images.size() != static_cast<std::size_t>(2 * n_qubits)) {
      throw ShapeError("tableau needs 2n generator images");
    }
    const std::uint32_t mask = (1u << n_qubits) - 1;
    for (std::size_t j = 0; j < images.size(); ++j) {
      if ((images[j].x | images[j].z) & ~mask) {
        throw ShapeError("generator image acts outside the register");
      }
      is_negative(images[j]);
      g.images_[j] = images[j];
    }
    if (!g.is_symplectic()) throw DomainError("tableau is not symplectic");
    return g;
  }

  int n_qubits() const { return n_; }
  std::span<const PauliWord> images() const { return {images_.data(), 2u * n_}; }
  const PauliWord& image_of_x(int q) const { return images_[2 * q]; }
  const PauliWord& image_of_z(int q) const { return images_[2 * q + 1]; }

  /// Sign bit of generator image j.
  bool phase_bit(int j) const { return is_negative(images_[j]); }

  /// Row j of the 2n x 2n GF(2) tableau, as interleaved bits
  /// (bit 2q = x_q, bit 2q+1 = z_q).
  std::uint32_t symplectic_row(int j) const {
    std::uint32_t row = 0;
    for (int q = 0; q < n_; ++q) {
      row |= ((images_[j].x >> q) & 1u) << (2 * q);
      row |= ((images_[j].z >> q) & 1u) << (2 * q + 1);
    }
    return row;
  }

  /// The images commute exactly as X_q, Z_q do.
  bool is_symplectic() const {
    for (int a = 0; a < 2 * n_; ++a) {
      for (int b = a + 1; b < 2 * n_; ++b) {
        const int form = (std::popcount(images_[a].x & images_[b].z) +
                          std::popcount(images_[a].z & images_[b].x)) &
                         1;
        const int expected = (a / 2 == b / 2) ? 1 : 0;
        if (form != expected) return false;
      }
    }
    return true;
  }

  bool is_identity() const { return *this == CliffordGate(n_); }

  /// C p C^dagger for an arbitrary Pauli word.
  PauliWord conjugate(const PauliWord& p) const {
    PauliWord out{0, 0, p.phase};
    for (int q = 0; q < n_; ++q) {
      if ((p.x >> q) & 1u) out = multiply(out, images_[2 * q]);
      if ((p.z >> q) & 1u) out = multiply(out, images_[2 * q + 1]);
    }
    return out;
  }

  /// Transfer matrix, computed on first use and shared between copies.
  const PauliTransferMatrix& ptm() const {
    std::call_once(cache_->once, [this] { cache_->value.emplace(to_ptm(*this)); });
    return *cache_->value;
  }

  friend bool operator==(const CliffordGate& a, const CliffordGate& b) {
    if (a.n_ != b.n_) return false;
    for (int j = 0; j < 2 * a.n_; ++j) {
      if (!(a.images_[j] == b.images_[j])) return false;
    }
    return true;
  }

 private:
  struct PtmCache {
    std::once_flag once;
    std::optional<PauliTransferMatrix> value;
  };

  int n_;
  std::array<PauliWord, 2 * kMaxQubits> images_{};
  std::shared_ptr<PtmCache> cache_ = std::make_shared<PtmCache>();

  friend CliffordGate compose(const CliffordGate& a, const CliffordGate& b);
  friend CliffordGate inverse(const CliffordGate& g);
  friend CliffordGate clifford_from_index(int n_qubits, std::uint64_t index);
};

/// a after b: (a b) P (a b)^dagger = a (b P b^dagger) a^dagger.
inline CliffordGate compose(const CliffordGate& a, const CliffordGate& b) {
  if (a.n_qubits() != b.n_qubits()) throw ShapeError("qubit count mismatch");
  CliffordGate out(a.n_qubits());
  for (int j = 0; j < 2 * a.n_qubits(); ++j) {
    out.images_[j] = a.conjugate(b.images_[j]);
  }
  return out;
}

inline CliffordGate inverse(const CliffordGate& g) {
  const int n = g.n_qubits();
  // For a symplectic map S with S e_b = v_b, the coefficient of e_c in
  // S^-1 e_a is omega(v_partner(c), e_a), partner swapping X_q <-> Z_q.
  // Build that tableau with + signs, then cancel the leftover Pauli frame.
  CliffordGate candidate(n);
  for (int a = 0; a < 2 * n; ++a) {
    std::uint32_t x = 0;
    std::uint32_t z = 0;
    const PauliWord ea = a % 2 == 0 ? PauliWord{1u << (a / 2), 0, 0}
                                    : PauliWord{0, 1u << (a / 2), 0};
    for (int b = 0; b < 2 * n; ++b) {
      const PauliWord& gb = g.images_[b];
      const int form =
          (std::popcount(gb.x & ea.z) + std::popcount(gb.z & ea.x)) & 1;
      if (!form) continue;
      const int q = b / 2;
      if (b % 2 == 0) {
        z ^= 1u << q;  // partner of X_q is Z_q
      } else {
        x ^= 1u << q;
      }
    }
    candidate.images_[a] = hermitian_pauli(x, z);
  }
  const CliffordGate residue = compose(g, candidate);
  if (!residue.is_symplectic()) throw NumericalViolation("inverse failed");
  // residue is a Pauli frame: generator j maps to +-itself.  Flipping the
  // candidate's signs by the same bits cancels it.
  for (int j = 0; j < 2 * n; ++j) {
    const PauliWord& r = residue.images_[j];
    const PauliWord& e = CliffordGate(n).images_[j];
    if (r.x != e.x || r.z != e.z) throw NumericalViolation("inverse failed");
    if (is_negative(r)) {
      candidate.images_[j].phase =
          static_cast<std::uint8_t>((candidate.images_[j].phase + 2) & 3);
    }
  }
  return candidate;
}

/// Signed permutation matrix M_ij = Tr(sigma_i C sigma_j C^dagger).
inline PauliTransferMatrix to_ptm(const CliffordGate& g) {
  const int n = g.n_qubits();
  const int dd = pauli_count(n);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dd, dd);
  for (int j = 0; j < dd; ++j) {
    const auto [x, z] = pauli_bits(j, n);
    const PauliWord image = g.conjugate(hermitian_pauli(x, z));
    m(pauli_index(image.x, image.z, n), j) = is_negative(image) ? -1.0 : 1.0;
  }
  return {n, std::move(m)};
}

/// The transfer matrix of g applied to a coefficient vector without forming
/// the matrix: sigma_j goes to +-sigma_{pi(j)}.
inline Eigen::VectorXd apply_to_coefficients(const CliffordGate& g,
                                             const Eigen::VectorXd& v) {
  const int n = g.n_qubits();
  const int dd = pauli_count(n);
  if (v.size() != dd) throw ShapeError("coefficient vector has wrong length");
  Eigen::VectorXd out(dd);
  for (int j = 0; j < dd; ++j) {
    const auto [x, z] = pauli_bits(j, n);
    const PauliWord image = g.conjugate(hermitian_pauli(x, z));
    out[pauli_index(image.x, image.z, n)] = is_negative(image) ? -v[j] : v[j];
  }
  return out;
}

/// |Sp(2n, 2)| = prod_{j=1..n} (4^j - 1) 4^j / 2.
inline std::uint64_t symplectic_group_order(int n_qubits) {
  require_qubits(n_qubits);
  std::uint64_t order = 1;
  for (int j = 1; j <= n_qubits; ++j) {
    const std::uint64_t four_j = std::uint64_t{1} << (2 * j);
    order *= (four_j - 1) * (four_j / 2);
  }
  return order;
}

/// Order of the Clifford group modulo global phase: |Sp(2n,2)| * 4^n.
inline std::uint64_t clifford_group_order(int n_qubits) {
  return symplectic_group_order(n_qubits) * (std::uint64_t{1} << (2 * n_qubits));
}

namespace detail {

// GF(2)^{2n} vectors with interleaved bits: bit 2i = x_i, bit 2i+1 = z_i.
inline int symplectic_form(std::uint32_t v, std::uint32_t w) {
  constexpr std::uint32_t kEven = 0x55555555u;
  const std::uint32_t vx = v & kEven, vz = (v >> 1) & kEven;
  const std::uint32_t wx = w & kEven, wz = (w >> 1) & kEven;
  return std::popcount((vx & wz) ^ (wx & vz)) & 1;
}

inline std::uint32_t transvection(std::uint32_t k, std::uint32_t v) {
  return symplectic_form(k, v) ? v ^ k : v;
}

inline int bit(std::uint32_t v, int i) { return (v >> i) & 1; }

// Returns (h1, h2) with y = Z_h1 Z_h2 x, where Z_h is the transvection by h.
inline std::array<std::uint32_t, 2> find_transvection(std::uint32_t x,
                                                      std::uint32_t y,
                                                      int n) {
  if (x == y) return {0, 0};
  if (symplectic_form(x, y) == 1) return {x ^ y, 0};
  auto pair_nonzero = [](std::uint32_t v, int i) {
    return bit(v, 2 * i) | bit(v, 2 * i + 1);
  };
  std::uint32_t z = 0;
  for (int i = 0; i < n; ++i) {
    if (pair_nonzero(x, i) && pair_nonzero(y, i)) {
      int z0 = bit(x, 2 * i) ^ bit(y, 2 * i);
      int z1 = bit(x, 2 * i + 1) ^ bit(y, 2 * i + 1);
      if (z0 == 0 && z1 == 0) {
        z1 = 1;
        if (bit(x, 2 * i) != bit(x, 2 * i + 1)) z0 = 1;
      }
      z |= (std::uint32_t(z0) << (2 * i)) | (std::uint32_t(z1) << (2 * i + 1));
      return {x ^ z, y ^ z};
    }
  }
  for (int i = 0; i < n; ++i) {
    if (pair_nonzero(x, i) && !pair_nonzero(y, i)) {
      if (bit(x, 2 * i) == bit(x, 2 * i + 1)) {
        z |= 1u << (2 * i + 1);
      } else {
        z |= std::uint32_t(bit(x, 2 * i)) << (2 * i + 1);
        z |= std::uint32_t(bit(x, 2 * i + 1)) << (2 * i);
      }
      break;
    }
  }
  for (int i = 0; i < n; ++i) {
    if (!pair_nonzero(x, i) && pair_nonzero(y, i)) {
      if (bit(y, 2 * i) == bit(y, 2 * i + 1)) {
        z |= 1u << (2 * i + 1);
      } else {
        z |= std::uint32_t(bit(y, 2 * i)) << (2 * i + 1);
        z |= std::uint32_t(bit(y, 2 * i + 1)) << (2 * i);
      }
      break;
    }
  }
  return {x ^ z, y ^ z};
}

// Koenig-Smolin: bijection from [0, |Sp(2n,2)|) to symplectic matrices,
// returned as 2n rows.
inline std::vector<std::uint32_t> symplectic_from_index(std::uint64_t i,
                                                        int n) {
  const int nn = 2 * n;
  const std::uint64_t s = (std::uint64_t{1} << nn) - 1;
  const auto k = static_cast<std::uint32_t>(i % s + 1);
  i /= s;
  std::uint32_t f1 = k;
  const std::uint32_t e1 = 1;
  const auto t = find_transvection(e1, f1, n);
  const auto bits = static_cast<std::uint32_t>(i % (std::uint64_t{1} << (nn - 1)));
  const std::uint32_t mask = (nn >= 32) ? ~0u : ((1u << nn) - 1);
  const std::uint32_t eprime = (e1 | ((bits >> 1) << 2)) & mask;
  std::uint32_t h0 = transvection(t[0], eprime);
  h0 = transvection(t[1], h0);
  if (bits & 1u) f1 = 0;

  std::vector<std::uint32_t> g(nn);
  g[0] = 1u;
  g[1] = 2u;
  if (n > 1) {
    const auto sub = symplectic_from_index(i >> (nn - 1), n - 1);
    for (int r = 0; r < nn - 2; ++r) g[r + 2] = sub[r] << 2;
  }
  for (auto& row : g) {
    row = transvection(t[0], row);
    row = transvection(t[1], row);
    row = transvection(h0, row);
    row = transvection(f1, row);
  }
  return g;
}

}  // namespace detail

/// Group element number `index` in [0, clifford_group_order(n)).  Distinct
/// indices give distinct gates.
inline CliffordGate clifford_from_index(int n_qubits, std::uint64_t index) {
  const std::uint64_t phases = std::uint64_t{1} << (2 * n_qubits);
  if (index >= clifford_group_order(n_qubits)) {
    throw DomainError("Clifford index out of range");
  }
  const auto sign_bits = static_cast<std::uint32_t>(index % phases);
  const auto rows = detail::symplectic_from_index(index / phases, n_qubits);
  CliffordGate g(n_qubits);
  for (int j = 0; j < 2 * n_qubits; ++j) {
    std::uint32_t x = 0;
    std::uint32_t z = 0;
    for (int q = 0; q < n_qubits; ++q) {
      x |= ((rows[j] >> (2 * q)) & 1u) << q;
      z |= ((rows[j] >> (2 * q + 1)) & 1u) << q;
    }
    g.images_[j] = hermitian_pauli(x, z, (sign_bits >> j) & 1u);
  }
  return g;
}

/// Exactly uniform draw from the Clifford group modulo global phase.
inline CliffordGate sample_uniform(int n_qubits, CounterRng& rng) {
  return clifford_from_index(n_qubits, rng.below(clifford_group_order(n_qubits)));
}

/// Inverse of the product G_m ... G_1 of an ordered gate list (G_1 first).
inline CliffordGate sequence_inverse(std::span<const CliffordGate> gates) {
  if (gates.empty()) throw DomainError("empty gate sequence");
  CliffordGate product(gates.front().n_qubits());
  for (const auto& g : gates) {
    if (g.n_qubits() != product.n_qubits()) {
      throw ShapeError("gate sequence mixes qubit counts");
    }
    product = compose(g, product);
  }
  return inverse(product);
}

/// Random RB sequence G_1..G_m plus its global inverse.
struct GateSequence {
  int n_qubits = 1;
  std::vector<CliffordGate> gates;
  CliffordGate inverse_gate{1};

  static GateSequence sample(int n_qubits, int length, CounterRng& rng) {
    if (length < 0) throw DomainError("negative sequence length");
    GateSequence seq{n_qubits, {}, CliffordGate(n_qubits)};
    seq.gates.reserve(length);
    for (int i = 0; i < length; ++i) {
      seq.gates.push_back(sample_uniform(n_qubits, rng));
    }
    if (length > 0) seq.inverse_gate = sequence_inverse(seq.gates);
    return seq;
  }
};

namespace gates {

inline std::vector<PauliWord> identity_images(int n_qubits) {
  const CliffordGate id(n_qubits);
  return {id.images().begin(), id.images().end()};
}

inline CliffordGate hadamard(int n_qubits, int q) {
  auto img = identity_images(n_qubits);
  img[2 * q] = hermitian_pauli(0, 1u << q);
  img[2 * q + 1] = hermitian_pauli(1u << q, 0);
  return CliffordGate::from_images(n_qubits, img);
}

/// S = diag(1, i): X -> Y, Z -> Z.
inline CliffordGate phase(int n_qubits, int q) {
  auto img = identity_images(n_qubits);
  img[2 * q] = hermitian_pauli(1u << q, 1u << q);
  return CliffordGate::from_images(n_qubits, img);
}

inline CliffordGate cnot(int n_qubits, int control, int target) {
  auto img = identity_images(n_qubits);
  img[2 * control] = hermitian_pauli((1u << control) | (1u << target), 0);
  img[2 * target + 1] = hermitian_pauli(0, (1u << control) | (1u << target));
  return CliffordGate::from_images(n_qubits, img);
}

inline CliffordGate pauli_x(int n_qubits, int q) {
  auto img = identity_images(n_qubits);
  img[2 * q + 1] = hermitian_pauli(0, 1u << q, true);
  return CliffordGate::from_images(n_qubits, img);
}

inline CliffordGate pauli_z(int n_qubits, int q) {
  auto img = identity_images(n_qubits);
  img[2 * q] = hermitian_pauli(1u << q, 0, true);
  return CliffordGate::from_images(n_qubits, img);
}

}  // namespace gates

}  // namespace rbreuse
