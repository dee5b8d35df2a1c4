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

// Gate-independent noise models and their textual form.
//
// Single-qubit Kraus forms (p = 1 is the identity channel):
//   amplitude damping  K0 = diag(1, sqrt p),  K1 = sqrt(1-p) |0><1|
//   phase damping      E0 = diag(1, sqrt p),  E1 = sqrt(1-p) |1><1|
// Local channels act as the n-fold tensor power.  LocalZRotation conjugates
// every qubit by exp(i theta Z).  SwapCorrelation applies
// exp(i beta SWAP_ij) = cos(beta) I + i sin(beta) SWAP_ij for each listed
// pair, pairs taken in lexicographic order.
//
// Composite lists channels in application order:
//   Composite{{LocalAmplitudeDamping{p1}, LocalPhaseDamping{p2}}}
// is phase damping after amplitude damping.  In text the same channel reads
//   compose(phase_damping(p2), amplitude_damping(p1))
// i.e. compose(a, b) is "a after b".
//
// Grammar of the textual form:
//   spec   := name '(' args? ')'
//   name   := depolarizing | amplitude_damping | phase_damping | z_rotation
//           | swap_correlation | compose
//   args   := number                     (single-parameter channels)
//           | 'beta_' i j '=' number, ... (swap_correlation, 1-based digits)
//           | spec, spec, ...            (compose)
//   number := decimal literal | 'pi' | 'pi/' decimal | decimal '*pi'

#include <Eigen/Dense>

#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "rbreuse/error.hpp"
#include "rbreuse/format.hpp"
#include "rbreuse/liouville.hpp"

namespace rbreuse {

struct GlobalDepolarizing {
  double p = 1.0;
  friend bool operator==(const GlobalDepolarizing&, const GlobalDepolarizing&) = default;
};

struct LocalAmplitudeDamping {
  double p = 1.0;
  friend bool operator==(const LocalAmplitudeDamping&,
                         const LocalAmplitudeDamping&) = default;
};

struct LocalPhaseDamping {
  double p = 1.0;
  friend bool operator==(const LocalPhaseDamping&, const LocalPhaseDamping&) = default;
};

struct LocalZRotation {
  double theta = 0.0;
  friend bool operator==(const LocalZRotation&, const LocalZRotation&) = default;
};

/// beta keyed by 0-based qubit pairs (i, j), i < j.
struct SwapCorrelation {
  std::map<std::pair<int, int>, double> beta;
  friend bool operator==(const SwapCorrelation&, const SwapCorrelation&) = default;
};

struct NoiseSpec;

struct Composite {
  std::vector<NoiseSpec> parts;  // application order
  friend bool operator==(const Composite&, const Composite&);
};

struct NoiseSpec {
  using Kind = std::variant<GlobalDepolarizing, LocalAmplitudeDamping,
                            LocalPhaseDamping, LocalZRotation, SwapCorrelation,
                            Composite>;
  Kind kind;

  NoiseSpec() : kind(GlobalDepolarizing{1.0}) {}
  template <typename T>
    requires std::is_constructible_v<Kind, T&&> &&
             (!std::is_same_v<std::remove_cvref_t<T>, NoiseSpec>)
  NoiseSpec(T&& k) : kind(std::forward<T>(k)) {}  // NOLINT(implicit)

  friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;
};

inline bool operator==(const Composite& a, const Composite& b) {
  return a.parts == b.parts;
}

namespace detail {

inline void check_probability_param(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError(std::string(what) + " parameter " + std::to_string(p) +
                      " outside [0, 1]");
  }
}

inline void check_angle_param(double a, const char* what) {
  if (!(a >= 0.0 && a <= std::numbers::pi)) {
    throw DomainError(std::string(what) + " angle " + std::to_string(a) +
                      " outside [0, pi]");
  }
}

inline PauliTransferMatrix tensor_power(const PauliTransferMatrix& single,
                                        int n_qubits) {
  PauliTransferMatrix out = single;
  for (int q = 1; q < n_qubits; ++q) out = tensor(out, single);
  return out;
}

/// Unitary exchanging qubits i and j (qubit 0 is the most significant bit).
inline Eigen::MatrixXcd swap_unitary(int n_qubits, int i, int j) {
  const int d = dimension(n_qubits);
  const int bi = n_qubits - 1 - i;
  const int bj = n_qubits - 1 - j;
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(d, d);
  for (int col = 0; col < d; ++col) {
    const int vi = (col >> bi) & 1;
    const int vj = (col >> bj) & 1;
    int row = col & ~((1 << bi) | (1 << bj));
    row |= (vi << bj) | (vj << bi);
    s(row, col) = 1.0;
  }
  return s;
}

}  // namespace detail

inline PauliTransferMatrix build(const NoiseSpec& spec, int n_qubits) {
  require_qubits(n_qubits);
  return std::visit(
      [n_qubits](const auto& s) -> PauliTransferMatrix {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, GlobalDepolarizing>) {
          detail::check_probability_param(s.p, "depolarizing");
          Eigen::MatrixXd m =
              s.p * Eigen::MatrixXd::Identity(pauli_count(n_qubits), pauli_count(n_qubits));
          m(0, 0) = 1.0;
          return {n_qubits, std::move(m)};
        } else if constexpr (std::is_same_v<T, LocalAmplitudeDamping>) {
          detail::check_probability_param(s.p, "amplitude damping");
          Eigen::MatrixXcd k0 = Eigen::MatrixXcd::Zero(2, 2);
          Eigen::MatrixXcd k1 = Eigen::MatrixXcd::Zero(2, 2);
          k0(0, 0) = 1.0;
          k0(1, 1) = std::sqrt(s.p);
          k1(0, 1) = std::sqrt(1.0 - s.p);
          return detail::tensor_power(ptm_from_kraus(KrausSet(1, {k0, k1})), n_qubits);
        } else if constexpr (std::is_same_v<T, LocalPhaseDamping>) {
          detail::check_probability_param(s.p, "phase damping");
          Eigen::MatrixXcd e0 = Eigen::MatrixXcd::Zero(2, 2);
          Eigen::MatrixXcd e1 = Eigen::MatrixXcd::Zero(2, 2);
          e0(0, 0) = 1.0;
          e0(1, 1) = std::sqrt(s.p);
          e1(1, 1) = std::sqrt(1.0 - s.p);
          return detail::tensor_power(ptm_from_kraus(KrausSet(1, {e0, e1})), n_qubits);
        } else if constexpr (std::is_same_v<T, LocalZRotation>) {
          detail::check_angle_param(s.theta, "z rotation");
          Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(2, 2);
          u(0, 0) = std::polar(1.0, s.theta);
          u(1, 1) = std::polar(1.0, -s.theta);
          return detail::tensor_power(ptm_from_unitary(u, 1), n_qubits);
        } else if constexpr (std::is_same_v<T, SwapCorrelation>) {
          PauliTransferMatrix out = PauliTransferMatrix::identity(n_qubits);
          const int d = dimension(n_qubits);
          for (const auto& [pair, beta] : s.beta) {
            const auto [i, j] = pair;
            if (!(0 <= i && i < j && j < n_qubits)) {
              throw DomainError("swap correlation pair (" + std::to_string(i) +
                                ", " + std::to_string(j) + ") outside the register");
            }
            detail::check_angle_param(beta, "swap correlation");
            const Eigen::MatrixXcd u =
                std::cos(beta) * Eigen::MatrixXcd::Identity(d, d) +
                Complex(0.0, std::sin(beta)) * detail::swap_unitary(n_qubits, i, j);
            out = compose(ptm_from_unitary(u, n_qubits), out);
          }
          return out;
        } else {
          if (s.parts.empty()) throw DomainError("empty composite channel");
          PauliTransferMatrix out = build(s.parts.front(), n_qubits);
          for (std::size_t k = 1; k < s.parts.size(); ++k) {
            out = compose(build(s.parts[k], n_qubits), out);
          }
          return out;
        }
      },
      spec.kind);
}

struct Fidelity {
  double f = 1.0;
  double f_avg = 1.0;
};

inline Fidelity fidelity_of(const NoiseSpec& spec, int n_qubits) {
  const double f = quality_parameter(build(spec, n_qubits));
  return {f, avg_fidelity(f, n_qubits)};
}

// ---------------------------------------------------------------------------
// Textual form.

/// Shortest decimal that reads back to the same double.
inline std::string to_string(const NoiseSpec& spec) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, GlobalDepolarizing>) {
          return "depolarizing(" + format_number(s.p) + ")";
        } else if constexpr (std::is_same_v<T, LocalAmplitudeDamping>) {
          return "amplitude_damping(" + format_number(s.p) + ")";
        } else if constexpr (std::is_same_v<T, LocalPhaseDamping>) {
          return "phase_damping(" + format_number(s.p) + ")";
        } else if constexpr (std::is_same_v<T, LocalZRotation>) {
          return "z_rotation(" + format_number(s.theta) + ")";
        } else if constexpr (std::is_same_v<T, SwapCorrelation>) {
          std::string out = "swap_correlation(";
          bool first = true;
          for (const auto& [pair, beta] : s.beta) {
            if (!first) out += ", ";
            first = false;
            out += "beta_" + std::to_string(pair.first + 1) +
                   std::to_string(pair.second + 1) + "=" + format_number(beta);
          }
          return out + ")";
        } else {
          // Application order is reversed in the compose(...) notation.
          std::string out = "compose(";
          for (auto it = s.parts.rbegin(); it != s.parts.rend(); ++it) {
            if (it != s.parts.rbegin()) out += ", ";
            out += to_string(*it);
          }
          return out + ")";
        }
      },
      spec.kind);
}

namespace detail {

class SpecParser {
 public:
  explicit SpecParser(std::string_view text) : text_(text) {}

  NoiseSpec parse_all() {
    NoiseSpec out = parse_spec();
    skip_space();
    if (pos_ != text_.size()) fail("trailing characters");
    return out;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw DomainError("noise spec: " + msg + " at offset " + std::to_string(pos_) +
                      " in '" + std::string(text_) + "'");
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  std::string_view identifier() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    if (start == pos_) fail("expected a name");
    return text_.substr(start, pos_ - start);
  }

  double decimal() {
    skip_space();
    double v = 0.0;
    const char* first = text_.data() + pos_;
    const auto res = std::from_chars(first, text_.data() + text_.size(), v);
    if (res.ec != std::errc()) fail("expected a number");
    pos_ += static_cast<std::size_t>(res.ptr - first);
    return v;
  }

  double number() {
    skip_space();
    if (text_.substr(pos_, 2) == "pi") {
      pos_ += 2;
      if (accept('/')) return std::numbers::pi / decimal();
      return std::numbers::pi;
    }
    const double v = decimal();
    if (accept('*')) {
      skip_space();
      if (text_.substr(pos_, 2) != "pi") fail("expected 'pi'");
      pos_ += 2;
      return v * std::numbers::pi;
    }
    return v;
  }

  NoiseSpec parse_spec() {
    const std::string name(identifier());
    expect('(');
    if (name == "compose") {
      std::vector<NoiseSpec> written;
      written.push_back(parse_spec());
      while (accept(',')) written.push_back(parse_spec());
      expect(')');
      return Composite{std::vector<NoiseSpec>(written.rbegin(), written.rend())};
    }
    if (name == "swap_correlation") {
      SwapCorrelation s;
      if (!accept(')')) {
        do {
          const std::string_view key = identifier();
          if (key.size() != 7 || key.substr(0, 5) != "beta_" ||
              !std::isdigit(static_cast<unsigned char>(key[5])) ||
              !std::isdigit(static_cast<unsigned char>(key[6]))) {
            fail("expected beta_ij with 1-based qubit digits");
          }
          const int i = key[5] - '1';
          const int j = key[6] - '1';
          if (i < 0 || j <= i) fail("pair indices must satisfy 1 <= i < j");
          expect('=');
          if (!s.beta.emplace(std::pair{i, j}, number()).second) fail("duplicate pair");
        } while (accept(','));
        expect(')');
      }
      return s;
    }
    const double v = number();
    expect(')');
    if (name == "depolarizing") return GlobalDepolarizing{v};
    if (name == "amplitude_damping") return LocalAmplitudeDamping{v};
    if (name == "phase_damping") return LocalPhaseDamping{v};
    if (name == "z_rotation") return LocalZRotation{v};
    fail("unknown channel '" + name + "'");
  }
};

}  // namespace detail

inline NoiseSpec parse_noise(std::string_view text) {
  return detail::SpecParser(text).parse_all();
}

}  // namespace rbreuse
