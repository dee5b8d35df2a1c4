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

// Standard randomized benchmarking with circuit reuse.
//
// A sequence of m uniformly random Cliffords G_1..G_m is followed by the
// noiseless global inverse; every gate is followed by the same noise L:
//   p = <Q| G_inv L G_m ... L G_1 |rho>.
// Each sampled sequence is executed R times, so the number of "survived"
// shots is Binomial(R, p).
//
// Randomness: sequence i at length m draws from the Philox substream
// (seed, domain, m, i), gates first and then its shots.  Per-sequence
// results are stored by index and reduced in index order, so the output
// does not depend on the number of worker threads.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "rbreuse/clifford.hpp"
#include "rbreuse/error.hpp"
#include "rbreuse/liouville.hpp"
#include "rbreuse/noise.hpp"
#include "rbreuse/rng.hpp"

namespace rbreuse {

/// |0...0><0...0| as a state.
inline StateVec zero_state(int n_qubits) {
  Eigen::VectorXcd ket = Eigen::VectorXcd::Zero(dimension(n_qubits));
  ket[0] = 1.0;
  return StateVec::from_ket(ket, n_qubits);
}

/// |0...0><0...0| as a measurement effect.
inline EffectVec zero_effect(int n_qubits) {
  return EffectVec::from_operator(zero_state(n_qubits).density(), n_qubits);
}

namespace detail {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double mean_of(std::span<const double> v) {
  CompensatedSum s;
  for (double x : v) s.add(x);
  return s.value() / static_cast<double>(v.size());
}

/// Unbiased sample variance, two-pass.
inline double sample_variance(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double mu = mean_of(v);
  CompensatedSum s;
  for (double x : v) s.add((x - mu) * (x - mu));
  return s.value() / static_cast<double>(v.size() - 1);
}

inline int resolve_threads(int threads) {
  if (threads > 0) return threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(i) for i in [0, count) on up to `threads` workers.  Chunks are
/// contiguous; exceptions from workers are rethrown on the caller.
template <typename Body>
void parallel_for(std::size_t count, int threads, Body&& body) {
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(resolve_threads(threads)),
                            std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const std::size_t lo = count * w / workers;
      const std::size_t hi = count * (w + 1) / workers;
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace detail

inline double survival_probability(const PauliTransferMatrix& noise,
                                   const GateSequence& seq, const StateVec& rho,
                                   const EffectVec& q) {
  const int n = noise.n_qubits();
  if (seq.n_qubits != n || rho.n_qubits() != n || q.n_qubits() != n) {
    throw ShapeError("qubit count mismatch");
  }
  Eigen::VectorXd v = rho.coefficients();
  for (const auto& g : seq.gates) v = noise.matrix() * apply_to_coefficients(g, v);
  if (!seq.gates.empty()) v = apply_to_coefficients(seq.inverse_gate, v);
  return checked_probability(q.coefficients().dot(v));
}

/// Number of successes in R shots at survival probability p.
inline std::uint64_t simulate_shots(double p, std::uint64_t shots, CounterRng& rng) {
  p = checked_probability(p);
  if (p == 0.0) return 0;
  if (p == 1.0) return shots;
  std::binomial_distribution<std::uint64_t> dist(shots, p);
  return dist(rng);
}

/// E_G[p] = f^m (Tr(Q rho) - Tr(Q)/d) + Tr(Q)/d for a Clifford-twirled noise.
inline double analytic_A(const PauliTransferMatrix& noise, int m, const StateVec& rho,
                         const EffectVec& q) {
  if (m < 0) throw DomainError("negative sequence length");
  const int d = dimension(noise.n_qubits());
  const double base = q.trace() / d;
  const double f = quality_parameter(noise);
  return (expectation(q, rho) - base) * std::pow(f, m) + base;
}

inline double analytic_A(const NoiseSpec& noise, int m, const StateVec& rho,
                         const EffectVec& q) {
  return analytic_A(build(noise, rho.n_qubits()), m, rho, q);
}

/// Survival probabilities of `count` independent sequences of length m,
/// sequence i drawn from substream (seed, domain, m, i).
inline std::vector<double> sample_survival(const PauliTransferMatrix& noise, int m,
                                           const StateVec& rho, const EffectVec& q,
                                           std::size_t count, std::uint64_t seed,
                                           StreamDomain domain, int threads = 0) {
  if (m < 0) throw DomainError("negative sequence length");
  std::vector<double> p(count);
  detail::parallel_for(count, threads, [&](std::size_t i) {
    CounterRng rng(seed, domain, static_cast<std::uint64_t>(m), i);
    const GateSequence seq = GateSequence::sample(noise.n_qubits(), m, rng);
    p[i] = survival_probability(noise, seq, rho, q);
  });
  return p;
}

/// Monte Carlo moments of the survival probability over sequences.
struct StatPair {
  double A = 0.0;
  double B = 0.0;
  double Y = 0.0;  // A - B, mean within-circuit shot variance
  double Z = 0.0;  // B - A^2, between-circuit variance
  double stderr_A = 0.0;
  double stderr_B = 0.0;
  std::int64_t n_mc = 0;
};

/// Spread below which per-sequence probabilities count as identical.
inline constexpr double kSnapTolerance = 1e-12;

inline StatPair stats_from_samples(std::span<const double> p) {
  if (p.size() < 2) throw DomainError("need at least two sampled sequences");
  const auto n = static_cast<double>(p.size());
  std::vector<double> sq(p.size());
  std::vector<double> shot_var(p.size());
  double max_shot_var = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    sq[i] = p[i] * p[i];
    shot_var[i] = p[i] * (1.0 - p[i]);
    max_shot_var = std::max(max_shot_var, shot_var[i]);
  }
  StatPair s;
  s.n_mc = static_cast<std::int64_t>(p.size());
  s.A = detail::mean_of(p);
  s.B = detail::mean_of(sq);
  // Y and Z computed from their own sums avoid the A - B and B - A^2
  // cancellations.  Z uses the (biased) population form to match B - A^2.
  s.Y = detail::mean_of(shot_var);
  s.Z = detail::sample_variance(p) * (n - 1.0) / n;
  const auto [lo, hi] = std::minmax_element(p.begin(), p.end());
  if (*hi - *lo <= kSnapTolerance) s.Z = 0.0;
  if (max_shot_var <= kSnapTolerance) s.Y = 0.0;
  s.stderr_A = std::sqrt(detail::sample_variance(p) / n);
  s.stderr_B = std::sqrt(detail::sample_variance(sq) / n);
  return s;
}

inline StatPair estimate_AB(const PauliTransferMatrix& noise, int m, const StateVec& rho,
                            const EffectVec& q, std::size_t n_mc, std::uint64_t seed,
                            int threads = 0) {
  if (n_mc < 2) throw DomainError("n_mc must be at least 2");
  const auto p =
      sample_survival(noise, m, rho, q, n_mc, seed, StreamDomain::kAbEstimate, threads);
  return stats_from_samples(p);
}

// ---------------------------------------------------------------------------
// Full protocol.

struct RBConfig {
  int n_qubits = 1;
  NoiseSpec noise;
  std::vector<int> lengths;
  std::int64_t sequences_per_length = 1;  // N
  std::int64_t reuse_count = 1;           // R
  StateVec rho = zero_state(1);
  EffectVec effect = zero_effect(1);
  std::uint64_t seed = 0;
  int threads = 0;  // 0: hardware concurrency; never changes results
};

struct SequenceResult {
  int m = 0;
  std::int64_t sequence_id = 0;
  double p = 0.0;
  std::int64_t k = 0;  // survived shots out of R
};

struct DecayRow {
  int m = 0;
  double mean = 0.0;      // X_N(m) = (1/N) sum_i k_i / R
  double variance = 0.0;  // unbiased sample variance of the k_i / R
  std::int64_t N = 0;
  std::int64_t R = 0;
};

struct DecayTable {
  std::vector<DecayRow> rows;
  std::vector<SequenceResult> records;
};

inline DecayTable run_rb(const RBConfig& cfg) {
  require_qubits(cfg.n_qubits);
  if (cfg.lengths.empty()) throw DomainError("no sequence lengths given");
  if (cfg.sequences_per_length < 1) throw DomainError("N must be positive");
  if (cfg.reuse_count < 1) throw DomainError("R must be positive");
  if (cfg.rho.n_qubits() != cfg.n_qubits || cfg.effect.n_qubits() != cfg.n_qubits) {
    throw ShapeError("rho / Q do not match n_qubits");
  }
  for (int m : cfg.lengths) {
    if (m < 1) throw DomainError("sequence lengths must be positive");
  }
  const PauliTransferMatrix noise = build(cfg.noise, cfg.n_qubits);
  const auto count = static_cast<std::size_t>(cfg.sequences_per_length);
  const auto shots = static_cast<std::uint64_t>(cfg.reuse_count);

  DecayTable table;
  for (int m : cfg.lengths) {
    std::vector<SequenceResult> recs(count);
    detail::parallel_for(count, cfg.threads, [&](std::size_t i) {
      CounterRng rng(cfg.seed, StreamDomain::kRbSequence, static_cast<std::uint64_t>(m), i);
      const GateSequence seq = GateSequence::sample(cfg.n_qubits, m, rng);
      const double p = survival_probability(noise, seq, cfg.rho, cfg.effect);
      recs[i] = {m, static_cast<std::int64_t>(i), p,
                 static_cast<std::int64_t>(simulate_shots(p, shots, rng))};
    });
    std::vector<double> xr(count);
    for (std::size_t i = 0; i < count; ++i) {
      xr[i] = static_cast<double>(recs[i].k) / static_cast<double>(shots);
    }
    table.rows.push_back({m, detail::mean_of(xr), detail::sample_variance(xr),
                          cfg.sequences_per_length, cfg.reuse_count});
    table.records.insert(table.records.end(), recs.begin(), recs.end());
  }
  return table;
}

// ---------------------------------------------------------------------------
// Decay fit  y(m) = a f^m + b.

struct DecayPoint {
  double m = 0.0;
  double value = 0.0;
  double weight = 1.0;
};

struct FitOptions {
  double b0 = 0.5;  // initial asymptote, Tr(Q)/d
  int max_iterations = 200;
  double tolerance = 1e-10;  // relative parameter change
};

struct DecayFit {
  double a = 0.0;
  double f = 1.0;
  double b = 0.0;
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();  // order (a, f, b)
  double stderr_a = 0.0;
  double stderr_f = 0.0;
  double stderr_b = 0.0;
  bool at_bound = false;  // f pinned at 1: a and b not separable
  int iterations = 0;
  double chi2 = 0.0;  // weighted residual sum of squares
};

class FitError : public Error {
 public:
  FitError(const std::string& what, DecayFit best) : Error(what), best_(best) {}
  const DecayFit& best() const { return best_; }

 private:
  DecayFit best_;
};

/// Weights 1/Var(mean) from a decay table when every row has a positive
/// variance, unit weights otherwise.
inline std::vector<DecayPoint> decay_points(std::span<const DecayRow> rows) {
  bool weighted = true;
  for (const auto& r : rows) weighted = weighted && r.variance > 0.0 && r.N > 0;
  std::vector<DecayPoint> out;
  for (const auto& r : rows) {
    out.push_back({static_cast<double>(r.m), r.mean,
                   weighted ? static_cast<double>(r.N) / r.variance : 1.0});
  }
  return out;
}

inline DecayFit fit_decay(std::span<const DecayPoint> points, const FitOptions& opt = {}) {
  const auto n = static_cast<int>(points.size());
  {
    std::vector<double> ms;
    for (const auto& pt : points) {
      if (!std::isfinite(pt.m) || pt.m < 0) throw DomainError("invalid length in decay data");
      if (!(pt.value >= -kProbabilitySlack && pt.value <= 1.0 + kProbabilitySlack)) {
        throw DomainError("decay value outside [0, 1]");
      }
      if (!(pt.weight > 0.0) || !std::isfinite(pt.weight)) {
        throw DomainError("decay weights must be positive");
      }
      ms.push_back(pt.m);
    }
    std::sort(ms.begin(), ms.end());
    if (std::unique(ms.begin(), ms.end()) - ms.begin() < 3) {
      throw DomainError("need at least three distinct lengths");
    }
  }
  constexpr double kMinF = 1e-12;

  // Log-linear start on |y - b0|, using whichever side of b0 has more points.
  DecayFit fit;
  fit.b = opt.b0;
  {
    int above = 0;
    int below = 0;
    for (const auto& pt : points) {
      above += pt.value - opt.b0 > 0.0;
      below += pt.value - opt.b0 < 0.0;
    }
    const double sign = above >= below ? 1.0 : -1.0;
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& pt : points) {
      const double gap = sign * (pt.value - opt.b0);
      if (gap <= 0.0) continue;
      const double w = pt.weight;
      const double ly = std::log(gap);
      sw += w;
      sx += w * pt.m;
      sy += w * ly;
      sxx += w * pt.m * pt.m;
      sxy += w * pt.m * ly;
    }
    const double det = sw * sxx - sx * sx;
    if (sw > 0.0 && det > 1e-12 * sw * sxx) {
      const double slope = (sw * sxy - sx * sy) / det;
      fit.f = std::clamp(std::exp(slope), kMinF, 1.0);
      fit.a = sign * std::exp((sy - slope * sx) / sw);
    } else {
      fit.f = 0.9;
      fit.a = points.front().value - opt.b0;
    }
  }

  auto model = [](const DecayFit& p, double m) { return p.a * std::pow(p.f, m) + p.b; };
  auto cost_of = [&](const DecayFit& p) {
    double c = 0.0;
    for (const auto& pt : points) {
      const double r = pt.value - model(p, pt.m);
      c += pt.weight * r * r;
    }
    return c;
  };
  auto normal_equations = [&](const DecayFit& p, Eigen::Matrix3d& h, Eigen::Vector3d& g) {
    h.setZero();
    g.setZero();
    for (const auto& pt : points) {
      const double fm = std::pow(p.f, pt.m);
      const double dfm = pt.m == 0.0 ? 0.0 : pt.m * std::pow(p.f, pt.m - 1.0);
      const Eigen::Vector3d j(fm, p.a * dfm, 1.0);
      const double r = pt.value - (p.a * fm + p.b);
      h += pt.weight * j * j.transpose();
      g += pt.weight * r * j;
    }
  };

  double cost = cost_of(fit);
  double lambda = 1e-3;
  bool converged = false;
  Eigen::Matrix3d h;
  Eigen::Vector3d g;
  int it = 0;
  for (; it < opt.max_iterations && !converged; ++it) {
    normal_equations(fit, h, g);
    bool stepped = false;
    while (lambda < 1e20) {
      Eigen::Matrix3d damped = h;
      for (int k = 0; k < 3; ++k) damped(k, k) += lambda * std::max(h(k, k), 1e-300);
      const Eigen::Vector3d delta = damped.ldlt().solve(g);
      if (!delta.allFinite()) {
        lambda *= 10.0;
        continue;
      }
      DecayFit trial = fit;
      trial.a += delta[0];
      trial.f = std::clamp(fit.f + delta[1], kMinF, 1.0);
      trial.b += delta[2];
      const double trial_cost = cost_of(trial);
      if (trial_cost <= cost) {
        const Eigen::Vector3d before(fit.a, fit.f, fit.b);
        const Eigen::Vector3d after(trial.a, trial.f, trial.b);
        const double change = (after - before).norm();
        fit = trial;
        cost = trial_cost;
        lambda = std::max(lambda / 10.0, 1e-12);
        converged = change <= opt.tolerance * (after.norm() + opt.tolerance);
        stepped = true;
        break;
      }
      lambda *= 10.0;
    }
    // No downhill step at any damping: we sit at a minimum to machine precision.
    if (!stepped) converged = true;
  }
  fit.iterations = it;
  fit.chi2 = cost;
  if (!converged) {
    throw FitError("decay fit did not converge in " + std::to_string(opt.max_iterations) +
                       " iterations",
                   fit);
  }

  normal_equations(fit, h, g);
  const double inf = std::numeric_limits<double>::infinity();
  fit.at_bound = fit.f >= 1.0 - 1e-12 && g[1] >= 0.0;
  if (fit.at_bound) {
    fit.covariance.setConstant(inf);
    fit.stderr_a = fit.stderr_f = fit.stderr_b = inf;
    return fit;
  }
  // Scale-free rank check.
  const Eigen::Vector3d scale = h.diagonal().cwiseSqrt().cwiseMax(1e-300);
  const Eigen::Matrix3d hs = scale.asDiagonal().inverse() * h * scale.asDiagonal().inverse();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(hs);
  if (eig.eigenvalues().minCoeff() <= 1e-13 * eig.eigenvalues().maxCoeff()) {
    fit.covariance.setConstant(inf);
    fit.stderr_a = fit.stderr_f = fit.stderr_b = inf;
    throw FitError("decay parameters are not identifiable from these points", fit);
  }
  const double dof = std::max(1, n - 3);
  fit.covariance = h.inverse() * (cost / dof);
  fit.stderr_a = std::sqrt(fit.covariance(0, 0));
  fit.stderr_f = std::sqrt(fit.covariance(1, 1));
  fit.stderr_b = std::sqrt(fit.covariance(2, 2));
  return fit;
}

}  // namespace rbreuse
