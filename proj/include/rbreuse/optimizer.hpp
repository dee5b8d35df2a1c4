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

// Choosing the reuse count R under a fixed budget.
//
// With N circuits of R shots each and per-circuit cost t(R), a budget T0
// buys N = T0 / t(R) circuits and
//   V(R) = (t(R) / T0) (Y / R + Z),
// Y the mean shot variance within a circuit and Z the variance of the
// expected outcome between circuits.  Everything below works with the
// budget-free quantity T0 * V(R) = t(R) (Y / R + Z).
//
// Cost models:
//   constant  t(R) = alpha + beta R
//   ladder    t(R) = c1 ceil(R / rc) + c2
//   bounded   alpha_l + beta_l R <= t(R) <= alpha_u + beta_u R, t unknown

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rbreuse/error.hpp"

namespace rbreuse {

struct ConstantCost {
  double alpha = 1.0;
  double beta = 1.0;
};

struct LadderCost {
  double c1 = 1.0;
  double c2 = 1.0;
  std::int64_t rc = 1;
};

struct BoundedCost {
  double alpha_l = 1.0;
  double beta_l = 1.0;
  double alpha_u = 1.0;
  double beta_u = 1.0;
};

using CostModel = std::variant<ConstantCost, LadderCost, BoundedCost>;

inline void validate(const ConstantCost& c) {
  if (!(c.alpha > 0.0 && c.beta > 0.0)) throw DomainError("constant cost needs alpha, beta > 0");
}

inline void validate(const LadderCost& c) {
  if (!(c.c1 > 0.0 && c.c2 > 0.0) || c.rc < 1) {
    throw DomainError("ladder cost needs c1, c2 > 0 and rc >= 1");
  }
}

inline void validate(const BoundedCost& c) {
  if (!(c.alpha_l > 0.0 && c.beta_l > 0.0 && c.alpha_u > 0.0 && c.beta_u > 0.0)) {
    throw DomainError("bounded cost needs positive coefficients");
  }
  if (!(c.alpha_l <= c.alpha_u && c.beta_l <= c.beta_u)) {
    throw DomainError("bounded cost needs alpha_l <= alpha_u and beta_l <= beta_u");
  }
}

inline double cost_at(const ConstantCost& c, double r) { return c.alpha + c.beta * r; }

inline double cost_at(const LadderCost& c, double r) {
  return c.c1 * std::ceil(r / static_cast<double>(c.rc)) + c.c2;
}

/// t(R) of a concrete model; a bounded model has none.
inline double cost_at(const CostModel& cost, double r) {
  return std::visit(
      [r](const auto& c) -> double {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, BoundedCost>) {
          throw DomainError("a bounded cost model has no concrete t(R)");
        } else {
          validate(c);
          return cost_at(c, r);
        }
      },
      cost);
}

inline void check_yz(double y, double z) {
  if (!(y >= 0.0 && z >= 0.0) || !std::isfinite(y) || !std::isfinite(z)) {
    throw DomainError("Y and Z must be finite and non-negative");
  }
}

/// T0 * V(R) for per-circuit cost t.
inline double scaled_variance(double y, double z, double t, double r) {
  return t * (y / r + z);
}

/// V(R) = (t(R) / T0) (Y / R + Z).
inline double variance_at(double y, double z, const CostModel& cost, double t0, double r) {
  check_yz(y, z);
  if (!(t0 > 0.0)) throw DomainError("budget T0 must be positive");
  if (!(r >= 1.0)) throw DomainError("R must be at least 1");
  return scaled_variance(y, z, cost_at(cost, r), r) / t0;
}

/// Exhaustive argmin of (t(R) / T0)(Y / R + Z) over R = 1..r_max, ties to
/// the smaller R.
inline std::int64_t grid_search_R(double y, double z, const std::function<double(std::int64_t)>& t,
                                  double t0, std::int64_t r_max) {
  if (r_max < 1) throw DomainError("r_max must be at least 1");
  std::int64_t best = 1;
  double best_v = scaled_variance(y, z, t(1), 1.0) / t0;
  for (std::int64_t r = 2; r <= r_max; ++r) {
    const double v = scaled_variance(y, z, t(r), static_cast<double>(r)) / t0;
    if (v < best_v) {
      best_v = v;
      best = r;
    }
  }
  return best;
}

enum class OptimumKind {
  kFinite,      // r_star is the integer optimum
  kUnbounded,   // Z = 0: variance keeps falling with R
  kRawZero,     // Y = 0: continuous optimum 0, r_star = 1
  kDegenerate,  // Y = Z = 0: every R gives zero variance
};

inline const char* to_string(OptimumKind k) {
  switch (k) {
    case OptimumKind::kFinite: return "finite";
    case OptimumKind::kUnbounded: return "unbounded";
    case OptimumKind::kRawZero: return "raw0";
    case OptimumKind::kDegenerate: return "degenerate";
  }
  return "?";
}

struct OptReport {
  OptimumKind kind = OptimumKind::kFinite;
  double r_star_real = 0.0;  // continuous optimum, before clamping or rounding
  std::optional<std::int64_t> r_star;
  std::vector<std::int64_t> candidates;
  std::optional<double> ladder_steps;  // x = sqrt(c2 Y / (c1 Z rc)), ladder only
  double variance_at_optimum = 0.0;    // T0 * V(r_star); the limit when unbounded
  std::int64_t r0 = 1;
  double guarantee_factor = 2.0;
  std::optional<std::pair<double, double>> interval;
  double speedup_vs_one = 1.0;  // V(1) / V(r_star)
};

namespace detail {

// Beyond this the optimum is not representable as a repeat count.
inline constexpr double kMaxRepeatCount = 1e15;

inline std::int64_t clamp_round(double x) {
  return std::max<std::int64_t>(1, std::llround(x));
}

inline void pick_best(OptReport& rep, double y, double z,
                      const std::function<double(std::int64_t)>& t) {
  std::sort(rep.candidates.begin(), rep.candidates.end());
  rep.candidates.erase(std::unique(rep.candidates.begin(), rep.candidates.end()),
                       rep.candidates.end());
  double best_v = std::numeric_limits<double>::infinity();
  for (std::int64_t r : rep.candidates) {
    const double v = scaled_variance(y, z, t(r), static_cast<double>(r));
    if (v < best_v) {
      best_v = v;
      rep.r_star = r;
    }
  }
  rep.variance_at_optimum = best_v;
  rep.speedup_vs_one = scaled_variance(y, z, t(1), 1.0) / best_v;
}

}  // namespace detail

/// (alpha + beta)(Y + Z) / (sqrt(beta Y) + sqrt(alpha Z))^2, the ratio of
/// V(1) to the continuous minimum.
inline double speedup_vs_one(double y, double z, double alpha, double beta) {
  check_yz(y, z);
  validate(ConstantCost{alpha, beta});
  if (!(y > 0.0 && z > 0.0)) throw DomainError("speedup needs Y, Z > 0");
  const double root = std::sqrt(beta * y) + std::sqrt(alpha * z);
  return (alpha + beta) * (y + z) / (root * root);
}

/// Near-optimal R0 = alpha_l / beta_l (rounded, at least 1) and its
/// guarantee factor alpha_u / alpha_l + beta_u / beta_l.
inline std::pair<std::int64_t, double> near_optimal(const BoundedCost& c) {
  validate(c);
  return {detail::clamp_round(c.alpha_l / c.beta_l), c.alpha_u / c.alpha_l + c.beta_u / c.beta_l};
}

/// Linear envelope of the ladder, from R/rc <= ceil(R/rc) <= (R + rc - 1)/rc.
inline BoundedCost ladder_bounds(const LadderCost& cost) {
  validate(cost);
  const double rc = static_cast<double>(cost.rc);
  return {cost.c2, cost.c1 / rc, cost.c2 + cost.c1 * (1.0 - 1.0 / rc), cost.c1 / rc};
}

/// Interval [r_lo, r_hi] that contains the continuous optimum for every t
/// between the bounds: the roots of a R^2 - b R + c with a = beta_l Z,
/// c = alpha_l Y and b = (sqrt(alpha_u Z) + sqrt(beta_u Y))^2 - alpha_l Z - beta_l Y.
/// Both roots are formed without cancellation.
inline std::pair<double, double> optimal_interval_bounded(double y, double z,
                                                          const BoundedCost& c) {
  check_yz(y, z);
  validate(c);
  if (!(y > 0.0 && z > 0.0)) throw DomainError("optimal interval needs Y, Z > 0");
  const double a = c.beta_l * z;
  const double cc = c.alpha_l * y;
  const double root_yz = std::sqrt(y * z);
  const double su = std::sqrt(c.alpha_u * c.beta_u);
  const double sl = std::sqrt(c.alpha_l * c.beta_l);
  const double spread = (c.alpha_u - c.alpha_l) * z + (c.beta_u - c.beta_l) * y;
  const double b = spread + 2.0 * su * root_yz;
  // b^2 - 4ac = (b - 2 sqrt(ac)) (b + 2 sqrt(ac)), with
  // b - 2 sqrt(ac) = spread + 2 sqrt(YZ) (su - sl).
  const double minus =
      spread + 2.0 * root_yz * (c.alpha_u * c.beta_u - c.alpha_l * c.beta_l) / (su + sl);
  const double plus = b + 2.0 * sl * root_yz;
  const double disc = minus * plus;
  if (disc < -1e-12 * b * b) throw NumericalViolation("inconsistent cost bounds");
  const double s = b + std::sqrt(std::max(disc, 0.0));
  return {2.0 * cc / s, s / (2.0 * a)};
}

inline OptReport optimal_R_constant(double y, double z, double alpha, double beta) {
  check_yz(y, z);
  const ConstantCost cost{alpha, beta};
  validate(cost);
  OptReport rep;
  std::tie(rep.r0, rep.guarantee_factor) = near_optimal({alpha, beta, alpha, beta});
  const auto t = [&](std::int64_t r) { return cost_at(cost, static_cast<double>(r)); };
  if (y == 0.0 && z == 0.0) {
    rep.kind = OptimumKind::kDegenerate;
    rep.variance_at_optimum = 0.0;
    rep.speedup_vs_one = 1.0;
    return rep;
  }
  if (z == 0.0) {
    rep.kind = OptimumKind::kUnbounded;
    rep.r_star_real = std::numeric_limits<double>::infinity();
    rep.variance_at_optimum = beta * y;
    rep.speedup_vs_one = (alpha + beta) / beta;
    return rep;
  }
  if (y == 0.0) {
    rep.kind = OptimumKind::kRawZero;
    rep.r_star_real = 0.0;
    rep.candidates = {1};
    detail::pick_best(rep, y, z, t);
    return rep;
  }
  rep.r_star_real = std::sqrt(alpha * y / (beta * z));
  if (rep.r_star_real > detail::kMaxRepeatCount) {
    rep.kind = OptimumKind::kUnbounded;
    rep.variance_at_optimum = std::pow(std::sqrt(beta * y) + std::sqrt(alpha * z), 2);
    rep.speedup_vs_one = speedup_vs_one(y, z, alpha, beta);
    return rep;
  }
  const auto lo = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(rep.r_star_real)));
  const auto hi = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(rep.r_star_real)));
  rep.candidates = {lo, hi};
  detail::pick_best(rep, y, z, t);
  return rep;
}

inline OptReport optimal_R_ladder(double y, double z, double c1, double c2, std::int64_t rc) {
  check_yz(y, z);
  const LadderCost cost{c1, c2, rc};
  validate(cost);
  OptReport rep;
  const double rcd = static_cast<double>(rc);
  std::tie(rep.r0, rep.guarantee_factor) = near_optimal(ladder_bounds(cost));
  const auto t = [&](std::int64_t r) { return cost_at(cost, static_cast<double>(r)); };
  if (y == 0.0 && z == 0.0) {
    rep.kind = OptimumKind::kDegenerate;
    return rep;
  }
  if (z == 0.0) {
    rep.kind = OptimumKind::kUnbounded;
    rep.r_star_real = std::numeric_limits<double>::infinity();
    rep.ladder_steps = rep.r_star_real;
    rep.variance_at_optimum = c1 * y / rcd;
    rep.speedup_vs_one = scaled_variance(y, z, t(1), 1.0) / rep.variance_at_optimum;
    return rep;
  }
  if (y == 0.0) {
    rep.kind = OptimumKind::kRawZero;
    rep.ladder_steps = 0.0;
    rep.candidates = {1};
    detail::pick_best(rep, y, z, t);
    return rep;
  }
  const double x = std::sqrt(c2 * y / (c1 * z * rcd));
  rep.ladder_steps = x;
  rep.r_star_real = x * rcd;
  if (rep.r_star_real > detail::kMaxRepeatCount) {
    rep.kind = OptimumKind::kUnbounded;
    rep.variance_at_optimum = c1 * y / rcd;
    rep.speedup_vs_one = scaled_variance(y, z, t(1), 1.0) / rep.variance_at_optimum;
    return rep;
  }
  // Within a step t is flat and Y/R falls, so only multiples of rc compete.
  const auto lo = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(x)));
  const auto hi = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(x)));
  rep.candidates = {lo * rc, hi * rc};
  detail::pick_best(rep, y, z, t);
  return rep;
}

/// Report for a model known only through its bounds: R0, its factor and the
/// interval holding the optimum.  r_star stays empty.
inline OptReport optimal_R_bounded(double y, double z, const BoundedCost& c) {
  check_yz(y, z);
  OptReport rep;
  std::tie(rep.r0, rep.guarantee_factor) = near_optimal(c);
  if (y == 0.0 && z == 0.0) {
    rep.kind = OptimumKind::kDegenerate;
  } else if (z == 0.0) {
    rep.kind = OptimumKind::kUnbounded;
    rep.r_star_real = std::numeric_limits<double>::infinity();
  } else if (y == 0.0) {
    rep.kind = OptimumKind::kRawZero;
    rep.r_star = 1;
  } else {
    rep.interval = optimal_interval_bounded(y, z, c);
  }
  return rep;
}

inline OptReport optimize(double y, double z, const CostModel& cost) {
  return std::visit(
      [&](const auto& c) -> OptReport {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, ConstantCost>) {
          return optimal_R_constant(y, z, c.alpha, c.beta);
        } else if constexpr (std::is_same_v<T, LadderCost>) {
          return optimal_R_ladder(y, z, c.c1, c.c2, c.rc);
        } else {
          return optimal_R_bounded(y, z, c);
        }
      },
      cost);
}

}  // namespace rbreuse
