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

// Ladder cost model from measured runtimes.
//
// A run of N circuits with R shots each is modelled as
//   T0(N, R) = c1 N ceil(R / rc) + c2 N,
// rc being the number of shots the hardware ships per transfer batch.  For
// each candidate rc the per-circuit time T / N is regressed on ceil(R / rc)
// by ordinary least squares; the candidate with the smallest relative RMS
// of T0 / T - 1 wins.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "rbreuse/error.hpp"
#include "rbreuse/optimizer.hpp"

namespace rbreuse {

struct RuntimeRecord {
  std::int64_t R = 1;
  std::int64_t N = 1;
  double T = 0.0;  // seconds
};

struct LadderFit {
  double c1 = 0.0;  // seconds per batch
  double c2 = 0.0;  // seconds per circuit
  std::int64_t rc = 1;
  double residual = 0.0;           // relative RMS of T0 / T - 1
  std::vector<double> predicted;   // T0 per record

  LadderCost cost() const { return {c1, c2, rc}; }
};

inline double predict_T0(const LadderCost& cost, std::int64_t n, std::int64_t r) {
  validate(cost);
  if (n < 0 || r < 1) throw DomainError("predict_T0 needs N >= 0 and R >= 1");
  return static_cast<double>(n) * cost_at(cost, static_cast<double>(r));
}

inline LadderFit fit_ladder(std::span<const RuntimeRecord> records,
                            std::span<const std::int64_t> rc_candidates) {
  if (records.size() < 3) throw CalibrationError("need at least three runtime records");
  for (const auto& rec : records) {
    if (rec.R < 1 || rec.N < 1 || !(rec.T > 0.0)) {
      throw CalibrationError("runtime records need positive R, N and T");
    }
  }
  if (rc_candidates.empty()) throw CalibrationError("no batch-size candidates given");

  std::ostringstream diag;
  LadderFit best;
  best.residual = std::numeric_limits<double>::infinity();
  for (std::int64_t rc : rc_candidates) {
    if (rc < 1) throw CalibrationError("batch size candidates must be positive");
    const auto n = static_cast<Eigen::Index>(records.size());
    Eigen::MatrixXd a(n, 2);
    Eigen::VectorXd y(n);
    std::set<std::int64_t> steps;
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& rec = records[static_cast<std::size_t>(i)];
      const std::int64_t k = (rec.R + rc - 1) / rc;
      steps.insert(k);
      a(i, 0) = static_cast<double>(k);
      a(i, 1) = 1.0;
      y[i] = rec.T / static_cast<double>(rec.N);
    }
    if (steps.size() < 2) {
      diag << " rc=" << rc << ": single batch count, c1 unidentifiable;";
      continue;
    }
    const Eigen::Vector2d coef = a.colPivHouseholderQr().solve(y);
    if (!(coef[0] > 0.0 && coef[1] > 0.0)) {
      diag << " rc=" << rc << ": c1=" << coef[0] << " c2=" << coef[1] << " not positive;";
      continue;
    }
    LadderFit fit{coef[0], coef[1], rc, 0.0, {}};
    double ss = 0.0;
    for (const auto& rec : records) {
      const double t0 = predict_T0(fit.cost(), rec.N, rec.R);
      fit.predicted.push_back(t0);
      ss += (t0 / rec.T - 1.0) * (t0 / rec.T - 1.0);
    }
    fit.residual = std::sqrt(ss / static_cast<double>(records.size()));
    if (fit.residual < best.residual) best = std::move(fit);
  }
  if (!std::isfinite(best.residual)) {
    throw CalibrationError("no batch size gives a positive ladder fit:" + diag.str());
  }
  return best;
}

/// Largest N' whose predicted cost fits in the budget.  Returns 0 when one
/// circuit already exceeds it.
inline std::int64_t allocate_sequences(const LadderCost& cost, double budget, std::int64_t r) {
  validate(cost);
  if (!(budget > 0.0)) throw DomainError("budget must be positive");
  const double per = cost_at(cost, static_cast<double>(r));
  // A hair of slack so a budget that is an exact multiple survives rounding.
  return static_cast<std::int64_t>(std::floor(budget / per * (1.0 + 1e-12)));
}

}  // namespace rbreuse
