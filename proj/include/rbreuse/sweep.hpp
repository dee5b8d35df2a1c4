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

// Parameter sweeps: Y and Z per (sweep value, m), and the reuse counts they
// imply under the configured cost.  Variances are reported per unit budget
// (T0 * V).  Every sweep value reuses the same seed, so neighbouring points
// see the same Clifford sequences and the trend is not masked by sampling
// noise.

#include <cstdint>
#include <optional>
#include <vector>

#include "rbreuse/config.hpp"
#include "rbreuse/csv.hpp"
#include "rbreuse/noise.hpp"
#include "rbreuse/optimizer.hpp"
#include "rbreuse/rb.hpp"

namespace rbreuse {

/// R0 of a concrete cost model (its own near-optimal choice).
inline std::int64_t reference_r0(const CostModel& cost) {
  if (const auto* c = std::get_if<ConstantCost>(&cost)) {
    return near_optimal({c->alpha, c->beta, c->alpha, c->beta}).first;
  }
  if (const auto* c = std::get_if<LadderCost>(&cost)) return near_optimal(ladder_bounds(*c)).first;
  throw DomainError("sweeps need a concrete cost model");
}

inline SweepRow sweep_row(const std::string& param, double value, int m, const StatPair& stats,
                          const CostModel& cost) {
  SweepRow row;
  row.param = param;
  row.value = value;
  row.m = m;
  row.stats = stats;
  const auto rep = optimize(stats.Y, stats.Z, cost);
  row.kind = rep.kind;
  row.r_star = rep.r_star;
  const auto v = [&](std::int64_t r) {
    return scaled_variance(stats.Y, stats.Z, cost_at(cost, static_cast<double>(r)),
                           static_cast<double>(r));
  };
  row.v_at_1 = v(1);
  row.v_at_r0 = v(reference_r0(cost));
  row.v_at_rstar = rep.r_star ? v(*rep.r_star) : rep.variance_at_optimum;
  return row;
}

struct SweepResult {
  std::vector<SweepRow> rows;
  // One decay table per sweep value when N and R are configured.
  std::vector<std::pair<std::optional<double>, DecayTable>> decays;
};

inline SweepResult run_sweep(const RunConfig& cfg, std::uint64_t seed, int threads = 0) {
  SweepResult out;
  std::vector<std::optional<double>> points;
  if (cfg.sweep) {
    for (double v : cfg.sweep->values) points.emplace_back(v);
  } else {
    points.emplace_back(std::nullopt);
  }
  const auto rho = cfg.rho_state();
  const auto q = cfg.effect();
  const std::string param = cfg.sweep ? cfg.sweep->param : "none";
  for (const auto& point : points) {
    const auto spec = parse_noise(cfg.noise_text(point));
    const auto noise = build(spec, cfg.n_qubits);
    for (int m : cfg.lengths) {
      const auto stats = estimate_AB(noise, m, rho, q, cfg.n_mc, seed, threads);
      out.rows.push_back(sweep_row(param, point.value_or(0.0), m, stats, cfg.cost));
    }
    if (cfg.N > 0) {
      RBConfig rb;
      rb.n_qubits = cfg.n_qubits;
      rb.noise = spec;
      rb.lengths = cfg.lengths;
      rb.sequences_per_length = cfg.N;
      rb.reuse_count = cfg.R;
      rb.rho = rho;
      rb.effect = q;
      rb.seed = seed;
      rb.threads = threads;
      out.decays.emplace_back(point, run_rb(rb));
    }
  }
  return out;
}

}  // namespace rbreuse
