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

// JSON run configuration for `rbreuse simulate`.
//
//   {
//     "schema_version": 1,
//     "noise": "compose(phase_damping({p2}), amplitude_damping(0.999))",
//     "protocol": {"n_qubits": 1, "m": [10], "n_mc": 50000, "seed": 7,
//                  "rho": "zeros", "Q": "zeros", "N": 200, "R": 4},
//     "cost": {"constant": {"alpha": 4, "beta": 1}},
//     "sweep": {"param": "p2", "values": [0.98, 0.99]},
//     "output": {"directory": "out", "formats": ["csv", "svg"]}
//   }
//
// "{name}" in the noise text is replaced by each sweep value.  N and R are
// optional; when both are given a decay table is simulated as well.  Unknown
// keys anywhere are rejected.

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rbreuse/error.hpp"
#include "rbreuse/format.hpp"
#include "rbreuse/liouville.hpp"
#include "rbreuse/noise.hpp"
#include "rbreuse/optimizer.hpp"
#include "rbreuse/rb.hpp"

namespace rbreuse {

inline constexpr int kSchemaVersion = 1;

struct SweepSpec {
  std::string param;
  std::vector<double> values;
};

struct RunConfig {
  std::string noise;  // may hold a "{param}" placeholder
  int n_qubits = 1;
  std::vector<int> lengths;
  std::size_t n_mc = 50000;
  std::optional<std::uint64_t> seed;
  std::optional<std::vector<double>> rho;  // Pauli coefficients; empty means |0..0>
  std::optional<std::vector<double>> q;
  std::int64_t N = 0;
  std::int64_t R = 0;
  CostModel cost = ConstantCost{4.0, 1.0};
  std::optional<SweepSpec> sweep;
  std::string out_dir = "out";
  std::set<std::string> formats{"csv"};

  /// Noise text for one sweep value (the text itself without a sweep).
  std::string noise_text(std::optional<double> value) const {
    if (!sweep || !value) return noise;
    const std::string key = "{" + sweep->param + "}";
    std::string out = noise;
    for (auto pos = out.find(key); pos != std::string::npos; pos = out.find(key, pos)) {
      const auto num = format_number(*value);
      out.replace(pos, key.size(), num);
      pos += num.size();
    }
    return out;
  }

  StateVec rho_state() const {
    if (!rho) return zero_state(n_qubits);
    return StateVec::from_coefficients(
        Eigen::Map<const Eigen::VectorXd>(rho->data(), static_cast<Eigen::Index>(rho->size())),
        n_qubits);
  }

  EffectVec effect() const {
    if (!q) return zero_effect(n_qubits);
    return EffectVec::from_coefficients(
        Eigen::Map<const Eigen::VectorXd>(q->data(), static_cast<Eigen::Index>(q->size())),
        n_qubits);
  }
};

namespace detail {

using nlohmann::json;

inline void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw DomainError(where + " must be an object");
  for (const auto& [k, v] : j.items()) {
    bool known = false;
    for (const char* allowed : keys) known = known || k == allowed;
    if (!known) throw DomainError("unknown key '" + k + "' in " + where);
  }
}

inline double number_at(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw DomainError(where + "." + key + " must be a number");
  }
  return j.at(key).get<double>();
}

inline std::optional<std::vector<double>> preset_or_coefficients(const json& j, const std::string& where) {
  if (j.is_string()) {
    if (j.get<std::string>() != "zeros") throw DomainError(where + ": unknown preset");
    return std::nullopt;
  }
  if (!j.is_array()) throw DomainError(where + " must be \"zeros\" or a coefficient list");
  std::vector<double> out;
  for (const auto& x : j) {
    if (!x.is_number()) throw DomainError(where + " coefficients must be numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

inline CostModel parse_cost(const json& j) {
  only_keys(j, "cost", {"constant", "ladder"});
  if (j.size() != 1) throw DomainError("cost needs exactly one of constant, ladder");
  if (j.contains("constant")) {
    const auto& c = j.at("constant");
    only_keys(c, "cost.constant", {"alpha", "beta"});
    ConstantCost m{number_at(c, "alpha", "cost.constant"), number_at(c, "beta", "cost.constant")};
    validate(m);
    return m;
  }
  const auto& c = j.at("ladder");
  only_keys(c, "cost.ladder", {"c1", "c2", "rc"});
  if (!c.contains("rc") || !c.at("rc").is_number_integer()) {
    throw DomainError("cost.ladder.rc must be an integer");
  }
  LadderCost m{number_at(c, "c1", "cost.ladder"), number_at(c, "c2", "cost.ladder"),
               c.at("rc").get<std::int64_t>()};
  validate(m);
  return m;
}

}  // namespace detail

inline RunConfig parse_run_config(const nlohmann::json& j) {
  using detail::json;
  detail::only_keys(j, "config", {"schema_version", "noise", "protocol", "cost", "sweep", "output"});
  if (!j.contains("schema_version") || j.at("schema_version") != kSchemaVersion) {
    throw DomainError("schema_version must be " + std::to_string(kSchemaVersion));
  }
  RunConfig cfg;
  if (!j.contains("noise") || !j.at("noise").is_string()) throw DomainError("noise must be a string");
  cfg.noise = j.at("noise").get<std::string>();

  if (!j.contains("protocol")) throw DomainError("missing protocol section");
  const auto& p = j.at("protocol");
  detail::only_keys(p, "protocol", {"n_qubits", "m", "n_mc", "seed", "rho", "Q", "N", "R"});
  if (p.contains("n_qubits")) {
    if (!p.at("n_qubits").is_number_integer()) throw DomainError("protocol.n_qubits must be an integer");
    cfg.n_qubits = p.at("n_qubits").get<int>();
  }
  require_qubits(cfg.n_qubits);
  if (!p.contains("m") || !p.at("m").is_array() || p.at("m").empty()) {
    throw DomainError("protocol.m must be a non-empty list");
  }
  for (const auto& m : p.at("m")) {
    if (!m.is_number_integer() || m.get<int>() < 1) throw DomainError("protocol.m entries must be positive integers");
    cfg.lengths.push_back(m.get<int>());
  }
  if (p.contains("n_mc")) {
    if (!p.at("n_mc").is_number_integer() || p.at("n_mc").get<std::int64_t>() < 2) {
      throw DomainError("protocol.n_mc must be an integer >= 2");
    }
    cfg.n_mc = p.at("n_mc").get<std::size_t>();
  }
  if (p.contains("seed")) {
    if (!p.at("seed").is_number_unsigned()) throw DomainError("protocol.seed must be a non-negative integer");
    cfg.seed = p.at("seed").get<std::uint64_t>();
  }
  if (p.contains("rho")) cfg.rho = detail::preset_or_coefficients(p.at("rho"), "protocol.rho");
  if (p.contains("Q")) cfg.q = detail::preset_or_coefficients(p.at("Q"), "protocol.Q");
  for (const char* key : {"N", "R"}) {
    if (!p.contains(key)) continue;
    if (!p.at(key).is_number_integer() || p.at(key).get<std::int64_t>() < 1) {
      throw DomainError(std::string("protocol.") + key + " must be a positive integer");
    }
    (std::string(key) == "N" ? cfg.N : cfg.R) = p.at(key).get<std::int64_t>();
  }
  if ((cfg.N > 0) != (cfg.R > 0)) throw DomainError("protocol.N and protocol.R go together");

  if (j.contains("cost")) cfg.cost = detail::parse_cost(j.at("cost"));

  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    detail::only_keys(s, "sweep", {"param", "values"});
    if (!s.contains("param") || !s.at("param").is_string()) throw DomainError("sweep.param must be a string");
    SweepSpec sweep{s.at("param").get<std::string>(), {}};
    if (!s.contains("values") || !s.at("values").is_array() || s.at("values").empty()) {
      throw DomainError("sweep.values must be a non-empty list");
    }
    for (const auto& v : s.at("values")) {
      if (!v.is_number()) throw DomainError("sweep.values must be numbers");
      sweep.values.push_back(v.get<double>());
    }
    if (cfg.noise.find("{" + sweep.param + "}") == std::string::npos) {
      throw DomainError("noise text has no {" + sweep.param + "} placeholder");
    }
    cfg.sweep = std::move(sweep);
  }

  if (j.contains("output")) {
    const auto& o = j.at("output");
    detail::only_keys(o, "output", {"directory", "formats"});
    if (o.contains("directory")) {
      if (!o.at("directory").is_string()) throw DomainError("output.directory must be a string");
      cfg.out_dir = o.at("directory").get<std::string>();
    }
    if (o.contains("formats")) {
      cfg.formats.clear();
      for (const auto& f : o.at("formats")) {
        if (!f.is_string()) throw DomainError("output.formats must be strings");
        const auto name = f.get<std::string>();
        if (name != "csv" && name != "json" && name != "svg") {
          throw DomainError("unknown output format '" + name + "'");
        }
        cfg.formats.insert(name);
      }
    }
  }

  // Fail early on bad noise text or SPAM vectors.
  for (const auto& v : cfg.sweep ? cfg.sweep->values : std::vector<double>{0.0}) {
    (void)parse_noise(cfg.noise_text(v));
  }
  (void)cfg.rho_state();
  (void)cfg.effect();
  return cfg;
}

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DomainError("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError(path + ": " + e.what());
  }
  return parse_run_config(j);
}

}  // namespace rbreuse
