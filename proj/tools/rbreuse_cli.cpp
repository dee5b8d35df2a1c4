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

// rbreuse command line: optimize, simulate, calibrate, rb-fit, verify.
//
// Exit codes: 0 ok, 2 usage or invalid input, 3 degenerate statistics,
// 4 numerical failure (propagation slack, fit or calibration), 5 a
// verification check failed.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rbreuse/calibration.hpp"
#include "rbreuse/config.hpp"
#include "rbreuse/csv.hpp"
#include "rbreuse/optimizer.hpp"
#include "rbreuse/rb.hpp"
#include "rbreuse/svg.hpp"
#include "rbreuse/sweep.hpp"
#include "rbreuse/verify.hpp"

namespace {

using nlohmann::json;
using namespace rbreuse;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitNumerical = 4;
constexpr int kExitVerify = 5;

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string format;  // empty: human readable
  std::string out_dir;
  int threads = 0;
};

// Where a command's primary output goes: stdout, or a file in --out.
class Sink {
 public:
  Sink(const Globals& g, const std::string& name) {
    if (g.out_dir.empty()) return;
    std::filesystem::create_directories(g.out_dir);
    path_ = (std::filesystem::path(g.out_dir) / name).string();
    file_.open(path_);
    if (!file_) throw DomainError("cannot write '" + path_ + "'");
  }
  std::ostream& os() { return path_.empty() ? std::cout : file_; }
  ~Sink() {
    if (!path_.empty()) std::cerr << "wrote " << path_ << "\n";
  }

 private:
  std::string path_;
  std::ofstream file_;
};

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string ext(const Globals& g) { return g.format.empty() ? "txt" : g.format; }

// ---------------------------------------------------------------------------
// optimize

struct OptimizeArgs {
  double y = 0.0;
  double z = 0.0;
  std::vector<double> constant;
  std::vector<double> ladder;
  std::vector<double> bounded;
  std::optional<double> t0;
};

int cmd_optimize(const Globals& g, const OptimizeArgs& a) {
  CostModel cost;
  if (!a.constant.empty()) {
    cost = ConstantCost{a.constant[0], a.constant[1]};
  } else if (!a.ladder.empty()) {
    const double rc = a.ladder[2];
    if (rc != std::floor(rc)) throw DomainError("--ladder rc must be an integer");
    cost = LadderCost{a.ladder[0], a.ladder[1], static_cast<std::int64_t>(rc)};
  } else {
    cost = BoundedCost{a.bounded[0], a.bounded[1], a.bounded[2], a.bounded[3]};
  }
  const auto rep = optimize(a.y, a.z, cost);
  const bool bounded = std::holds_alternative<BoundedCost>(cost);
  const double scale = a.t0 ? 1.0 / *a.t0 : 1.0;
  if (a.t0 && !(*a.t0 > 0.0)) throw DomainError("--T0 must be positive");
  const std::string r_star = rep.r_star                          ? std::to_string(*rep.r_star)
                             : rep.kind == OptimumKind::kFinite ? std::string()
                                                                : std::string(to_string(rep.kind));

  Sink sink(g, "optimize." + ext(g));
  auto& os = sink.os();
  if (g.format == "json") {
    json j{{"kind", to_string(rep.kind)},
           {"r_star_real", number_or_null(rep.r_star_real)},
           {"r_star", rep.r_star ? json(*rep.r_star) : json(nullptr)},
           {"candidates", rep.candidates},
           {"r0", rep.r0},
           {"guarantee_factor", rep.guarantee_factor}};
    if (rep.ladder_steps) j["ladder_steps"] = number_or_null(*rep.ladder_steps);
    if (rep.interval) j["interval"] = {rep.interval->first, rep.interval->second};
    if (!bounded) {
      j["speedup_vs_one"] = rep.speedup_vs_one;
      j[a.t0 ? "variance_at_optimum" : "scaled_variance_at_optimum"] = rep.variance_at_optimum * scale;
    }
    os << j.dump(2) << "\n";
  } else if (g.format == "csv") {
    CsvTable t{{"kind", "r_star_real", "r_star", "candidates", "ladder_steps", "r0",
                "guarantee_factor", "r_lo", "r_hi", "speedup_vs_one", "variance_at_optimum"},
               {}};
    std::string cands;
    for (auto c : rep.candidates) cands += (cands.empty() ? "" : ";") + std::to_string(c);
    t.rows.push_back({to_string(rep.kind), format_number(rep.r_star_real), r_star, cands,
                      rep.ladder_steps ? format_number(*rep.ladder_steps) : "",
                      std::to_string(rep.r0), format_number(rep.guarantee_factor),
                      rep.interval ? format_number(rep.interval->first) : "",
                      rep.interval ? format_number(rep.interval->second) : "",
                      bounded ? "" : format_number(rep.speedup_vs_one),
                      bounded ? "" : format_number(rep.variance_at_optimum * scale)});
    write_csv(os, t);
  } else {
    os << "kind                " << to_string(rep.kind) << "\n";
    if (!bounded) os << "r_star_real         " << rep.r_star_real << "\n";
    if (rep.ladder_steps) os << "ladder steps x      " << *rep.ladder_steps << "\n";
    if (!rep.candidates.empty()) {
      os << "candidates         ";
      for (auto c : rep.candidates) os << " " << c;
      os << "\n";
    }
    if (!bounded || rep.r_star) os << "r_star              " << r_star << "\n";
    os << "R0                  " << rep.r0 << "\n"
       << "guarantee factor    " << rep.guarantee_factor << "\n";
    if (rep.interval) {
      os << "optimum interval    [" << rep.interval->first << ", " << rep.interval->second << "]\n";
    }
    if (!bounded) {
      os << "speedup vs R=1      " << rep.speedup_vs_one << "\n"
         << (a.t0 ? "variance at r_star  " : "T0 * V at r_star    ") << rep.variance_at_optimum * scale
         << "\n";
    }
  }
  if (rep.kind == OptimumKind::kDegenerate) {
    std::cerr << "warning: Y = Z = 0, every R gives zero variance\n";
    return kExitDegenerate;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate

int cmd_simulate(const Globals& g, const std::string& config_path) {
  const auto cfg = load_run_config(config_path);
  const auto seed = g.seed ? g.seed : cfg.seed;
  if (!seed) throw DomainError("simulate needs a seed (protocol.seed or --seed)");
  const std::string dir = g.out_dir.empty() ? cfg.out_dir : g.out_dir;
  std::filesystem::create_directories(dir);
  const auto path = [&](const std::string& name) { return (std::filesystem::path(dir) / name).string(); };
  const auto write_text = [&](const std::string& name, const std::string& text) {
    std::ofstream f(path(name));
    if (!f) throw DomainError("cannot write '" + path(name) + "'");
    f << text;
    std::cerr << "wrote " << path(name) << "\n";
  };

  const auto result = run_sweep(cfg, *seed, g.threads);
  std::set<std::string> formats = cfg.formats;
  if (!g.format.empty()) formats.insert(g.format);

  if (formats.count("csv")) {
    std::ostringstream os;
    write_csv(os, sweep_table(result.rows));
    write_text("sweep.csv", os.str());
  }
  if (formats.count("json")) {
    json rows = json::array();
    for (const auto& r : result.rows) {
      rows.push_back({{"param", r.param},
                      {"value", r.value},
                      {"m", r.m},
                      {"A", r.stats.A},
                      {"B", r.stats.B},
                      {"Y", r.stats.Y},
                      {"Z", r.stats.Z},
                      {"stderr_A", r.stats.stderr_A},
                      {"stderr_B", r.stats.stderr_B},
                      {"R_star", r_star_field(r.kind, r.r_star)},
                      {"V_at_1", r.v_at_1},
                      {"V_at_R0", r.v_at_r0},
                      {"V_at_Rstar", number_or_null(r.v_at_rstar)}});
    }
    write_text("sweep.json", json{{"seed", *seed}, {"rows", rows}}.dump(2) + "\n");
  }
  if (formats.count("svg") && cfg.sweep) {
    svg::Chart r_chart{"Optimal reuse count", cfg.sweep->param, "R* (continuous)", true, {}};
    svg::Chart v_chart{"Variance per unit budget", cfg.sweep->param, "T0 * V", true, {}};
    for (int m : cfg.lengths) {
      svg::Series rs{"m = " + std::to_string(m), {}, {}};
      svg::Series v1{"R = 1, m = " + std::to_string(m), {}, {}};
      svg::Series v0{"R0, m = " + std::to_string(m), {}, {}};
      svg::Series vs{"R*, m = " + std::to_string(m), {}, {}};
      for (const auto& r : result.rows) {
        if (r.m != m) continue;
        const auto rep = optimize(r.stats.Y, r.stats.Z, cfg.cost);
        rs.x.push_back(r.value);
        rs.y.push_back(rep.r_star_real);
        for (auto* s : {&v1, &v0, &vs}) s->x.push_back(r.value);
        v1.y.push_back(r.v_at_1);
        v0.y.push_back(r.v_at_r0);
        vs.y.push_back(r.v_at_rstar);
      }
      r_chart.series.push_back(rs);
      for (auto* s : {&v1, &v0, &vs}) v_chart.series.push_back(*s);
    }
    write_text("r_star.svg", svg::render(r_chart));
    write_text("variance.svg", svg::render(v_chart));
  }
  for (const auto& [point, table] : result.decays) {
    const std::string suffix =
        point ? "_" + cfg.sweep->param + "=" + format_number(*point) : std::string();
    std::ostringstream rows;
    write_csv(rows, decay_table(table.rows));
    write_text("decay" + suffix + ".csv", rows.str());
    std::ostringstream recs;
    write_csv(recs, sequence_table(table.records));
    write_text("sequences" + suffix + ".csv", recs.str());
  }

  for (const auto& r : result.rows) {
    std::printf("%s=%-10s m=%-4d Y=%-12.6g Z=%-12.6g R*=%s\n", r.param.c_str(),
                format_number(r.value).c_str(), r.m, r.stats.Y, r.stats.Z,
                r_star_field(r.kind, r.r_star).c_str());
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// calibrate

int cmd_calibrate(const Globals& g, const std::string& csv_path, const std::vector<std::int64_t>& grid) {
  const auto records = read_runtime_csv(csv_path);
  const auto fit = fit_ladder(records, grid);
  const auto bounds = ladder_bounds(fit.cost());
  const auto [r0, factor] = near_optimal(bounds);
  Sink sink(g, "calibration." + (g.format.empty() ? std::string("csv") : g.format));
  auto& os = sink.os();
  if (g.format == "json") {
    json rows = json::array();
    for (std::size_t i = 0; i < records.size(); ++i) {
      rows.push_back({{"R", records[i].R},
                      {"N", records[i].N},
                      {"T", records[i].T},
                      {"T0_pred", fit.predicted[i]},
                      {"ratio", fit.predicted[i] / records[i].T}});
    }
    os << json{{"C1", fit.c1}, {"C2", fit.c2}, {"Rc", fit.rc}, {"residual", fit.residual},
               {"R0", r0}, {"guarantee_factor", factor}, {"rows", rows}}
              .dump(2)
       << "\n";
  } else {
    write_csv(os, calibration_table(records, fit));
    os << "# C1=" << format_number(fit.c1) << "\n"
       << "# C2=" << format_number(fit.c2) << "\n"
       << "# Rc=" << fit.rc << "\n"
       << "# residual=" << format_number(fit.residual) << "\n"
       << "# R0=" << r0 << " guarantee_factor=" << format_number(factor) << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// rb-fit

int cmd_rb_fit(const Globals& g, const std::string& csv_path, double b0, int n_qubits) {
  require_qubits(n_qubits);
  const auto rows = decay_rows(read_csv_file(csv_path));
  FitOptions opt;
  opt.b0 = b0;
  const auto fit = fit_decay(decay_points(rows), opt);
  const double d = static_cast<double>(dimension(n_qubits));
  const double f_avg = fit.f + (1.0 - fit.f) / d;
  if (fit.at_bound) {
    std::cerr << "warning: f at its upper bound 1; a and b are not separately identifiable\n";
  }
  Sink sink(g, "fit." + (g.format.empty() ? std::string("txt") : g.format));
  auto& os = sink.os();
  if (g.format == "json") {
    os << json{{"a", fit.a},
               {"f", fit.f},
               {"b", fit.b},
               {"stderr_a", number_or_null(fit.stderr_a)},
               {"stderr_f", number_or_null(fit.stderr_f)},
               {"stderr_b", number_or_null(fit.stderr_b)},
               {"F_avg", f_avg},
               {"at_bound", fit.at_bound},
               {"iterations", fit.iterations},
               {"chi2", fit.chi2}}
              .dump(2)
       << "\n";
  } else if (g.format == "csv") {
    write_csv(os, CsvTable{{"a", "f", "b", "stderr_a", "stderr_f", "stderr_b", "F_avg", "at_bound"},
                           {{format_number(fit.a), format_number(fit.f), format_number(fit.b),
                             format_number(fit.stderr_a), format_number(fit.stderr_f),
                             format_number(fit.stderr_b), format_number(f_avg),
                             fit.at_bound ? "1" : "0"}}});
  } else {
    os << "a      " << fit.a << " +- " << fit.stderr_a << "\n"
       << "f      " << fit.f << " +- " << fit.stderr_f << (fit.at_bound ? "  (at bound)" : "") << "\n"
       << "b      " << fit.b << " +- " << fit.stderr_b << "\n"
       << "F_avg  " << f_avg << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify

int cmd_verify(const Globals& g, const std::string& fixtures) {
  verify::Options opt;
  if (g.seed) opt.seed = *g.seed;
  opt.threads = g.threads;
  opt.fixture_dir = fixtures;
  json checks = json::array();
  int failed = 0;
  const auto results = verify::run_all(opt, [&](const verify::CheckResult& r) {
    if (!r.pass) ++failed;
    if (g.format.empty()) {
      std::printf("%-4s %2d  %-44s %7.1f s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds);
      for (const auto& d : r.details) std::printf("            %s\n", d.c_str());
      std::fflush(stdout);
    }
  });
  if (!g.format.empty()) {
    Sink sink(g, "verify." + g.format);
    if (g.format == "json") {
      for (const auto& r : results) {
        checks.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"seconds", r.seconds},
                          {"details", r.details}});
      }
      sink.os() << checks.dump(2) << "\n";
    } else {
      CsvTable t{{"id", "name", "pass", "seconds"}, {}};
      for (const auto& r : results) {
        std::string name = r.name;
        std::replace(name.begin(), name.end(), ',', ';');
        t.rows.push_back({std::to_string(r.id), name, r.pass ? "1" : "0", format_number(r.seconds)});
      }
      write_csv(sink.os(), t);
    }
  }
  std::fprintf(stderr, "%d of %zu checks failed\n", failed, results.size());
  return failed == 0 ? kExitOk : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Circuit reuse optimization and randomized benchmarking simulation"};
  app.require_subcommand(1);
  Globals g;
  // Global flags are accepted before or after the subcommand and listed in
  // every --help.
  const auto add_globals = [&g](CLI::App* cmd) {
    cmd->add_option("--seed", g.seed, "Base seed for all random streams");
    cmd->add_option("--format", g.format, "Machine readable output")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", g.out_dir, "Write output files into this directory");
    cmd->add_option("--threads", g.threads, "Worker threads (0: all cores); never changes results")
        ->check(CLI::NonNegativeNumber);
  };
  add_globals(&app);

  OptimizeArgs opt;
  auto* optimize_cmd = app.add_subcommand("optimize", "Optimal reuse count for given Y, Z and cost model");
  add_globals(optimize_cmd);
  optimize_cmd->add_option("--Y", opt.y, "Mean within-circuit shot variance")->required();
  optimize_cmd->add_option("--Z", opt.z, "Between-circuit variance")->required();
  auto* c_opt = optimize_cmd->add_option("--constant", opt.constant, "t(R) = alpha + beta R")
                    ->expected(2)
                    ->type_name("ALPHA BETA");
  auto* l_opt = optimize_cmd->add_option("--ladder", opt.ladder, "t(R) = c1 ceil(R / rc) + c2")
                    ->expected(3)
                    ->type_name("C1 C2 RC");
  auto* b_opt = optimize_cmd->add_option("--bounded", opt.bounded,
                                         "alpha_l + beta_l R <= t(R) <= alpha_u + beta_u R")
                    ->expected(4)
                    ->type_name("AL BL AU BU");
  c_opt->excludes(l_opt)->excludes(b_opt);
  l_opt->excludes(b_opt);
  optimize_cmd->add_option("--T0", opt.t0, "Budget; variances are reported per unit budget without it");

  std::string config_path;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run a configured Y/Z sweep (and optional RB decay)");
  add_globals(simulate_cmd);
  simulate_cmd->add_option("config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);

  std::string runtime_csv;
  std::vector<std::int64_t> rc_grid{1, 10, 50, 100, 200, 500};
  auto* calibrate_cmd = app.add_subcommand("calibrate", "Fit the ladder cost model to a runtime table");
  add_globals(calibrate_cmd);
  calibrate_cmd->add_option("csv", runtime_csv, "CSV with columns R,N,T_seconds")->required()->check(CLI::ExistingFile);
  calibrate_cmd->add_option("--rc", rc_grid, "Candidate batch sizes")->delimiter(',');

  std::string decay_csv;
  double b0 = 0.5;
  int n_qubits = 1;
  auto* fit_cmd = app.add_subcommand("rb-fit", "Fit a * f^m + b to a decay table");
  add_globals(fit_cmd);
  fit_cmd->add_option("csv", decay_csv, "CSV with columns m,mean,variance,N,R")->required()->check(CLI::ExistingFile);
  fit_cmd->add_option("--b0", b0, "Asymptote guess used to seed the fit")->capture_default_str();
  fit_cmd->add_option("--n-qubits", n_qubits, "Qubit count, for the average fidelity")->capture_default_str();

  std::string fixtures = RBREUSE_FIXTURE_DIR;
  auto* verify_cmd = app.add_subcommand("verify", "Run the reproduction checks");
  add_globals(verify_cmd);
  verify_cmd->add_option("--fixtures", fixtures, "Directory holding the bundled tables")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*optimize_cmd) {
      if (opt.constant.empty() && opt.ladder.empty() && opt.bounded.empty()) {
        throw DomainError("one of --constant, --ladder, --bounded is required");
      }
      return cmd_optimize(g, opt);
    }
    if (*simulate_cmd) return cmd_simulate(g, config_path);
    if (*calibrate_cmd) return cmd_calibrate(g, runtime_csv, rc_grid);
    if (*fit_cmd) return cmd_rb_fit(g, decay_csv, b0, n_qubits);
    if (*verify_cmd) return cmd_verify(g, fixtures);
  } catch (const DegenerateStatistics& e) {
    std::cerr << "degenerate: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const NumericalViolation& e) {
    std::cerr << "numerical violation: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const FitError& e) {
    std::cerr << "fit failed: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const CalibrationError& e) {
    std::cerr << "calibration failed: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
