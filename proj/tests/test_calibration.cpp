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

#include <cmath>
#include <vector>

#include "rbreuse/calibration.hpp"
#include "rbreuse/csv.hpp"

namespace rbreuse::test_calibration {

namespace {

const std::vector<std::int64_t> kCandidates{1, 10, 50, 100, 200, 500};
const LadderCost kPaperCost{0.0410, 0.1365, 100};

std::vector<RuntimeRecord> table1() {
  return read_runtime_csv(std::string(RBREUSE_FIXTURE_DIR) + "/table1_runtime.csv");
}

}  // namespace

TEST_CASE("predict_T0") {
  CHECK(predict_T0(kPaperCost, 10000, 100) == Catch::Approx(1775.0).margin(1e-9));
  CHECK(predict_T0(kPaperCost, 100000, 5) == Catch::Approx(17750.0).margin(1e-9));
  CHECK(predict_T0(kPaperCost, 0, 5) == 0.0);
  CHECK_THROWS_AS(predict_T0(kPaperCost, 1, 0), DomainError);

  const auto table = read_csv_file(std::string(RBREUSE_FIXTURE_DIR) + "/table1_runtime.csv");
  for (const auto& row : table.rows) {
    const auto r = std::stoll(row[0]);
    const auto n = std::stoll(row[1]);
    CHECK(predict_T0(kPaperCost, n, r) == Catch::Approx(std::stod(row[3])).margin(0.1));
  }

  double prev = 0.0;
  for (std::int64_t r = 1; r < 1000; r += 7) {
    const double v = predict_T0(kPaperCost, 3, r);
    CHECK(v >= prev);
    CHECK(predict_T0(kPaperCost, 4, r) >= v);
    prev = v;
  }
}

TEST_CASE("fit_ladder on the runtime table") {
  const auto records = table1();
  REQUIRE(records.size() == 13);
  const auto fit = fit_ladder(records, kCandidates);
  CHECK(fit.rc == 100);
  CHECK(fit.c1 == Catch::Approx(0.0410).epsilon(0.05));
  CHECK(fit.c2 == Catch::Approx(0.1365).epsilon(0.05));
  REQUIRE(fit.predicted.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(std::abs(fit.predicted[i] / records[i].T - 1.0) <= 0.031);
  }
  CHECK(fit.residual < 0.02);
}

TEST_CASE("fit_ladder on synthetic data") {
  const LadderCost truth{0.05, 0.2, 64};
  std::vector<RuntimeRecord> records;
  for (std::int64_t r : {1, 30, 64, 65, 100, 128, 200, 640, 1000, 5000}) {
    const std::int64_t n = 1000 + 37 * r;
    records.push_back({r, n, predict_T0(truth, n, r)});
  }
  const std::vector<std::int64_t> candidates{1, 16, 32, 64, 100, 128};
  const auto fit = fit_ladder(records, candidates);
  CHECK(fit.rc == 64);
  CHECK(fit.c1 == Catch::Approx(0.05).epsilon(1e-10));
  CHECK(fit.c2 == Catch::Approx(0.2).epsilon(1e-10));
  CHECK(fit.residual < 1e-10);

  // Refitting the fit's own predictions changes nothing.
  auto again = records;
  for (std::size_t i = 0; i < again.size(); ++i) again[i].T = fit.predicted[i];
  const auto refit = fit_ladder(again, candidates);
  CHECK(refit.rc == fit.rc);
  CHECK(refit.c1 == Catch::Approx(fit.c1).epsilon(1e-12));
  CHECK(refit.c2 == Catch::Approx(fit.c2).epsilon(1e-12));
}

TEST_CASE("fit_ladder failures") {
  const std::vector<RuntimeRecord> single{{50, 10, 10.0}, {50, 20, 20.5}, {50, 30, 29.0}};
  CHECK_THROWS_AS(fit_ladder(single, kCandidates), CalibrationError);
  // Time falling with R gives a negative batch cost for every candidate.
  const std::vector<RuntimeRecord> falling{{1, 10, 10.0}, {200, 10, 5.0}, {1000, 10, 1.0}};
  CHECK_THROWS_AS(fit_ladder(falling, kCandidates), CalibrationError);
  const std::vector<RuntimeRecord> two{{1, 10, 10.0}, {200, 10, 50.0}};
  CHECK_THROWS_AS(fit_ladder(two, kCandidates), CalibrationError);
  const std::vector<RuntimeRecord> bad{{1, 10, 10.0}, {200, 0, 5.0}, {1000, 10, 1.0}};
  CHECK_THROWS_AS(fit_ladder(bad, kCandidates), CalibrationError);
}

TEST_CASE("allocate_sequences") {
  CHECK(allocate_sequences(kPaperCost, 126.91, 500) == 371);
  CHECK(allocate_sequences(kPaperCost, 126.91, 2) == 714);
  CHECK(allocate_sequences(kPaperCost, 0.3415, 500) == 1);
  CHECK(allocate_sequences(kPaperCost, 0.1, 500) == 0);
  CHECK_THROWS_AS(allocate_sequences(kPaperCost, 0.0, 500), DomainError);

  const auto table = read_csv_file(std::string(RBREUSE_FIXTURE_DIR) + "/table2_allocation.csv");
  REQUIRE(table.rows.size() == 13);
  for (const auto& row : table.rows) {
    const auto r = std::stoll(row[0]);
    const auto n_prime = std::stoll(row[1]);
    const double budget = predict_T0(kPaperCost, n_prime, r);
    CHECK(std::llabs(allocate_sequences(kPaperCost, budget, r) - n_prime) <= 1);
  }
}

TEST_CASE("ladder_bounds") {
  const auto [r0, factor] = near_optimal(ladder_bounds(kPaperCost));
  CHECK(r0 == 333);
  CHECK(factor == Catch::Approx(2.297).margin(1e-3));

  const auto flat = ladder_bounds({0.3, 0.7, 1});
  CHECK(flat.alpha_l == flat.alpha_u);
  CHECK(near_optimal(flat).second == 2.0);

  const LadderCost synthetic{0.05, 0.2, 64};
  const auto b = ladder_bounds(synthetic);
  for (std::int64_t r = 1; r <= 10000; ++r) {
    const double t = cost_at(synthetic, static_cast<double>(r));
    CHECK(b.alpha_l + b.beta_l * r <= t * (1.0 + 1e-15));
    CHECK(t <= (b.alpha_u + b.beta_u * r) * (1.0 + 1e-15));
  }
}

}  // namespace rbreuse::test_calibration
