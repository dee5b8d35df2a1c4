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

#include <set>
#include <vector>

#include "rbreuse/rng.hpp"

namespace rbreuse::test_rng {

TEST_CASE("Philox4x32-10 known-answer vectors") {
  // Random123 kat_vectors.
  CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) ==
        std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu,
                                     0x9b00dbd8u});
  CHECK(philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                      {0xffffffffu, 0xffffffffu}) ==
        std::array<std::uint32_t, 4>{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u,
                                     0x6d5451fdu});
  CHECK(philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                      {0xa4093822u, 0x299f31d0u}) ==
        std::array<std::uint32_t, 4>{0xd16cfe09u, 0x94fdccebu, 0x5001e420u,
                                     0x24126ea1u});
}

TEST_CASE("substreams are reproducible and distinct") {
  auto draw = [](std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    CounterRng rng(seed, StreamDomain::kTest, a, b);
    std::vector<std::uint64_t> out(8);
    for (auto& v : out) v = rng();
    return out;
  };
  CHECK(draw(7, 3, 11) == draw(7, 3, 11));
  std::set<std::vector<std::uint64_t>> seen;
  for (std::uint64_t seed : {0, 1, 2}) {
    for (std::uint64_t a : {0, 1, 40}) {
      for (std::uint64_t b : {0, 1, 99999}) seen.insert(draw(seed, a, b));
    }
  }
  CHECK(seen.size() == 27);
}

TEST_CASE("bounded draws cover the range evenly") {
  CounterRng rng(42, StreamDomain::kTest, 0, 0);
  std::vector<int> counts(6, 0);
  const int draws = 60000;
  for (int i = 0; i < draws; ++i) ++counts[rng.below(6)];
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - 10000.0) * (c - 10000.0) / 10000.0;
  CHECK(chi2 < 20.5);  // 0.999 quantile, 5 dof

  double sum = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / draws == Catch::Approx(0.5).margin(0.005));
}

}  // namespace rbreuse::test_rng
