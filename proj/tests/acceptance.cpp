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

// One PASS/FAIL line per acceptance criterion, details indented below.
// Exit status is nonzero when any criterion fails.

#include <cstdio>

#include "rbreuse/verify.hpp"

int main() {
  rbreuse::verify::Options opt;
  opt.fixture_dir = RBREUSE_FIXTURE_DIR;
  int failed = 0;
  rbreuse::verify::run_all(opt, [&](const rbreuse::verify::CheckResult& r) {
    if (!r.pass) ++failed;
    std::printf("%s criterion %d: %s (%.1f s)\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.seconds);
    for (const auto& d : r.details) std::printf("    %s\n", d.c_str());
    std::fflush(stdout);
  });
  std::printf("%d of 10 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
