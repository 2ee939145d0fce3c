// Copyright 2026 The qmcsp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QMCSP_REPRO_HPP
#define QMCSP_REPRO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace qmcsp {

struct ReproOptions {
  uint64_t seed = 7;
  // Directory holding census_m3.json and prg_demo.json.
  std::string golden_dir;
  // finegrained: also run the circuit-level check at n = 1 (slow).
  bool circuit_check = false;
  int graphs = 200;
};

struct ReproResult {
  std::string suite;
  bool pass = true;
  std::vector<std::string> divergent;
  nlohmann::json payload;
  std::string markdown;
};

std::vector<std::string> repro_suites();
// Throws InvalidArgument for an unknown suite.
ReproResult run_repro(const std::string &suite, const ReproOptions &opt);

// FNV-1a over the canonical dump, as 16 hex digits.
std::string json_hash(const nlohmann::json &j);

}  // namespace qmcsp

#endif
