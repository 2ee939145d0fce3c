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

// Toy GGM-style generator and a complexity-based distinguisher. Nothing here
// is secure; at k = 2 the point is the mechanics of the distinguisher.

#ifndef QMCSP_CRYPTODEMO_HPP
#define QMCSP_CRYPTODEMO_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "json.hpp"
#include "qmcsp/oracles.hpp"

namespace qmcsp {

// Bit strings are uint64_t values read MSB-first over their stated length.
struct ToyPRG {
  int k = 0;
  // table[x] has 2k bits.
  std::vector<uint64_t> table;
  void validate() const;
  uint64_t g0(uint64_t x) const;
  uint64_t g1(uint64_t x) const;
  static ToyPRG duplication(int k);
  static ToyPRG random(int k, std::mt19937_64 &rng);
};

// G_{z_m} o ... o G_{z_1}(x); z_1 is the most significant bit of z.
uint64_t ggm_eval(const ToyPRG &prg, uint64_t x, uint64_t z, int m);

// Bit i is the first bit of ggm_eval(prg, x, i, m).
TruthTable local_prg_truth_table(const ToyPRG &prg, uint64_t x, int m);

struct DistinguisherConfig {
  int t = 1;
  int output_qubit = 0;
  Thresholds th{1.0, 0.5};
};

// 1 iff the oracle says Yes at size s_threshold.
int distinguish_by_complexity(const TruthTable &tt, int s_threshold, const Oracle &oracle,
                              DistinguisherConfig cfg = {});

struct DistinguisherResult {
  int s_threshold = 0;
  double prg_accept_rate = 0.0;
  double random_accept_rate = 0.0;
  double advantage = 0.0;
  int k = 0;
  int m = 0;
  int n_seeds = 0;
  int n_random = 0;
  uint64_t seed = 0;
};

nlohmann::json result_to_json(const DistinguisherResult &r);

// Keys and random tables come from independent streams of seed.
DistinguisherResult run_distinguisher_experiment(const ToyPRG &prg, int m, int s_threshold, int n_seeds, int n_random,
                                                 const Oracle &oracle, uint64_t seed, DistinguisherConfig cfg = {});

// Exact circuit complexity of every truth table on m inputs over a classical
// gate set, by breadth-first search over the joint action on all inputs.
// Levels up to max_depth - 1 are stored; the last one is only scanned.
struct ComplexityCensus {
  int m = 0;
  int t = 0;
  int output_qubit = 0;
  int max_depth = 0;
  // cc[table] with table read as the m-bit-index truth table, bit i = f(i)
  // stored at position 2^m - 1 - i; -1 when above max_depth.
  std::vector<int> cc;
  // histogram[d] for d <= max_depth, then the count above max_depth.
  std::vector<int> histogram() const;
  // Lower median, counting unresolved tables as max_depth + 1.
  int median() const;
  int at(const TruthTable &tt) const;
};

uint64_t table_index(const TruthTable &tt);
TruthTable table_from_index(int m, uint64_t idx);

ComplexityCensus classical_census(const GateSet &gs, int m, int t, int output_qubit, int max_depth);
nlohmann::json census_to_json(const ComplexityCensus &c, const std::string &gateset);

// One below the census median, so a typical random table is rejected.
int census_threshold(const ComplexityCensus &census);

// 2^m / ((c + 1) m).
double formula_threshold(int m, double c);

// First seed whose random generator gives only tables with CC <= s_threshold.
struct DemoPRG {
  ToyPRG prg;
  uint64_t seed = 0;
};
DemoPRG select_demo_prg(const ComplexityCensus &census, int k, int s_threshold, uint64_t max_seed = 1000000);

}  // namespace qmcsp

#endif
