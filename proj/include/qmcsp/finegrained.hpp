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

#ifndef QMCSP_FINEGRAINED_HPP
#define QMCSP_FINEGRAINED_HPP

#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qmcsp/oracles.hpp"

namespace qmcsp {

// Indices are 0-based: vertex (j, k) with j, k in [0, n).
struct BipartiteGraph {
  using Vertex = std::pair<int, int>;
  using Edge = std::pair<Vertex, Vertex>;
  int n = 0;
  std::set<Edge> edges;
  void validate() const;
  std::string to_string() const;
  // Edge count uniform in [0, 2n^2], endpoints uniform.
  static BipartiteGraph random(int n, std::mt19937_64 &rng);
};

// A permutation of [0, 2n); pi[i] is the image of i.
using Permutation = std::vector<int>;

bool is_permutation(const Permutation &pi);
// pi maps [0,n) onto itself, hence also [n,2n).
bool is_block_permutation(const Permutation &pi, int n);

// Input index of (x, y, z): each 2n bits, x first, bit i of a block stored
// MSB-first.
uint64_t gamma_index(int n, uint64_t x, uint64_t y, uint64_t z);

// Case number (1..7) deciding gamma(x, y, z), 0 for a don't-care. The edge
// case is checked first; the rest go in the listed order.
int gamma_case(const BipartiteGraph &g, uint64_t x, uint64_t y, uint64_t z);
PartialTruthTable build_gamma(const BipartiteGraph &g);

struct GammaConflict {
  uint64_t x = 0, y = 0, z = 0;
  // (case, value) for every case that matches.
  std::vector<std::pair<int, int>> cases;
};

// Inputs matched by several cases that disagree on the value.
std::vector<GammaConflict> gamma_conflicts(const BipartiteGraph &g);

// OR_i ((x_{pi(i)} or y_i) and z_i) against every specified entry.
bool check_permutation_formula(const PartialTruthTable &gamma, const Permutation &pi);
// First pi in S_{2n} (lexicographic) passing the formula check.
std::optional<Permutation> find_formula_permutation(const PartialTruthTable &gamma, int n);

// pi(j) != k or pi(n+j') != n+k' for every edge ((j,k),(j',k')).
bool satisfies_bpis(const BipartiteGraph &g, const Permutation &pi);
// Lexicographically first block permutation satisfying the instance.
std::optional<Permutation> solve_bpis(const BipartiteGraph &g);

struct EquivalenceRow {
  BipartiteGraph graph;
  std::optional<Permutation> formula_pi;
  std::optional<Permutation> bpis_pi;
  bool circuit_checked = false;
  Verdict circuit_verdict = Verdict::No;
  double circuit_best = 0.0;
  int circuit_output_qubit = -1;
  size_t conflicts = 0;
  bool formula_iff_bpis() const { return formula_pi.has_value() == bpis_pi.has_value(); }
  // Vacuous when the circuit level was not run.
  bool formula_implies_circuit() const {
    return !circuit_checked || !formula_pi.has_value() || circuit_verdict == Verdict::Yes;
  }
};

struct EquivalenceReport {
  int n = 0;
  std::vector<EquivalenceRow> rows;
  int violations_ab = 0;
  int violations_ac = 0;
};

// Every graph on n = 1 (edge absent, edge present).
std::vector<BipartiteGraph> all_graphs_n1();
std::vector<BipartiteGraph> random_graphs(int n, int count, uint64_t seed);

// With circuit_oracle set, also runs decide_mqcsp_star(gamma, 6n - 1) on every
// output qubit, stopping at the first Yes.
EquivalenceReport equivalence_experiment(int n, const std::vector<BipartiteGraph> &graphs,
                                         const Oracle *circuit_oracle = nullptr);

nlohmann::json equivalence_to_json(const EquivalenceReport &r);
std::string equivalence_table(const EquivalenceReport &r);

}  // namespace qmcsp

#endif
