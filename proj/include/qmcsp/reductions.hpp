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

#ifndef QMCSP_REDUCTIONS_HPP
#define QMCSP_REDUCTIONS_HPP

#include <climits>
#include <string>
#include <vector>

#include "qmcsp/oracles.hpp"
#include "qmcsp/qcore.hpp"

namespace qmcsp {

// Stands in for an unbounded size when a sub-oracle finds nothing.
constexpr int kUnbounded = INT_MAX;

struct Bracket {
  int lo = 0;
  int hi = 0;
  std::string lo_formula;
  std::string hi_formula;
  bool contains(int v) const { return lo <= v && v <= hi; }
};

struct OracleCall {
  std::string query;
  int size = 0;
  double alpha = 0.0;
  double beta = 0.0;
  Verdict verdict = Verdict::No;
  double best_score = 0.0;
};

struct ReductionStep {
  int i = 0;
  std::string gate;
  std::vector<int> qubits;
  // Best score of the accepting query.
  double score = 0.0;
  // 1 - eps_i, the Yes threshold of that query.
  double threshold = 0.0;
};

struct ReductionTrace {
  std::vector<OracleCall> oracle_calls;
  std::vector<ReductionStep> steps;
  int binary_search_calls = 0;
};

struct SearchResult {
  QuantumCircuit circuit;
  ReductionTrace trace;
  // Minimum size found by the binary search.
  int s = 0;
  double delta = 0.0;
  double fidelity = 0.0;
  // 1 - epsilon - 2^{-c3 n}.
  double bound = 0.0;
};

// Peels gates off the left of U one at a time: at step i the oracle is asked
// whether h^dag U_{i-1} has a circuit of size s - i. t = 0 only.
SearchResult s2d_umcsp(const UnitaryMatrix &u, const Oracle &oracle, double epsilon, double c3, int s_max);
// Same for states; s_bound is the promised upper bound.
SearchResult s2d_smcsp(const PureState &psi, int s_bound, const Oracle &oracle, double epsilon, double c3);

// |x, b> -> |x, b xor f(x)>, output bits on qubits n .. n+m-1. m <= 2.
UnitaryMatrix build_U_f(const std::vector<TruthTable> &outputs);
UnitaryMatrix build_U_f(const TruthTable &tt);

struct B2UResult {
  Bracket bracket;
  int cc_u = 0;
  int cc_u_2eps = 0;
  int m = 1;
  QuantumCircuit witness;
};

// Bracket from the unitary encoding: [ceil(CC(U_f, 2 eps)/2) - m, CC(U_f, eps)],
// clamped at 0. The oracle must carry the gate set of interest; s_max bounds
// the unitary search.
B2UResult mqcsp_via_umcsp(const TruthTable &tt, const Oracle &oracle, double epsilon, int s_max);

struct SelfReductionResult {
  Bracket bracket;
  // 1 or 2.
  int case_id = 0;
  double c0_sq = 0.0;
  double c1_sq = 0.0;
  // Branch used in case 1.
  int dominant = -1;
  int k = 0;
  int k_star = 0;
  int h = 0;
  double eps_prime = 0.0;
  // Sub-oracle values in the order they were queried, kUnbounded on failure.
  std::vector<std::pair<std::string, int>> sub_values;
};

struct SelfReductionConfig {
  // measured_controlled_overhead(make_gateset("grot")).
  int k = 7;
  int h = 2;
  // Size limit passed to the sub-oracle.
  int s_max = 5;
};

// Number of gates in the controlled version of a single-qubit gate built as
// A X B X C plus a phase on the control, verified numerically. The default k is
// the maximum over the one-qubit gates of the set.
int controlled_gate_overhead(const GateDef &g);
int measured_controlled_overhead(const GateSet &gs);

// sub_oracle decides over (n-1)-qubit states.
SelfReductionResult self_reduce_smcsp(const PureState &psi, double epsilon, const Oracle &sub_oracle,
                                      SelfReductionConfig cfg = {});

}  // namespace qmcsp

#endif
