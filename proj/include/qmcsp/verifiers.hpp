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

#ifndef QMCSP_VERIFIERS_HPP
#define QMCSP_VERIFIERS_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "qmcsp/qcore.hpp"

namespace qmcsp {

struct VerifierCheck {
  std::string name;
  int64_t samples = 0;
  int64_t negatives = 0;
  // Reject when negatives/samples exceeds this (strict) or reaches it.
  double threshold = 0.0;
  bool strict = false;
  // Exact per-sample probability of a negative.
  double negative_probability = 0.0;
  bool rejects() const;
};

struct VerifierReport {
  std::string protocol;
  std::vector<VerifierCheck> checks;
  bool accept = true;
  uint64_t seed = 0;
  // "formula" or "cap" for the unitary verifier, "cut" otherwise.
  std::string threshold_mode;
  double threshold_formula = 0.0;
};

nlohmann::json report_to_json(const VerifierReport &r);

// Independent stream for check number index.
std::mt19937_64 check_rng(uint64_t seed, uint64_t index);

// Per-x acceptance test: accept when at least (alpha + beta)/2 of the
// trials_per_x samples read f(x).
VerifierReport verify_mqcsp(const TruthTable &tt, const QuantumCircuit &witness, double alpha, double beta,
                            int64_t trials_per_x, uint64_t seed);

// ell swap tests; accept when at least (1/2 + (alpha + beta)/4) * ell give 0.
double smcsp_cut(double alpha, double beta);
VerifierReport verify_smcsp(const PureState &psi, const QuantumCircuit &witness, double alpha, double beta, int64_t ell,
                            uint64_t seed);

struct UmcspVerifierConfig {
  int64_t poly1 = 10000;
  int64_t poly2 = 10000;
  // With use_cap the threshold is max(formula, cap).
  bool use_cap = false;
  double cap = 0.0;
  // Off: the standard basis check alone.
  bool coherency = true;
};

// 2^{-2n-18} (1 - beta)^4.
double umcsp_threshold(int n, double beta);
VerifierReport verify_umcsp(const UnitaryMatrix &u, const QuantumCircuit &witness, double beta, UmcspVerifierConfig cfg,
                            uint64_t seed);

// chi_a = (<a| (x) I)(U^dag (x) I) C |a, 0^t>, left unnormalized.
std::vector<Vec> ancilla_states(const QuantumCircuit &witness, const Mat &u);

struct AncillaCloseness {
  // 1 minus the smallest basis or pair fidelity.
  double delta = 0.0;
  double max_distance = 0.0;
  int worst_a = 0;
  int worst_b = 0;
  // 4 delta^{1/4}.
  double bound = 0.0;
};

AncillaCloseness ancilla_closeness(const QuantumCircuit &witness, const Mat &u);

}  // namespace qmcsp

#endif
