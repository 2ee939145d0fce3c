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

#ifndef QMCSP_ORACLES_HPP
#define QMCSP_ORACLES_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "qmcsp/qcore.hpp"

namespace qmcsp {

enum class Verdict { Yes, No, Unpromised };
enum class ProblemKind { MQCSP, MQCSPStar, MQCSPGap, UMCSP, SMCSP };

std::string to_string(Verdict v);
std::string to_string(ProblemKind k);

struct Thresholds {
  double alpha = 1.0;
  double beta = 0.5;
};

// Slack on the Yes comparison so exact witnesses survive rounding.
constexpr double kScoreTol = 1e-9;

struct OracleConfig {
  uint64_t budget = 1000000000ULL;
  int dim_cap = kDefaultDimensionCap;
  int workers = 1;
  // Restrict to circuits whose untouched ancillas are the highest-indexed ones.
  bool ancilla_symmetry = false;
  // Skip Boolean-problem circuits whose output cannot depend on every relevant
  // input. Only used when alpha > 1/2 and beta >= 1/2, where it never changes
  // the verdict.
  bool lightcone = true;
  // Dedup table slots (power of two). 0 disables dedup.
  size_t table_slots = size_t{1} << 22;
};

struct OracleVerdict {
  ProblemKind kind = ProblemKind::MQCSP;
  Verdict verdict = Verdict::No;
  std::optional<QuantumCircuit> best_circuit;
  double best_score = 0.0;
  // UMCSP with ancillas: largest witnessed min over basis and pair fidelities.
  double witnessed_score = 0.0;
  // "exact", "exact-eigenphase" or "certified".
  std::string path = "exact";
  int searched_size = 0;
  uint64_t nodes = 0;
  double unitarity_error = 0.0;
  bool lightcone_pruned = false;
  bool from_cache = false;
};

struct ComplexityCertificate {
  std::string object_kind;
  double epsilon = 0.0;
  int min_size = 0;
  QuantumCircuit witness;
  double achieved_fidelity = 0.0;
  int ancilla_used = 0;
};

class OracleCache;

uint64_t arrangements(int arity, int width);
// Sum over gates of the number of ordered qubit tuples.
uint64_t slot_count(const GateSet &gs, int width);
// (slot_count)^s; throws ResourceError on 64-bit overflow.
uint64_t closed_form_count(const GateSet &gs, int n, int t, int s);

// Calls visit on every circuit with exactly s gates in lexicographic
// (gate index, qubit tuple) order per position.
void enumerate_circuits(int n, int t, int s, std::shared_ptr<const GateSet> gs,
                        const std::function<void(const QuantumCircuit &)> &visit, uint64_t budget = 1000000000ULL);

class Oracle {
 public:
  explicit Oracle(std::shared_ptr<const GateSet> gs, OracleConfig cfg = {});

  void set_cache(std::shared_ptr<OracleCache> cache) { cache_ = std::move(cache); }
  const GateSet &gateset() const { return *gs_; }
  std::shared_ptr<const GateSet> gateset_ptr() const { return gs_; }
  const OracleConfig &config() const { return cfg_; }
  OracleConfig &config() { return cfg_; }

  OracleVerdict decide_mqcsp(const TruthTable &tt, int s, int t, Thresholds th, int output_qubit = 0) const;
  // Thresholds 2/3 and 1/2 as in the partial-function definition.
  OracleVerdict decide_mqcsp_star(const PartialTruthTable &pt, int s, int t, int output_qubit = 0) const;
  // Gap variant: Yes needs size <= s at 2/3, No needs every circuit up to
  // s_prime to fall to 1/2 somewhere.
  OracleVerdict decide_mqcsp_gap(const PartialTruthTable &pt, int s, int s_prime, int t, int output_qubit = 0) const;
  OracleVerdict decide_umcsp(const UnitaryMatrix &u, int s, int t, Thresholds th) const;
  OracleVerdict decide_smcsp(const PureState &psi, int s, int t, Thresholds th) const;

  // Least s <= s_max that is Yes at alpha = 1 - epsilon. NotSynthesizable otherwise.
  ComplexityCertificate min_size_function(const TruthTable &tt, double epsilon, int t, int s_max, int output_qubit = 0) const;
  ComplexityCertificate min_size_unitary(const UnitaryMatrix &u, double epsilon, int t, int s_max) const;
  ComplexityCertificate min_size_state(const PureState &psi, double epsilon, int t, int s_max) const;

 private:
  std::shared_ptr<const GateSet> gs_;
  OracleConfig cfg_;
  std::shared_ptr<OracleCache> cache_;
};

// Re-scores a witness exactly as the oracle would.
double score_function(const QuantumCircuit &c, const PartialTruthTable &pt);
double score_unitary_exact(const QuantumCircuit &c, const Mat &u);
double score_state(const QuantumCircuit &c, const Vec &psi);

}  // namespace qmcsp

#endif
