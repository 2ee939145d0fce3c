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

#include "qmcsp/verifiers.hpp"

#include <algorithm>
#include <cmath>

#include "qmcsp/oracles.hpp"

namespace qmcsp {

namespace {

void check_fraction_thresholds(double alpha, double beta) {
  if (!(beta >= 0.0 && beta < alpha && alpha <= 1.0)) throw InvalidArgument("need 0 <= beta < alpha <= 1");
}

int64_t count_negatives(double p, int64_t samples, std::mt19937_64 &rng) {
  int64_t neg = 0;
  for (int64_t i = 0; i < samples; i++)
    if (bernoulli(p, rng)) neg++;
  return neg;
}

VerifierReport finish(VerifierReport r) {
  r.accept = std::none_of(r.checks.begin(), r.checks.end(), [](const VerifierCheck &c) { return c.rejects(); });
  return r;
}

}  // namespace

bool VerifierCheck::rejects() const {
  if (samples <= 0) return false;
  double ratio = static_cast<double>(negatives) / static_cast<double>(samples);
  return strict ? ratio > threshold : ratio >= threshold;
}

nlohmann::json report_to_json(const VerifierReport &r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto &c : r.checks)
    checks.push_back({{"name", c.name},
                      {"samples", c.samples},
                      {"negatives", c.negatives},
                      {"threshold", c.threshold},
                      {"comparison", c.strict ? ">" : ">="},
                      {"negative_probability", c.negative_probability},
                      {"rejects", c.rejects()}});
  return {{"protocol", r.protocol},
          {"verdict", r.accept ? "Accept" : "Reject"},
          {"seed", r.seed},
          {"threshold_mode", r.threshold_mode},
          {"threshold_formula", r.threshold_formula},
          {"checks", checks}};
}

std::mt19937_64 check_rng(uint64_t seed, uint64_t index) {
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32), static_cast<uint32_t>(index),
                    static_cast<uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

VerifierReport verify_mqcsp(const TruthTable &tt, const QuantumCircuit &witness, double alpha, double beta,
                            int64_t trials_per_x, uint64_t seed) {
  if (!(0.5 <= beta && beta < alpha && alpha <= 1.0)) throw InvalidArgument("need 1/2 <= beta < alpha <= 1");
  if (trials_per_x <= 0) throw InvalidArgument("trials_per_x must be positive");
  if (witness.n != tt.n) throw DimensionError("witness input size differs from the truth table");
  VerifierReport r;
  r.protocol = "mqcsp";
  r.seed = seed;
  r.threshold_mode = "cut";
  double cut = (alpha + beta) / 2;
  r.threshold_formula = cut;
  for (uint64_t x = 0; x < tt.bits.size(); x++) {
    VerifierCheck c;
    c.name = "x=" + std::to_string(x);
    c.samples = trials_per_x;
    c.negative_probability = std::clamp(1.0 - func_acceptance(witness, x, tt.at(x)), 0.0, 1.0);
    auto rng = check_rng(seed, x);
    c.negatives = count_negatives(c.negative_probability, trials_per_x, rng);
    // consistent fraction >= cut, so reject on more than 1 - cut negatives.
    c.threshold = 1.0 - cut;
    c.strict = true;
    r.checks.push_back(c);
  }
  return finish(r);
}

double smcsp_cut(double alpha, double beta) { return 0.5 + (alpha + beta) / 4; }

VerifierReport verify_smcsp(const PureState &psi, const QuantumCircuit &witness, double alpha, double beta, int64_t ell,
                            uint64_t seed) {
  check_fraction_thresholds(alpha, beta);
  if (ell <= 0) throw InvalidArgument("ell must be positive");
  if (witness.n != psi.n) throw DimensionError("witness input size differs from the state");
  VerifierReport r;
  r.protocol = "smcsp";
  r.seed = seed;
  r.threshold_mode = "cut";
  double cut = smcsp_cut(alpha, beta);
  r.threshold_formula = cut;
  // The swap test against the reduced state of the first n qubits gives 1
  // with probability (1 - F)/2.
  double f = score_state(witness, psi.amps);
  VerifierCheck c;
  c.name = "swap";
  c.samples = ell;
  c.negative_probability = std::clamp(0.5 - 0.5 * f, 0.0, 1.0);
  auto rng = check_rng(seed, 0);
  c.negatives = count_negatives(c.negative_probability, ell, rng);
  c.threshold = 1.0 - cut;
  c.strict = true;
  r.checks.push_back(c);
  return finish(r);
}

double umcsp_threshold(int n, double beta) { return std::ldexp(std::pow(1.0 - beta, 4), -2 * n - 18); }

VerifierReport verify_umcsp(const UnitaryMatrix &u, const QuantumCircuit &witness, double beta, UmcspVerifierConfig cfg,
                            uint64_t seed) {
  if (!(beta >= 0.0 && beta < 1.0)) throw InvalidArgument("need 0 <= beta < 1");
  if (cfg.poly1 <= 0 || cfg.poly2 <= 0) throw InvalidArgument("sample counts must be positive");
  if (witness.n != u.n) throw DimensionError("witness input size differs from the unitary");
  VerifierReport r;
  r.protocol = "umcsp";
  r.seed = seed;
  r.threshold_formula = umcsp_threshold(u.n, beta);
  double th = r.threshold_formula;
  if (cfg.use_cap) {
    if (!(cfg.cap >= 0.0 && cfg.cap <= 1.0)) throw InvalidArgument("threshold cap outside [0,1]");
    th = std::max(th, cfg.cap);
    r.threshold_mode = "cap";
  } else {
    r.threshold_mode = "formula";
  }
  std::vector<double> fid = unitary_basis_fidelities(witness, u.m);
  int64_t dn = int64_t{1} << u.n;
  uint64_t idx = 0;
  for (int64_t a = 0; a < dn; a++, idx++) {
    VerifierCheck c;
    c.name = "basis " + std::to_string(a);
    c.samples = cfg.poly1;
    c.negative_probability = std::clamp(1.0 - fid[a], 0.0, 1.0);
    auto rng = check_rng(seed, idx);
    c.negatives = count_negatives(c.negative_probability, c.samples, rng);
    c.threshold = th;
    r.checks.push_back(c);
  }
  if (cfg.coherency) {
    size_t k = static_cast<size_t>(dn);
    for (int64_t a = 0; a < dn; a++)
      for (int64_t b = a + 1; b < dn; b++, k++, idx++) {
        VerifierCheck c;
        c.name = "pair " + std::to_string(a) + "," + std::to_string(b);
        c.samples = cfg.poly2;
        c.negative_probability = std::clamp(1.0 - fid[k], 0.0, 1.0);
        auto rng = check_rng(seed, idx);
        c.negatives = count_negatives(c.negative_probability, c.samples, rng);
        c.threshold = th;
        r.checks.push_back(c);
      }
  }
  return finish(r);
}

std::vector<Vec> ancilla_states(const QuantumCircuit &witness, const Mat &u) {
  int64_t dn = int64_t{1} << witness.n, dt = int64_t{1} << witness.t;
  if (u.rows() != dn || u.cols() != dn) throw DimensionError("unitary does not match circuit input size");
  Mat ud = u.adjoint();
  std::vector<Vec> out;
  for (int64_t a = 0; a < dn; a++) {
    Vec in = Vec::Zero(dn);
    in(a) = 1.0;
    Vec v = run_circuit(witness, in);
    Vec chi(dt);
    for (int64_t k = 0; k < dt; k++) {
      cplx s = 0;
      for (int64_t i = 0; i < dn; i++) s += ud(a, i) * v((i << witness.t) | k);
      chi(k) = s;
    }
    out.push_back(std::move(chi));
  }
  return out;
}

AncillaCloseness ancilla_closeness(const QuantumCircuit &witness, const Mat &u) {
  AncillaCloseness r;
  std::vector<double> fid = unitary_basis_fidelities(witness, u);
  double mn = *std::min_element(fid.begin(), fid.end());
  r.delta = std::max(0.0, 1.0 - mn);
  r.bound = 4.0 * std::pow(r.delta, 0.25);
  std::vector<Vec> chi = ancilla_states(witness, u);
  for (size_t a = 0; a < chi.size(); a++)
    for (size_t b = a + 1; b < chi.size(); b++) {
      double d = (chi[a] - chi[b]).norm();
      if (d > r.max_distance) {
        r.max_distance = d;
        r.worst_a = static_cast<int>(a);
        r.worst_b = static_cast<int>(b);
      }
    }
  return r;
}

}  // namespace qmcsp
