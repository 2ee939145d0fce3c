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

#include "qmcsp/reductions.hpp"

#include <cmath>

#include "brute.hpp"
#include "gtest/gtest.h"

using namespace qmcsp;

namespace {

std::shared_ptr<const GateSet> g0() { return brute::gs("g0"); }

Vec zero_state(int n) {
  Vec z = Vec::Zero(int64_t{1} << n);
  z(0) = 1;
  return z;
}

Mat perm_columns(const std::vector<int> &img) {
  Mat m = Mat::Zero(img.size(), img.size());
  for (size_t c = 0; c < img.size(); c++) m(img[c], c) = 1.0;
  return m;
}

// Checks the per-step bookkeeping shared by both searches.
void check_trace(const SearchResult &r, int n, double eps, int s_max, int gate_placements) {
  for (size_t j = 0; j < r.trace.steps.size(); j++) {
    const auto &st = r.trace.steps[j];
    EXPECT_EQ(st.i, static_cast<int>(j) + 1);
    EXPECT_NEAR(st.threshold, 1 - eps - st.i * r.delta, 1e-12);
    EXPECT_GE(st.score, st.threshold - kScoreTol);
    // Loss against the starting threshold is at most delta per step taken.
    EXPECT_LE((1 - eps) - st.score, st.i * r.delta + 1e-9);
  }
  EXPECT_EQ(static_cast<int>(r.trace.steps.size()), r.s);
  EXPECT_DOUBLE_EQ(r.delta, std::pow(2.0, -2.0 * n));
  int log_calls = static_cast<int>(std::ceil(std::log2(s_max + 1))) + 1;
  EXPECT_LE(r.trace.binary_search_calls, log_calls);
  EXPECT_LE(static_cast<int>(r.trace.oracle_calls.size()), gate_placements * r.s + log_calls);
}

int placements_of(const GateSet &gs, int n) { return static_cast<int>(slot_count(gs, n)); }

}  // namespace

TEST(s2d_umcsp, identity_and_single_gate) {
  Oracle o(g0());
  UnitaryMatrix id{2, Mat::Identity(4, 4)};
  auto r = s2d_umcsp(id, o, 1e-6, 1, 3);
  EXPECT_EQ(r.circuit.size(), 0);
  EXPECT_TRUE(r.trace.steps.empty());
  EXPECT_DOUBLE_EQ(r.fidelity, 1.0);

  QuantumCircuit h(1, 0, g0());
  h.add("H", {0});
  r = s2d_umcsp(UnitaryMatrix{1, circuit_unitary(h)}, o, 1e-6, 1, 3);
  EXPECT_EQ(r.s, 1);
  EXPECT_EQ(r.circuit.size(), 1);
  EXPECT_NEAR(r.fidelity, 1.0, 1e-12);
}

TEST(s2d_umcsp, random_targets_n2) {
  Oracle o(g0());
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 50; trial++) {
    auto c = brute::random_circuit(g0(), 2, 0, 3, rng);
    UnitaryMatrix u{2, circuit_unitary(c)};
    auto r = s2d_umcsp(u, o, 1e-6, 1, 4);
    EXPECT_LE(r.circuit.size(), 3) << c.to_string();
    EXPECT_EQ(r.circuit.size(), r.s);
    EXPECT_GE(r.fidelity, r.bound) << c.to_string();
    EXPECT_NEAR(r.fidelity, min_fidelity_exact(u.m.adjoint() * circuit_unitary(r.circuit)), 1e-12);
    check_trace(r, 2, 1e-6, 4, placements_of(*g0(), 2));
  }
}

TEST(s2d_umcsp, telescoped_bound_n1) {
  // At n=1 only the telescoped 1 - eps - s*delta is guaranteed.
  Oracle o(g0());
  std::mt19937_64 rng(102);
  for (int trial = 0; trial < 30; trial++) {
    auto c = brute::random_circuit(g0(), 1, 0, 3, rng);
    UnitaryMatrix u{1, circuit_unitary(c)};
    auto r = s2d_umcsp(u, o, 1e-6, 1, 4);
    EXPECT_LE(r.circuit.size(), 3);
    EXPECT_GE(r.fidelity, 1 - 1e-6 - r.s * r.delta - 1e-9) << c.to_string();
    if (r.s <= 2) EXPECT_GE(r.fidelity, r.bound) << c.to_string();
    check_trace(r, 1, 1e-6, 4, placements_of(*g0(), 1));
  }
}

TEST(s2d_umcsp, rejects_bad_arguments) {
  Oracle o(g0());
  UnitaryMatrix id{1, Mat::Identity(2, 2)};
  EXPECT_THROW(s2d_umcsp(id, o, 1.5, 1, 2), InvalidArgument);
  EXPECT_THROW(s2d_umcsp(id, o, 1e-6, 0, 2), InvalidArgument);
  UnitaryMatrix bad{2, Mat::Identity(2, 2)};
  EXPECT_THROW(s2d_umcsp(bad, o, 1e-6, 1, 2), DimensionError);
  // A T^3 phase has no circuit of size 1.
  Mat t3 = Mat::Identity(2, 2);
  t3(1, 1) = std::polar(1.0, 3 * std::acos(-1.0) / 4);
  EXPECT_THROW(s2d_umcsp(UnitaryMatrix{1, t3}, o, 1e-6, 1, 1), NotSynthesizable);
}

TEST(s2d_smcsp, examples) {
  Oracle o(g0());
  auto r = s2d_smcsp(PureState::basis(2, 0), 2, o, 1e-6, 1);
  EXPECT_EQ(r.circuit.size(), 0);

  Vec bell = Vec::Zero(4);
  bell(0) = bell(3) = std::sqrt(0.5);
  r = s2d_smcsp(PureState{2, bell}, 2, o, 1e-6, 1);
  EXPECT_EQ(r.circuit.size(), 2);
  EXPECT_NEAR(r.fidelity, 1.0, 1e-12);
  EXPECT_EQ(brute::min_size(2, 0, g0(), 2, [&](const QuantumCircuit &c) { return brute::state_score(c, bell); }, 1.0), 2);

  Vec minus(2);
  minus << std::sqrt(0.5), -std::sqrt(0.5);
  r = s2d_smcsp(PureState{1, minus}, 2, o, 1e-6, 1);
  EXPECT_EQ(r.circuit.size(), 2);
  EXPECT_NEAR(brute::state_score(r.circuit, minus), 1.0, 1e-12);
  EXPECT_EQ(brute::min_size(1, 0, g0(), 2, [&](const QuantumCircuit &c) { return brute::state_score(c, minus); }, 1.0), 2);

  EXPECT_THROW(s2d_smcsp(PureState{2, bell}, 1, o, 1e-6, 1), PromiseViolation);
}

TEST(s2d_smcsp, random_targets_n2) {
  Oracle o(g0());
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 50; trial++) {
    auto c = brute::random_circuit(g0(), 2, 0, 3, rng);
    Vec psi = run_circuit(c, zero_state(2));
    auto r = s2d_smcsp(PureState{2, psi}, 3, o, 1e-6, 1);
    EXPECT_LE(r.circuit.size(), 3);
    EXPECT_GE(r.fidelity, r.bound) << c.to_string();
    EXPECT_NEAR(r.fidelity, brute::state_score(r.circuit, psi), 1e-12);
    check_trace(r, 2, 1e-6, 3, placements_of(*g0(), 2));
  }
}

TEST(build_U_f, examples) {
  auto id = build_U_f(TruthTable::from_string("00"));
  EXPECT_LT((id.m - Mat::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-15);
  auto nt = build_U_f(TruthTable::from_string("10"));
  EXPECT_LT((nt.m - perm_columns({1, 0, 2, 3})).cwiseAbs().maxCoeff(), 1e-15);
  auto an = build_U_f(TruthTable::from_string("0001"));
  EXPECT_LT((an.m - gate_from_label("Toffoli").matrix).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(an.n, 3);
}

TEST(build_U_f, two_outputs) {
  auto and_t = TruthTable::from_string("0001"), xor_t = TruthTable::from_string("0110");
  auto u = build_U_f({and_t, xor_t});
  EXPECT_EQ(u.n, 4);
  EXPECT_LT(u.unitarity_error(), 1e-12);
  for (int x = 0; x < 4; x++) {
    int fx = (and_t.at(x) << 1) | xor_t.at(x);
    EXPECT_DOUBLE_EQ(std::abs(u.m((x << 2) | fx, x << 2)), 1.0);
  }
  EXPECT_THROW(build_U_f({and_t, xor_t, and_t}), InvalidArgument);
  EXPECT_THROW(build_U_f({and_t, TruthTable::from_string("01")}), DimensionError);
}

TEST(mqcsp_via_umcsp, brackets) {
  Oracle o(g0());
  auto r = mqcsp_via_umcsp(TruthTable::from_string("00"), o, 0, 4);
  EXPECT_EQ(r.bracket.lo, 0);
  EXPECT_EQ(r.bracket.hi, 0);
  r = mqcsp_via_umcsp(TruthTable::from_string("0001"), o, 0, 4);
  EXPECT_EQ(r.cc_u, 1);
  // The unitary's layout puts f on qubit n.
  auto cc = [&](const TruthTable &tt) {
    return brute::min_size(tt.n, 1, g0(), 4, [&](const QuantumCircuit &c) { return brute::function_score(c, tt); }, 1.0, tt.n);
  };
  EXPECT_TRUE(r.bracket.contains(cc(TruthTable::from_string("0001"))));
  for (uint64_t f = 0; f < 4; f++) {
    auto tt = TruthTable::from_function(1, f);
    auto b = mqcsp_via_umcsp(tt, o, 0, 4).bracket;
    EXPECT_TRUE(b.contains(cc(tt))) << tt.to_string() << " [" << b.lo << "," << b.hi << "]";
  }
}

TEST(mqcsp_via_umcsp, approximate_uses_both_precisions) {
  Oracle o(g0());
  auto r = mqcsp_via_umcsp(TruthTable::from_string("0110"), o, 0.1, 4);
  EXPECT_LE(r.cc_u_2eps, r.cc_u);
  EXPECT_EQ(r.bracket.lo, std::max(0, (r.cc_u_2eps + 1) / 2 - 1));
}

TEST(self_reduce_smcsp, controlled_overhead) {
  GateSet grot = make_gateset("grot");
  EXPECT_EQ(measured_controlled_overhead(grot), SelfReductionConfig{}.k);
  EXPECT_EQ(controlled_gate_overhead(gate_from_label("X")), 7);
  EXPECT_THROW(controlled_gate_overhead(gate_from_label("CNOT")), InvalidArgument);
}

TEST(self_reduce_smcsp, examples) {
  auto grot = brute::gs("grot");
  Oracle o(grot);
  // |0> (x) phi: case 1 on phi.
  Vec phi(2);
  phi << std::cos(0.3), std::sin(0.3);
  Vec psi = Vec::Zero(4);
  psi.head(2) = phi;
  auto r = self_reduce_smcsp(PureState{2, psi}, 0.01, o);
  EXPECT_EQ(r.case_id, 1);
  EXPECT_EQ(r.dominant, 0);

  Vec bell = Vec::Zero(4);
  bell(0) = bell(3) = std::sqrt(0.5);
  r = self_reduce_smcsp(PureState{2, bell}, 0.01, o);
  EXPECT_EQ(r.case_id, 2);
  EXPECT_EQ(r.k_star, 400);
  int cc = brute::min_size(2, 0, grot, 2, [&](const QuantumCircuit &c) { return brute::state_score(c, bell); }, 0.99);
  EXPECT_EQ(cc, 2);
  EXPECT_TRUE(r.bracket.contains(cc)) << r.bracket.lo << "," << r.bracket.hi;

  Vec plus0 = Vec::Zero(4);
  plus0(0) = plus0(2) = std::sqrt(0.5);
  r = self_reduce_smcsp(PureState{2, plus0}, 0.01, o);
  EXPECT_EQ(r.case_id, 2);
  ASSERT_GE(r.sub_values.size(), 2u);
  EXPECT_EQ(r.sub_values[r.sub_values.size() - 2].second, 0);
  EXPECT_EQ(r.sub_values.back().second, 0);
  EXPECT_TRUE(r.bracket.contains(1));
  EXPECT_THROW(self_reduce_smcsp(PureState{1, phi}, 0.01, o), InvalidArgument);
}

TEST(self_reduce_smcsp, random_states_inside_bracket) {
  auto grot = brute::gs("grot");
  Oracle o(grot);
  std::mt19937_64 rng(104);
  for (int trial = 0; trial < 20; trial++) {
    auto c = brute::random_circuit(grot, 2, 0, 1 + static_cast<int>(rng() % 3), rng);
    Vec psi = run_circuit(c, zero_state(2));
    auto r = self_reduce_smcsp(PureState{2, psi}, 0.01, o);
    int cc = brute::min_size(2, 0, grot, 3, [&](const QuantumCircuit &w) { return brute::state_score(w, psi); }, 0.99);
    ASSERT_GE(cc, 0);
    EXPECT_TRUE(r.bracket.contains(cc)) << c.to_string() << " [" << r.bracket.lo << "," << r.bracket.hi << "] cc=" << cc;
  }
}
