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

#include "qmcsp/qcore.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "brute.hpp"
#include "gtest/gtest.h"

using namespace qmcsp;
using brute::random_circuit;
using brute::random_state;

namespace {

const double kPi = std::numbers::pi;

std::shared_ptr<const GateSet> g0() { return std::make_shared<GateSet>(make_gateset("g0")); }

Vec basis(int n, uint64_t i) { return PureState::basis(n, i).amps; }

}  // namespace

TEST(gates, labels_and_sets) {
  auto g = gate_from_label("CNOT0");
  EXPECT_TRUE(g.classical);
  EXPECT_EQ(g.perm, (std::vector<int>{1, 0, 2, 3}));
  // CNOT0 = CNOT after X on the target.
  Mat x = gate_from_label("X").matrix;
  Mat ix = Mat::Zero(4, 4);
  ix.block(0, 0, 2, 2) = x;
  ix.block(2, 2, 2, 2) = x;
  EXPECT_LT((gate_from_label("CNOT").matrix * ix - g.matrix).norm(), 1e-15);

  EXPECT_NEAR(std::arg(gate_from_label("RZ(1/4)").matrix(1, 1)), kPi / 4, 1e-15);
  EXPECT_NEAR(gate_from_label("RY(0.5)").matrix(1, 0).real(), std::sin(0.25), 1e-15);
  EXPECT_EQ(gate_from_label("C01RY(1)").arity, 3);
  EXPECT_EQ(gate_from_label("P10(1)").arity, 2);
  EXPECT_THROW(gate_from_label("FOO"), InvalidArgument);
  EXPECT_THROW(gate_from_label("RY(x)"), InvalidArgument);

  EXPECT_EQ(make_gateset("g0").size(), 7);
  EXPECT_EQ(make_gateset("grot").size(), 7 + 3 * 7);
  EXPECT_EQ(make_gateset("grot2").size(), 7 + 3 * 3);
  EXPECT_EQ(make_gateset("g0c").size(), 4);
  try {
    make_gateset("nope");
    FAIL();
  } catch (const InvalidArgument &e) {
    EXPECT_NE(std::string(e.what()).find("g0"), std::string::npos);
  }
  EXPECT_EQ(make_gateset("g0").hash(), make_gateset("g0").hash());
  EXPECT_NE(make_gateset("g0").hash(), make_gateset("g0c").hash());
  GateSet grot = make_gateset("grot");
  for (auto &gd : grot.gates()) {
    Mat p = gd.matrix * gd.matrix.adjoint();
    EXPECT_LT((p - Mat::Identity(p.rows(), p.cols())).cwiseAbs().maxCoeff(), 1e-10) << gd.label;
  }
}

TEST(circuit, validation) {
  QuantumCircuit c(2, 0, g0());
  EXPECT_THROW(c.add("CNOT", {0}), DimensionError);
  c.add("CNOT", {0, 1});
  c.ops.back().q[1] = 0;
  EXPECT_THROW(c.validate(), DimensionError);
  c.ops.back().q[1] = 5;
  EXPECT_THROW(c.validate(), DimensionError);
  EXPECT_THROW(c.add("Q", {0}), InvalidArgument);
}

TEST(run_circuit, examples) {
  QuantumCircuit empty(1, 2, g0());
  Vec out = run_circuit(empty, basis(1, 0));
  EXPECT_EQ(out.size(), 8);
  EXPECT_NEAR((out - basis(3, 0)).norm(), 0, 1e-15);

  QuantumCircuit h(1, 0, g0());
  h.add("H", {0});
  Vec plus(2);
  plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  EXPECT_NEAR((run_circuit(h, basis(1, 0)) - plus).norm(), 0, 1e-15);

  QuantumCircuit xc(2, 0, g0());
  xc.add("X", {0});
  xc.add("CNOT", {0, 1});
  EXPECT_NEAR((run_circuit(xc, basis(2, 0)) - basis(2, 3)).norm(), 0, 1e-15);

  EXPECT_THROW(run_circuit(xc, basis(1, 0)), DimensionError);
}

TEST(circuit_unitary, examples) {
  QuantumCircuit e(1, 0, g0());
  EXPECT_TRUE(circuit_unitary(e).isApprox(Mat::Identity(2, 2)));

  QuantumCircuit cx(2, 0, g0());
  cx.add("CNOT", {0, 1});
  Mat want = Mat::Zero(4, 4);
  want(0, 0) = want(1, 1) = want(3, 2) = want(2, 3) = 1;
  EXPECT_EQ((circuit_unitary(cx) - want).norm(), 0);

  QuantumCircuit hh(1, 0, g0());
  hh.add("H", {0});
  hh.add("H", {0});
  EXPECT_LT((circuit_unitary(hh) - Mat::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-12);

  QuantumCircuit wide(13, 0, g0());
  EXPECT_THROW(circuit_unitary(wide), ResourceError);
}

TEST(func_acceptance, examples) {
  QuantumCircuit x(1, 0, g0());
  x.add("X", {0});
  EXPECT_DOUBLE_EQ(func_acceptance(x, 0, 1), 1.0);
  QuantumCircuit h(1, 0, g0());
  h.add("H", {0});
  EXPECT_NEAR(func_acceptance(h, 0, 1), 0.5, 1e-15);
  QuantumCircuit tof(2, 1, g0());
  tof.add("Toffoli", {0, 1, 2});
  tof.output_qubit = 2;
  EXPECT_DOUBLE_EQ(func_acceptance(tof, 3, 1), 1.0);
  EXPECT_DOUBLE_EQ(func_acceptance(tof, 2, 0), 1.0);
}

TEST(fidelities, examples) {
  QuantumCircuit e(1, 0, g0());
  for (double f : unitary_basis_fidelities(e, Mat::Identity(2, 2))) EXPECT_NEAR(f, 1.0, 1e-15);

  // Z as T^4.
  QuantumCircuit z(1, 0, g0());
  for (int i = 0; i < 4; i++) z.add("T", {0});
  auto f = unitary_basis_fidelities(z, Mat::Identity(2, 2));
  ASSERT_EQ(f.size(), 3u);
  EXPECT_NEAR(f[0], 1.0, 1e-12);
  EXPECT_NEAR(f[1], 1.0, 1e-12);
  EXPECT_NEAR(f[2], 0.0, 1e-12);

  QuantumCircuit h(1, 0, g0());
  h.add("H", {0});
  for (double v : unitary_basis_fidelities(h, gate_from_label("H").matrix)) EXPECT_NEAR(v, 1.0, 1e-12);

  EXPECT_EQ(unitary_basis_fidelities(QuantumCircuit(2, 1, g0()), Mat::Identity(4, 4)).size(), 4u + 6u);
}

TEST(certified_min_fidelity, examples) {
  EXPECT_DOUBLE_EQ(certified_min_fidelity(std::vector<double>(10, 1.0), 2), 1.0);
  std::vector<double> f(10, 1.0);
  f[3] = 1 - 1e-8;
  EXPECT_NEAR(certified_min_fidelity(f, 2), 0.8, 1e-6);
  EXPECT_DOUBLE_EQ(certified_min_fidelity({0.5, 1.0, 1.0}, 1), 0.0);
  EXPECT_THROW(certified_min_fidelity({1.5}, 1), InvalidArgument);
}

TEST(min_fidelity_exact, t_gate_against_sampling) {
  Mat t = gate_from_label("T").matrix;
  double exact = min_fidelity_exact(t);
  EXPECT_NEAR(exact, std::norm((1.0 + std::polar(1.0, kPi / 4)) / 2.0), 1e-12);
  double sampled = brute::sampled_min_fidelity(t, 200000, 3);
  EXPECT_GE(sampled, exact - 1e-9);
  EXPECT_NEAR(sampled, exact, 1e-3);
}

TEST(min_fidelity_exact, random_unitaries_against_sampling) {
  std::mt19937_64 rng(11);
  auto gs = g0();
  for (int trial = 0; trial < 20; trial++) {
    auto c = random_circuit(gs, 2, 0, 2, rng);
    Mat w = circuit_unitary(c);
    double exact = min_fidelity_exact(w);
    double sampled = brute::sampled_min_fidelity(w, 20000, trial);
    EXPECT_GE(sampled, exact - 1e-9) << c.to_string();
    EXPECT_NEAR(sampled, exact, 0.05) << c.to_string();
  }
}

TEST(swap_test, probabilities) {
  Vec zero = basis(1, 0), one = basis(1, 1), plus(2);
  plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  EXPECT_NEAR(swap_test_probability(plus, plus), 0.0, 1e-15);
  EXPECT_NEAR(swap_test_probability(zero, one), 0.5, 1e-15);
  EXPECT_NEAR(swap_test_probability(zero, plus), 0.25, 1e-15);
}

TEST(swap_test, empirical_frequency) {
  std::mt19937_64 rng(5);
  Vec a = random_state(4, rng), b = random_state(4, rng);
  double p = swap_test_probability(a, b);
  const int N = 100000;
  int ones = 0;
  for (int i = 0; i < N; i++) ones += swap_test(a, b, rng);
  EXPECT_LE(std::abs(ones / double(N) - p), 4 * std::sqrt(p * (1 - p) / N));
}

TEST(state_prep, examples) {
  Vec v(2);
  v << 1, 0;
  EXPECT_EQ(state_prep_circuit(v).size(), 0);
  v << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  auto c = state_prep_circuit(v);
  ASSERT_EQ(c.size(), 1);
  EXPECT_EQ(c.gate(c.ops[0]).label.substr(0, 3), "RY(");
  EXPECT_THROW(state_prep_circuit(Vec::Zero(4)), InvalidArgument);
}

TEST(state_prep, random_vectors) {
  std::mt19937_64 rng(17);
  for (int n = 1; n <= 3; n++)
    for (int trial = 0; trial < 10; trial++) {
      Vec v = random_state(int64_t{1} << n, rng);
      auto c = state_prep_circuit(v);
      Vec out = run_circuit(c, basis(n, 0));
      EXPECT_LT((out - v).norm(), 1e-6);
      EXPECT_LE(c.size(), (1 << n) - 1 + (1 << n));
    }
}

TEST(invariants, norm_composition_reversibility) {
  std::mt19937_64 rng(23);
  auto gs = g0();
  std::map<std::string, std::string> inverse{{"X", "X"},       {"H", "H"},         {"T", "Tdg"},    {"Tdg", "T"},
                                             {"CNOT", "CNOT"}, {"Toffoli", "Toffoli"}, {"CNOT0", "CNOT0"}};
  for (int trial = 0; trial < 50; trial++) {
    auto c1 = random_circuit(gs, 3, 0, 6, rng);
    auto c2 = random_circuit(gs, 3, 0, 5, rng);
    Vec in = random_state(8, rng);
    EXPECT_NEAR(run_circuit(c1, in).norm(), 1.0, 1e-9);

    QuantumCircuit cat = c1;
    cat.ops.insert(cat.ops.end(), c2.ops.begin(), c2.ops.end());
    EXPECT_LT((circuit_unitary(cat) - circuit_unitary(c2) * circuit_unitary(c1)).cwiseAbs().maxCoeff(), 1e-10);

    QuantumCircuit rev = c1;
    for (auto it = c1.ops.rbegin(); it != c1.ops.rend(); ++it) {
      Op op = *it;
      op.gate = gs->index_of(inverse.at(c1.gate(*it).label));
      rev.ops.push_back(op);
    }
    EXPECT_LT((circuit_unitary(rev) - Mat::Identity(8, 8)).cwiseAbs().maxCoeff(), 1e-9);

    for (double f : unitary_basis_fidelities(c1, circuit_unitary(c1))) EXPECT_NEAR(f, 1.0, 1e-10);
  }
}

TEST(invariants, ancilla_fidelities_use_projection) {
  // With an ancilla, a CNOT copy onto it entangles; basis checks still pass but
  // pair checks see the which-path information.
  QuantumCircuit c(1, 1, g0());
  c.add("CNOT", {0, 1});
  auto f = unitary_basis_fidelities(c, Mat::Identity(2, 2));
  EXPECT_NEAR(f[0], 1.0, 1e-12);
  EXPECT_NEAR(f[1], 1.0, 1e-12);
  EXPECT_NEAR(f[2], 0.5, 1e-12);
}

TEST(truth_tables, strings) {
  auto t = TruthTable::from_string("0001");
  EXPECT_EQ(t.n, 2);
  EXPECT_EQ(t.at(3), 1);
  EXPECT_EQ(TruthTable::from_function(2, 0b1000).to_string(), "0001");
  EXPECT_THROW(TruthTable::from_string("010"), DimensionError);
  auto p = PartialTruthTable::from_string("1*0*");
  EXPECT_EQ(p.entries[1], -1);
  EXPECT_EQ(p.to_string(), "1*0*");
}
