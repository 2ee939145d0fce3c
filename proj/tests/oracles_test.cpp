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

#include "qmcsp/oracles.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <set>

#include "brute.hpp"
#include "gtest/gtest.h"
#include "qmcsp/cache.hpp"
#include "qmcsp/io.hpp"

using namespace qmcsp;

namespace {

std::shared_ptr<const GateSet> g0() { return brute::gs("g0"); }

std::shared_ptr<const GateSet> custom(const std::string &name, std::vector<std::string> labels) {
  std::vector<GateDef> gates;
  for (auto &l : labels) gates.push_back(gate_from_label(l));
  return std::make_shared<GateSet>(name, gates);
}

uint64_t count_enumerated(int n, int t, int s, std::shared_ptr<const GateSet> gs) {
  uint64_t k = 0;
  std::set<std::string> seen;
  enumerate_circuits(n, t, s, gs, [&](const QuantumCircuit &c) {
    k++;
    if (k <= 5000) seen.insert(c.to_string());
  });
  if (k <= 5000) EXPECT_EQ(seen.size(), k);
  return k;
}

// Falling factorial, written out independently of the library.
uint64_t tuples(int arity, int width) {
  uint64_t r = 1;
  for (int i = 0; i < arity; i++) r *= width - i > 0 ? width - i : 0;
  return r;
}

UnitaryMatrix as_unitary(const Mat &m, int n) {
  UnitaryMatrix u;
  u.n = n;
  u.m = m;
  return u;
}

PureState as_state(const Vec &v, int n) {
  PureState p;
  p.n = n;
  p.amps = v;
  return p;
}

Vec bell() {
  Vec v = Vec::Zero(4);
  v(0) = v(3) = std::sqrt(0.5);
  return v;
}

}  // namespace

TEST(enumerate, small_counts) {
  EXPECT_EQ(count_enumerated(1, 0, 1, custom("xh", {"X", "H"})), 2u);
  EXPECT_EQ(count_enumerated(2, 0, 1, custom("cnot", {"CNOT"})), 2u);
  // X has 2 placements and CNOT 2 ordered pairs: 4 per slot.
  EXPECT_EQ(count_enumerated(2, 0, 2, custom("xcnot", {"X", "CNOT"})), 16u);
  EXPECT_EQ(closed_form_count(*custom("xcnot", {"X", "CNOT"}), 2, 0, 2), 16u);
  EXPECT_EQ(count_enumerated(2, 0, 2, custom("xhcnot", {"X", "H", "CNOT"})), 36u);
}

TEST(enumerate, order_is_lexicographic) {
  auto gs = custom("xcnot", {"X", "CNOT"});
  std::vector<std::string> got;
  enumerate_circuits(2, 0, 1, gs, [&](const QuantumCircuit &c) { got.push_back(c.to_string()); });
  ASSERT_EQ(got.size(), 4u);
  QuantumCircuit a(2, 0, gs), b(2, 0, gs), c(2, 0, gs), d(2, 0, gs);
  a.add("X", {0});
  b.add("X", {1});
  c.add("CNOT", {0, 1});
  d.add("CNOT", {1, 0});
  EXPECT_EQ(got, (std::vector<std::string>{a.to_string(), b.to_string(), c.to_string(), d.to_string()}));
}

TEST(enumerate, matches_closed_form) {
  struct Cfg {
    int n, t, s;
    std::string gs;
  };
  std::vector<Cfg> cfgs = {{1, 0, 3, "g0"},  {2, 0, 2, "g0"},  {1, 1, 2, "g0"},    {2, 1, 2, "g0"}, {3, 0, 1, "g0"},
                           {2, 0, 3, "g0c"}, {3, 0, 2, "g0c"}, {2, 1, 2, "g0-2q"}, {1, 0, 2, "grot2"}, {2, 0, 0, "g0"}};
  for (auto &c : cfgs) {
    auto gs = brute::gs(c.gs);
    uint64_t per = 0;
    for (auto &g : gs->gates()) per += tuples(g.arity, c.n + c.t);
    uint64_t expect = 1;
    for (int i = 0; i < c.s; i++) expect *= per;
    EXPECT_EQ(count_enumerated(c.n, c.t, c.s, gs), expect) << c.gs << " n=" << c.n << " t=" << c.t << " s=" << c.s;
    EXPECT_EQ(closed_form_count(*gs, c.n, c.t, c.s), expect);
  }
}

TEST(enumerate, budget_error_names_count) {
  try {
    enumerate_circuits(2, 0, 3, g0(), [](const QuantumCircuit &) {}, 100);
    FAIL();
  } catch (const ResourceError &e) {
    EXPECT_NE(std::string(e.what()).find(std::to_string(closed_form_count(*g0(), 2, 0, 3))), std::string::npos);
  }
  OracleConfig cfg;
  cfg.budget = 50;
  Oracle o(g0(), cfg);
  // 4 single-qubit placements on one qubit: 1 + 4 + 16 + 64 circuits up to size 3.
  try {
    o.decide_mqcsp(TruthTable::from_string("10"), 3, 0, {0.9, 0.6});
    FAIL();
  } catch (const ResourceError &e) {
    EXPECT_NE(std::string(e.what()).find("85"), std::string::npos) << e.what();
  }
}

TEST(decide_mqcsp, examples) {
  Oracle o(g0());
  // Qubit 0 carries x, so a constant needs the ancilla as the output.
  auto zero = TruthTable::from_string("00");
  EXPECT_EQ(o.decide_mqcsp(zero, 0, 1, {1.0, 0.5}, 1).verdict, Verdict::Yes);
  EXPECT_EQ(o.decide_mqcsp(zero, 0, 0, {1.0, 0.5}).verdict, Verdict::No);
  auto v = o.decide_mqcsp(TruthTable::from_string("10"), 0, 0, {0.9, 0.6});
  EXPECT_EQ(v.verdict, Verdict::No);
  EXPECT_DOUBLE_EQ(v.best_score, 0.0);
  v = o.decide_mqcsp(TruthTable::from_string("10"), 1, 0, {0.9, 0.6});
  EXPECT_EQ(v.verdict, Verdict::Yes);
  ASSERT_TRUE(v.best_circuit);
  EXPECT_EQ(v.best_circuit->size(), 1);
  EXPECT_THROW(o.decide_mqcsp(zero, 0, 0, {0.9, 0.4}), InvalidArgument);
  EXPECT_THROW(o.decide_mqcsp(zero, 0, 0, {0.6, 0.7}), InvalidArgument);
}

TEST(decide_mqcsp, unpromised_is_reported) {
  // NOT at s=0, s'=1: no empty witness, but X is a size-1 circuit above 1/2.
  Oracle o(g0());
  auto nott = PartialTruthTable::from_string("10");
  EXPECT_EQ(o.decide_mqcsp_gap(nott, 0, 1, 0).verdict, Verdict::Unpromised);
  EXPECT_EQ(o.decide_mqcsp_gap(nott, 1, 2, 0).verdict, Verdict::Yes);
  EXPECT_EQ(o.decide_mqcsp_gap(PartialTruthTable::from_string("01"), 0, 2, 0).verdict, Verdict::Yes);
  EXPECT_THROW(o.decide_mqcsp_gap(nott, 2, 1, 0), InvalidArgument);
}

TEST(decide_mqcsp, and_xor_golden) {
  json gold = brute::golden("oracle_values.json");
  Oracle o(g0());
  auto g = g0();
  auto tt_and = TruthTable::from_string("0001");
  auto tt_xor = TruthTable::from_string("0110");
  auto score_and = [&](const QuantumCircuit &c) { return brute::function_score(c, tt_and); };
  auto score_xor = [&](const QuantumCircuit &c) { return brute::function_score(c, tt_xor); };

  int b_and = brute::min_size(2, 1, g, 4, score_and, 1.0);
  EXPECT_EQ(b_and, gold["and_n2_t1_min_size"].get<int>());
  for (int s = 0; s <= b_and; s++) {
    auto v = o.decide_mqcsp(tt_and, s, 1, {1.0, 2.0 / 3.0});
    EXPECT_EQ(v.verdict == Verdict::Yes, s >= b_and) << s;
  }
  EXPECT_EQ(o.min_size_function(tt_and, 0, 1, 4).min_size, b_and);
  EXPECT_EQ(o.min_size_function(tt_and, 0, 1, 4, 2).min_size, gold["and_n2_t1_output2_min_size"].get<int>());
  EXPECT_EQ(brute::min_size(2, 1, g, 2, score_and, 1.0, 2), gold["and_n2_t1_output2_min_size"].get<int>());

  int b_xor = brute::min_size(2, 1, g, 4, score_xor, 1.0);
  EXPECT_EQ(b_xor, gold["xor_n2_t1_min_size"].get<int>());
  EXPECT_EQ(o.min_size_function(tt_xor, 0, 1, 4).min_size, b_xor);
}

TEST(decide_mqcsp, small_function_fraction) {
  json gold = brute::golden("oracle_values.json");
  Oracle o(g0());
  int small = 0;
  for (uint64_t f = 0; f < 16; f++) {
    auto tt = TruthTable::from_function(2, f);
    bool oracle_small = o.decide_mqcsp(tt, 1, 1, {1.0, 0.5}).verdict == Verdict::Yes;
    int b = brute::min_size(2, 1, g0(), 1, [&](const QuantumCircuit &c) { return brute::function_score(c, tt); }, 1.0);
    EXPECT_EQ(oracle_small, b >= 0) << tt.to_string();
    small += oracle_small;
  }
  EXPECT_EQ(small, gold["n2_t1_min_size_le1_count"].get<int>());
  EXPECT_DOUBLE_EQ(small / 16.0, gold["n2_t1_min_size_le1_fraction"].get<double>());
  EXPECT_LT(small / 16.0, 0.5);
}

TEST(decide_mqcsp, all_n2_functions_match_brute_force) {
  Oracle o(g0());
  for (int t = 0; t <= 1; t++)
    for (uint64_t f = 0; f < 16; f++) {
      auto tt = TruthTable::from_function(2, f);
      int b = brute::min_size(2, t, g0(), 3, [&](const QuantumCircuit &c) { return brute::function_score(c, tt); }, 1.0);
      int got = -1;
      try {
        got = o.min_size_function(tt, 0, t, 3).min_size;
      } catch (const NotSynthesizable &) {
      }
      EXPECT_EQ(got, b) << tt.to_string() << " t=" << t;
    }
}

TEST(decide_mqcsp, monotone_in_size_and_alpha) {
  Oracle o(g0());
  for (uint64_t f = 0; f < 16; f++) {
    auto tt = TruthTable::from_function(2, f);
    bool prev = false;
    for (int s = 0; s <= 3; s++) {
      bool yes = o.decide_mqcsp(tt, s, 1, {1.0, 0.5}).verdict == Verdict::Yes;
      if (prev) EXPECT_TRUE(yes) << tt.to_string() << " s=" << s;
      if (yes) EXPECT_EQ(o.decide_mqcsp(tt, s, 1, {0.8, 0.5}).verdict, Verdict::Yes);
      prev = yes;
    }
  }
}

TEST(decide_mqcsp, witness_rescored) {
  Oracle o(g0());
  for (uint64_t f = 0; f < 16; f++) {
    auto tt = TruthTable::from_function(2, f);
    auto v = o.decide_mqcsp(tt, 3, 1, {0.9, 0.5});
    if (v.verdict != Verdict::Yes) continue;
    ASSERT_TRUE(v.best_circuit);
    EXPECT_NEAR(score_function(*v.best_circuit, PartialTruthTable::from_total(tt)), v.best_score, 1e-12);
    EXPECT_NEAR(brute::function_score(*v.best_circuit, tt), v.best_score, 1e-12);
  }
}

TEST(decide_mqcsp, lightcone_does_not_change_verdicts) {
  OracleConfig off;
  off.lightcone = false;
  Oracle a(g0()), b(g0(), off);
  for (uint64_t f = 0; f < 16; f++) {
    auto tt = TruthTable::from_function(2, f);
    for (int s = 0; s <= 3; s++) {
      auto va = a.decide_mqcsp(tt, s, 1, {1.0, 0.5});
      auto vb = b.decide_mqcsp(tt, s, 1, {1.0, 0.5});
      EXPECT_EQ(va.verdict, vb.verdict) << tt.to_string() << " s=" << s;
      if (va.verdict == Verdict::Yes) EXPECT_EQ(va.best_circuit->to_string(), vb.best_circuit->to_string());
    }
  }
}

TEST(decide_mqcsp, ancilla_symmetry_keeps_min_size) {
  OracleConfig sym;
  sym.ancilla_symmetry = true;
  Oracle a(g0()), b(g0(), sym);
  for (uint64_t f : {1u, 6u, 8u, 7u, 0u}) {
    auto tt = TruthTable::from_function(2, f);
    EXPECT_EQ(a.min_size_function(tt, 0, 2, 3).min_size, b.min_size_function(tt, 0, 2, 3).min_size) << tt.to_string();
  }
}

TEST(decide_mqcsp, workers_are_deterministic) {
  OracleConfig par;
  par.workers = 3;
  Oracle a(g0()), b(g0(), par);
  for (uint64_t f = 0; f < 16; f++) {
    auto tt = TruthTable::from_function(2, f);
    for (int s : {1, 3}) {
      auto va = a.decide_mqcsp(tt, s, 1, {1.0, 0.5});
      auto vb = b.decide_mqcsp(tt, s, 1, {1.0, 0.5});
      EXPECT_EQ(va.verdict, vb.verdict);
      EXPECT_DOUBLE_EQ(va.best_score, vb.best_score);
      ASSERT_EQ(va.best_circuit.has_value(), vb.best_circuit.has_value());
      if (va.best_circuit) EXPECT_EQ(va.best_circuit->to_string(), vb.best_circuit->to_string());
    }
  }
}

TEST(decide_mqcsp_star, examples) {
  Oracle o(g0());
  EXPECT_EQ(o.decide_mqcsp_star(PartialTruthTable::from_string("****"), 0, 0).verdict, Verdict::Yes);
  EXPECT_EQ(o.decide_mqcsp_star(PartialTruthTable::from_string("10"), 1, 0).verdict, Verdict::Yes);
  EXPECT_EQ(o.decide_mqcsp_star(PartialTruthTable::from_string("10"), 0, 0).verdict, Verdict::No);
  // Only x=1 constrained: the empty circuit already reads 1 there.
  EXPECT_EQ(o.decide_mqcsp_star(PartialTruthTable::from_string("*1"), 0, 0).verdict, Verdict::Yes);
  // A constant on the input qubit: H gets to 1/2 on both inputs and no further.
  auto v = o.decide_mqcsp_star(PartialTruthTable::from_string("11"), 1, 0);
  EXPECT_EQ(v.verdict, Verdict::No);
  EXPECT_NEAR(v.best_score, 0.5, 1e-12);
}

TEST(decide_umcsp, examples) {
  Oracle o(g0());
  auto id = as_unitary(Mat::Identity(4, 4), 2);
  auto v = o.decide_umcsp(id, 0, 0, {1.0, 0.5});
  EXPECT_EQ(v.verdict, Verdict::Yes);
  EXPECT_EQ(v.best_circuit->size(), 0);
  EXPECT_EQ(v.path, "exact-eigenphase");

  QuantumCircuit cn(2, 0, g0());
  cn.add("CNOT", {0, 1});
  v = o.decide_umcsp(as_unitary(circuit_unitary(cn), 2), 1, 0, {1.0, 0.5});
  EXPECT_EQ(v.verdict, Verdict::Yes);
  EXPECT_EQ(v.best_circuit->to_string(), cn.to_string());

  Mat t = Mat::Identity(2, 2);
  t(1, 1) = std::polar(1.0, std::numbers::pi / 4);
  v = o.decide_umcsp(as_unitary(t, 1), 0, 0, {0.99, 0.9});
  EXPECT_EQ(v.verdict, Verdict::No);
  double expect = std::norm((1.0 + std::polar(1.0, std::numbers::pi / 4)) / 2.0);
  EXPECT_NEAR(v.best_score, expect, 1e-12);
  EXPECT_NEAR(brute::sampled_min_fidelity(t, 20000, 3), expect, 2e-3);
  EXPECT_EQ(o.decide_umcsp(as_unitary(t, 1), 1, 0, {0.99, 0.9}).verdict, Verdict::Yes);
}

TEST(decide_umcsp, certified_path_with_ancilla) {
  Oracle o(g0());
  QuantumCircuit h(1, 0, g0());
  h.add("H", {0});
  auto v = o.decide_umcsp(as_unitary(circuit_unitary(h), 1), 1, 1, {1.0, 0.5});
  EXPECT_EQ(v.path, "certified");
  EXPECT_EQ(v.verdict, Verdict::Yes);
  EXPECT_EQ(v.best_circuit->size(), 1);
  Mat t = Mat::Identity(2, 2);
  t(1, 1) = std::polar(1.0, std::numbers::pi / 4);
  v = o.decide_umcsp(as_unitary(t, 1), 0, 1, {0.99, 0.9});
  EXPECT_EQ(v.verdict, Verdict::No);
}

TEST(decide_umcsp, exact_path_matches_brute_force) {
  Oracle o(g0());
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; trial++) {
    auto c = brute::random_circuit(g0(), 2, 0, 2, rng);
    Mat u = circuit_unitary(c);
    int b = brute::min_size(2, 0, g0(), 2, [&](const QuantumCircuit &w) { return min_fidelity_exact(u.adjoint() * circuit_unitary(w)); }, 1.0);
    EXPECT_EQ(o.min_size_unitary(as_unitary(u, 2), 0, 0, 2).min_size, b) << c.to_string();
  }
}

TEST(decide_smcsp, examples) {
  json gold = brute::golden("oracle_values.json");
  Oracle o(g0());
  EXPECT_EQ(o.decide_smcsp(PureState::basis(2, 0), 0, 0, {1.0, 0.5}).verdict, Verdict::Yes);
  auto b = as_state(bell(), 2);
  EXPECT_EQ(o.decide_smcsp(b, 1, 0, {1.0, 0.5}).verdict, Verdict::No);
  auto v = o.decide_smcsp(b, 2, 0, {1.0, 0.5});
  EXPECT_EQ(v.verdict, Verdict::Yes);
  EXPECT_NEAR(score_state(*v.best_circuit, bell()), 1.0, 1e-12);
  EXPECT_EQ(o.min_size_state(b, 0, 0, 3).min_size, gold["bell_t0_min_size"].get<int>());
  EXPECT_EQ(brute::min_size(2, 0, g0(), 3, [&](const QuantumCircuit &c) { return brute::state_score(c, bell()); }, 1.0),
            gold["bell_t0_min_size"].get<int>());

  Oracle h_only(custom("h", {"H"}));
  v = h_only.decide_smcsp(PureState::basis(1, 1), 1, 0, {0.9, 0.6});
  EXPECT_EQ(v.verdict, Verdict::No);
  EXPECT_NEAR(v.best_score, 0.5, 1e-12);
}

TEST(decide_smcsp, ancilla_projection) {
  Oracle o(g0());
  // |1> on qubit 0 is reachable with t=1 as well; the ancilla stays |0>.
  auto v = o.decide_smcsp(PureState::basis(1, 1), 1, 1, {1.0, 0.5});
  EXPECT_EQ(v.verdict, Verdict::Yes);
  EXPECT_NEAR(brute::state_score(*v.best_circuit, PureState::basis(1, 1).amps), 1.0, 1e-12);
}

TEST(min_size, identity_and_not_synthesizable) {
  Oracle o(g0());
  auto c = o.min_size_unitary(as_unitary(Mat::Identity(2, 2), 1), 0, 0, 2);
  EXPECT_EQ(c.min_size, 0);
  EXPECT_EQ(c.object_kind, "unitary");
  EXPECT_DOUBLE_EQ(c.achieved_fidelity, 1.0);
  try {
    o.min_size_state(as_state(bell(), 2), 0, 0, 1);
    FAIL();
  } catch (const NotSynthesizable &e) {
    EXPECT_NEAR(e.best_fidelity, 0.5, 1e-12);
  }
}

TEST(min_size, certificate_fields) {
  Oracle o(g0());
  auto c = o.min_size_function(TruthTable::from_string("0001"), 0, 1, 3, 2);
  EXPECT_EQ(c.min_size, c.witness.size());
  EXPECT_EQ(c.ancilla_used, 1);
  EXPECT_GE(c.achieved_fidelity, 1.0 - 1e-9);
}

TEST(cache, round_trip_is_identical) {
  auto path = std::filesystem::temp_directory_path() / "qmcsp_oracles_test_cache.json";
  std::filesystem::remove(path);
  Oracle o(g0());
  Oracle plain(g0());
  o.set_cache(std::make_shared<OracleCache>(path.string()));
  auto tt = TruthTable::from_string("0110");
  auto first = o.decide_mqcsp(tt, 2, 1, {1.0, 0.5});
  EXPECT_FALSE(first.from_cache);
  auto second = o.decide_mqcsp(tt, 2, 1, {1.0, 0.5});
  EXPECT_TRUE(second.from_cache);
  EXPECT_EQ(verdict_to_json(first).dump(), verdict_to_json(second).dump());

  // A fresh process sees the same file.
  Oracle reload(g0());
  reload.set_cache(std::make_shared<OracleCache>(path.string()));
  auto third = reload.decide_mqcsp(tt, 2, 1, {1.0, 0.5});
  EXPECT_TRUE(third.from_cache);
  EXPECT_EQ(verdict_to_json(third).dump(), verdict_to_json(plain.decide_mqcsp(tt, 2, 1, {1.0, 0.5})).dump());

  // Different thresholds miss.
  EXPECT_FALSE(o.decide_mqcsp(tt, 2, 1, {0.9, 0.5}).from_cache);
  json doc = read_json_file(path.string());
  EXPECT_EQ(doc["schema_version"], 1);
  EXPECT_EQ(doc["entries"].size(), 2u);
  std::filesystem::remove(path);
}

TEST(cache, env_override) {
  setenv("QMCSP_CACHE", "/tmp/qmcsp_env_cache.json", 1);
  EXPECT_EQ(OracleCache::resolve_path("fallback.json"), "/tmp/qmcsp_env_cache.json");
  unsetenv("QMCSP_CACHE");
  EXPECT_EQ(OracleCache::resolve_path("fallback.json"), "fallback.json");
}

TEST(cache, rejects_bad_files) {
  auto path = std::filesystem::temp_directory_path() / "qmcsp_bad_cache.json";
  write_text_file(path.string(), "{\"schema_version\": 99, \"entries\": {}}");
  EXPECT_THROW(OracleCache(path.string()), InvalidArgument);
  write_text_file(path.string(), "not json");
  EXPECT_THROW(OracleCache(path.string()), InvalidArgument);
  std::filesystem::remove(path);
}
