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

#include "qmcsp/repro.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "qmcsp/cryptodemo.hpp"
#include "qmcsp/finegrained.hpp"
#include "qmcsp/io.hpp"
#include "qmcsp/reductions.hpp"
#include "qmcsp/verifiers.hpp"

namespace qmcsp {

namespace {

const char *mark(bool ok) { return ok ? "PASS" : "FAIL"; }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

QuantumCircuit random_circuit(const std::shared_ptr<const GateSet> &gs, int n, int size, std::mt19937_64 &rng) {
  QuantumCircuit c(n, 0, gs);
  while (c.size() < size) {
    int g = static_cast<int>(rng() % static_cast<uint64_t>(gs->size()));
    int a = gs->gate(g).arity;
    if (a > n) continue;
    std::vector<int> q;
    while (static_cast<int>(q.size()) < a) {
      int v = static_cast<int>(rng() % static_cast<uint64_t>(n));
      if (std::find(q.begin(), q.end(), v) == q.end()) q.push_back(v);
    }
    c.add(g, q);
  }
  return c;
}

ReproResult sandwich(const ReproOptions &) {
  ReproResult r;
  auto g0 = std::make_shared<GateSet>(make_gateset("g0"));
  Oracle o(g0);
  std::ostringstream md;
  md << "| f | CC(f) | bracket | result |\n|---|---|---|---|\n";
  json rows = json::array();
  for (int n = 1; n <= 2; n++)
    for (uint64_t mask = 0; mask < (uint64_t{1} << (1 << n)); mask++) {
      TruthTable tt = TruthTable::from_function(n, mask);
      int cc = o.min_size_function(tt, 0.0, 1, 6, n).min_size;
      B2UResult b = mqcsp_via_umcsp(tt, o, 0.0, 6);
      bool ok = b.bracket.contains(cc);
      if (!ok) r.divergent.push_back(tt.to_string());
      md << "| " << tt.to_string() << " | " << cc << " | [" << b.bracket.lo << ", " << b.bracket.hi << "] | " << mark(ok)
         << " |\n";
      rows.push_back({{"f", tt.to_string()}, {"cc", cc}, {"lo", b.bracket.lo}, {"hi", b.bracket.hi}, {"pass", ok}});
    }
  r.payload = {{"rows", rows}, {"gateset", "g0"}, {"t", 1}, {"epsilon", 0.0}};
  r.markdown = md.str();
  return r;
}

ReproResult s2d(const ReproOptions &opt) {
  ReproResult r;
  auto g0 = std::make_shared<GateSet>(make_gateset("g0"));
  Oracle o(g0);
  const double eps = 1e-6, c3 = 1.0;
  std::mt19937_64 rng(opt.seed);
  std::ostringstream md;
  md << "| kind | n | target | recovered | fidelity | bound | result |\n|---|---|---|---|---|---|---|\n";
  json rows = json::array();
  for (const char *kind : {"unitary", "state"})
    for (int i = 0; i < 50; i++) {
      int n = 1 + i % 2;
      int size = 1 + static_cast<int>(rng() % 3);
      QuantumCircuit c = random_circuit(g0, n, size, rng);
      SearchResult s;
      if (std::string(kind) == "unitary") {
        s = s2d_umcsp(UnitaryMatrix{n, circuit_unitary(c)}, o, eps, c3, 4);
      } else {
        Vec zero = Vec::Zero(int64_t{1} << n);
        zero(0) = 1;
        s = s2d_smcsp(PureState{n, run_circuit(c, zero)}, 3, o, eps, c3);
      }
      bool ok = s.circuit.size() <= size && s.fidelity >= s.bound - 1e-12;
      if (!ok) r.divergent.push_back(std::string(kind) + " " + c.to_string());
      md << "| " << kind << " | " << n << " | " << c.to_string() << " | " << s.circuit.to_string() << " | "
         << fmt(s.fidelity) << " | " << fmt(s.bound) << " | " << mark(ok) << " |\n";
      rows.push_back({{"kind", kind},
                      {"n", n},
                      {"target", circuit_to_json(c)},
                      {"recovered", circuit_to_json(s.circuit)},
                      {"fidelity", s.fidelity},
                      {"bound", s.bound},
                      {"pass", ok}});
    }
  r.payload = {{"rows", rows}, {"epsilon", eps}, {"c3", c3}, {"seed", opt.seed}};
  r.markdown = md.str();
  return r;
}

ReproResult verifiers(const ReproOptions &opt) {
  ReproResult r;
  auto g0 = std::make_shared<GateSet>(make_gateset("g0"));
  std::ostringstream md;
  md << "| experiment | verdict | hash | result |\n|---|---|---|---|\n";
  json rows = json::array();
  auto row = [&](const std::string &name, const VerifierReport &rep, bool ok) {
    std::string h = json_hash(report_to_json(rep));
    if (!ok) r.divergent.push_back(name);
    md << "| " << name << " | " << (rep.accept ? "Accept" : "Reject") << " | " << h << " | " << mark(ok) << " |\n";
    rows.push_back({{"name", name}, {"accept", rep.accept}, {"hash", h}, {"pass", ok}});
  };
  // Phase flip of basis state k, built from T^4 or H CNOT H plus X conjugation.
  for (int n = 1; n <= 2; n++)
    for (int k = 0; k < (1 << n); k++) {
      QuantumCircuit c(n, 0, g0);
      auto xs = [&]() {
        for (int q = 0; q < n; q++)
          if (!((k >> (n - 1 - q)) & 1)) c.add("X", {q});
      };
      xs();
      if (n == 1) {
        for (int i = 0; i < 4; i++) c.add("T", {0});
      } else {
        c.add("H", {1});
        c.add("CNOT", {0, 1});
        c.add("H", {1});
      }
      xs();
      UnitaryMatrix id{n, Mat::Identity(1 << n, 1 << n)};
      auto full = verify_umcsp(id, c, 0.5, {}, opt.seed);
      UmcspVerifierConfig basis;
      basis.coherency = false;
      auto only = verify_umcsp(id, c, 0.5, basis, opt.seed);
      std::string name = "phase flip n=" + std::to_string(n) + " k=" + std::to_string(k);
      row(name, full, !full.accept);
      row(name + " basis only", only, only.accept);
    }
  // Swap test at overlaps 1, alpha, beta, 0.
  QuantumCircuit empty(1, 0, g0);
  for (double f : {1.0, 0.9, 0.5, 0.0}) {
    PureState psi{1, Vec(2)};
    psi.amps << std::sqrt(f), std::sqrt(1 - f);
    auto rep = verify_smcsp(psi, empty, 0.9, 0.5, 10000, opt.seed);
    row("swap test F=" + fmt(f), rep, rep.accept == (f >= 0.9));
  }
  r.payload = {{"rows", rows}, {"seed", opt.seed}};
  r.markdown = md.str();
  return r;
}

ReproResult prg(const ReproOptions &opt) {
  ReproResult r;
  if (opt.golden_dir.empty()) throw InvalidArgument("prg suite needs a golden directory");
  json census_gold = read_json_file(opt.golden_dir + "/census_m3.json");
  json demo_gold = read_json_file(opt.golden_dir + "/prg_demo.json");
  GateSet g0c = make_gateset("g0c");
  ComplexityCensus census = classical_census(g0c, 3, 1, 0, census_gold.at("max_depth").get<int>());
  json census_now = census_to_json(census, "g0c");
  std::ostringstream md;
  md << "| check | measured | golden | result |\n|---|---|---|---|\n";
  auto line = [&](const std::string &name, const json &got, const json &want) {
    bool ok = canonical_dump(got) == canonical_dump(want);
    if (!ok) r.divergent.push_back(name);
    md << "| " << name << " | " << got.dump() << " | " << want.dump() << " | " << mark(ok) << " |\n";
  };
  line("census histogram", census_now["histogram"], census_gold["histogram"]);
  line("census tables", json_hash(census_now["cc"]), json_hash(census_gold["cc"]));
  int s = census_threshold(census);
  line("s_threshold", s, demo_gold["s_threshold"]);
  DemoPRG d = select_demo_prg(census, demo_gold["k"].get<int>(), s);
  line("prg seed", d.seed, demo_gold["prg_seed"]);
  auto e = demo_gold["experiment"]["params"];
  Oracle o(std::make_shared<GateSet>(g0c));
  DistinguisherResult res =
      run_distinguisher_experiment(d.prg, 3, s, e["n_seeds"], e["n_random"], o, e["seed"].get<uint64_t>());
  line("advantage", res.advantage, demo_gold["experiment"]["advantage"]);
  bool gap = res.advantage > 0.2;
  if (!gap) r.divergent.push_back("advantage not above 0.2");
  md << "| advantage > 0.2 | " << fmt(res.advantage) << " | - | " << mark(gap) << " |\n";
  r.payload = {{"census", census_now}, {"experiment", result_to_json(res)}, {"prg_seed", d.seed}};
  r.markdown = md.str();
  return r;
}

ReproResult finegrained(const ReproOptions &opt) {
  ReproResult r;
  std::unique_ptr<Oracle> o;
  if (opt.circuit_check) {
    OracleConfig cfg;
    cfg.budget = 20000000000ULL;
    o = std::make_unique<Oracle>(std::make_shared<GateSet>(make_gateset("g0-2q")), cfg);
  }
  EquivalenceReport r1 = equivalence_experiment(1, all_graphs_n1(), o.get());
  EquivalenceReport r2 = equivalence_experiment(2, random_graphs(2, opt.graphs, opt.seed));
  if (r1.violations_ab) r.divergent.push_back("n=1 formula vs bpis");
  if (r1.violations_ac) r.divergent.push_back("n=1 formula vs circuit");
  if (r2.violations_ab) r.divergent.push_back("n=2 formula vs bpis");
  r.payload = {{"n1", equivalence_to_json(r1)}, {"n2", equivalence_to_json(r2)}, {"seed", opt.seed}};
  r.markdown = "n = 1\n\n" + equivalence_table(r1) + "\nn = 2 (" + std::to_string(opt.graphs) +
               " graphs): formula<->bpis violations " + std::to_string(r2.violations_ab) + "\n";
  return r;
}

}  // namespace

std::vector<std::string> repro_suites() { return {"sandwich", "s2d", "verifiers", "prg", "finegrained"}; }

ReproResult run_repro(const std::string &suite, const ReproOptions &opt) {
  ReproResult r;
  if (suite == "sandwich")
    r = sandwich(opt);
  else if (suite == "s2d")
    r = s2d(opt);
  else if (suite == "verifiers")
    r = verifiers(opt);
  else if (suite == "prg")
    r = prg(opt);
  else if (suite == "finegrained")
    r = finegrained(opt);
  else
    throw InvalidArgument("unknown suite '" + suite + "'; expected sandwich, s2d, verifiers, prg or finegrained");
  r.suite = suite;
  r.pass = r.divergent.empty();
  r.markdown = "# " + suite + ": " + (r.pass ? "PASS" : "FAIL") + "\n\n" + r.markdown;
  return r;
}

std::string json_hash(const nlohmann::json &j) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical_dump(j)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

}  // namespace qmcsp
