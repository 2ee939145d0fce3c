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

#include "qmcsp/finegrained.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace qmcsp {

namespace {

uint64_t mask(int bits) { return (uint64_t{1} << bits) - 1; }

// Bit at position i of a w-bit block, position 0 being the leftmost.
int bit_at(uint64_t v, int w, int i) { return static_cast<int>((v >> (w - 1 - i)) & 1); }
uint64_t one_at(int w, int i) { return uint64_t{1} << (w - 1 - i); }

void check_n(int n) {
  if (n < 1 || n > 2) throw ResourceError("gamma tables are limited to n <= 2");
}

int case_value(int c, int n, uint64_t x, uint64_t y, uint64_t z) {
  switch (c) {
    case 1:
      return (y & z) != 0;
    case 2:
      return z != 0;
    case 3:
      return (x | y) != 0;
    case 4:
      return 0;
    case 5:
      return (x >> n) != 0;
    case 6:
      return (x & mask(n)) != 0;
    case 7:
      return 1;
    default:
      return -1;
  }
}

bool case_matches(const BipartiteGraph &g, int c, uint64_t x, uint64_t y, uint64_t z) {
  int n = g.n, w = 2 * n;
  uint64_t all = mask(w);
  uint64_t top = mask(n) << n, bottom = mask(n);
  switch (c) {
    case 1:
      return x == 0;
    case 2:
      return x == all;
    case 3:
      return z == all;
    case 4:
      return z == 0;
    case 5:
      return z == top && y == 0;
    case 6:
      return z == bottom && y == 0;
    case 7: {
      if (y != 0) return false;
      for (const auto &e : g.edges) {
        auto [j, k] = e.first;
        auto [jp, kp] = e.second;
        uint64_t ex = all & ~(one_at(w, k) | one_at(w, n + kp));
        uint64_t ez = one_at(w, j) | one_at(w, n + jp);
        if (x == ex && z == ez) return true;
      }
      return false;
    }
    default:
      return false;
  }
}

bool next_perm(std::vector<int> &v) { return std::next_permutation(v.begin(), v.end()); }

// Reverses each 2n-bit block of the 6n input positions.
std::vector<int> block_reversal(int n) {
  int w = 2 * n;
  std::vector<int> sigma(3 * w);
  for (int b = 0; b < 3; b++)
    for (int i = 0; i < w; i++) sigma[b * w + i] = b * w + (w - 1 - i);
  return sigma;
}

bool invariant_under(const PartialTruthTable &pt, const std::vector<int> &sigma) {
  int m = pt.n;
  for (uint64_t idx = 0; idx < pt.entries.size(); idx++) {
    uint64_t img = 0;
    for (int i = 0; i < m; i++)
      if ((idx >> (m - 1 - i)) & 1) img |= uint64_t{1} << (m - 1 - sigma[i]);
    if (pt.entries[idx] != pt.entries[img]) return false;
  }
  return true;
}

}  // namespace

void BipartiteGraph::validate() const {
  if (n < 1) throw InvalidArgument("graph needs n >= 1");
  auto ok = [&](const Vertex &v) { return v.first >= 0 && v.first < n && v.second >= 0 && v.second < n; };
  for (const auto &e : edges)
    if (!ok(e.first) || !ok(e.second)) throw InvalidArgument("edge index out of range");
}

std::string BipartiteGraph::to_string() const {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto &e : edges) {
    if (!first) os << ",";
    first = false;
    os << "((" << e.first.first << "," << e.first.second << "),(" << e.second.first << "," << e.second.second << "))";
  }
  os << "}";
  return os.str();
}

BipartiteGraph BipartiteGraph::random(int n, std::mt19937_64 &rng) {
  BipartiteGraph g;
  g.n = n;
  int count = static_cast<int>(rng() % static_cast<uint64_t>(2 * n * n + 1));
  auto r = [&]() { return static_cast<int>(rng() % static_cast<uint64_t>(n)); };
  for (int i = 0; i < count; i++) {
    int j = r(), k = r(), jp = r(), kp = r();
    g.edges.insert({{j, k}, {jp, kp}});
  }
  return g;
}

bool is_permutation(const Permutation &pi) {
  std::vector<int> s = pi;
  std::sort(s.begin(), s.end());
  for (size_t i = 0; i < s.size(); i++)
    if (s[i] != static_cast<int>(i)) return false;
  return true;
}

bool is_block_permutation(const Permutation &pi, int n) {
  if (static_cast<int>(pi.size()) != 2 * n || !is_permutation(pi)) return false;
  for (int i = 0; i < n; i++)
    if (pi[i] >= n) return false;
  return true;
}

uint64_t gamma_index(int n, uint64_t x, uint64_t y, uint64_t z) { return (x << (4 * n)) | (y << (2 * n)) | z; }

int gamma_case(const BipartiteGraph &g, uint64_t x, uint64_t y, uint64_t z) {
  for (int c : {7, 1, 2, 3, 4, 5, 6})
    if (case_matches(g, c, x, y, z)) return c;
  return 0;
}

PartialTruthTable build_gamma(const BipartiteGraph &g) {
  g.validate();
  check_n(g.n);
  int w = 2 * g.n;
  PartialTruthTable pt;
  pt.n = 3 * w;
  pt.entries.assign(uint64_t{1} << pt.n, -1);
  for (uint64_t x = 0; x <= mask(w); x++)
    for (uint64_t y = 0; y <= mask(w); y++)
      for (uint64_t z = 0; z <= mask(w); z++) {
        int c = gamma_case(g, x, y, z);
        if (c) pt.entries[gamma_index(g.n, x, y, z)] = static_cast<int8_t>(case_value(c, g.n, x, y, z));
      }
  return pt;
}

std::vector<GammaConflict> gamma_conflicts(const BipartiteGraph &g) {
  g.validate();
  check_n(g.n);
  int w = 2 * g.n;
  std::vector<GammaConflict> out;
  for (uint64_t x = 0; x <= mask(w); x++)
    for (uint64_t y = 0; y <= mask(w); y++)
      for (uint64_t z = 0; z <= mask(w); z++) {
        GammaConflict c{x, y, z, {}};
        for (int k = 1; k <= 7; k++)
          if (case_matches(g, k, x, y, z)) c.cases.push_back({k, case_value(k, g.n, x, y, z)});
        bool differ = false;
        for (const auto &p : c.cases) differ = differ || p.second != c.cases.front().second;
        if (differ) out.push_back(c);
      }
  return out;
}

bool check_permutation_formula(const PartialTruthTable &gamma, const Permutation &pi) {
  if (gamma.n % 6 != 0 || gamma.n == 0) throw DimensionError("gamma must have 6n inputs");
  int n = gamma.n / 6, w = 2 * n;
  if (static_cast<int>(pi.size()) != w || !is_permutation(pi)) throw InvalidArgument("need a permutation of [2n]");
  for (uint64_t idx = 0; idx < gamma.entries.size(); idx++) {
    int want = gamma.entries[idx];
    if (want < 0) continue;
    uint64_t x = idx >> (2 * w), y = (idx >> w) & mask(w), z = idx & mask(w);
    int v = 0;
    for (int i = 0; i < w && !v; i++) v = (bit_at(x, w, pi[i]) | bit_at(y, w, i)) & bit_at(z, w, i);
    if (v != want) return false;
  }
  return true;
}

std::optional<Permutation> find_formula_permutation(const PartialTruthTable &gamma, int n) {
  Permutation pi(2 * n);
  std::iota(pi.begin(), pi.end(), 0);
  do {
    if (check_permutation_formula(gamma, pi)) return pi;
  } while (next_perm(pi));
  return std::nullopt;
}

bool satisfies_bpis(const BipartiteGraph &g, const Permutation &pi) {
  if (!is_block_permutation(pi, g.n)) return false;
  for (const auto &e : g.edges) {
    auto [j, k] = e.first;
    auto [jp, kp] = e.second;
    if (pi[j] == k && pi[g.n + jp] == g.n + kp) return false;
  }
  return true;
}

std::optional<Permutation> solve_bpis(const BipartiteGraph &g) {
  g.validate();
  if (g.n > 4) throw ResourceError("block permutation search is limited to n <= 4");
  std::vector<int> top(g.n), bottom(g.n);
  std::iota(top.begin(), top.end(), 0);
  do {
    std::iota(bottom.begin(), bottom.end(), g.n);
    do {
      Permutation pi = top;
      pi.insert(pi.end(), bottom.begin(), bottom.end());
      if (satisfies_bpis(g, pi)) return pi;
    } while (next_perm(bottom));
  } while (next_perm(top));
  return std::nullopt;
}

std::vector<BipartiteGraph> all_graphs_n1() {
  BipartiteGraph empty;
  empty.n = 1;
  BipartiteGraph edge = empty;
  edge.edges.insert({{0, 0}, {0, 0}});
  return {empty, edge};
}

std::vector<BipartiteGraph> random_graphs(int n, int count, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<BipartiteGraph> out;
  for (int i = 0; i < count; i++) out.push_back(BipartiteGraph::random(n, rng));
  return out;
}

EquivalenceReport equivalence_experiment(int n, const std::vector<BipartiteGraph> &graphs,
                                         const Oracle *circuit_oracle) {
  check_n(n);
  EquivalenceReport rep;
  rep.n = n;
  for (const auto &g : graphs) {
    if (g.n != n) throw DimensionError("graph size differs from n");
    EquivalenceRow row;
    row.graph = g;
    PartialTruthTable gamma = build_gamma(g);
    row.formula_pi = find_formula_permutation(gamma, n);
    row.bpis_pi = solve_bpis(g);
    row.conflicts = gamma_conflicts(g).size();
    if (circuit_oracle) {
      row.circuit_checked = true;
      int s = 6 * n - 1;
      // Relabelling qubits by a symmetry of gamma maps circuits for output q
      // onto circuits for sigma[q], so only one of each pair is searched.
      std::vector<int> sigma = block_reversal(n);
      bool symmetric = invariant_under(gamma, sigma);
      for (int q = 0; q < gamma.n; q++) {
        if (symmetric && sigma[q] < q) continue;
        OracleVerdict v = circuit_oracle->decide_mqcsp_star(gamma, s, 0, q);
        if (v.best_score > row.circuit_best || row.circuit_output_qubit < 0) {
          row.circuit_best = std::max(row.circuit_best, v.best_score);
          row.circuit_output_qubit = q;
        }
        row.circuit_verdict = v.verdict;
        if (v.verdict == Verdict::Yes) break;
      }
    }
    if (!row.formula_iff_bpis()) rep.violations_ab++;
    if (!row.formula_implies_circuit()) rep.violations_ac++;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

nlohmann::json equivalence_to_json(const EquivalenceReport &r) {
  nlohmann::json rows = nlohmann::json::array();
  auto perm = [](const std::optional<Permutation> &p) { return p ? nlohmann::json(*p) : nlohmann::json(nullptr); };
  for (const auto &row : r.rows) {
    nlohmann::json j = {{"graph", row.graph.to_string()},
                        {"edges", row.graph.edges.size()},
                        {"formula_permutation", perm(row.formula_pi)},
                        {"bpis_permutation", perm(row.bpis_pi)},
                        {"formula_iff_bpis", row.formula_iff_bpis()},
                        {"case_conflicts", row.conflicts}};
    if (row.circuit_checked) {
      j["circuit_verdict"] = to_string(row.circuit_verdict);
      j["circuit_best_score"] = row.circuit_best;
      j["circuit_output_qubit"] = row.circuit_output_qubit;
      j["formula_implies_circuit"] = row.formula_implies_circuit();
    }
    rows.push_back(j);
  }
  return {{"n", r.n}, {"graphs", r.rows.size()}, {"violations_formula_bpis", r.violations_ab},
          {"violations_formula_circuit", r.violations_ac}, {"rows", rows}};
}

std::string equivalence_table(const EquivalenceReport &r) {
  std::ostringstream os;
  os << "graph  edges  formula  bpis  circuit\n";
  for (size_t i = 0; i < r.rows.size(); i++) {
    const auto &row = r.rows[i];
    os << i << "  " << row.graph.edges.size() << "  " << (row.formula_pi ? "yes" : "no") << "  "
       << (row.bpis_pi ? "yes" : "no") << "  ";
    if (row.circuit_checked)
      os << to_string(row.circuit_verdict) << " (best " << row.circuit_best << ")";
    else
      os << "-";
    os << "\n";
  }
  os << "formula<->bpis violations: " << r.violations_ab << ", formula->circuit violations: " << r.violations_ac
     << "\n";
  return os.str();
}

}  // namespace qmcsp
