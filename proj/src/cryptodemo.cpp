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

#include "qmcsp/cryptodemo.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <unordered_set>

namespace qmcsp {

namespace {

uint64_t low_mask(int bits) { return bits >= 64 ? ~uint64_t{0} : (uint64_t{1} << bits) - 1; }

}  // namespace

void ToyPRG::validate() const {
  if (k < 1 || k > 16) throw InvalidArgument("seed length must be in [1,16]");
  if (table.size() != (size_t{1} << k)) throw InvalidArgument("generator table must have 2^k entries");
  for (uint64_t v : table)
    if (v >> (2 * k)) throw InvalidArgument("generator output longer than 2k bits");
}

uint64_t ToyPRG::g0(uint64_t x) const { return table.at(x) >> k; }
uint64_t ToyPRG::g1(uint64_t x) const { return table.at(x) & low_mask(k); }

ToyPRG ToyPRG::duplication(int k) {
  ToyPRG p;
  p.k = k;
  for (uint64_t x = 0; x < (uint64_t{1} << k); x++) p.table.push_back((x << k) | x);
  p.validate();
  return p;
}

ToyPRG ToyPRG::random(int k, std::mt19937_64 &rng) {
  ToyPRG p;
  p.k = k;
  for (uint64_t x = 0; x < (uint64_t{1} << k); x++) p.table.push_back(rng() & low_mask(2 * k));
  p.validate();
  return p;
}

uint64_t ggm_eval(const ToyPRG &prg, uint64_t x, uint64_t z, int m) {
  if (x >> prg.k) throw InvalidArgument("key longer than k bits");
  if (m < 0 || m > 63 || (z >> m)) throw InvalidArgument("path does not fit in m bits");
  uint64_t v = x;
  for (int i = m - 1; i >= 0; i--) v = ((z >> i) & 1) ? prg.g1(v) : prg.g0(v);
  return v;
}

TruthTable local_prg_truth_table(const ToyPRG &prg, uint64_t x, int m) {
  if (m < 0 || m > 6) throw InvalidArgument("need 2^m <= 64");
  TruthTable tt;
  tt.n = m;
  for (uint64_t i = 0; i < (uint64_t{1} << m); i++) tt.bits.push_back((ggm_eval(prg, x, i, m) >> (prg.k - 1)) & 1);
  return tt;
}

int distinguish_by_complexity(const TruthTable &tt, int s_threshold, const Oracle &oracle, DistinguisherConfig cfg) {
  return oracle.decide_mqcsp(tt, s_threshold, cfg.t, cfg.th, cfg.output_qubit).verdict == Verdict::Yes ? 1 : 0;
}

nlohmann::json result_to_json(const DistinguisherResult &r) {
  return {{"s_threshold", r.s_threshold},
          {"prg_accept_rate", r.prg_accept_rate},
          {"random_accept_rate", r.random_accept_rate},
          {"advantage", r.advantage},
          {"params", {{"k", r.k}, {"m", r.m}, {"n_seeds", r.n_seeds}, {"n_random", r.n_random}, {"seed", r.seed}}},
          {"note", "toy parameters; demonstrates the distinguisher, not security"}};
}

DistinguisherResult run_distinguisher_experiment(const ToyPRG &prg, int m, int s_threshold, int n_seeds, int n_random,
                                                 const Oracle &oracle, uint64_t seed, DistinguisherConfig cfg) {
  prg.validate();
  if (n_seeds <= 0 || n_random <= 0) throw InvalidArgument("sample counts must be positive");
  if (m < 0 || m > 6) throw InvalidArgument("need 2^m <= 64");
  std::seed_seq ks{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32), 0u};
  std::seed_seq rs{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32), 1u};
  std::mt19937_64 key_rng(ks), table_rng(rs);
  std::map<std::vector<uint8_t>, int> memo;
  auto decide = [&](const TruthTable &tt) {
    auto it = memo.find(tt.bits);
    if (it != memo.end()) return it->second;
    int b = distinguish_by_complexity(tt, s_threshold, oracle, cfg);
    memo.emplace(tt.bits, b);
    return b;
  };
  int prg_hits = 0, rnd_hits = 0;
  for (int i = 0; i < n_seeds; i++) {
    uint64_t x = key_rng() & low_mask(prg.k);
    prg_hits += decide(local_prg_truth_table(prg, x, m));
  }
  uint64_t n_tables = uint64_t{1} << m;
  for (int i = 0; i < n_random; i++) {
    uint64_t bits = n_tables == 64 ? table_rng() : table_rng() & low_mask(static_cast<int>(n_tables));
    rnd_hits += decide(table_from_index(m, bits));
  }
  DistinguisherResult r;
  r.s_threshold = s_threshold;
  r.prg_accept_rate = static_cast<double>(prg_hits) / n_seeds;
  r.random_accept_rate = static_cast<double>(rnd_hits) / n_random;
  r.advantage = std::abs(r.prg_accept_rate - r.random_accept_rate);
  r.k = prg.k;
  r.m = m;
  r.n_seeds = n_seeds;
  r.n_random = n_random;
  r.seed = seed;
  return r;
}

uint64_t table_index(const TruthTable &tt) {
  if (tt.n > 6) throw InvalidArgument("table index needs 2^n <= 64");
  uint64_t v = 0;
  for (uint8_t b : tt.bits) v = (v << 1) | (b & 1);
  return v;
}

TruthTable table_from_index(int m, uint64_t idx) {
  if (m < 0 || m > 6) throw InvalidArgument("table index needs 2^m <= 64");
  uint64_t len = uint64_t{1} << m;
  TruthTable tt;
  tt.n = m;
  for (uint64_t i = 0; i < len; i++) tt.bits.push_back((idx >> (len - 1 - i)) & 1);
  return tt;
}

std::vector<int> ComplexityCensus::histogram() const {
  std::vector<int> h(max_depth + 2, 0);
  for (int v : cc) h[v < 0 ? max_depth + 1 : v]++;
  return h;
}

int ComplexityCensus::median() const {
  std::vector<int> v;
  for (int c : cc) v.push_back(c < 0 ? max_depth + 1 : c);
  std::sort(v.begin(), v.end());
  return v[(v.size() - 1) / 2];
}

int ComplexityCensus::at(const TruthTable &tt) const {
  if (tt.n != m) throw DimensionError("table size differs from the census");
  return cc.at(table_index(tt));
}

ComplexityCensus classical_census(const GateSet &gs, int m, int t, int output_qubit, int max_depth) {
  int w = m + t;
  uint64_t inputs = uint64_t{1} << m;
  if (m < 1 || t < 0 || inputs * static_cast<uint64_t>(w) > 64 || m > 6)
    throw InvalidArgument("census state must pack into 64 bits");
  if (output_qubit < 0 || output_qubit >= w) throw DimensionError("output qubit out of range");
  if (max_depth < 0) throw InvalidArgument("max_depth must be non-negative");
  for (const auto &g : gs.gates())
    if (!g.classical) throw InvalidArgument("census needs a classical gate set, got " + g.label);

  // Each placement as a lookup on w-bit register values.
  std::vector<std::vector<uint8_t>> moves;
  uint64_t dim = uint64_t{1} << w;
  for (const auto &g : gs.gates()) {
    if (g.arity > w) continue;
    std::vector<int> q(g.arity);
    std::function<void(int)> rec = [&](int pos) {
      if (pos == g.arity) {
        std::vector<uint8_t> lut(dim);
        for (uint64_t v = 0; v < dim; v++) {
          int local = 0;
          for (int j = 0; j < g.arity; j++) local = (local << 1) | static_cast<int>((v >> (w - 1 - q[j])) & 1);
          int img = g.perm[local];
          uint64_t out = v;
          for (int j = 0; j < g.arity; j++) {
            uint64_t bit = uint64_t{1} << (w - 1 - q[j]);
            out = ((img >> (g.arity - 1 - j)) & 1) ? (out | bit) : (out & ~bit);
          }
          lut[v] = static_cast<uint8_t>(out);
        }
        moves.push_back(std::move(lut));
        return;
      }
      for (int v = 0; v < w; v++) {
        if (std::find(q.begin(), q.begin() + pos, v) != q.begin() + pos) continue;
        q[pos] = v;
        rec(pos + 1);
      }
    };
    rec(0);
  }

  uint64_t field = low_mask(w);
  auto apply = [&](uint64_t st, const std::vector<uint8_t> &lut) {
    uint64_t out = 0;
    for (uint64_t x = 0; x < inputs; x++) {
      int sh = static_cast<int>(x * w);
      out |= static_cast<uint64_t>(lut[(st >> sh) & field]) << sh;
    }
    return out;
  };
  int obit = w - 1 - output_qubit;
  auto table_of = [&](uint64_t st) {
    uint64_t idx = 0;
    for (uint64_t x = 0; x < inputs; x++) idx = (idx << 1) | ((st >> (x * w + obit)) & 1);
    return idx;
  };

  ComplexityCensus c;
  c.m = m;
  c.t = t;
  c.output_qubit = output_qubit;
  c.max_depth = max_depth;
  c.cc.assign(uint64_t{1} << inputs, -1);
  uint64_t start = 0;
  for (uint64_t x = 0; x < inputs; x++) start |= (x << t) << (x * w);
  c.cc[table_of(start)] = 0;
  std::unordered_set<uint64_t> seen{start};
  std::vector<uint64_t> frontier{start};
  for (int d = 1; d <= max_depth && !frontier.empty(); d++) {
    bool last = d == max_depth;
    std::vector<uint64_t> next;
    for (uint64_t st : frontier)
      for (const auto &mv : moves) {
        uint64_t nx = apply(st, mv);
        if (last) {
          if (seen.count(nx)) continue;
        } else if (!seen.insert(nx).second) {
          continue;
        }
        uint64_t tab = table_of(nx);
        if (c.cc[tab] < 0) c.cc[tab] = d;
        if (!last) next.push_back(nx);
      }
    frontier.swap(next);
  }
  return c;
}

nlohmann::json census_to_json(const ComplexityCensus &c, const std::string &gateset) {
  nlohmann::json tables = nlohmann::json::object();
  for (uint64_t i = 0; i < c.cc.size(); i++) tables[table_from_index(c.m, i).to_string()] = c.cc[i];
  auto h = c.histogram();
  nlohmann::json hist = nlohmann::json::object();
  for (int d = 0; d <= c.max_depth; d++) hist[std::to_string(d)] = h[d];
  hist[">" + std::to_string(c.max_depth)] = h[c.max_depth + 1];
  return {{"m", c.m},
          {"t", c.t},
          {"output_qubit", c.output_qubit},
          {"gateset", gateset},
          {"max_depth", c.max_depth},
          {"median", c.median()},
          {"histogram", hist},
          {"cc", tables}};
}

int census_threshold(const ComplexityCensus &census) { return std::max(0, census.median() - 1); }

double formula_threshold(int m, double c) { return std::ldexp(1.0, m) / ((c + 1) * m); }

DemoPRG select_demo_prg(const ComplexityCensus &census, int k, int s_threshold, uint64_t max_seed) {
  for (uint64_t s = 0; s < max_seed; s++) {
    std::mt19937_64 rng(s);
    ToyPRG p = ToyPRG::random(k, rng);
    bool ok = true;
    for (uint64_t x = 0; ok && x < (uint64_t{1} << k); x++) {
      int v = census.at(local_prg_truth_table(p, x, census.m));
      ok = v >= 0 && v <= s_threshold;
    }
    if (ok) return {p, s};
  }
  throw InvalidArgument("no generator seed below max_seed meets the threshold");
}

}  // namespace qmcsp
