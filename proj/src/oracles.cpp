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

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

#include "qmcsp/cache.hpp"
#include "qmcsp/io.hpp"

namespace qmcsp {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes:
      return "Yes";
    case Verdict::No:
      return "No";
    default:
      return "Unpromised";
  }
}

std::string to_string(ProblemKind k) {
  switch (k) {
    case ProblemKind::MQCSP:
      return "mqcsp";
    case ProblemKind::MQCSPStar:
      return "mqcsp-star";
    case ProblemKind::MQCSPGap:
      return "mqcsp-gap";
    case ProblemKind::UMCSP:
      return "umcsp";
    default:
      return "smcsp";
  }
}

uint64_t arrangements(int arity, int width) {
  if (arity > width) return 0;
  uint64_t r = 1;
  for (int i = 0; i < arity; i++) r *= static_cast<uint64_t>(width - i);
  return r;
}

uint64_t slot_count(const GateSet &gs, int width) {
  uint64_t c = 0;
  for (auto &g : gs.gates()) c += arrangements(g.arity, width);
  return c;
}

uint64_t closed_form_count(const GateSet &gs, int n, int t, int s) {
  uint64_t per = slot_count(gs, n + t), r = 1;
  for (int i = 0; i < s; i++) {
    if (per != 0 && r > std::numeric_limits<uint64_t>::max() / per)
      throw ResourceError("circuit count overflows 64 bits");
    r *= per;
  }
  return r;
}

namespace {

// Saturating sum of slot^k for k = 0..s.
uint64_t total_up_to(uint64_t per, int s) {
  const uint64_t cap = std::numeric_limits<uint64_t>::max() / 2;
  uint64_t total = 0, term = 1;
  for (int k = 0; k <= s; k++) {
    total = std::min(cap, total + term);
    term = (per != 0 && term > cap / per) ? cap : term * per;
  }
  return total;
}

struct Placement {
  int gate;
  std::array<int, 3> q;
  int arity;
  CompiledOp op;
  uint32_t anc_mask;
};

std::vector<Placement> build_placements(const GateSet &gs, int width, uint32_t sym_ancillas) {
  std::vector<Placement> out;
  for (int g = 0; g < gs.size(); g++) {
    const GateDef &def = gs.gate(g);
    int a = def.arity;
    if (a > width) continue;
    std::array<int, 3> q{0, 0, 0};
    std::function<void(int, uint32_t)> rec = [&](int pos, uint32_t used) {
      if (pos == a) {
        uint32_t anc = 0;
        for (int j = 0; j < a; j++)
          if (sym_ancillas & (1u << q[j])) anc |= 1u << q[j];
        out.push_back(Placement{g, q, a, CompiledOp(def, width, q.data()), anc});
        return;
      }
      for (int v = 0; v < width; v++) {
        if (used & (1u << v)) continue;
        q[pos] = v;
        rec(pos + 1, used | (1u << v));
      }
    };
    rec(0, 0);
  }
  return out;
}

struct Scores {
  double yes;
  double no;
};

class Problem {
 public:
  virtual ~Problem() = default;
  virtual Scores score(const cplx *data) const = 0;
  virtual double yes_upper_bound(const cplx *) const { return 2.0; }

  int n = 0, t = 0, width = 0;
  int64_t dim = 0;
  std::vector<Vec> cols;
  bool joint_phase = false;
  int output_qubit = 0;
  // Input qubits that must lie in the output qubit's causal cone.
  uint32_t sensitive = 0;
  bool lightcone = false;
};

class FunctionProblem : public Problem {
 public:
  FunctionProblem(const PartialTruthTable &pt, int t_, int oq) {
    n = pt.n;
    t = t_;
    width = n + t;
    dim = int64_t{1} << width;
    output_qubit = oq;
    for (uint64_t x = 0; x < pt.entries.size(); x++) {
      if (pt.entries[x] < 0) continue;
      Vec v = Vec::Zero(dim);
      v(static_cast<Eigen::Index>(x << t)) = 1.0;
      cols.push_back(v);
      targets.push_back(pt.entries[x]);
    }
    for (int i = 0; i < n; i++) {
      uint64_t b = uint64_t{1} << (n - 1 - i);
      for (uint64_t x = 0; x < pt.entries.size(); x++) {
        int8_t e0 = pt.entries[x], e1 = pt.entries[x ^ b];
        if (e0 >= 0 && e1 >= 0 && e0 != e1) {
          sensitive |= 1u << i;
          break;
        }
      }
    }
    shift = width - 1 - output_qubit;
  }

  Scores score(const cplx *data) const override {
    double mn = 1.0;
    for (size_t j = 0; j < targets.size(); j++) {
      const cplx *c = data + j * dim;
      double p1 = 0;
      for (int64_t i = 0; i < dim; i++)
        if ((i >> shift) & 1) p1 += std::norm(c[i]);
      double p = targets[j] ? p1 : 1.0 - p1;
      mn = std::min(mn, p);
    }
    mn = std::clamp(mn, 0.0, 1.0);
    return {mn, mn};
  }

  std::vector<int> targets;
  int shift = 0;
};

class StateProblem : public Problem {
 public:
  StateProblem(const Vec &psi_, int n_, int t_) : psi(psi_.conjugate()) {
    n = n_;
    t = t_;
    width = n + t;
    dim = int64_t{1} << width;
    Vec v = Vec::Zero(dim);
    v(0) = 1.0;
    cols.push_back(v);
  }

  Scores score(const cplx *data) const override {
    int64_t dn = int64_t{1} << n, dt = int64_t{1} << t;
    double f = 0;
    for (int64_t r = 0; r < dt; r++) {
      cplx acc = 0;
      for (int64_t a = 0; a < dn; a++) acc += psi(a) * data[(a << t) | r];
      f += std::norm(acc);
    }
    f = std::clamp(f, 0.0, 1.0);
    return {f, f};
  }

  Vec psi;  // conjugated target
};

class UnitaryExactProblem : public Problem {
 public:
  explicit UnitaryExactProblem(const Mat &u) : ud(u.adjoint()) {
    n = static_cast<int>(std::countr_zero(static_cast<uint64_t>(u.rows())));
    t = 0;
    width = n;
    dim = u.rows();
    joint_phase = true;
    for (int64_t a = 0; a < dim; a++) {
      Vec v = Vec::Zero(dim);
      v(a) = 1.0;
      cols.push_back(v);
    }
  }

  Scores score(const cplx *data) const override {
    Eigen::Map<const Mat> c(data, dim, dim);
    Mat w = ud * c;
    double f = min_fidelity_exact(w);
    return {f, f};
  }

  double yes_upper_bound(const cplx *data) const override {
    double ub = 1.0;
    for (int64_t a = 0; a < dim; a++) {
      cplx acc = 0;
      for (int64_t i = 0; i < dim; i++) acc += ud(a, i) * data[a * dim + i];
      ub = std::min(ub, std::norm(acc));
    }
    return ub;
  }

  Mat ud;
};

class UnitaryCertifiedProblem : public Problem {
 public:
  UnitaryCertifiedProblem(const Mat &u, int t_) : ud(u.adjoint()) {
    n = static_cast<int>(std::countr_zero(static_cast<uint64_t>(u.rows())));
    t = t_;
    width = n + t;
    dim = int64_t{1} << width;
    joint_phase = true;
    for (int64_t a = 0; a < (int64_t{1} << n); a++) {
      Vec v = Vec::Zero(dim);
      v(a << t) = 1.0;
      cols.push_back(v);
    }
  }

  Scores score(const cplx *data) const override {
    int64_t dn = int64_t{1} << n, dt = int64_t{1} << t;
    std::vector<Vec> w;
    for (int64_t a = 0; a < dn; a++) {
      const cplx *c = data + a * dim;
      Vec r(dim);
      Vec sub(dn);
      for (int64_t k = 0; k < dt; k++) {
        for (int64_t i = 0; i < dn; i++) sub(i) = c[(i << t) | k];
        Vec m = ud * sub;
        for (int64_t i = 0; i < dn; i++) r((i << t) | k) = m(i);
      }
      w.push_back(std::move(r));
    }
    auto f = basis_pair_fidelities(w, n, t);
    double mn = *std::min_element(f.begin(), f.end());
    return {certified_min_fidelity(f, n), std::clamp(mn, 0.0, 1.0)};
  }

  Mat ud;
};

struct Key {
  uint64_t a, b;
};

inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Key state_key(const cplx *d, size_t ncols, int64_t dim, bool joint, uint64_t extra) {
  uint64_t h1 = 0x243f6a8885a308d3ULL ^ extra, h2 = 0x13198a2e03707344ULL + extra;
  auto ref_phase = [](const cplx *p, int64_t len) {
    for (int64_t i = 0; i < len; i++) {
      double m = std::abs(p[i]);
      if (m > 1e-6) return std::conj(p[i]) / m;
    }
    return cplx(1.0, 0.0);
  };
  cplx ph = joint ? ref_phase(d, static_cast<int64_t>(ncols) * dim) : cplx(1.0, 0.0);
  for (size_t c = 0; c < ncols; c++) {
    const cplx *col = d + c * dim;
    if (!joint) ph = ref_phase(col, dim);
    for (int64_t i = 0; i < dim; i++) {
      cplx z = col[i] * ph;
      auto re = static_cast<uint64_t>(std::llround(z.real() * 1e9));
      auto im = static_cast<uint64_t>(std::llround(z.imag() * 1e9));
      h1 = mix64(h1 ^ re) ^ im;
      h2 = mix64(h2 + im * 0x100000001b3ULL) + re;
    }
  }
  h1 = mix64(h1);
  h2 = mix64(h2);
  if (h1 == 0 && h2 == 0) h1 = 1;
  return {h1, h2};
}

class DedupTable {
 public:
  explicit DedupTable(size_t slots) : ka_(slots, 0), kb_(slots, 0), depth_(slots, 0), mask_(slots - 1), limit_(slots / 2) {}

  // True if the key was already seen at a depth <= d; otherwise records d.
  bool seen(Key k, uint8_t d) {
    size_t i = k.a & mask_;
    while (true) {
      if (ka_[i] == 0 && kb_[i] == 0) {
        if (used_ < limit_) {
          ka_[i] = k.a;
          kb_[i] = k.b;
          depth_[i] = d;
          used_++;
        }
        return false;
      }
      if (ka_[i] == k.a && kb_[i] == k.b) {
        if (depth_[i] <= d) return true;
        depth_[i] = d;
        return false;
      }
      i = (i + 1) & mask_;
    }
  }

  void clear() {
    std::fill(ka_.begin(), ka_.end(), 0);
    std::fill(kb_.begin(), kb_.end(), 0);
    used_ = 0;
  }

 private:
  std::vector<uint64_t> ka_, kb_;
  std::vector<uint8_t> depth_;
  size_t mask_, limit_, used_ = 0;
};

inline double round12(double x) { return std::round(x * 1e12) / 1e12; }

struct SearchState {
  bool found_yes = false;
  std::vector<int> yes_path;
  double yes_score = 0;
  double best_yes = -1;
  std::vector<int> best_path;
  double best_no = -1;
  uint64_t nodes = 0;
};

class Searcher {
 public:
  Searcher(const Problem &p, const std::vector<Placement> &pl, int max_arity, uint32_t sym_anc, double alpha, bool yes_allowed,
           DedupTable *table)
      : P(p), pls(pl), arity(max_arity), sym(sym_anc), alpha_(alpha), yes_ok(yes_allowed), table_(table) {
    block = static_cast<int64_t>(P.cols.size()) * P.dim;
  }

  void init_iteration(int k) {
    k_ = k;
    bufs.assign(k + 1, std::vector<cplx>(block));
    for (size_t c = 0; c < P.cols.size(); c++)
      std::copy(P.cols[c].data(), P.cols[c].data() + P.dim, bufs[0].begin() + static_cast<int64_t>(c) * P.dim);
    deps.assign(k + 1, std::vector<uint32_t>(P.width, 0));
    for (int q = 0; q < P.n; q++) deps[0][q] = 1u << q;
    touched.assign(k + 1, 0);
    path.assign(k, -1);
  }

  void root_key() {
    if (table_) table_->seen(state_key(bufs[0].data(), P.cols.size(), P.dim, P.joint_phase, 0), 0);
  }

  void leaf(int depth) {
    const cplx *d = bufs[depth].data();
    if (!yes_ok) {
      // Only the No side matters past the Yes size limit.
      Scores s = P.score(d);
      st.best_no = std::max(st.best_no, s.no);
      return;
    }
    double ub = P.yes_upper_bound(d);
    if (ub < alpha_ - kScoreTol && round12(ub) <= round12(st.best_yes) && ub <= st.best_no) return;
    Scores s = P.score(d);
    st.best_no = std::max(st.best_no, s.no);
    if (round12(s.yes) > round12(st.best_yes)) {
      st.best_yes = s.yes;
      st.best_path.assign(path.begin(), path.begin() + depth);
    }
    if (s.yes >= alpha_ - kScoreTol) {
      st.found_yes = true;
      st.yes_score = s.yes;
      st.yes_path.assign(path.begin(), path.begin() + depth);
    }
  }

  bool allowed(const Placement &p, int depth) const {
    if (!sym) return true;
    uint32_t fresh = p.anc_mask & ~touched[depth];
    if (!fresh) return true;
    uint32_t avail = sym & ~touched[depth];
    uint32_t lowest = 0;
    for (int i = 0, c = std::popcount(fresh); c > 0 && i < 32; i++)
      if (avail & (1u << i)) {
        lowest |= 1u << i;
        c--;
      }
    return fresh == lowest;
  }

  // Can the remaining r gates still bring every sensitive input into the
  // output qubit's cone?
  bool cone_reachable(int depth, int r) const {
    const auto &dp = deps[depth];
    uint32_t missing = P.sensitive & ~dp[P.output_qubit];
    if (!missing) return true;
    if (arity < 2) return false;
    int limit = r * (arity - 1);
    if (limit >= std::popcount(missing)) return true;
    std::vector<uint32_t> cand;
    for (int q = 0; q < P.width; q++)
      if (q != P.output_qubit && (dp[q] & missing)) cand.push_back(dp[q] & missing);
    std::function<bool(size_t, uint32_t, int)> cover = [&](size_t from, uint32_t left, int budget) {
      if (!left) return true;
      if (budget == 0) return false;
      for (size_t i = from; i < cand.size(); i++)
        if ((cand[i] & left) && cover(i + 1, left & ~cand[i], budget - 1)) return true;
      return false;
    };
    return cover(0, missing, limit);
  }

  // Gate bookkeeping for the child; cheap, so the cone test runs before the
  // amplitudes are touched.
  void step(int depth, size_t pi) {
    const Placement &p = pls[pi];
    deps[depth + 1] = deps[depth];
    if (p.arity > 1) {
      uint32_t u = 0;
      for (int j = 0; j < p.arity; j++) u |= deps[depth][p.q[j]];
      for (int j = 0; j < p.arity; j++) deps[depth + 1][p.q[j]] = u;
    }
    touched[depth + 1] = touched[depth] | p.anc_mask;
    path[depth] = static_cast<int>(pi);
  }

  void apply(int depth, size_t pi) {
    const Placement &p = pls[pi];
    auto &src = bufs[depth];
    auto &dst = bufs[depth + 1];
    std::copy(src.begin(), src.end(), dst.begin());
    for (size_t c = 0; c < P.cols.size(); c++) p.op.apply(dst.data() + static_cast<int64_t>(c) * P.dim);
  }

  // Returns true when the child at depth + 1 is cut.
  bool enter(int depth, size_t pi) {
    step(depth, pi);
    st.nodes++;
    if (P.lightcone && !cone_reachable(depth + 1, k_ - depth - 1)) return true;
    apply(depth, pi);
    if (table_) {
      Key key = state_key(bufs[depth + 1].data(), P.cols.size(), P.dim, P.joint_phase, sym ? touched[depth + 1] : 0);
      if (table_->seen(key, static_cast<uint8_t>(depth + 1))) return true;
    }
    return false;
  }

  void dfs(int depth) {
    if (st.found_yes || (stop && stop->load(std::memory_order_relaxed))) return;
    if (depth == k_) {
      leaf(depth);
      return;
    }
    for (size_t pi = 0; pi < pls.size(); pi++) {
      if (!allowed(pls[pi], depth)) continue;
      if (enter(depth, pi)) continue;
      dfs(depth + 1);
      if (st.found_yes) return;
    }
  }

  // One branch with a fixed first placement.
  void branch(size_t pi) {
    if (!allowed(pls[pi], 0)) return;
    if (enter(0, pi)) return;
    dfs(1);
  }

  const Problem &P;
  const std::vector<Placement> &pls;
  int arity;
  uint32_t sym;
  double alpha_;
  bool yes_ok;
  DedupTable *table_;
  int64_t block;
  int k_ = 0;
  std::vector<std::vector<cplx>> bufs;
  std::vector<std::vector<uint32_t>> deps;
  std::vector<uint32_t> touched;
  std::vector<int> path;
  SearchState st;
  const std::atomic<bool> *stop = nullptr;
};

void merge_into(SearchState &acc, const SearchState &b) {
  acc.nodes += b.nodes;
  acc.best_no = std::max(acc.best_no, b.best_no);
  if (round12(b.best_yes) > round12(acc.best_yes)) {
    acc.best_yes = b.best_yes;
    acc.best_path = b.best_path;
  }
  if (!acc.found_yes && b.found_yes) {
    acc.found_yes = true;
    acc.yes_path = b.yes_path;
    acc.yes_score = b.yes_score;
  }
}

size_t table_size_for(uint64_t total, size_t cap) {
  if (cap == 0) return 0;
  size_t want = 1024;
  while (want < cap && want < 2 * total) want <<= 1;
  return std::min(want, cap);
}

uint64_t hash_bytes(uint64_t h, const void *data, size_t len) {
  auto p = static_cast<const unsigned char *>(data);
  for (size_t i = 0; i < len; i++) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

uint64_t hash_matrix(const Mat &m) {
  uint64_t h = 14695981039346656037ULL;
  for (int64_t i = 0; i < m.size(); i++) {
    double re = m.data()[i].real(), im = m.data()[i].imag();
    h = hash_bytes(h, &re, sizeof re);
    h = hash_bytes(h, &im, sizeof im);
  }
  return h;
}

}  // namespace

struct SearchSpec {
  ProblemKind kind;
  int max_size;
  int yes_max;
  Thresholds th;
  std::string path;
  std::string object_hash;
};

namespace {

OracleVerdict run_search(const Problem &P, const SearchSpec &spec, const std::shared_ptr<const GateSet> &gs,
                         const OracleConfig &cfg) {
  if (P.width > cfg.dim_cap)
    throw ResourceError("register of " + std::to_string(P.width) + " qubits exceeds the dimension cap of " +
                        std::to_string(cfg.dim_cap));
  if (P.width > 31) throw ResourceError("register too wide");
  if (spec.max_size < 0) throw InvalidArgument("size must be non-negative");
  uint64_t per = slot_count(*gs, P.width);
  uint64_t total = total_up_to(per, spec.max_size);
  if (total > cfg.budget)
    throw ResourceError("enumeration of " + std::to_string(total) + " circuits (" + std::to_string(per) +
                        " placements per slot, size <= " + std::to_string(spec.max_size) + ") exceeds the budget of " +
                        std::to_string(cfg.budget));
  uint32_t sym = 0;
  if (cfg.ancilla_symmetry)
    for (int q = P.n; q < P.width; q++)
      if (q != P.output_qubit) sym |= 1u << q;
  auto pls = build_placements(*gs, P.width, sym);
  int max_arity = gs->max_arity();
  size_t slots = table_size_for(total, cfg.table_slots);
  std::unique_ptr<DedupTable> shared;
  if (slots) shared = std::make_unique<DedupTable>(slots);

  SearchState acc;
  int searched = 0;
  for (int k = 0; k <= spec.max_size; k++) {
    bool yes_ok = k <= spec.yes_max;
    searched = k;
    SearchState it;
    if (k == 0) {
      Searcher s(P, pls, max_arity, sym, spec.th.alpha, yes_ok, nullptr);
      s.init_iteration(0);
      bool dead = P.lightcone && !s.cone_reachable(0, 0);
      if (!dead) s.leaf(0);
      it = s.st;
      it.nodes = 1;
    } else if (cfg.workers <= 1 || pls.size() < 2) {
      if (shared) shared->clear();
      Searcher s(P, pls, max_arity, sym, spec.th.alpha, yes_ok, shared.get());
      s.init_iteration(k);
      s.root_key();
      s.dfs(0);
      it = s.st;
    } else {
      // Branch on the first placement; each branch keeps its own table so the
      // outcome does not depend on scheduling.
      std::vector<SearchState> results(pls.size());
      std::atomic<size_t> next{0};
      std::atomic<bool> stop{false};
      std::atomic<size_t> first_yes{pls.size()};
      std::mutex mu;
      auto worker = [&]() {
        size_t branch_slots = std::max<size_t>(1024, slots / static_cast<size_t>(cfg.workers));
        std::unique_ptr<DedupTable> table;
        if (slots) table = std::make_unique<DedupTable>(std::bit_floor(branch_slots));
        while (true) {
          size_t b = next.fetch_add(1);
          if (b >= pls.size() || b > first_yes.load()) break;
          if (table) table->clear();
          Searcher s(P, pls, max_arity, sym, spec.th.alpha, yes_ok, table.get());
          s.init_iteration(k);
          s.root_key();
          s.branch(b);
          results[b] = s.st;
          if (s.st.found_yes) {
            std::lock_guard<std::mutex> lk(mu);
            if (b < first_yes.load()) first_yes.store(b);
          }
        }
      };
      std::vector<std::thread> threads;
      for (int w = 0; w < cfg.workers; w++) threads.emplace_back(worker);
      for (auto &th : threads) th.join();
      (void)stop;
      size_t fy = first_yes.load();
      for (size_t b = 0; b < pls.size() && b <= fy; b++) merge_into(it, results[b]);
    }
    merge_into(acc, it);
    if (acc.found_yes) break;
    if (k >= spec.yes_max && acc.best_no > spec.th.beta + 1e-12) break;
  }

  OracleVerdict v;
  v.kind = spec.kind;
  v.path = spec.path;
  v.searched_size = searched;
  v.nodes = acc.nodes;
  v.lightcone_pruned = P.lightcone;
  auto to_circuit = [&](const std::vector<int> &path) {
    QuantumCircuit c(P.n, P.t, gs);
    c.output_qubit = P.output_qubit;
    for (int pi : path) {
      Op op;
      op.gate = pls[pi].gate;
      op.q = pls[pi].q;
      c.ops.push_back(op);
    }
    return c;
  };
  v.witnessed_score = std::max(0.0, acc.best_no);
  if (acc.found_yes) {
    v.verdict = Verdict::Yes;
    v.best_circuit = to_circuit(acc.yes_path);
    v.best_score = acc.yes_score;
  } else {
    v.verdict = acc.best_no <= spec.th.beta + 1e-12 ? Verdict::No : Verdict::Unpromised;
    if (acc.best_yes >= 0) {
      v.best_circuit = to_circuit(acc.best_path);
      v.best_score = acc.best_yes;
    }
  }
  return v;
}

std::string threshold_key(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void enumerate_circuits(int n, int t, int s, std::shared_ptr<const GateSet> gs,
                        const std::function<void(const QuantumCircuit &)> &visit, uint64_t budget) {
  uint64_t count = closed_form_count(*gs, n, t, s);
  if (count > budget)
    throw ResourceError("enumeration of " + std::to_string(count) + " circuits exceeds the budget of " + std::to_string(budget));
  int width = n + t;
  std::vector<std::pair<int, std::array<int, 3>>> pls;
  for (int g = 0; g < gs->size(); g++) {
    int a = gs->gate(g).arity;
    if (a > width) continue;
    std::array<int, 3> q{0, 0, 0};
    std::function<void(int, uint32_t)> rec = [&](int pos, uint32_t used) {
      if (pos == a) {
        pls.emplace_back(g, q);
        return;
      }
      for (int v = 0; v < width; v++) {
        if (used & (1u << v)) continue;
        q[pos] = v;
        rec(pos + 1, used | (1u << v));
      }
    };
    rec(0, 0);
  }
  QuantumCircuit c(n, t, gs);
  std::function<void(int)> rec = [&](int depth) {
    if (depth == s) {
      visit(c);
      return;
    }
    for (auto &p : pls) {
      Op op;
      op.gate = p.first;
      op.q = p.second;
      c.ops.push_back(op);
      rec(depth + 1);
      c.ops.pop_back();
    }
  };
  rec(0);
}

Oracle::Oracle(std::shared_ptr<const GateSet> gs, OracleConfig cfg) : gs_(std::move(gs)), cfg_(cfg) {
  if (!gs_) throw InvalidArgument("oracle needs a gate set");
  if (cfg_.table_slots && (cfg_.table_slots & (cfg_.table_slots - 1)))
    throw InvalidArgument("table_slots must be a power of two");
}

namespace {

std::string cache_key(const GateSet &gs, const OracleConfig &cfg, const SearchSpec &spec, int t, int oq) {
  return to_string(spec.kind) + "|" + gs.name() + ":" + std::to_string(gs.hash()) + "|" + spec.object_hash + "|s=" +
         std::to_string(spec.yes_max) + "|s'=" + std::to_string(spec.max_size) + "|t=" + std::to_string(t) + "|a=" +
         threshold_key(spec.th.alpha) + "|b=" + threshold_key(spec.th.beta) + "|oq=" + std::to_string(oq) + "|sym=" +
         std::to_string(cfg.ancilla_symmetry) + "|lc=" + std::to_string(cfg.lightcone);
}

OracleVerdict cached_run(const Problem &P, const SearchSpec &spec, const std::shared_ptr<const GateSet> &gs,
                         const OracleConfig &cfg, const std::shared_ptr<OracleCache> &cache) {
  if (!cache) return run_search(P, spec, gs, cfg);
  std::string key = cache_key(*gs, cfg, spec, P.t, P.output_qubit);
  if (auto hit = cache->lookup(key)) {
    OracleVerdict v = verdict_from_json(*hit, gs);
    v.from_cache = true;
    return v;
  }
  OracleVerdict v = run_search(P, spec, gs, cfg);
  cache->store(key, verdict_to_json(v));
  return v;
}

void check_function_thresholds(const Thresholds &th) {
  if (!(th.beta >= 0.5 && th.beta < th.alpha && th.alpha <= 1.0))
    throw InvalidArgument("MQCSP thresholds need 1/2 <= beta < alpha <= 1");
}

void check_quantum_thresholds(const Thresholds &th) {
  if (!(th.beta >= 0.0 && th.beta < th.alpha && th.alpha <= 1.0))
    throw InvalidArgument("thresholds need 0 <= beta < alpha <= 1");
}

std::string table_hash(const std::string &s) {
  return "tt:" + std::to_string(hash_bytes(14695981039346656037ULL, s.data(), s.size()));
}

}  // namespace

OracleVerdict Oracle::decide_mqcsp(const TruthTable &tt, int s, int t, Thresholds th, int output_qubit) const {
  check_function_thresholds(th);
  PartialTruthTable pt = PartialTruthTable::from_total(tt);
  FunctionProblem P(pt, t, output_qubit);
  if (output_qubit < 0 || output_qubit >= P.width) throw DimensionError("output qubit out of range");
  P.lightcone = cfg_.lightcone && th.alpha > 0.5 && th.beta >= 0.5;
  SearchSpec spec{ProblemKind::MQCSP, s, s, th, "exact", table_hash(tt.to_string())};
  return cached_run(P, spec, gs_, cfg_, cache_);
}

OracleVerdict Oracle::decide_mqcsp_star(const PartialTruthTable &pt, int s, int t, int output_qubit) const {
  FunctionProblem P(pt, t, output_qubit);
  if (output_qubit < 0 || output_qubit >= P.width) throw DimensionError("output qubit out of range");
  Thresholds th{2.0 / 3.0, 0.5};
  P.lightcone = cfg_.lightcone;
  SearchSpec spec{ProblemKind::MQCSPStar, s, s, th, "exact", table_hash(pt.to_string())};
  return cached_run(P, spec, gs_, cfg_, cache_);
}

OracleVerdict Oracle::decide_mqcsp_gap(const PartialTruthTable &pt, int s, int s_prime, int t, int output_qubit) const {
  if (s_prime < s) throw InvalidArgument("gap variant needs s <= s'");
  FunctionProblem P(pt, t, output_qubit);
  if (output_qubit < 0 || output_qubit >= P.width) throw DimensionError("output qubit out of range");
  Thresholds th{2.0 / 3.0, 0.5};
  P.lightcone = cfg_.lightcone;
  SearchSpec spec{ProblemKind::MQCSPGap, s_prime, s, th, "exact", table_hash(pt.to_string())};
  return cached_run(P, spec, gs_, cfg_, cache_);
}

OracleVerdict Oracle::decide_umcsp(const UnitaryMatrix &u, int s, int t, Thresholds th) const {
  check_quantum_thresholds(th);
  if (u.m.rows() != (int64_t{1} << u.n) || u.m.cols() != u.m.rows()) throw DimensionError("unitary is not 2^n x 2^n");
  SearchSpec spec{ProblemKind::UMCSP, s, s, th, t == 0 ? "exact-eigenphase" : "certified", "u:" + std::to_string(hash_matrix(u.m))};
  OracleVerdict v;
  if (t == 0) {
    UnitaryExactProblem P(u.m);
    v = cached_run(P, spec, gs_, cfg_, cache_);
  } else {
    UnitaryCertifiedProblem P(u.m, t);
    v = cached_run(P, spec, gs_, cfg_, cache_);
  }
  v.unitarity_error = u.unitarity_error();
  return v;
}

OracleVerdict Oracle::decide_smcsp(const PureState &psi, int s, int t, Thresholds th) const {
  check_quantum_thresholds(th);
  if (psi.amps.size() != (int64_t{1} << psi.n)) throw DimensionError("state length is not 2^n");
  StateProblem P(psi.amps, psi.n, t);
  Mat as_mat = psi.amps;
  SearchSpec spec{ProblemKind::SMCSP, s, s, th, "exact", "psi:" + std::to_string(hash_matrix(as_mat))};
  return cached_run(P, spec, gs_, cfg_, cache_);
}

namespace {

ComplexityCertificate certificate(const OracleVerdict &v, const std::string &kind, double eps, int s_max) {
  if (v.verdict != Verdict::Yes)
    throw NotSynthesizable("no " + kind + " circuit of size <= " + std::to_string(s_max) + " reaches fidelity " +
                               threshold_key(1 - eps) + " (best " + threshold_key(v.best_score) + ")",
                           v.best_score);
  ComplexityCertificate c;
  c.object_kind = kind;
  c.epsilon = eps;
  c.witness = *v.best_circuit;
  c.min_size = c.witness.size();
  c.achieved_fidelity = v.best_score;
  uint32_t used = 0;
  for (auto &op : c.witness.ops)
    for (int j = 0; j < c.witness.arity(op); j++) used |= 1u << op.q[j];
  for (int q = c.witness.n; q < c.witness.width(); q++)
    if (used & (1u << q)) c.ancilla_used++;
  return c;
}

}  // namespace

ComplexityCertificate Oracle::min_size_function(const TruthTable &tt, double epsilon, int t, int s_max, int output_qubit) const {
  double alpha = std::min(1.0, 1.0 - epsilon);
  Thresholds th{alpha, std::min(0.5, alpha - 1e-12)};
  if (alpha <= 0.5) throw InvalidArgument("function precision needs epsilon < 1/2");
  return certificate(decide_mqcsp(tt, s_max, t, th, output_qubit), "function", epsilon, s_max);
}

ComplexityCertificate Oracle::min_size_unitary(const UnitaryMatrix &u, double epsilon, int t, int s_max) const {
  double alpha = std::min(1.0, 1.0 - epsilon);
  return certificate(decide_umcsp(u, s_max, t, {alpha, 0.0}), "unitary", epsilon, s_max);
}

ComplexityCertificate Oracle::min_size_state(const PureState &psi, double epsilon, int t, int s_max) const {
  double alpha = std::min(1.0, 1.0 - epsilon);
  return certificate(decide_smcsp(psi, s_max, t, {alpha, 0.0}), "state", epsilon, s_max);
}

double score_function(const QuantumCircuit &c, const PartialTruthTable &pt) {
  if (pt.n != c.n) throw DimensionError("truth table and circuit disagree on n");
  double mn = 1.0;
  for (uint64_t x = 0; x < pt.entries.size(); x++)
    if (pt.entries[x] >= 0) mn = std::min(mn, func_acceptance(c, x, pt.entries[x]));
  return mn;
}

double score_unitary_exact(const QuantumCircuit &c, const Mat &u) {
  if (c.t != 0) throw InvalidArgument("exact unitary score needs t = 0");
  return min_fidelity_exact(u.adjoint() * circuit_unitary(c));
}

double score_state(const QuantumCircuit &c, const Vec &psi) {
  Vec zero = Vec::Zero(int64_t{1} << c.n);
  zero(0) = 1.0;
  Vec out = run_circuit(c, zero);
  if (psi.size() != zero.size()) throw DimensionError("state and circuit disagree on n");
  int64_t dn = psi.size(), dt = int64_t{1} << c.t;
  double f = 0;
  for (int64_t r = 0; r < dt; r++) {
    cplx acc = 0;
    for (int64_t a = 0; a < dn; a++) acc += std::conj(psi(a)) * out((a << c.t) | r);
    f += std::norm(acc);
  }
  return f;
}

}  // namespace qmcsp
