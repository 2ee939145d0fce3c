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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>

namespace qmcsp {

namespace {

constexpr double kPi = std::numbers::pi;

struct Placement {
  int gate;
  std::vector<int> qubits;
  Mat full;
};

// Single gates on the whole register, in enumeration order.
std::vector<Placement> placements(const std::shared_ptr<const GateSet> &gs, int n) {
  std::vector<Placement> out;
  enumerate_circuits(n, 0, 1, gs, [&](const QuantumCircuit &c) {
    const Op &op = c.ops[0];
    out.push_back({op.gate, std::vector<int>(op.q.begin(), op.q.begin() + c.arity(op)), circuit_unitary(c)});
  });
  return out;
}

std::string describe(const GateSet &gs, const Placement &p) {
  std::ostringstream os;
  os << gs.gate(p.gate).label << "(";
  for (size_t j = 0; j < p.qubits.size(); j++) os << (j ? "," : "") << p.qubits[j];
  os << ")";
  return os.str();
}

// Smallest s in [0, s_max] whose query is Yes; Unpromised counts as No.
// Returns -1 when even s_max is not Yes.
int binary_search_size(int s_max, const std::function<OracleVerdict(int)> &query, ReductionTrace &trace) {
  auto yes = [&](int s) {
    trace.binary_search_calls++;
    return query(s).verdict == Verdict::Yes;
  };
  if (!yes(s_max)) return -1;
  int lo = 0, hi = s_max;
  while (lo < hi) {
    int mid = lo + (hi - lo) / 2;
    if (yes(mid))
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

// Assembles g_1 ... g_s (g_1 leftmost) into application order.
QuantumCircuit assemble(int n, const std::shared_ptr<const GateSet> &gs, const std::vector<ReductionStep> &steps) {
  QuantumCircuit c(n, 0, gs);
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) c.add(gs->index_of(it->gate), it->qubits);
  return c;
}

template <class Target>
SearchResult peel(int n, double epsilon, double c3, const Oracle &oracle, int s_max, const Target &target0,
                  const std::function<OracleVerdict(const Target &, int, Thresholds)> &decide,
                  const std::function<Target(const Mat &, const Target &)> &strip, const char *what, bool promise_on_miss) {
  if (!(epsilon >= 0 && epsilon < 1)) throw InvalidArgument("epsilon must lie in [0, 1)");
  if (!(c3 > 0)) throw InvalidArgument("c3 must be positive");
  SearchResult res;
  res.delta = std::pow(2.0, -2.0 * c3 * n);
  auto thresholds = [&](int i) {
    double eps_i = epsilon + i * res.delta;
    double a = std::min(1.0, 1.0 - eps_i);
    return Thresholds{a, std::max(0.0, a - res.delta)};
  };
  auto logged = [&](const Target &tg, int s, Thresholds th, const std::string &q) {
    if (!(th.alpha > 0)) throw PromiseViolation(std::string(what) + " threshold fell to zero at query " + q);
    OracleVerdict v = decide(tg, s, th);
    res.trace.oracle_calls.push_back({q, s, th.alpha, th.beta, v.verdict, v.best_score});
    return v;
  };

  Thresholds th0 = thresholds(0);
  res.s = binary_search_size(
      s_max, [&](int s) { return logged(target0, s, th0, "binary-search s=" + std::to_string(s)); }, res.trace);
  if (res.s < 0) {
    std::string msg = std::string("no ") + what + " circuit of size <= " + std::to_string(s_max) + " at fidelity " +
                      std::to_string(th0.alpha);
    if (promise_on_miss) throw PromiseViolation(msg);
    throw NotSynthesizable(msg, res.trace.oracle_calls.empty() ? 0.0 : res.trace.oracle_calls.front().best_score);
  }

  auto gs = oracle.gateset_ptr();
  auto hs = placements(gs, n);
  Target cur = target0;
  for (int i = 1; i <= res.s; i++) {
    Thresholds th = thresholds(i);
    bool found = false, unpromised = false;
    std::string last_query;
    for (auto &h : hs) {
      Target cand = strip(h.full, cur);
      last_query = "step " + std::to_string(i) + " h=" + describe(*gs, h) + " s=" + std::to_string(res.s - i);
      OracleVerdict v = logged(cand, res.s - i, th, last_query);
      if (v.verdict == Verdict::Unpromised) unpromised = true;
      if (v.verdict != Verdict::Yes) continue;
      res.trace.steps.push_back({i, gs->gate(h.gate).label, h.qubits, v.best_score, th.alpha});
      cur = std::move(cand);
      found = true;
      break;
    }
    if (!found)
      throw PromiseViolation(std::string(what) + " search found no gate at step " + std::to_string(i) +
                             (unpromised ? " (some queries were unpromised)" : "") + "; last query " + last_query);
  }
  res.circuit = assemble(n, gs, res.trace.steps);
  res.bound = 1.0 - epsilon - std::pow(2.0, -c3 * n);
  return res;
}

}  // namespace

SearchResult s2d_umcsp(const UnitaryMatrix &u, const Oracle &oracle, double epsilon, double c3, int s_max) {
  if (u.m.rows() != (int64_t{1} << u.n) || u.m.cols() != u.m.rows()) throw DimensionError("unitary is not 2^n x 2^n");
  std::function<OracleVerdict(const Mat &, int, Thresholds)> decide = [&](const Mat &m, int s, Thresholds th) {
    UnitaryMatrix q{u.n, m};
    return oracle.decide_umcsp(q, s, 0, th);
  };
  std::function<Mat(const Mat &, const Mat &)> strip = [](const Mat &h, const Mat &cur) -> Mat { return h.adjoint() * cur; };
  SearchResult r = peel<Mat>(u.n, epsilon, c3, oracle, s_max, u.m, decide, strip, "unitary", false);
  r.fidelity = score_unitary_exact(r.circuit, u.m);
  return r;
}

SearchResult s2d_smcsp(const PureState &psi, int s_bound, const Oracle &oracle, double epsilon, double c3) {
  if (psi.amps.size() != (int64_t{1} << psi.n)) throw DimensionError("state length is not 2^n");
  if (s_bound < 0) throw InvalidArgument("size bound must be non-negative");
  std::function<OracleVerdict(const Vec &, int, Thresholds)> decide = [&](const Vec &v, int s, Thresholds th) {
    PureState q{psi.n, v};
    return oracle.decide_smcsp(q, s, 0, th);
  };
  std::function<Vec(const Mat &, const Vec &)> strip = [](const Mat &h, const Vec &cur) -> Vec { return h.adjoint() * cur; };
  SearchResult r = peel<Vec>(psi.n, epsilon, c3, oracle, s_bound, psi.amps, decide, strip, "state", true);
  r.fidelity = score_state(r.circuit, psi.amps);
  return r;
}

UnitaryMatrix build_U_f(const std::vector<TruthTable> &outputs) {
  int m = static_cast<int>(outputs.size());
  if (m < 1 || m > 2) throw InvalidArgument("U_f supports 1 or 2 output bits");
  int n = outputs[0].n;
  for (auto &o : outputs)
    if (o.n != n || o.bits.size() != (size_t{1} << n)) throw DimensionError("output tables disagree on n");
  if (n + m > kDefaultDimensionCap) throw ResourceError("U_f exceeds the dimension cap");
  UnitaryMatrix u;
  u.n = n + m;
  int64_t d = int64_t{1} << u.n;
  u.m = Mat::Zero(d, d);
  for (int64_t x = 0; x < (int64_t{1} << n); x++) {
    int64_t fx = 0;
    for (int j = 0; j < m; j++) fx = (fx << 1) | outputs[j].at(x);
    for (int64_t b = 0; b < (int64_t{1} << m); b++) u.m(((x << m) | (b ^ fx)), (x << m) | b) = 1.0;
  }
  return u;
}

UnitaryMatrix build_U_f(const TruthTable &tt) { return build_U_f(std::vector<TruthTable>{tt}); }

B2UResult mqcsp_via_umcsp(const TruthTable &tt, const Oracle &oracle, double epsilon, int s_max) {
  B2UResult r;
  r.m = 1;
  UnitaryMatrix u = build_U_f(tt);
  auto cert = oracle.min_size_unitary(u, epsilon, 0, s_max);
  r.cc_u = cert.min_size;
  r.witness = cert.witness;
  r.cc_u_2eps = epsilon == 0.0 ? r.cc_u : oracle.min_size_unitary(u, std::min(1.0, 2 * epsilon), 0, s_max).min_size;
  r.bracket.lo = std::max(0, (r.cc_u_2eps + 1) / 2 - r.m);
  r.bracket.hi = r.cc_u;
  r.bracket.lo_formula = "max(0, ceil(CC(U_f, 2eps)/2) - m)";
  r.bracket.hi_formula = "CC(U_f, eps)";
  return r;
}

namespace {

std::string angle_label(const char *head, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s(%.17g)", head, a);
  return buf;
}

bool is_zero_angle(double a, double period) {
  double r = std::remainder(a, period);
  return std::abs(r) < 1e-12;
}

}  // namespace

int controlled_gate_overhead(const GateDef &g) {
  if (g.arity != 1) throw InvalidArgument("controlled overhead is defined for one-qubit gates");
  const Mat &u = g.matrix;
  cplx det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
  double alpha = std::arg(det) / 2;
  Mat v = u * std::polar(1.0, -alpha);
  double gamma = 2 * std::atan2(std::abs(v(1, 0)), std::abs(v(0, 0)));
  double sum = std::abs(v(1, 1)) > 1e-12 ? 2 * std::arg(v(1, 1)) : 0.0;
  double diff = std::abs(v(1, 0)) > 1e-12 ? 2 * std::arg(v(1, 0)) : 0.0;
  double beta = (sum + diff) / 2, delta = (sum - diff) / 2;

  auto gs = make_prep_gateset();
  QuantumCircuit c(2, 0, gs);
  auto rot = [&](const char *head, double a) {
    if (!is_zero_angle(a, 4 * kPi)) c.add(gs->ensure(angle_label(head, a)), {1});
  };
  rot("RZ", (delta - beta) / 2);
  c.add(gs->ensure("CNOT"), {0, 1});
  rot("RZ", -(delta + beta) / 2);
  rot("RY", -gamma / 2);
  c.add(gs->ensure("CNOT"), {0, 1});
  rot("RY", gamma / 2);
  rot("RZ", beta);
  if (!is_zero_angle(alpha, 2 * kPi)) c.add(gs->ensure(angle_label("PH", alpha)), {0});

  Mat want = Mat::Identity(4, 4);
  want.block(2, 2, 2, 2) = u;
  if ((circuit_unitary(c) - want).cwiseAbs().maxCoeff() > 1e-9)
    throw Error("controlled decomposition of " + g.label + " does not match");
  return c.size();
}

int measured_controlled_overhead(const GateSet &gs) {
  int k = 0;
  for (auto &g : gs.gates())
    if (g.arity == 1) k = std::max(k, controlled_gate_overhead(g));
  return k;
}

SelfReductionResult self_reduce_smcsp(const PureState &psi, double epsilon, const Oracle &sub_oracle, SelfReductionConfig cfg) {
  if (psi.n < 2) throw InvalidArgument("self-reduction needs n >= 2");
  if (psi.amps.size() != (int64_t{1} << psi.n)) throw DimensionError("state length is not 2^n");
  if (!(epsilon > 0 && epsilon < 1)) throw InvalidArgument("epsilon must lie in (0, 1)");
  SelfReductionResult r;
  r.k = cfg.k;
  r.h = cfg.h;
  int64_t half = int64_t{1} << (psi.n - 1);
  Vec b0 = psi.amps.head(half), b1 = psi.amps.tail(half);
  r.c0_sq = b0.squaredNorm();
  r.c1_sq = b1.squaredNorm();

  // CC of an (n-1)-qubit state at precision e, or the fallback when nothing is
  // found within s_max.
  auto cc = [&](const Vec &v, double e, int t, const std::string &name, bool lower) {
    PureState p{psi.n - 1, v.normalized()};
    int val;
    try {
      val = sub_oracle.min_size_state(p, std::min(1.0, e), t, cfg.s_max).min_size;
    } catch (const NotSynthesizable &) {
      val = lower ? cfg.s_max + 1 : kUnbounded;
    }
    r.sub_values.emplace_back(name, val);
    return val;
  };

  if (r.c0_sq < epsilon / 2 || r.c1_sq < epsilon / 2) {
    r.case_id = 1;
    r.dominant = r.c0_sq >= r.c1_sq ? 0 : 1;
    const Vec &b = r.dominant == 0 ? b0 : b1;
    std::string tag = "psi" + std::to_string(r.dominant);
    // The n-qubit witness with its first qubit relabelled as an ancilla.
    r.bracket.lo = cc(b, 4 * epsilon, 1, "CC_t1(" + tag + ", 4eps)", true);
    int up = cc(b, epsilon / 4, 0, "CC(" + tag + ", eps/4)", false);
    // Preparing |1> on the first qubit costs one X.
    r.bracket.hi = up == kUnbounded ? kUnbounded : up + r.dominant;
    r.bracket.lo_formula = "CC_t1(psi_i, 4eps)";
    r.bracket.hi_formula = "CC(psi_i, eps/4) + [i == 1]";
  } else {
    r.case_id = 2;
    r.k_star = static_cast<int>(std::ceil(4.0 / epsilon));
    r.eps_prime = std::min(1.0, std::pow(1.0 - epsilon / 4, r.k_star) + epsilon);
    int l0 = r.eps_prime >= 1.0 ? 0 : cc(b0, r.eps_prime, 0, "CC(psi0, eps')", true);
    int l1 = r.eps_prime >= 1.0 ? 0 : cc(b1, r.eps_prime, 0, "CC(psi1, eps')", true);
    r.bracket.lo = std::max(0, static_cast<int>(std::floor(static_cast<double>(std::max(l0, l1)) / r.k_star)) - r.h);
    int u0 = cc(b0, epsilon, 0, "CC(psi0, eps)", false);
    int u1 = cc(b1, epsilon, 0, "CC(psi1, eps)", false);
    r.bracket.hi = (u0 == kUnbounded || u1 == kUnbounded) ? kUnbounded : r.k * (u0 + u1) + 3;
    r.bracket.lo_formula = "max(0, max_i CC(psi_i, eps')/k* - h)";
    r.bracket.hi_formula = "k * (CC(psi0, eps) + CC(psi1, eps)) + 3";
  }
  return r;
}

}  // namespace qmcsp
