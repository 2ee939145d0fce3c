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

#include "qmcsp/qmcsp.h"

#include <chrono>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <map>
#include <memory>
#include <string>

#include "qmcsp/cache.hpp"
#include "qmcsp/cryptodemo.hpp"
#include "qmcsp/finegrained.hpp"
#include "qmcsp/io.hpp"
#include "qmcsp/reductions.hpp"
#include "qmcsp/repro.hpp"
#include "qmcsp/verifiers.hpp"

using namespace qmcsp;

struct qmcsp_context {
  json config;
  std::string gateset = "g0";
  OracleConfig oracle_cfg;
  uint64_t seed = 7;
  std::shared_ptr<OracleCache> cache;
  std::string error;
};

namespace {

// Raised when a command finishes but its answer sits in the promise gap.
struct Unpromised {
  json payload;
};

char *dup_string(const std::string &s) {
  char *p = static_cast<char *>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

template <class T>
T get_or(const json &j, const char *key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

const json &need(const json &j, const char *key) {
  if (!j.contains(key)) throw InvalidArgument(std::string("request is missing '") + key + "'");
  return j.at(key);
}

Thresholds thresholds(const json &r) { return {get_or(r, "alpha", 1.0), get_or(r, "beta", 0.5)}; }

std::shared_ptr<const GateSet> gateset_for(const qmcsp_context &ctx, const json &r) {
  return std::make_shared<GateSet>(make_gateset(get_or<std::string>(r, "gateset", ctx.gateset)));
}

Oracle oracle_for(const qmcsp_context &ctx, const json &r) {
  OracleConfig cfg = ctx.oracle_cfg;
  cfg.budget = get_or<uint64_t>(r, "budget", cfg.budget);
  Oracle o(gateset_for(ctx, r), cfg);
  if (ctx.cache) o.set_cache(ctx.cache);
  return o;
}

QuantumCircuit witness_from(const json &r) {
  QuantumCircuit c = circuit_from_json(need(r, "witness"));
  return c;
}

json verdict_payload(const OracleVerdict &v) {
  json p = verdict_to_json(v);
  if (v.verdict == Verdict::Unpromised) throw Unpromised{p};
  return p;
}

json bracket_to_json(const Bracket &b) {
  return {{"lo", b.lo}, {"hi", b.hi}, {"lo_formula", b.lo_formula}, {"hi_formula", b.hi_formula}};
}

json trace_to_json(const ReductionTrace &t) {
  json calls = json::array(), steps = json::array();
  for (const auto &c : t.oracle_calls)
    calls.push_back({{"query", c.query},
                     {"size", c.size},
                     {"alpha", c.alpha},
                     {"beta", c.beta},
                     {"verdict", to_string(c.verdict)},
                     {"best_score", c.best_score}});
  for (const auto &s : t.steps)
    steps.push_back({{"i", s.i}, {"gate", s.gate}, {"qubits", s.qubits}, {"score", s.score}, {"threshold", s.threshold}});
  return {{"oracle_calls", calls}, {"steps", steps}, {"binary_search_calls", t.binary_search_calls}};
}

json search_to_json(const SearchResult &s) {
  return {{"circuit", circuit_to_json(s.circuit)}, {"s", s.s},         {"delta", s.delta},
          {"fidelity", s.fidelity},                {"bound", s.bound}, {"trace", trace_to_json(s.trace)}};
}

json solve_mqcsp(qmcsp_context &ctx, const json &r) {
  TruthTable tt = TruthTable::from_string(need(r, "table"));
  Oracle o = oracle_for(ctx, r);
  return verdict_payload(o.decide_mqcsp(tt, need(r, "s"), get_or(r, "t", 0), thresholds(r), get_or(r, "output_qubit", 0)));
}

json solve_mqcsp_star(qmcsp_context &ctx, const json &r) {
  PartialTruthTable pt = PartialTruthTable::from_string(need(r, "table"));
  Oracle o = oracle_for(ctx, r);
  return verdict_payload(o.decide_mqcsp_star(pt, need(r, "s"), get_or(r, "t", 0), get_or(r, "output_qubit", 0)));
}

json solve_umcsp(qmcsp_context &ctx, const json &r) {
  Oracle o = oracle_for(ctx, r);
  return verdict_payload(o.decide_umcsp(unitary_from_json(need(r, "unitary")), need(r, "s"), get_or(r, "t", 0), thresholds(r)));
}

json solve_smcsp(qmcsp_context &ctx, const json &r) {
  Oracle o = oracle_for(ctx, r);
  return verdict_payload(o.decide_smcsp(state_from_json(need(r, "state")), need(r, "s"), get_or(r, "t", 0), thresholds(r)));
}

json solve_min_size(qmcsp_context &ctx, const json &r) {
  Oracle o = oracle_for(ctx, r);
  double eps = get_or(r, "epsilon", 0.0);
  int t = get_or(r, "t", 0), s_max = get_or(r, "s_max", 4);
  if (r.contains("table"))
    return certificate_to_json(o.min_size_function(TruthTable::from_string(r.at("table")), eps, t, s_max,
                                                   get_or(r, "output_qubit", 0)));
  if (r.contains("unitary")) return certificate_to_json(o.min_size_unitary(unitary_from_json(r.at("unitary")), eps, t, s_max));
  if (r.contains("state")) return certificate_to_json(o.min_size_state(state_from_json(r.at("state")), eps, t, s_max));
  throw InvalidArgument("min_size needs one of 'table', 'unitary' or 'state'");
}

json reduce_s2d_umcsp(qmcsp_context &ctx, const json &r) {
  Oracle o = oracle_for(ctx, r);
  return search_to_json(s2d_umcsp(unitary_from_json(need(r, "unitary")), o, get_or(r, "epsilon", 1e-6),
                                  get_or(r, "c3", 1.0), get_or(r, "s_max", 4)));
}

json reduce_s2d_smcsp(qmcsp_context &ctx, const json &r) {
  Oracle o = oracle_for(ctx, r);
  return search_to_json(s2d_smcsp(state_from_json(need(r, "state")), get_or(r, "s_bound", 3), o,
                                  get_or(r, "epsilon", 1e-6), get_or(r, "c3", 1.0)));
}

json reduce_b2u(qmcsp_context &ctx, const json &r) {
  Oracle o = oracle_for(ctx, r);
  B2UResult b = mqcsp_via_umcsp(TruthTable::from_string(need(r, "table")), o, get_or(r, "epsilon", 0.0),
                                get_or(r, "s_max", 6));
  return {{"bracket", bracket_to_json(b.bracket)},
          {"cc_u", b.cc_u},
          {"cc_u_2eps", b.cc_u_2eps},
          {"m", b.m},
          {"witness", circuit_to_json(b.witness)}};
}

json reduce_self(qmcsp_context &ctx, const json &r) {
  json q = r;
  if (!q.contains("gateset")) q["gateset"] = "grot";
  Oracle o = oracle_for(ctx, q);
  SelfReductionConfig cfg;
  cfg.k = get_or(r, "k", cfg.k);
  cfg.h = get_or(r, "h", cfg.h);
  cfg.s_max = get_or(r, "s_max", cfg.s_max);
  SelfReductionResult s = self_reduce_smcsp(state_from_json(need(r, "state")), get_or(r, "epsilon", 0.01), o, cfg);
  json sub = json::array();
  for (const auto &[name, v] : s.sub_values) sub.push_back({{"query", name}, {"value", v == kUnbounded ? json(nullptr) : json(v)}});
  return {{"bracket", bracket_to_json(s.bracket)},
          {"case", s.case_id},
          {"c0_sq", s.c0_sq},
          {"c1_sq", s.c1_sq},
          {"dominant", s.dominant},
          {"k", s.k},
          {"k_star", s.k_star},
          {"h", s.h},
          {"eps_prime", s.eps_prime},
          {"sub_values", sub}};
}

uint64_t seed_of(const qmcsp_context &ctx, const json &r) { return get_or<uint64_t>(r, "seed", ctx.seed); }

json verify_mq(qmcsp_context &ctx, const json &r) {
  Thresholds th = thresholds(r);
  return report_to_json(verify_mqcsp(TruthTable::from_string(need(r, "table")), witness_from(r), th.alpha, th.beta,
                                     get_or<int64_t>(r, "trials", 10000), seed_of(ctx, r)));
}

json verify_sm(qmcsp_context &ctx, const json &r) {
  Thresholds th = thresholds(r);
  return report_to_json(verify_smcsp(state_from_json(need(r, "state")), witness_from(r), th.alpha, th.beta,
                                     get_or<int64_t>(r, "ell", 10000), seed_of(ctx, r)));
}

json verify_um(qmcsp_context &ctx, const json &r) {
  UmcspVerifierConfig cfg;
  cfg.poly1 = get_or(r, "poly1", cfg.poly1);
  cfg.poly2 = get_or(r, "poly2", cfg.poly2);
  cfg.coherency = get_or(r, "coherency", cfg.coherency);
  if (r.contains("cap")) {
    cfg.use_cap = true;
    cfg.cap = r.at("cap").get<double>();
  }
  return report_to_json(
      verify_umcsp(unitary_from_json(need(r, "unitary")), witness_from(r), get_or(r, "beta", 0.5), cfg, seed_of(ctx, r)));
}

json demo_prg(qmcsp_context &ctx, const json &r) {
  json q = r;
  if (!q.contains("gateset")) q["gateset"] = "g0c";
  Oracle o = oracle_for(ctx, q);
  int k = get_or(r, "k", 2), m = get_or(r, "m", 3);
  DistinguisherConfig cfg;
  cfg.t = get_or(r, "t", cfg.t);
  cfg.output_qubit = get_or(r, "output_qubit", cfg.output_qubit);
  cfg.th = {get_or(r, "alpha", cfg.th.alpha), get_or(r, "beta", cfg.th.beta)};
  ComplexityCensus census = classical_census(o.gateset(), m, cfg.t, cfg.output_qubit, get_or(r, "depth", 6));
  int s = r.contains("s_threshold") ? r.at("s_threshold").get<int>() : census_threshold(census);
  DemoPRG d;
  if (r.contains("prg_seed")) {
    std::mt19937_64 rng(r.at("prg_seed").get<uint64_t>());
    d.prg = ToyPRG::random(k, rng);
    d.seed = r.at("prg_seed");
  } else {
    d = select_demo_prg(census, k, s);
  }
  DistinguisherResult res = run_distinguisher_experiment(d.prg, m, s, get_or(r, "n_seeds", 200),
                                                         get_or(r, "n_random", 200), o, seed_of(ctx, r), cfg);
  return {{"prg_seed", d.seed},
          {"prg_table", d.prg.table},
          {"census", census_to_json(census, o.gateset().name())},
          {"experiment", result_to_json(res)}};
}

json demo_finegrained(qmcsp_context &ctx, const json &r) {
  int n = get_or(r, "n", 1);
  std::vector<BipartiteGraph> graphs =
      n == 1 ? all_graphs_n1() : random_graphs(n, get_or(r, "graphs", 200), seed_of(ctx, r));
  std::unique_ptr<Oracle> o;
  if (get_or(r, "circuit_check", false)) {
    json q = r;
    if (!q.contains("gateset")) q["gateset"] = "g0-2q";
    o = std::make_unique<Oracle>(oracle_for(ctx, q));
  }
  EquivalenceReport rep = equivalence_experiment(n, graphs, o.get());
  json p = equivalence_to_json(rep);
  p["table"] = equivalence_table(rep);
  return p;
}

json count(qmcsp_context &ctx, const json &r) {
  auto gs = gateset_for(ctx, r);
  int n = need(r, "n"), t = get_or(r, "t", 0), s = need(r, "s");
  uint64_t enumerated = 0;
  bool do_enum = get_or(r, "enumerate", true);
  if (do_enum) enumerate_circuits(n, t, s, gs, [&](const QuantumCircuit &) { enumerated++; }, ctx.oracle_cfg.budget);
  json p = {{"n", n}, {"t", t}, {"s", s}, {"gateset", gs->name()}, {"closed_form", closed_form_count(*gs, n, t, s)}};
  if (do_enum) p["enumerated"] = enumerated;
  return p;
}

json repro(qmcsp_context &ctx, const json &r) {
  ReproOptions opt;
  opt.seed = seed_of(ctx, r);
  opt.golden_dir = get_or<std::string>(r, "golden_dir", "");
  opt.circuit_check = get_or(r, "circuit_check", false);
  opt.graphs = get_or(r, "graphs", opt.graphs);
  ReproResult res = run_repro(need(r, "suite"), opt);
  return {{"suite", res.suite},
          {"pass", res.pass},
          {"divergent", res.divergent},
          {"markdown", res.markdown},
          {"result", res.payload}};
}

using Handler = std::function<json(qmcsp_context &, const json &)>;

const std::map<std::string, Handler> &handlers() {
  static const std::map<std::string, Handler> h = {
      {"solve.mqcsp", solve_mqcsp},         {"solve.mqcsp_star", solve_mqcsp_star}, {"solve.umcsp", solve_umcsp},
      {"solve.smcsp", solve_smcsp},         {"solve.min_size", solve_min_size},     {"reduce.s2d_umcsp", reduce_s2d_umcsp},
      {"reduce.s2d_smcsp", reduce_s2d_smcsp}, {"reduce.b2u", reduce_b2u},          {"reduce.self", reduce_self},
      {"verify.mqcsp", verify_mq},          {"verify.smcsp", verify_sm},            {"verify.umcsp", verify_um},
      {"demo.prg", demo_prg},               {"demo.finegrained", demo_finegrained}, {"count", count},
      {"repro", repro}};
  return h;
}

json envelope(const qmcsp_context &ctx, const std::string &command, const json &request, json payload, double wall) {
  json cfg = ctx.config;
  cfg["command"] = command;
  cfg["request"] = request;
  return {{"schema_version", QMCSP_SCHEMA_VERSION}, {"config", cfg}, {"payload", std::move(payload)}, {"wall_time", wall}};
}

// Errors raised before a context exists.
thread_local std::string g_error;

int fail(qmcsp_context *ctx, int code, const std::string &msg) {
  (ctx ? ctx->error : g_error) = msg;
  return code;
}

}  // namespace

extern "C" {

int qmcsp_context_new(const char *config_json, qmcsp_context **out) {
  if (!out) return fail(nullptr, QMCSP_ERROR, "null argument");
  *out = nullptr;
  try {
    auto ctx = std::make_unique<qmcsp_context>();
    json c = config_json && *config_json ? json::parse(config_json) : json::object();
    if (!c.is_object()) throw InvalidArgument("config must be a JSON object");
    ctx->gateset = get_or<std::string>(c, "gateset", "g0");
    make_gateset(ctx->gateset);
    ctx->oracle_cfg.budget = get_or<uint64_t>(c, "budget", ctx->oracle_cfg.budget);
    ctx->oracle_cfg.dim_cap = get_or(c, "dim_cap", ctx->oracle_cfg.dim_cap);
    ctx->oracle_cfg.workers = get_or(c, "workers", ctx->oracle_cfg.workers);
    ctx->seed = get_or<uint64_t>(c, "seed", ctx->seed);
    if (c.contains("cache") || std::getenv("QMCSP_CACHE"))
      ctx->cache = std::make_shared<OracleCache>(OracleCache::resolve_path(get_or<std::string>(c, "cache", "")));
    c["gateset"] = ctx->gateset;
    c["budget"] = ctx->oracle_cfg.budget;
    c["dim_cap"] = ctx->oracle_cfg.dim_cap;
    c["workers"] = ctx->oracle_cfg.workers;
    c["seed"] = ctx->seed;
    ctx->config = c;
    *out = ctx.release();
    return QMCSP_OK;
  } catch (const std::exception &e) {
    return fail(nullptr, QMCSP_ERROR, e.what());
  }
}

void qmcsp_context_free(qmcsp_context *ctx) { delete ctx; }

int qmcsp_run(qmcsp_context *ctx, const char *command, const char *request_json, char **response) {
  if (response) *response = nullptr;
  if (!ctx || !command || !response) return fail(ctx, QMCSP_ERROR, "null argument");
  ctx->error.clear();
  auto it = handlers().find(command);
  if (it == handlers().end()) return fail(ctx, QMCSP_ERROR, std::string("unknown command '") + command + "'");
  json request;
  auto t0 = std::chrono::steady_clock::now();
  auto wall = [&]() { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };
  try {
    request = request_json && *request_json ? json::parse(request_json) : json::object();
    if (!request.is_object()) throw InvalidArgument("request must be a JSON object");
    json payload = it->second(*ctx, request);
    *response = dup_string(envelope(*ctx, command, request, std::move(payload), wall()).dump());
    return QMCSP_OK;
  } catch (const Unpromised &u) {
    *response = dup_string(envelope(*ctx, command, request, u.payload, wall()).dump());
    return fail(ctx, QMCSP_PROMISE, "instance lies in the promise gap");
  } catch (const PromiseViolation &e) {
    json p = {{"error", e.what()}};
    *response = dup_string(envelope(*ctx, command, request, p, wall()).dump());
    return fail(ctx, QMCSP_PROMISE, e.what());
  } catch (const ResourceError &e) {
    return fail(ctx, QMCSP_BUDGET, e.what());
  } catch (const std::exception &e) {
    return fail(ctx, QMCSP_ERROR, e.what());
  }
}

const char *qmcsp_last_error(const qmcsp_context *ctx) { return ctx ? ctx->error.c_str() : g_error.c_str(); }

void qmcsp_string_free(char *s) { std::free(s); }

const char *qmcsp_version(void) { return "0.1.0"; }

}  // extern "C"
