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

// Command-line front end over the C API.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "qmcsp/qmcsp.h"

#ifndef QMCSP_GOLDEN_DIR
#define QMCSP_GOLDEN_DIR ""
#endif

using json = nlohmann::json;

namespace {

struct Global {
  std::optional<std::string> gateset;
  uint64_t seed = 7;
  std::optional<uint64_t> budget;
  std::optional<int> dim_cap;
  int workers = 1;
  std::string out = "qmcsp_out";
  std::optional<std::string> cache;
  bool quiet = false;
};

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Usage("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json load_json(const std::string &path) {
  try {
    return json::parse(slurp(path));
  } catch (const json::parse_error &e) {
    throw Usage(path + ": " + e.what());
  }
}

// A truth table file holds the bit string, or a JSON object with "table".
std::string load_table(const std::string &path) {
  std::string s = slurp(path);
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) throw Usage(path + " is empty");
  if (s[a] == '{') return load_json(path).at("table").get<std::string>();
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

// A command bound to its request builder.
struct Command {
  std::string name;
  json request = json::object();
  std::function<void()> finish;
};

int run(const Global &g, Command &cmd) {
  if (cmd.finish) cmd.finish();
  json cfg = {{"seed", g.seed}, {"workers", g.workers}};
  if (g.gateset) {
    cfg["gateset"] = *g.gateset;
    cmd.request["gateset"] = *g.gateset;
  }
  if (g.budget) cfg["budget"] = *g.budget;
  if (g.dim_cap) cfg["dim_cap"] = *g.dim_cap;
  if (g.cache) cfg["cache"] = *g.cache;
  qmcsp_context *ctx = nullptr;
  if (qmcsp_context_new(cfg.dump().c_str(), &ctx) != QMCSP_OK) {
    std::cerr << "error: " << qmcsp_last_error(nullptr) << "\n";
    return QMCSP_ERROR;
  }
  char *resp = nullptr;
  int code = qmcsp_run(ctx, cmd.name.c_str(), cmd.request.dump().c_str(), &resp);
  if (code != QMCSP_OK) std::cerr << "error: " << qmcsp_last_error(ctx) << "\n";
  if (resp) {
    json env = json::parse(resp);
    qmcsp_string_free(resp);
    std::filesystem::create_directories(g.out);
    std::string file = cmd.name;
    std::replace(file.begin(), file.end(), '.', '_');
    std::filesystem::path path = std::filesystem::path(g.out) / (file + ".json");
    std::ofstream(path) << env.dump(2) << "\n";
    const json &p = env["payload"];
    if (cmd.name == "repro") {
      std::filesystem::path md = std::filesystem::path(g.out) / ("repro_" + p["suite"].get<std::string>() + ".md");
      std::ofstream(md) << p["markdown"].get<std::string>();
      if (!g.quiet) std::cout << p["markdown"].get<std::string>();
      if (!p["pass"].get<bool>()) {
        std::cerr << "divergent entries:\n";
        for (const auto &d : p["divergent"]) std::cerr << "  " << d.get<std::string>() << "\n";
        code = QMCSP_ERROR;
      }
    } else if (!g.quiet) {
      std::cout << p.dump(2) << "\n";
    }
    if (!g.quiet) std::cerr << "wrote " << path.string() << "\n";
  }
  qmcsp_context_free(ctx);
  return code;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Minimum quantum circuit size toolkit"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--gateset", g.gateset, "Gate set: g0, g0c, g0-2q, grot, grot<d>");
  app.add_option("--seed", g.seed, "RNG seed")->capture_default_str();
  app.add_option("--budget", g.budget, "Enumeration budget (circuits)");
  app.add_option("--dim-cap", g.dim_cap, "Largest Hilbert space dimension");
  app.add_option("--workers", g.workers, "Worker threads")->capture_default_str();
  app.add_option("--out", g.out, "Directory for result envelopes")->capture_default_str();
  app.add_option("--cache", g.cache, "Oracle cache file (QMCSP_CACHE overrides)");
  app.add_flag("--quiet", g.quiet, "Only write files");
  app.set_version_flag("--version", std::string(qmcsp_version()));

  Command cmd;
  std::string input, witness, table;
  auto table_from = [&](CLI::App *sc) {
    sc->add_option("--input", input, "Truth table file");
    sc->add_option("--table", table, "Truth table as a bit string");
    return [&]() {
      if (!table.empty()) return table;
      if (!input.empty()) return load_table(input);
      throw Usage("need --input or --table");
    };
  };
  auto bind = [&](CLI::App *sc, const std::string &name, std::function<void(json &)> build) {
    sc->callback([&cmd, name, build] {
      cmd.name = name;
      cmd.finish = [&cmd, build] { build(cmd.request); };
    });
  };
  auto opt = [](CLI::App *sc, const std::string &flag, auto &var, const std::string &help) {
    sc->add_option(flag, var, help)->capture_default_str();
  };

  // solve
  auto *solve = app.add_subcommand("solve", "Exact oracles")->require_subcommand(1);
  int s = 0, t = 0, oq = 0, s_max = 4;
  double alpha = 1.0, beta = 0.5, eps = 0.0;
  {
    auto *sc = solve->add_subcommand("mqcsp", "Decide MQCSP for a truth table");
    auto tab = table_from(sc);
    sc->add_option("--s", s, "Size bound")->required();
    opt(sc, "--t", t, "Ancilla qubits");
    opt(sc, "--alpha", alpha, "Yes threshold");
    opt(sc, "--beta", beta, "No threshold");
    opt(sc, "--output-qubit", oq, "Measured qubit");
    bind(sc, "solve.mqcsp", [&, tab](json &r) {
      r = {{"table", tab()}, {"s", s}, {"t", t}, {"alpha", alpha}, {"beta", beta}, {"output_qubit", oq}};
    });
  }
  {
    auto *sc = solve->add_subcommand("mqcsp-star", "Decide MQCSP* for a partial table ('*' entries)");
    auto tab = table_from(sc);
    sc->add_option("--s", s, "Size bound")->required();
    opt(sc, "--t", t, "Ancilla qubits");
    opt(sc, "--output-qubit", oq, "Measured qubit");
    bind(sc, "solve.mqcsp_star", [&, tab](json &r) { r = {{"table", tab()}, {"s", s}, {"t", t}, {"output_qubit", oq}}; });
  }
  for (const char *kind : {"umcsp", "smcsp"}) {
    std::string k = kind;
    bool is_u = k == "umcsp";
    auto *sc = solve->add_subcommand(k, is_u ? "Decide UMCSP for a unitary" : "Decide SMCSP for a state");
    sc->add_option("--input", input, is_u ? "Unitary JSON {n, re, im}" : "State JSON {n, re, im}")->required();
    sc->add_option("--s", s, "Size bound")->required();
    opt(sc, "--t", t, "Ancilla qubits");
    opt(sc, "--alpha", alpha, "Yes threshold");
    opt(sc, "--beta", beta, "No threshold");
    bind(sc, "solve." + k, [&, is_u](json &r) {
      r = {{is_u ? "unitary" : "state", load_json(input)}, {"s", s}, {"t", t}, {"alpha", alpha}, {"beta", beta}};
    });
  }
  std::string unitary_file, state_file;
  {
    auto *sc = solve->add_subcommand("min-size", "Exhaustive minimum size");
    sc->add_option("--table", table, "Truth table as a bit string");
    sc->add_option("--unitary", unitary_file, "Unitary JSON file");
    sc->add_option("--state", state_file, "State JSON file");
    opt(sc, "--epsilon", eps, "Precision");
    opt(sc, "--t", t, "Ancilla qubits");
    opt(sc, "--s-max", s_max, "Largest size searched");
    opt(sc, "--output-qubit", oq, "Measured qubit");
    bind(sc, "solve.min_size", [&](json &r) {
      r = {{"epsilon", eps}, {"t", t}, {"s_max", s_max}, {"output_qubit", oq}};
      if (!table.empty())
        r["table"] = table;
      else if (!unitary_file.empty())
        r["unitary"] = load_json(unitary_file);
      else if (!state_file.empty())
        r["state"] = load_json(state_file);
      else
        throw Usage("need --table, --unitary or --state");
    });
  }

  // reduce
  auto *reduce = app.add_subcommand("reduce", "Reductions")->require_subcommand(1);
  double c3 = 1.0, eps_s2d = 1e-6, eps_b2u = 0.0, eps_self = 0.01;
  int s_bound = 3, k = 7, h = 2, b2u_max = 6, self_max = 5;
  {
    auto *sc = reduce->add_subcommand("s2d-umcsp", "Search-to-decision for a unitary");
    sc->add_option("--input", input, "Unitary JSON file")->required();
    opt(sc, "--epsilon", eps_s2d, "Precision");
    opt(sc, "--c3", c3, "Constant in the 2^{-c3 n} slack");
    opt(sc, "--s-max", s_max, "Largest size searched");
    bind(sc, "reduce.s2d_umcsp", [&](json &r) {
      r = {{"unitary", load_json(input)}, {"epsilon", eps_s2d}, {"c3", c3}, {"s_max", s_max}};
    });
  }
  {
    auto *sc = reduce->add_subcommand("s2d-smcsp", "Search-to-decision for a state");
    sc->add_option("--input", input, "State JSON file")->required();
    opt(sc, "--epsilon", eps_s2d, "Precision");
    opt(sc, "--c3", c3, "Constant in the 2^{-c3 n} slack");
    opt(sc, "--s-bound", s_bound, "Known size bound");
    bind(sc, "reduce.s2d_smcsp", [&](json &r) {
      r = {{"state", load_json(input)}, {"epsilon", eps_s2d}, {"c3", c3}, {"s_bound", s_bound}};
    });
  }
  {
    auto *sc = reduce->add_subcommand("b2u", "Bracket CC(f) through the unitary encoding");
    auto tab = table_from(sc);
    opt(sc, "--epsilon", eps_b2u, "Precision");
    opt(sc, "--s-max", b2u_max, "Largest unitary size searched");
    bind(sc, "reduce.b2u", [&, tab](json &r) {
      r = {{"table", tab()}, {"epsilon", eps_b2u}, {"s_max", b2u_max}};
    });
  }
  {
    auto *sc = reduce->add_subcommand("self", "Self-reduction bracket for a state");
    sc->add_option("--input", input, "State JSON file")->required();
    opt(sc, "--epsilon", eps_self, "Precision");
    opt(sc, "--k", k, "Controlled gate overhead");
    opt(sc, "--prep", h, "Preparation overhead");
    opt(sc, "--s-max", self_max, "Sub-oracle size limit");
    bind(sc, "reduce.self", [&](json &r) {
      r = {{"state", load_json(input)}, {"epsilon", eps_self}, {"k", k}, {"h", h}, {"s_max", self_max}};
    });
  }

  // verify
  auto *verify = app.add_subcommand("verify", "Witness verifiers")->require_subcommand(1);
  int64_t trials = 10000;
  int poly1 = 10000, poly2 = 10000;
  std::optional<double> cap;
  bool no_coherency = false;
  {
    auto *sc = verify->add_subcommand("mqcsp", "Repeated-measurement verifier");
    auto tab = table_from(sc);
    sc->add_option("--witness", witness, "Circuit JSON file")->required();
    opt(sc, "--alpha", alpha, "Yes threshold");
    opt(sc, "--beta", beta, "No threshold");
    opt(sc, "--trials", trials, "Trials per input");
    bind(sc, "verify.mqcsp", [&, tab](json &r) {
      r = {{"table", tab()}, {"witness", load_json(witness)}, {"alpha", alpha}, {"beta", beta}, {"trials", trials}};
    });
  }
  {
    auto *sc = verify->add_subcommand("smcsp", "Swap-test verifier");
    sc->add_option("--input", input, "State JSON file")->required();
    sc->add_option("--witness", witness, "Circuit JSON file")->required();
    opt(sc, "--alpha", alpha, "Yes threshold");
    opt(sc, "--beta", beta, "No threshold");
    opt(sc, "--ell", trials, "Swap tests");
    bind(sc, "verify.smcsp", [&](json &r) {
      r = {{"state", load_json(input)}, {"witness", load_json(witness)}, {"alpha", alpha}, {"beta", beta}, {"ell", trials}};
    });
  }
  {
    auto *sc = verify->add_subcommand("umcsp", "Basis and coherency verifier");
    sc->add_option("--input", input, "Unitary JSON file")->required();
    sc->add_option("--witness", witness, "Circuit JSON file")->required();
    opt(sc, "--beta", beta, "No threshold");
    opt(sc, "--poly1", poly1, "Samples per basis check");
    opt(sc, "--poly2", poly2, "Samples per pair check");
    sc->add_option("--cap", cap, "Use max(formula, cap) as the rejection threshold");
    sc->add_flag("--no-coherency", no_coherency, "Skip the pair checks");
    bind(sc, "verify.umcsp", [&](json &r) {
      r = {{"unitary", load_json(input)}, {"witness", load_json(witness)}, {"beta", beta},
           {"poly1", poly1},              {"poly2", poly2},                 {"coherency", !no_coherency}};
      if (cap) r["cap"] = *cap;
    });
  }

  // demo
  auto *demo = app.add_subcommand("demo", "Demonstrations")->require_subcommand(1);
  int pk = 2, pm = 3, depth = 6, n_seeds = 200, n_random = 200, fn = 1, graphs = 200;
  std::optional<int> s_threshold;
  std::optional<uint64_t> prg_seed;
  bool circuit_check = false;
  {
    auto *sc = demo->add_subcommand("prg", "Complexity-based PRG distinguisher");
    opt(sc, "--k", pk, "Seed length");
    opt(sc, "--m", pm, "Table inputs");
    opt(sc, "--depth", depth, "Census depth");
    sc->add_option("--s-threshold", s_threshold, "Size threshold (default: census median - 1)");
    sc->add_option("--prg-seed", prg_seed, "Random PRG seed (default: the demo selection rule)");
    opt(sc, "--n-seeds", n_seeds, "PRG tables sampled");
    opt(sc, "--n-random", n_random, "Random tables sampled");
    bind(sc, "demo.prg", [&](json &r) {
      r = {{"k", pk}, {"m", pm}, {"depth", depth}, {"n_seeds", n_seeds}, {"n_random", n_random}};
      if (s_threshold) r["s_threshold"] = *s_threshold;
      if (prg_seed) r["prg_seed"] = *prg_seed;
    });
  }
  {
    auto *sc = demo->add_subcommand("finegrained", "Permutation formula vs block independent set");
    opt(sc, "--n", fn, "Graph size (1 or 2)");
    opt(sc, "--graphs", graphs, "Random graphs at n = 2");
    sc->add_flag("--circuit-check", circuit_check, "Also decide MQCSP* on gamma (slow)");
    bind(sc, "demo.finegrained", [&](json &r) {
      r = {{"n", fn}, {"graphs", graphs}, {"circuit_check", circuit_check}};
    });
  }

  // count
  bool no_enumerate = false;
  int cn = 1;
  {
    auto *sc = app.add_subcommand("count", "Closed-form and enumerated circuit counts");
    sc->add_option("--n", cn, "Input qubits")->required();
    opt(sc, "--t", t, "Ancilla qubits");
    sc->add_option("--s", s, "Circuit size")->required();
    sc->add_flag("--no-enumerate", no_enumerate, "Closed form only");
    bind(sc, "count", [&](json &r) { r = {{"n", cn}, {"t", t}, {"s", s}, {"enumerate", !no_enumerate}}; });
  }

  // repro
  std::string suite, golden = QMCSP_GOLDEN_DIR;
  {
    auto *sc = app.add_subcommand("repro", "Re-run an acceptance experiment with pinned seeds");
    sc->add_option("suite", suite, "sandwich, s2d, verifiers, prg or finegrained")->required();
    sc->add_option("--golden", golden, "Golden file directory")->capture_default_str();
    sc->add_flag("--circuit-check", circuit_check, "finegrained: decide MQCSP* at n = 1 (slow)");
    opt(sc, "--graphs", graphs, "finegrained: random graphs at n = 2");
    bind(sc, "repro", [&](json &r) {
      if (suite.empty()) throw Usage("suite name is empty");
      r = {{"suite", suite}, {"golden_dir", golden}, {"circuit_check", circuit_check}, {"graphs", graphs}, {"seed", g.seed}};
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : QMCSP_ERROR;
  }
  try {
    return run(g, cmd);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return QMCSP_ERROR;
  }
}
