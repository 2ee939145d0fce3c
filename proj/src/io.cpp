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

#include "qmcsp/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace qmcsp {

namespace {

bool is_named_gateset(const std::string &name) {
  try {
    make_gateset(name);
    return true;
  } catch (const InvalidArgument &) {
    return false;
  }
}

QuantumCircuit build_ops(const json &j, std::shared_ptr<const GateSet> gs, GateSet *grow) {
  QuantumCircuit c(j.at("n").get<int>(), j.value("t", 0), gs);
  c.output_qubit = j.value("output_qubit", 0);
  for (auto &op : j.at("ops")) {
    std::string label = op.at("g").get<std::string>();
    int g = grow ? grow->ensure(label) : gs->index_of(label);
    if (g < 0) throw InvalidArgument("gate " + label + " is not in gate set " + gs->name());
    c.add(g, op.at("q").get<std::vector<int>>());
  }
  c.validate();
  return c;
}

}  // namespace

json circuit_to_json(const QuantumCircuit &c) {
  json j;
  j["n"] = c.n;
  j["t"] = c.t;
  j["gateset"] = c.gateset ? c.gateset->name() : "";
  if (c.output_qubit != 0) j["output_qubit"] = c.output_qubit;
  json ops = json::array();
  for (auto &op : c.ops) {
    std::vector<int> q(op.q.begin(), op.q.begin() + c.arity(op));
    ops.push_back({{"g", c.gate(op).label}, {"q", q}});
  }
  j["ops"] = ops;
  return j;
}

QuantumCircuit circuit_from_json(const json &j) {
  std::string name = j.value("gateset", std::string("g0"));
  if (is_named_gateset(name)) return build_ops(j, std::make_shared<GateSet>(make_gateset(name)), nullptr);
  auto gs = std::make_shared<GateSet>(name, std::vector<GateDef>{});
  return build_ops(j, gs, gs.get());
}

QuantumCircuit circuit_from_json(const json &j, std::shared_ptr<const GateSet> gs) { return build_ops(j, std::move(gs), nullptr); }

json unitary_to_json(const UnitaryMatrix &u) {
  json re = json::array(), im = json::array();
  for (int64_t r = 0; r < u.m.rows(); r++) {
    json rr = json::array(), ii = json::array();
    for (int64_t c = 0; c < u.m.cols(); c++) {
      rr.push_back(u.m(r, c).real());
      ii.push_back(u.m(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  return {{"n", u.n}, {"re", re}, {"im", im}};
}

UnitaryMatrix unitary_from_json(const json &j) {
  UnitaryMatrix u;
  u.n = j.at("n").get<int>();
  if (u.n < 0 || u.n > 12) throw DimensionError("unitary qubit count out of range");
  int64_t d = int64_t{1} << u.n;
  auto &re = j.at("re");
  if (static_cast<int64_t>(re.size()) != d) throw DimensionError("unitary has " + std::to_string(re.size()) + " rows, expected " + std::to_string(d));
  const json *im = j.contains("im") ? &j.at("im") : nullptr;
  u.m = Mat::Zero(d, d);
  for (int64_t r = 0; r < d; r++) {
    if (static_cast<int64_t>(re[r].size()) != d) throw DimensionError("unitary row has wrong length");
    for (int64_t c = 0; c < d; c++) u.m(r, c) = cplx(re[r][c].get<double>(), im ? (*im)[r][c].get<double>() : 0.0);
  }
  u.validate();
  return u;
}

json state_to_json(const PureState &s) {
  json re = json::array(), im = json::array();
  for (int64_t i = 0; i < s.amps.size(); i++) {
    re.push_back(s.amps(i).real());
    im.push_back(s.amps(i).imag());
  }
  return {{"n", s.n}, {"re", re}, {"im", im}};
}

PureState state_from_json(const json &j) {
  PureState s;
  s.n = j.at("n").get<int>();
  if (s.n < 0 || s.n > 20) throw DimensionError("state qubit count out of range");
  int64_t d = int64_t{1} << s.n;
  auto &re = j.at("re");
  if (static_cast<int64_t>(re.size()) != d) throw DimensionError("state has " + std::to_string(re.size()) + " amplitudes, expected " + std::to_string(d));
  const json *im = j.contains("im") ? &j.at("im") : nullptr;
  s.amps = Vec::Zero(d);
  for (int64_t i = 0; i < d; i++) s.amps(i) = cplx(re[i].get<double>(), im ? (*im)[i].get<double>() : 0.0);
  s.validate();
  return s;
}

json verdict_to_json(const OracleVerdict &v) {
  json j;
  j["kind"] = to_string(v.kind);
  j["verdict"] = to_string(v.verdict);
  j["best_score"] = v.best_score;
  j["witnessed_score"] = v.witnessed_score;
  j["path"] = v.path;
  j["searched_size"] = v.searched_size;
  j["nodes"] = v.nodes;
  j["unitarity_error"] = v.unitarity_error;
  j["lightcone_pruned"] = v.lightcone_pruned;
  j["best_circuit"] = v.best_circuit ? circuit_to_json(*v.best_circuit) : json(nullptr);
  return j;
}

OracleVerdict verdict_from_json(const json &j, std::shared_ptr<const GateSet> gs) {
  OracleVerdict v;
  std::string kind = j.at("kind");
  for (auto k : {ProblemKind::MQCSP, ProblemKind::MQCSPStar, ProblemKind::MQCSPGap, ProblemKind::UMCSP, ProblemKind::SMCSP})
    if (to_string(k) == kind) v.kind = k;
  std::string verdict = j.at("verdict");
  v.verdict = verdict == "Yes" ? Verdict::Yes : verdict == "No" ? Verdict::No : Verdict::Unpromised;
  v.best_score = j.at("best_score");
  v.witnessed_score = j.value("witnessed_score", 0.0);
  v.path = j.value("path", std::string("exact"));
  v.searched_size = j.value("searched_size", 0);
  v.nodes = j.value("nodes", uint64_t{0});
  v.unitarity_error = j.value("unitarity_error", 0.0);
  v.lightcone_pruned = j.value("lightcone_pruned", false);
  if (!j.at("best_circuit").is_null()) v.best_circuit = circuit_from_json(j.at("best_circuit"), std::move(gs));
  return v;
}

json certificate_to_json(const ComplexityCertificate &c) {
  return {{"object_kind", c.object_kind},
          {"epsilon", c.epsilon},
          {"min_size", c.min_size},
          {"witness", circuit_to_json(c.witness)},
          {"achieved_fidelity", c.achieved_fidelity},
          {"ancilla_used", c.ancilla_used}};
}

json canonical(const json &j) {
  if (j.is_object()) {
    json out = json::object();
    for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = canonical(it.value());
    return out;
  }
  if (j.is_array()) {
    json out = json::array();
    for (auto &e : j) out.push_back(canonical(e));
    return out;
  }
  if (j.is_number_float()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", j.get<double>());
    double v = std::stod(buf);
    if (v == 0.0) v = 0.0;
    return v;
  }
  return j;
}

std::string canonical_dump(const json &j) { return canonical(j).dump(2) + "\n"; }

json read_json_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error &e) {
    throw InvalidArgument("invalid JSON in " + path + ": " + e.what());
  }
}

void write_text_file(const std::string &path, const std::string &text) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << text;
}

}  // namespace qmcsp
