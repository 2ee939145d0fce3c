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

#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "json.hpp"

using json = nlohmann::json;

namespace {

class Ctx {
 public:
  explicit Ctx(const char *cfg = nullptr) { rc_ = qmcsp_context_new(cfg, &ctx_); }
  ~Ctx() { qmcsp_context_free(ctx_); }
  int rc() const { return rc_; }
  qmcsp_context *get() { return ctx_; }

  // Runs a command; fills env when a response comes back.
  int run(const std::string &cmd, const json &req, json *env = nullptr) {
    char *resp = nullptr;
    int rc = qmcsp_run(ctx_, cmd.c_str(), req.dump().c_str(), &resp);
    if (resp) {
      if (env) *env = json::parse(resp);
      qmcsp_string_free(resp);
    }
    return rc;
  }
  std::string error() const { return qmcsp_last_error(ctx_); }

 private:
  qmcsp_context *ctx_ = nullptr;
  int rc_ = -1;
};

json identity(int n) {
  int d = 1 << n;
  json re = json::array(), im = json::array();
  for (int i = 0; i < d; i++) {
    json r = json::array(), z = json::array();
    for (int j = 0; j < d; j++) {
      r.push_back(i == j ? 1.0 : 0.0);
      z.push_back(0.0);
    }
    re.push_back(r);
    im.push_back(z);
  }
  return {{"n", n}, {"re", re}, {"im", im}};
}

json empty_circuit(int n) { return {{"n", n}, {"t", 0}, {"gateset", "g0"}, {"ops", json::array()}}; }

}  // namespace

TEST(CApi, Version) { EXPECT_STREQ(qmcsp_version(), "0.1.0"); }

TEST(CApi, ContextDefaults) {
  Ctx c;
  ASSERT_EQ(c.rc(), QMCSP_OK);
  json env;
  ASSERT_EQ(c.run("count", {{"n", 1}, {"s", 1}}, &env), QMCSP_OK);
  EXPECT_EQ(env["schema_version"], QMCSP_SCHEMA_VERSION);
  EXPECT_EQ(env["config"]["gateset"], "g0");
  EXPECT_EQ(env["config"]["budget"], 1000000000ULL);
  EXPECT_EQ(env["config"]["command"], "count");
  EXPECT_TRUE(env["wall_time"].is_number());
  // Four one-qubit gates fit on a single wire.
  EXPECT_EQ(env["payload"]["closed_form"], 4);
  EXPECT_EQ(env["payload"]["enumerated"], 4);
}

TEST(CApi, UnknownGateSetNamesAvailableSets) {
  qmcsp_context *ctx = nullptr;
  EXPECT_EQ(qmcsp_context_new(R"({"gateset": "nope"})", &ctx), QMCSP_ERROR);
  EXPECT_EQ(ctx, nullptr);
  std::string msg = qmcsp_last_error(nullptr);
  EXPECT_NE(msg.find("g0c"), std::string::npos) << msg;
  EXPECT_NE(msg.find("grot"), std::string::npos) << msg;
}

TEST(CApi, BadJsonAndCommand) {
  Ctx c;
  char *resp = reinterpret_cast<char *>(1);
  EXPECT_EQ(qmcsp_run(c.get(), "count", "{not json", &resp), QMCSP_ERROR);
  EXPECT_EQ(resp, nullptr);
  EXPECT_FALSE(c.error().empty());
  EXPECT_EQ(c.run("nosuch", json::object()), QMCSP_ERROR);
  EXPECT_NE(c.error().find("nosuch"), std::string::npos);
  EXPECT_EQ(c.run("solve.mqcsp", {{"s", 1}}), QMCSP_ERROR);
  EXPECT_NE(c.error().find("table"), std::string::npos);
  EXPECT_EQ(qmcsp_run(nullptr, "count", "{}", &resp), QMCSP_ERROR);
}

TEST(CApi, SolveAnd) {
  Ctx c;
  json env;
  json req = {{"table", "0001"}, {"s", 1}, {"t", 1}, {"alpha", 1.0}, {"beta", 0.66}, {"output_qubit", 2}};
  ASSERT_EQ(c.run("solve.mqcsp", req, &env), QMCSP_OK) << c.error();
  EXPECT_EQ(env["payload"]["verdict"], "Yes");
  EXPECT_EQ(env["payload"]["best_circuit"]["ops"][0]["g"], "Toffoli");
  EXPECT_EQ(env["config"]["request"], req);
  req["s"] = 0;
  ASSERT_EQ(c.run("solve.mqcsp", req, &env), QMCSP_OK);
  EXPECT_EQ(env["payload"]["verdict"], "No");
}

TEST(CApi, PromiseGapReturnsEnvelope) {
  Ctx c;
  json env;
  double a = M_PI / 16;
  json st = {{"n", 1}, {"re", {std::cos(a), std::sin(a)}}, {"im", {0.0, 0.0}}};
  EXPECT_EQ(c.run("solve.smcsp", {{"state", st}, {"s", 0}, {"alpha", 0.99}, {"beta", 0.9}}, &env), QMCSP_PROMISE);
  EXPECT_EQ(env["payload"]["verdict"], "Unpromised");
  EXPECT_FALSE(c.error().empty());
}

TEST(CApi, BudgetCode) {
  Ctx c(R"({"budget": 10})");
  json env = json::object();
  EXPECT_EQ(c.run("solve.min_size", {{"table", "0110"}, {"s_max", 4}}, &env), QMCSP_BUDGET);
  EXPECT_TRUE(env.empty());
  // Request-level budget wins over the context.
  EXPECT_EQ(c.run("solve.min_size", {{"table", "0110"}, {"s_max", 1}, {"budget", 1000000}}, &env), QMCSP_OK)
      << c.error();
}

TEST(CApi, VerifyUmcspDims) {
  Ctx c;
  json env;
  EXPECT_EQ(c.run("verify.umcsp", {{"unitary", identity(2)}, {"witness", empty_circuit(1)}}), QMCSP_ERROR);
  ASSERT_EQ(c.run("verify.umcsp", {{"unitary", identity(1)}, {"witness", empty_circuit(1)}}, &env), QMCSP_OK);
  EXPECT_EQ(env["payload"]["verdict"], "Accept");
}

TEST(CApi, SeedsReproduce) {
  Ctx c(R"({"seed": 11})");
  json req = {{"table", "01"}, {"witness", empty_circuit(1)}, {"alpha", 0.9}, {"beta", 0.6}, {"trials", 100}};
  json a, b, d;
  ASSERT_EQ(c.run("verify.mqcsp", req, &a), QMCSP_OK) << c.error();
  ASSERT_EQ(c.run("verify.mqcsp", req, &b), QMCSP_OK);
  EXPECT_EQ(a["payload"], b["payload"]);
  EXPECT_EQ(a["payload"]["seed"], 11);
  req["seed"] = 12;
  ASSERT_EQ(c.run("verify.mqcsp", req, &d), QMCSP_OK);
  EXPECT_EQ(d["payload"]["seed"], 12);
}

TEST(CApi, Reductions) {
  Ctx c;
  json env;
  ASSERT_EQ(c.run("reduce.b2u", {{"table", "10"}, {"s_max", 3}}, &env), QMCSP_OK) << c.error();
  int lo = env["payload"]["bracket"]["lo"], hi = env["payload"]["bracket"]["hi"];
  // NOT needs one X on a single wire.
  EXPECT_LE(lo, 1);
  EXPECT_GE(hi, 1);
  double r = std::sqrt(0.5);
  json plus = {{"n", 1}, {"re", {r, r}}, {"im", {0.0, 0.0}}};
  ASSERT_EQ(c.run("reduce.s2d_smcsp", {{"state", plus}, {"s_bound", 1}}, &env), QMCSP_OK) << c.error();
  EXPECT_EQ(env["payload"]["circuit"]["ops"].size(), 1u);
  EXPECT_GE(env["payload"]["fidelity"].get<double>(), env["payload"]["bound"].get<double>());
}

TEST(CApi, FinegrainedDemo) {
  Ctx c;
  json env;
  ASSERT_EQ(c.run("demo.finegrained", {{"n", 2}, {"graphs", 20}, {"seed", 3}}, &env), QMCSP_OK) << c.error();
  EXPECT_EQ(env["payload"]["graphs"], 20);
  EXPECT_EQ(env["payload"]["violations_formula_bpis"], 0);
}

TEST(CApi, ReproUnknownSuite) {
  Ctx c;
  EXPECT_EQ(c.run("repro", {{"suite", ""}}), QMCSP_ERROR);
  EXPECT_EQ(c.run("repro", {{"suite", "nosuch"}}), QMCSP_ERROR);
  EXPECT_NE(c.error().find("sandwich"), std::string::npos);
}
