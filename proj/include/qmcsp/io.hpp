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

#ifndef QMCSP_IO_HPP
#define QMCSP_IO_HPP

#include <memory>
#include <string>

#include "json.hpp"
#include "qmcsp/oracles.hpp"
#include "qmcsp/qcore.hpp"

namespace qmcsp {

using json = nlohmann::json;

json circuit_to_json(const QuantumCircuit &c);
// Named gate sets are rebuilt with make_gateset; anything else ("prep" or a
// custom name) is rebuilt gate by gate from the labels.
QuantumCircuit circuit_from_json(const json &j);
// Resolves labels against an existing gate set instead.
QuantumCircuit circuit_from_json(const json &j, std::shared_ptr<const GateSet> gs);

json unitary_to_json(const UnitaryMatrix &u);
UnitaryMatrix unitary_from_json(const json &j);
json state_to_json(const PureState &s);
PureState state_from_json(const json &j);

json verdict_to_json(const OracleVerdict &v);
OracleVerdict verdict_from_json(const json &j, std::shared_ptr<const GateSet> gs);
json certificate_to_json(const ComplexityCertificate &c);

// Rounds every floating point value to 12 significant digits. Object keys are
// already sorted by nlohmann::json.
json canonical(const json &j);
std::string canonical_dump(const json &j);

json read_json_file(const std::string &path);
void write_text_file(const std::string &path, const std::string &text);

}  // namespace qmcsp

#endif
