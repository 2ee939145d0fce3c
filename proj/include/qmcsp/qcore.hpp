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

#ifndef QMCSP_QCORE_HPP
#define QMCSP_QCORE_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qmcsp {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Error hierarchy. The C API maps these onto integer codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class DimensionError : public Error {
 public:
  using Error::Error;
};
class InvalidArgument : public Error {
 public:
  using Error::Error;
};
class ResourceError : public Error {
 public:
  using Error::Error;
};
class PromiseViolation : public Error {
 public:
  using Error::Error;
};
class NotSynthesizable : public Error {
 public:
  NotSynthesizable(const std::string &msg, double best) : Error(msg), best_fidelity(best) {}
  double best_fidelity;
};

struct GateDef {
  std::string label;
  int arity = 1;
  Mat matrix;
  // Classical gates map basis states to basis states; perm[i] is the image of i.
  bool classical = false;
  std::vector<int> perm;
};

// Builds a gate from its label. Fixed labels: I, X, Y, Z, H, S, Sdg, T, Tdg,
// CNOT, CNOT0, CZ, SWAP, Toffoli. Parametric labels: RX(a), RY(a), RZ(a),
// PH(a) = diag(1, e^{ia}), P<bits>(a) = phase e^{ia} on the matching basis
// state, C<bits>RY(a) = RY on the last qubit when the controls match <bits>.
// An argument written "k/m" is a fraction of a full turn (2*pi*k/m), anything
// else is radians.
GateDef gate_from_label(const std::string &label);

class GateSet {
 public:
  GateSet() = default;
  GateSet(std::string name, std::vector<GateDef> gates);

  const std::string &name() const { return name_; }
  const std::vector<GateDef> &gates() const { return gates_; }
  const GateDef &gate(int i) const { return gates_.at(i); }
  int size() const { return static_cast<int>(gates_.size()); }
  int max_arity() const;
  // -1 if absent.
  int index_of(const std::string &label) const;
  // Returns the index, appending the gate if it is not present yet.
  int ensure(const std::string &label);
  // Stable across runs: FNV-1a over labels and rounded matrix entries.
  uint64_t hash() const;

 private:
  std::string name_;
  std::vector<GateDef> gates_;
};

// "g0", "g0c", "g0-2q", "grot" (angle grid 2^3) and "grot<d>".
GateSet make_gateset(const std::string &name);
std::vector<std::string> available_gatesets();

struct Op {
  int gate = 0;
  std::array<int, 3> q{0, 0, 0};
};

class QuantumCircuit {
 public:
  QuantumCircuit() = default;
  QuantumCircuit(int n, int t, std::shared_ptr<const GateSet> gs);

  int n = 0;
  int t = 0;
  int output_qubit = 0;
  std::shared_ptr<const GateSet> gateset;
  std::vector<Op> ops;

  int size() const { return static_cast<int>(ops.size()); }
  int width() const { return n + t; }
  int arity(const Op &op) const { return gateset->gate(op.gate).arity; }
  const GateDef &gate(const Op &op) const { return gateset->gate(op.gate); }
  void add(int gate, std::initializer_list<int> qubits);
  void add(const std::string &label, std::initializer_list<int> qubits);
  void add(int gate, const std::vector<int> &qubits);
  // Throws DimensionError on bad indices, arity mismatch or repeated qubits.
  void validate() const;
  std::string to_string() const;
};

struct PureState {
  int n = 0;
  Vec amps;
  void validate(double tol = 1e-9) const;
  static PureState basis(int n, uint64_t index);
};

struct UnitaryMatrix {
  int n = 0;
  Mat m;
  void validate(double tol = 1e-9) const;
  double unitarity_error() const;
};

struct TruthTable {
  int n = 0;
  std::vector<uint8_t> bits;
  int at(uint64_t x) const { return bits.at(x); }
  // MSB-first in x: character i is f(i).
  static TruthTable from_string(const std::string &s);
  static TruthTable from_function(int n, uint64_t mask);
  std::string to_string() const;
};

struct PartialTruthTable {
  int n = 0;
  // 0, 1, or -1 for a don't-care entry.
  std::vector<int8_t> entries;
  static PartialTruthTable from_string(const std::string &s);
  static PartialTruthTable from_total(const TruthTable &tt);
  std::string to_string() const;
};

// A gate bound to a qubit tuple on a fixed register width, with the index
// arithmetic done once. Qubit 0 is the most significant bit of the basis index
// and the first entry of the tuple indexes the gate matrix's MSB.
class CompiledOp {
 public:
  CompiledOp(const GateDef &g, int width, const int *qubits);
  void apply(cplx *amps) const;
  // Registers touched, as a bitmask over qubit indices.
  uint32_t qubit_mask() const { return qmask_; }

 private:
  enum Kind { kGeneric, kPermutation, kDiagonal };
  Kind kind_;
  int dim_;
  std::array<int, 8> off_{};
  std::vector<int> bases_;
  std::vector<cplx> m_;
  std::vector<int> perm_;
  uint32_t qmask_ = 0;
};

void apply_gate(cplx *amps, int width, const GateDef &g, const int *qubits);

Vec run_full(const QuantumCircuit &c, Vec state);
// Tensors |0^t> onto input and applies every op.
Vec run_circuit(const QuantumCircuit &c, const Vec &input);
Vec run_circuit(const QuantumCircuit &c, const PureState &input);

constexpr int kDefaultDimensionCap = 12;
Mat circuit_unitary(const QuantumCircuit &c, int cap_qubits = kDefaultDimensionCap);

// Probability that the output qubit reads target_bit on input |x, 0^t>.
double func_acceptance(const QuantumCircuit &c, uint64_t x, int target_bit);

// Basis fidelities for every a, then pair fidelities for (|a>+|b>)/sqrt2
// with a < b in lexicographic order.
std::vector<double> unitary_basis_fidelities(const QuantumCircuit &c, const Mat &u);
// Same, from the columns (U^dag (x) I) C |a, 0^t> stacked as a 2^n x 2^(n+t) array.
std::vector<double> basis_pair_fidelities(const std::vector<Vec> &w, int n, int t);

double certified_min_fidelity(const std::vector<double> &fidelities, int n);

// Exact min over |psi> of |<psi|W|psi>|^2 for unitary W.
double min_fidelity_exact(const Mat &w);

// Uniform double in [0, 1) with 53 random bits. Portable across standard libraries.
inline double uniform01(std::mt19937_64 &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
inline bool bernoulli(double p, std::mt19937_64 &rng) { return uniform01(rng) < p; }

double swap_test_probability(const Vec &phi, const Vec &psi);
int swap_test(const Vec &phi, const Vec &psi, std::mt19937_64 &rng);

// Controlled-rotation cascade followed by phase injection; gates live in a
// fresh "prep" gate set.
QuantumCircuit state_prep_circuit(const Vec &v);

std::shared_ptr<GateSet> make_prep_gateset();

}  // namespace qmcsp

#endif
