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

#include "qmcsp/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace qmcsp {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

Mat mat2(cplx a, cplx b, cplx c, cplx d) {
  Mat m(2, 2);
  m << a, b, c, d;
  return m;
}

Mat perm_matrix(const std::vector<int> &image) {
  int d = static_cast<int>(image.size());
  Mat m = Mat::Zero(d, d);
  for (int i = 0; i < d; i++) m(image[i], i) = 1.0;
  return m;
}

double parse_angle(const std::string &arg, const std::string &label) {
  auto slash = arg.find('/');
  try {
    if (slash != std::string::npos) {
      double k = std::stod(arg.substr(0, slash));
      double m = std::stod(arg.substr(slash + 1));
      if (m == 0) throw InvalidArgument("zero denominator in gate label " + label);
      return 2.0 * kPi * k / m;
    }
    size_t used = 0;
    double a = std::stod(arg, &used);
    if (used != arg.size()) throw InvalidArgument("bad angle in gate label " + label);
    return a;
  } catch (const std::logic_error &) {
    throw InvalidArgument("bad angle in gate label " + label);
  }
}

Mat ry(double a) { return mat2(std::cos(a / 2), -std::sin(a / 2), std::sin(a / 2), std::cos(a / 2)); }

bool all_bits(const std::string &s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c == '0' || c == '1'; });
}

void finish_gate(GateDef &g) {
  int d = static_cast<int>(g.matrix.rows());
  g.classical = true;
  g.perm.assign(d, -1);
  for (int col = 0; col < d && g.classical; col++) {
    int hit = -1;
    for (int row = 0; row < d; row++) {
      cplx v = g.matrix(row, col);
      if (std::abs(v) < 1e-14) continue;
      if (hit >= 0 || std::abs(v - 1.0) > 1e-14) {
        g.classical = false;
        break;
      }
      hit = row;
    }
    if (hit < 0) g.classical = false;
    if (g.classical) g.perm[col] = hit;
  }
  if (!g.classical) g.perm.clear();
  Mat prod = g.matrix * g.matrix.adjoint();
  double err = (prod - Mat::Identity(d, d)).cwiseAbs().maxCoeff();
  if (err > 1e-10) throw InvalidArgument("gate " + g.label + " is not unitary");
  if (g.arity > 3) throw InvalidArgument("gate " + g.label + " has arity above 3");
}

uint64_t fnv1a(uint64_t h, const void *data, size_t len) {
  auto p = static_cast<const unsigned char *>(data);
  for (size_t i = 0; i < len; i++) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

GateDef gate_from_label(const std::string &label) {
  GateDef g;
  g.label = label;
  const double r = 1.0 / std::sqrt(2.0);
  if (label == "I") {
    g.matrix = Mat::Identity(2, 2);
  } else if (label == "X") {
    g.matrix = mat2(0, 1, 1, 0);
  } else if (label == "Y") {
    g.matrix = mat2(0, -kI, kI, 0);
  } else if (label == "Z") {
    g.matrix = mat2(1, 0, 0, -1);
  } else if (label == "H") {
    g.matrix = mat2(r, r, r, -r);
  } else if (label == "S") {
    g.matrix = mat2(1, 0, 0, kI);
  } else if (label == "Sdg") {
    g.matrix = mat2(1, 0, 0, -kI);
  } else if (label == "T") {
    g.matrix = mat2(1, 0, 0, std::polar(1.0, kPi / 4));
  } else if (label == "Tdg") {
    g.matrix = mat2(1, 0, 0, std::polar(1.0, -kPi / 4));
  } else if (label == "CNOT") {
    g.arity = 2;
    g.matrix = perm_matrix({0, 1, 3, 2});
  } else if (label == "CNOT0") {
    // CNOT after X on the target: flips the target when the control is 0.
    g.arity = 2;
    g.matrix = perm_matrix({1, 0, 2, 3});
  } else if (label == "CZ") {
    g.arity = 2;
    g.matrix = Mat::Identity(4, 4);
    g.matrix(3, 3) = -1.0;
  } else if (label == "SWAP") {
    g.arity = 2;
    g.matrix = perm_matrix({0, 2, 1, 3});
  } else if (label == "Toffoli") {
    g.arity = 3;
    g.matrix = perm_matrix({0, 1, 2, 3, 4, 5, 7, 6});
  } else {
    auto open = label.find('(');
    if (open == std::string::npos || label.back() != ')')
      throw InvalidArgument("unknown gate label '" + label + "'");
    std::string head = label.substr(0, open);
    double a = parse_angle(label.substr(open + 1, label.size() - open - 2), label);
    if (head == "RX") {
      g.matrix = mat2(std::cos(a / 2), -kI * std::sin(a / 2), -kI * std::sin(a / 2), std::cos(a / 2));
    } else if (head == "RY") {
      g.matrix = ry(a);
    } else if (head == "RZ") {
      g.matrix = mat2(std::polar(1.0, -a / 2), 0, 0, std::polar(1.0, a / 2));
    } else if (head == "PH") {
      g.matrix = mat2(1, 0, 0, std::polar(1.0, a));
    } else if (head.size() > 1 && head[0] == 'P' && all_bits(head.substr(1))) {
      std::string bits = head.substr(1);
      g.arity = static_cast<int>(bits.size());
      int d = 1 << g.arity;
      g.matrix = Mat::Identity(d, d);
      g.matrix(std::stoi(bits, nullptr, 2), std::stoi(bits, nullptr, 2)) = std::polar(1.0, a);
    } else if (head.size() > 3 && head[0] == 'C' && head.substr(head.size() - 2) == "RY" &&
               all_bits(head.substr(1, head.size() - 3))) {
      std::string bits = head.substr(1, head.size() - 3);
      g.arity = static_cast<int>(bits.size()) + 1;
      int d = 1 << g.arity;
      int block = std::stoi(bits, nullptr, 2);
      g.matrix = Mat::Identity(d, d);
      g.matrix.block(2 * block, 2 * block, 2, 2) = ry(a);
    } else {
      throw InvalidArgument("unknown gate label '" + label + "'");
    }
  }
  finish_gate(g);
  return g;
}

GateSet::GateSet(std::string name, std::vector<GateDef> gates) : name_(std::move(name)), gates_(std::move(gates)) {
  for (size_t i = 0; i < gates_.size(); i++)
    for (size_t j = 0; j < i; j++)
      if (gates_[i].label == gates_[j].label) throw InvalidArgument("duplicate gate label " + gates_[i].label);
}

int GateSet::max_arity() const {
  int a = 0;
  for (auto &g : gates_) a = std::max(a, g.arity);
  return a;
}

int GateSet::index_of(const std::string &label) const {
  for (size_t i = 0; i < gates_.size(); i++)
    if (gates_[i].label == label) return static_cast<int>(i);
  return -1;
}

int GateSet::ensure(const std::string &label) {
  int i = index_of(label);
  if (i >= 0) return i;
  gates_.push_back(gate_from_label(label));
  return static_cast<int>(gates_.size()) - 1;
}

uint64_t GateSet::hash() const {
  uint64_t h = 14695981039346656037ULL;
  for (auto &g : gates_) {
    h = fnv1a(h, g.label.data(), g.label.size());
    for (int i = 0; i < g.matrix.size(); i++) {
      int64_t re = std::llround(g.matrix.data()[i].real() * 1e12);
      int64_t im = std::llround(g.matrix.data()[i].imag() * 1e12);
      h = fnv1a(h, &re, sizeof re);
      h = fnv1a(h, &im, sizeof im);
    }
  }
  return h;
}

GateSet make_gateset(const std::string &name) {
  auto build = [&](std::vector<std::string> labels) {
    std::vector<GateDef> gates;
    for (auto &l : labels) gates.push_back(gate_from_label(l));
    return GateSet(name, std::move(gates));
  };
  if (name == "g0") return build({"X", "H", "T", "Tdg", "CNOT", "Toffoli", "CNOT0"});
  if (name == "g0c") return build({"X", "CNOT", "CNOT0", "Toffoli"});
  if (name == "g0-2q") return build({"X", "H", "T", "Tdg", "CNOT", "CNOT0"});
  if (name.rfind("grot", 0) == 0) {
    int d = 3;
    if (name.size() > 4) {
      try {
        d = std::stoi(name.substr(4));
      } catch (const std::logic_error &) {
        d = -1;
      }
    }
    if (d < 1 || d > 8 || (name.size() > 4 && std::to_string(d) != name.substr(4)))
      throw InvalidArgument("unknown gate set '" + name + "'; available: g0, g0c, g0-2q, grot, grot<d>");
    std::vector<std::string> labels{"X", "H", "T", "Tdg", "CNOT", "Toffoli", "CNOT0"};
    int m = 1 << d;
    for (const char *axis : {"RX", "RY", "RZ"})
      for (int k = 1; k < m; k++) labels.push_back(std::string(axis) + "(" + std::to_string(k) + "/" + std::to_string(m) + ")");
    return build(labels);
  }
  throw InvalidArgument("unknown gate set '" + name + "'; available: g0, g0c, g0-2q, grot, grot<d>");
}

std::vector<std::string> available_gatesets() { return {"g0", "g0c", "g0-2q", "grot", "grot<d>"}; }

std::shared_ptr<GateSet> make_prep_gateset() { return std::make_shared<GateSet>("prep", std::vector<GateDef>{}); }

QuantumCircuit::QuantumCircuit(int n_, int t_, std::shared_ptr<const GateSet> gs) : n(n_), t(t_), gateset(std::move(gs)) {
  if (n < 0 || t < 0) throw DimensionError("negative register size");
}

void QuantumCircuit::add(int g, std::initializer_list<int> qubits) { add(g, std::vector<int>(qubits)); }

void QuantumCircuit::add(const std::string &label, std::initializer_list<int> qubits) {
  int g = gateset->index_of(label);
  if (g < 0) throw InvalidArgument("gate " + label + " not in gate set " + gateset->name());
  add(g, std::vector<int>(qubits));
}

void QuantumCircuit::add(int g, const std::vector<int> &qubits) {
  Op op;
  op.gate = g;
  if (qubits.size() > 3) throw DimensionError("gate tuple longer than 3");
  for (size_t i = 0; i < qubits.size(); i++) op.q[i] = qubits[i];
  if (g < 0 || g >= gateset->size()) throw DimensionError("gate index out of range");
  if (static_cast<int>(qubits.size()) != gateset->gate(g).arity)
    throw DimensionError("gate " + gateset->gate(g).label + " expects " + std::to_string(gateset->gate(g).arity) + " qubits");
  ops.push_back(op);
}

void QuantumCircuit::validate() const {
  if (!gateset) throw DimensionError("circuit has no gate set");
  if (output_qubit < 0 || output_qubit >= std::max(1, width())) throw DimensionError("output qubit out of range");
  for (auto &op : ops) {
    if (op.gate < 0 || op.gate >= gateset->size()) throw DimensionError("gate index out of range");
    int a = arity(op);
    for (int i = 0; i < a; i++) {
      if (op.q[i] < 0 || op.q[i] >= width()) throw DimensionError("qubit index out of range");
      for (int j = 0; j < i; j++)
        if (op.q[i] == op.q[j]) throw DimensionError("repeated qubit in gate tuple");
    }
  }
}

std::string QuantumCircuit::to_string() const {
  std::ostringstream os;
  for (size_t i = 0; i < ops.size(); i++) {
    if (i) os << " ";
    os << gate(ops[i]).label << "(";
    for (int j = 0; j < arity(ops[i]); j++) os << (j ? "," : "") << ops[i].q[j];
    os << ")";
  }
  return os.str();
}

PureState PureState::basis(int n, uint64_t index) {
  PureState s;
  s.n = n;
  s.amps = Vec::Zero(int64_t{1} << n);
  s.amps(static_cast<Eigen::Index>(index)) = 1.0;
  return s;
}

void PureState::validate(double tol) const {
  if (n < 0 || n > 30 || amps.size() != (int64_t{1} << n)) throw DimensionError("state length is not 2^n");
  if (std::abs(amps.norm() - 1.0) > tol) throw InvalidArgument("state is not normalized");
}

double UnitaryMatrix::unitarity_error() const {
  return (m * m.adjoint() - Mat::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
}

void UnitaryMatrix::validate(double tol) const {
  if (n < 0 || n > 14 || m.rows() != (int64_t{1} << n) || m.cols() != m.rows())
    throw DimensionError("unitary is not 2^n x 2^n");
  if (unitarity_error() > tol) throw InvalidArgument("matrix is not unitary");
}

TruthTable TruthTable::from_string(const std::string &s) {
  TruthTable t;
  size_t len = s.size();
  if (len == 0 || (len & (len - 1))) throw DimensionError("truth table length must be a power of two");
  while ((size_t{1} << t.n) < len) t.n++;
  for (char c : s) {
    if (c != '0' && c != '1') throw InvalidArgument("truth table must be a 0/1 string");
    t.bits.push_back(static_cast<uint8_t>(c - '0'));
  }
  return t;
}

TruthTable TruthTable::from_function(int n, uint64_t mask) {
  TruthTable t;
  t.n = n;
  for (uint64_t x = 0; x < (uint64_t{1} << n); x++) t.bits.push_back(static_cast<uint8_t>((mask >> x) & 1));
  return t;
}

std::string TruthTable::to_string() const {
  std::string s;
  for (auto b : bits) s.push_back(static_cast<char>('0' + b));
  return s;
}

PartialTruthTable PartialTruthTable::from_string(const std::string &s) {
  PartialTruthTable t;
  size_t len = s.size();
  if (len == 0 || (len & (len - 1))) throw DimensionError("truth table length must be a power of two");
  while ((size_t{1} << t.n) < len) t.n++;
  for (char c : s) {
    if (c == '0' || c == '1')
      t.entries.push_back(static_cast<int8_t>(c - '0'));
    else if (c == '*')
      t.entries.push_back(-1);
    else
      throw InvalidArgument("partial truth table must use 0, 1 and *");
  }
  return t;
}

PartialTruthTable PartialTruthTable::from_total(const TruthTable &tt) {
  PartialTruthTable t;
  t.n = tt.n;
  for (auto b : tt.bits) t.entries.push_back(static_cast<int8_t>(b));
  return t;
}

std::string PartialTruthTable::to_string() const {
  std::string s;
  for (auto e : entries) s.push_back(e < 0 ? '*' : static_cast<char>('0' + e));
  return s;
}

CompiledOp::CompiledOp(const GateDef &g, int width, const int *qubits) {
  int q = g.arity;
  dim_ = 1 << q;
  int mask = 0;
  for (int j = 0; j < q; j++) {
    int pos = width - 1 - qubits[j];
    mask |= 1 << pos;
    qmask_ |= 1u << qubits[j];
  }
  for (int l = 0; l < dim_; l++) {
    int o = 0;
    for (int j = 0; j < q; j++)
      if ((l >> (q - 1 - j)) & 1) o |= 1 << (width - 1 - qubits[j]);
    off_[l] = o;
  }
  for (int i = 0; i < (1 << width); i++)
    if ((i & mask) == 0) bases_.push_back(i);
  bool diag = g.matrix.isDiagonal(1e-15);
  if (g.classical) {
    kind_ = kPermutation;
    perm_ = g.perm;
  } else if (diag) {
    kind_ = kDiagonal;
    for (int l = 0; l < dim_; l++) m_.push_back(g.matrix(l, l));
  } else {
    kind_ = kGeneric;
    for (int r = 0; r < dim_; r++)
      for (int c = 0; c < dim_; c++) m_.push_back(g.matrix(r, c));
  }
}

void CompiledOp::apply(cplx *amps) const {
  cplx buf[8];
  switch (kind_) {
    case kPermutation:
      for (int b : bases_) {
        for (int l = 0; l < dim_; l++) buf[l] = amps[b + off_[l]];
        for (int l = 0; l < dim_; l++) amps[b + off_[perm_[l]]] = buf[l];
      }
      break;
    case kDiagonal:
      for (int b : bases_)
        for (int l = 0; l < dim_; l++) amps[b + off_[l]] *= m_[l];
      break;
    case kGeneric:
      if (dim_ == 2) {
        const cplx m00 = m_[0], m01 = m_[1], m10 = m_[2], m11 = m_[3];
        const int o1 = off_[1];
        for (int b : bases_) {
          cplx a0 = amps[b], a1 = amps[b + o1];
          amps[b] = m00 * a0 + m01 * a1;
          amps[b + o1] = m10 * a0 + m11 * a1;
        }
        break;
      }
      for (int b : bases_) {
        for (int l = 0; l < dim_; l++) buf[l] = amps[b + off_[l]];
        for (int r = 0; r < dim_; r++) {
          cplx acc = 0;
          for (int c = 0; c < dim_; c++) acc += m_[r * dim_ + c] * buf[c];
          amps[b + off_[r]] = acc;
        }
      }
      break;
  }
}

void apply_gate(cplx *amps, int width, const GateDef &g, const int *qubits) { CompiledOp(g, width, qubits).apply(amps); }

Vec run_full(const QuantumCircuit &c, Vec state) {
  c.validate();
  if (state.size() != (int64_t{1} << c.width())) throw DimensionError("state does not match circuit width");
  for (auto &op : c.ops) apply_gate(state.data(), c.width(), c.gate(op), op.q.data());
  return state;
}

Vec run_circuit(const QuantumCircuit &c, const Vec &input) {
  if (input.size() != (int64_t{1} << c.n)) throw DimensionError("input state has " + std::to_string(input.size()) + " amplitudes, circuit expects 2^" + std::to_string(c.n));
  if (c.width() > 24) throw ResourceError("register of " + std::to_string(c.width()) + " qubits exceeds the simulator cap");
  Vec full = Vec::Zero(int64_t{1} << c.width());
  for (int64_t i = 0; i < input.size(); i++) full(i << c.t) = input(i);
  return run_full(c, std::move(full));
}

Vec run_circuit(const QuantumCircuit &c, const PureState &input) {
  if (input.n != c.n) throw DimensionError("input qubit count does not match circuit");
  return run_circuit(c, input.amps);
}

Mat circuit_unitary(const QuantumCircuit &c, int cap_qubits) {
  if (c.width() > cap_qubits)
    throw ResourceError("circuit_unitary: 2^" + std::to_string(c.width()) + " exceeds the dimension cap 2^" + std::to_string(cap_qubits));
  c.validate();
  int64_t d = int64_t{1} << c.width();
  Mat u = Mat::Identity(d, d);
  std::vector<CompiledOp> compiled;
  for (auto &op : c.ops) compiled.emplace_back(c.gate(op), c.width(), op.q.data());
  for (int64_t col = 0; col < d; col++)
    for (auto &op : compiled) op.apply(u.col(col).data());
  return u;
}

double func_acceptance(const QuantumCircuit &c, uint64_t x, int target_bit) {
  if (x >= (uint64_t{1} << c.n)) throw DimensionError("input x out of range");
  Vec in = Vec::Zero(int64_t{1} << c.n);
  in(static_cast<Eigen::Index>(x)) = 1.0;
  Vec out = run_circuit(c, in);
  int shift = c.width() - 1 - c.output_qubit;
  double p = 0;
  for (int64_t i = 0; i < out.size(); i++)
    if (((i >> shift) & 1) == target_bit) p += std::norm(out(i));
  return std::min(1.0, p);
}

std::vector<double> basis_pair_fidelities(const std::vector<Vec> &w, int n, int t) {
  int64_t dn = int64_t{1} << n, dt = int64_t{1} << t;
  std::vector<double> out;
  for (int64_t a = 0; a < dn; a++) {
    double f = 0;
    for (int64_t r = 0; r < dt; r++) f += std::norm(w[a]((a << t) | r));
    out.push_back(f);
  }
  for (int64_t a = 0; a < dn; a++)
    for (int64_t b = a + 1; b < dn; b++) {
      double f = 0;
      for (int64_t r = 0; r < dt; r++) {
        cplx v = w[a]((a << t) | r) + w[a]((b << t) | r) + w[b]((a << t) | r) + w[b]((b << t) | r);
        f += std::norm(v) / 4.0;
      }
      out.push_back(f);
    }
  return out;
}

std::vector<double> unitary_basis_fidelities(const QuantumCircuit &c, const Mat &u) {
  int64_t dn = int64_t{1} << c.n;
  if (u.rows() != dn || u.cols() != dn) throw DimensionError("unitary does not match circuit input size");
  Mat ud = u.adjoint();
  int64_t dt = int64_t{1} << c.t;
  std::vector<Vec> w;
  for (int64_t a = 0; a < dn; a++) {
    Vec in = Vec::Zero(dn);
    in(a) = 1.0;
    Vec v = run_circuit(c, in);
    Vec r(v.size());
    for (int64_t k = 0; k < dt; k++) {
      Vec sub(dn);
      for (int64_t i = 0; i < dn; i++) sub(i) = v((i << c.t) | k);
      sub = ud * sub;
      for (int64_t i = 0; i < dn; i++) r((i << c.t) | k) = sub(i);
    }
    w.push_back(std::move(r));
  }
  return basis_pair_fidelities(w, c.n, c.t);
}

double certified_min_fidelity(const std::vector<double> &fidelities, int n) {
  if (fidelities.empty()) throw InvalidArgument("no fidelities supplied");
  double mn = 1.0;
  for (double f : fidelities) {
    if (f < -1e-12 || f > 1 + 1e-9) throw InvalidArgument("fidelity outside [0,1]");
    mn = std::min(mn, f);
  }
  double delta = std::max(0.0, 1.0 - mn);
  // Rounding noise in exact witnesses; genuine deficits are far above this.
  if (delta <= 1e-12) delta = 0;
  double b = 1.0 - 10.0 * std::pow(2.0, n / 2.0) * std::pow(delta, 0.25);
  return std::max(0.0, b);
}

double min_fidelity_exact(const Mat &w) {
  if (w.rows() == 1) return std::norm(w(0, 0)) > 0 ? 1.0 : 0.0;
  Eigen::ComplexEigenSolver<Mat> es(w, false);
  std::vector<double> ang;
  for (int i = 0; i < es.eigenvalues().size(); i++) ang.push_back(std::arg(es.eigenvalues()(i)));
  std::sort(ang.begin(), ang.end());
  double gap = ang.front() + 2 * kPi - ang.back();
  for (size_t i = 1; i < ang.size(); i++) gap = std::max(gap, ang[i] - ang[i - 1]);
  double span = 2 * kPi - gap;
  if (span >= kPi) return 0.0;
  double c = std::cos(span / 2);
  return std::min(1.0, c * c);
}

double swap_test_probability(const Vec &phi, const Vec &psi) {
  if (phi.size() != psi.size()) throw DimensionError("swap test on states of different size");
  double f = std::norm(phi.dot(psi));
  return std::clamp(0.5 - 0.5 * f, 0.0, 1.0);
}

int swap_test(const Vec &phi, const Vec &psi, std::mt19937_64 &rng) {
  return bernoulli(swap_test_probability(phi, psi), rng) ? 1 : 0;
}

namespace {

std::string angle_str(double a) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", a);
  return buf;
}

std::string bits_of(uint64_t v, int len) {
  std::string s;
  for (int i = len - 1; i >= 0; i--) s.push_back(((v >> i) & 1) ? '1' : '0');
  return s;
}

}  // namespace

QuantumCircuit state_prep_circuit(const Vec &v) {
  int64_t len = v.size();
  if (len < 1 || (len & (len - 1))) throw DimensionError("state length must be a power of two");
  double norm = v.norm();
  if (norm < 1e-12) throw InvalidArgument("cannot prepare the zero vector");
  if (std::abs(norm - 1.0) > 1e-9) throw InvalidArgument("state is not normalized");
  int n = 0;
  while ((int64_t{1} << n) < len) n++;
  if (n > 3) throw ResourceError("state preparation supports at most 3 qubits (gate arity cap)");
  auto gs = make_prep_gateset();
  QuantumCircuit c(n, 0, gs);
  for (int k = 0; k < n; k++) {
    int rest = n - 1 - k;
    for (uint64_t p = 0; p < (uint64_t{1} << k); p++) {
      double w0 = 0, w1 = 0;
      for (uint64_t r = 0; r < (uint64_t{1} << rest); r++) {
        w0 += std::norm(v(static_cast<Eigen::Index>((p << (rest + 1)) | r)));
        w1 += std::norm(v(static_cast<Eigen::Index>((p << (rest + 1)) | (uint64_t{1} << rest) | r)));
      }
      if (w0 + w1 < 1e-24) continue;
      double theta = 2 * std::atan2(std::sqrt(w1), std::sqrt(w0));
      if (std::abs(theta) < 1e-14) continue;
      std::vector<int> qs;
      for (int j = 0; j <= k; j++) qs.push_back(j);
      std::string label = k == 0 ? "RY(" + angle_str(theta) + ")" : "C" + bits_of(p, k) + "RY(" + angle_str(theta) + ")";
      c.add(gs->ensure(label), qs);
    }
  }
  std::vector<int> all;
  for (int j = 0; j < n; j++) all.push_back(j);
  for (int64_t i = 0; i < len; i++) {
    if (std::abs(v(i)) < 1e-14) continue;
    double ph = std::arg(v(i));
    if (std::abs(ph) < 1e-14) continue;
    std::string label = n == 0 ? "" : "P" + bits_of(static_cast<uint64_t>(i), n) + "(" + angle_str(ph) + ")";
    if (n == 0) continue;
    c.add(gs->ensure(label), all);
  }
  return c;
}

}  // namespace qmcsp
