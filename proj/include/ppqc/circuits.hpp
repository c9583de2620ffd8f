#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ppqc/errors.hpp"
#include "ppqc/linalg.hpp"
#include "ppqc/oracle.hpp"
#include "ppqc/states.hpp"

namespace ppqc {

// H^(x)n1 (x) I on the trailing qubits: a Hadamard on every input-register
// qubit, identity on the output register.
inline ComplexMatrix hadamard_layer(int n1, int total_qubits) {
  if (n1 < 1 || total_qubits < 1 || n1 > total_qubits)
    throw SizeError("hadamard_layer: register sizes out of range");
  const double h = 1.0 / std::numbers::sqrt2;
  ComplexMatrix hadamard(2, 2);
  hadamard(0, 0) = h;
  hadamard(0, 1) = h;
  hadamard(1, 0) = h;
  hadamard(1, 1) = -h;
  ComplexMatrix layer = hadamard;
  for (int i = 1; i < n1; ++i) layer = tensor_product(layer, hadamard);
  if (n1 == total_qubits) return layer;
  return tensor_product(layer, ComplexMatrix::identity(std::size_t{1} << (total_qubits - n1)));
}

// Permutation matrix for |x>|y> -> |x>|y XOR f(x)>; self-inverse.
inline ComplexMatrix oracle_unitary(const OracleFunction& f) {
  const std::size_t din = std::size_t{1} << f.n1;
  const std::size_t dout = std::size_t{1} << f.n2;
  ComplexMatrix u(din * dout, din * dout);
  for (std::size_t x = 0; x < din; ++x) {
    const std::size_t fx = f(static_cast<std::uint32_t>(x));
    for (std::size_t y = 0; y < dout; ++y)
      u(x * dout + (y ^ fx), x * dout + y) = 1.0;
  }
  return u;
}

// Discrete Fourier transform on an m-qubit register.
inline ComplexMatrix qft_matrix(int m) {
  if (m < 1 || m > kMaxQubits) throw SizeError("qft_matrix: register size out of range");
  const std::size_t q = std::size_t{1} << m;
  const double scale = 1.0 / std::sqrt(static_cast<double>(q));
  ComplexMatrix u(q, q);
  for (std::size_t j = 0; j < q; ++j)
    for (std::size_t k = 0; k < q; ++k) {
      // exp(2*pi*i*j*k / q); reduce j*k mod q first to keep the angle small
      const double angle = 2.0 * std::numbers::pi * static_cast<double>((j * k) % q) /
                           static_cast<double>(q);
      u(j, k) = Complex{scale * std::cos(angle), scale * std::sin(angle)};
    }
  return u;
}

namespace detail {

// Embed a k-qubit unitary acting on the listed circuit qubits into the full
// 2^n space. Qubit j of `u` maps to circuit qubit targets[j]; both sides use
// the qubit-0-is-MSB convention.
inline ComplexMatrix embed_unitary(const ComplexMatrix& u, const std::vector<int>& targets,
                                   int total_qubits) {
  const int n = total_qubits;
  const int k = static_cast<int>(targets.size());
  if (k < 1 || k > n) throw DimensionError("embed_unitary: bad target count");
  if (!u.square() || u.rows != (std::size_t{1} << k))
    throw DimensionError("embed_unitary: matrix dimension does not match target count");
  std::vector<bool> used(n, false);
  for (int t : targets) {
    if (t < 0 || t >= n || used[t]) throw DimensionError("embed_unitary: invalid target qubit");
    used[t] = true;
  }
  std::vector<int> rest;
  for (int qubit = 0; qubit < n; ++qubit)
    if (!used[qubit]) rest.push_back(qubit);

  auto bit_position = [n](int qubit) { return n - 1 - qubit; };
  const std::size_t dim = std::size_t{1} << n;
  const std::size_t sub = std::size_t{1} << k;
  const std::size_t rest_count = std::size_t{1} << (n - k);

  ComplexMatrix out(dim, dim);
  for (std::size_t r = 0; r < rest_count; ++r) {
    std::size_t base = 0;
    for (std::size_t j = 0; j < rest.size(); ++j)
      if ((r >> (rest.size() - 1 - j)) & 1) base |= std::size_t{1} << bit_position(rest[j]);
    for (std::size_t a = 0; a < sub; ++a) {
      std::size_t row = base;
      for (int j = 0; j < k; ++j)
        if ((a >> (k - 1 - j)) & 1) row |= std::size_t{1} << bit_position(targets[j]);
      for (std::size_t b = 0; b < sub; ++b) {
        const Complex uab = u(a, b);
        if (uab == Complex{}) continue;
        std::size_t col = base;
        for (int j = 0; j < k; ++j)
          if ((b >> (k - 1 - j)) & 1) col |= std::size_t{1} << bit_position(targets[j]);
        out(row, col) = uab;
      }
    }
  }
  return out;
}

}  // namespace detail

// A circuit element. Materialization always produces the full 2^n x 2^n
// unitary; n <= 12 keeps that affordable and the structured evolution path
// applies the materialized matrix to the 2^n statevector, never conjugating
// a full density matrix.
class Gate {
 public:
  enum class Kind { Hadamard, HadamardLayer, OracleXor, Qft, Custom };

  static Gate hadamard(int target) {
    Gate g(Kind::Hadamard, "H(q" + std::to_string(target) + ")");
    g.param_ = target;
    return g;
  }

  static Gate hadamard_layer(int register_size) {
    Gate g(Kind::HadamardLayer, "H^" + std::to_string(register_size));
    g.param_ = register_size;
    return g;
  }

  static Gate oracle_xor(OracleFunction f) {
    Gate g(Kind::OracleXor, "Uf(n1=" + std::to_string(f.n1) + ",n2=" + std::to_string(f.n2) + ")");
    g.oracle_ = std::move(f);
    return g;
  }

  static Gate qft(int register_size) {
    Gate g(Kind::Qft, "QFT" + std::to_string(register_size));
    g.param_ = register_size;
    return g;
  }

  static Gate custom(ComplexMatrix u, std::vector<int> targets, std::string label) {
    Gate g(Kind::Custom, std::move(label));
    g.custom_ = std::move(u);
    g.targets_ = std::move(targets);
    return g;
  }

  Kind kind() const { return kind_; }
  const std::string& label() const { return label_; }
  int param() const { return param_; }
  const std::optional<OracleFunction>& oracle() const { return oracle_; }
  const std::vector<int>& targets() const { return targets_; }

  ComplexMatrix materialize(int total_qubits) const {
    if (total_qubits < 1 || total_qubits > kMaxQubits)
      throw SizeError("Gate::materialize: qubit count out of [1, 12]");
    switch (kind_) {
      case Kind::Hadamard: {
        ComplexMatrix h = ppqc::hadamard_layer(1, 1);
        return detail::embed_unitary(h, {param_}, total_qubits);
      }
      case Kind::HadamardLayer:
        return ppqc::hadamard_layer(param_, total_qubits);
      case Kind::OracleXor: {
        if (oracle_->n1 + oracle_->n2 != total_qubits)
          throw DimensionError("Gate::materialize: oracle registers do not fill the circuit");
        return oracle_unitary(*oracle_);
      }
      case Kind::Qft: {
        if (param_ > total_qubits)
          throw SizeError("Gate::materialize: QFT register larger than circuit");
        ComplexMatrix q = qft_matrix(param_);
        if (param_ == total_qubits) return q;
        return tensor_product(q, ComplexMatrix::identity(std::size_t{1} << (total_qubits - param_)));
      }
      case Kind::Custom:
        return detail::embed_unitary(custom_, targets_, total_qubits);
    }
    throw StateError("Gate::materialize: unknown gate kind");
  }

 private:
  Gate(Kind kind, std::string label) : kind_(kind), label_(std::move(label)) {}

  Kind kind_;
  std::string label_;
  int param_ = 0;
  std::optional<OracleFunction> oracle_;
  ComplexMatrix custom_;
  std::vector<int> targets_;
};

// Gates apply left to right over the sequence. Qubits [0, n1) form the input
// register, [n1, n1+n2) the output register.
struct Circuit {
  int num_qubits = 0;
  int n1 = 0;
  int n2 = 0;
  std::vector<Gate> gates;

  Circuit(int total, int input_bits, int output_bits, std::vector<Gate> gate_list)
      : num_qubits(total), n1(input_bits), n2(output_bits), gates(std::move(gate_list)) {
    if (num_qubits < 1 || num_qubits > kMaxQubits)
      throw SizeError("Circuit: qubit count out of [1, 12]");
    if (n1 < 0 || n2 < 0 || n1 + n2 != num_qubits)
      throw SizeError("Circuit: register sizes must add up to the qubit count");
    for (const Gate& g : gates) validate_gate(g);
  }

  std::size_t dim() const { return std::size_t{1} << num_qubits; }

  // Full composite unitary; intended for small circuits (tests, analyses).
  ComplexMatrix unitary() const {
    ComplexMatrix u = ComplexMatrix::identity(dim());
    for (const Gate& g : gates) u = g.materialize(num_qubits) * u;
    return u;
  }

  PureState apply(const PureState& psi) const {
    if (psi.num_qubits != num_qubits)
      throw DimensionError("Circuit::apply: state size differs from circuit size");
    std::vector<Complex> amps = psi.amplitudes;
    // One materialized gate lives at a time; at 12 qubits that is one
    // 4096 x 4096 matrix per step.
    for (const Gate& g : gates) amps = g.materialize(num_qubits) * amps;
    return PureState(num_qubits, std::move(amps));
  }

  PseudoPureState apply(const PseudoPureState& state) const {
    return PseudoPureState{state.epsilon, apply(state.pure)};
  }

 private:
  void validate_gate(const Gate& g) const {
    switch (g.kind()) {
      case Gate::Kind::Hadamard:
        if (g.param() < 0 || g.param() >= num_qubits)
          throw SizeError("Circuit: Hadamard target out of range");
        break;
      case Gate::Kind::HadamardLayer:
      case Gate::Kind::Qft:
        if (g.param() < 1 || g.param() > num_qubits)
          throw SizeError("Circuit: register gate size out of range");
        break;
      case Gate::Kind::OracleXor:
        if (g.oracle()->n1 != n1 || g.oracle()->n2 != n2)
          throw OracleError("Circuit: oracle registers differ from the circuit's registers");
        break;
      case Gate::Kind::Custom:
        for (int t : g.targets())
          if (t < 0 || t >= num_qubits) throw SizeError("Circuit: custom gate target out of range");
        break;
    }
  }
};

// rho -> U rho U^dagger.
inline DensityMatrix apply_unitary(const DensityMatrix& rho, const ComplexMatrix& u) {
  if (u.rows != rho.dim() || u.cols != rho.dim())
    throw DimensionError("apply_unitary: unitary dimension differs from state dimension");
  if (unitarity_violation(u) > kUnitaryTolerance)
    throw NotUnitaryError("apply_unitary: matrix is not unitary within tolerance");
  return DensityMatrix(rho.num_qubits, u * rho.matrix * adjoint(u));
}

// (epsilon, |psi>) -> (epsilon, U|psi>): the noise weight is invariant under
// conjugation because U M U^dagger = M.
inline PseudoPureState evolve_pseudo_pure(const PseudoPureState& state, const ComplexMatrix& u) {
  if (u.rows != state.pure.dim() || u.cols != state.pure.dim())
    throw DimensionError("evolve_pseudo_pure: unitary dimension differs from state dimension");
  if (unitarity_violation(u) > kUnitaryTolerance)
    throw NotUnitaryError("evolve_pseudo_pure: matrix is not unitary within tolerance");
  return PseudoPureState{state.epsilon, PureState(state.pure.num_qubits, u * state.pure.amplitudes)};
}

}  // namespace ppqc
