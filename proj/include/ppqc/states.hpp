#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ppqc/errors.hpp"
#include "ppqc/linalg.hpp"

namespace ppqc {

inline constexpr int kMaxQubits = 12;
inline constexpr double kNormTolerance = 1e-10;
inline constexpr double kTraceTolerance = 1e-10;

// Qubit 0 is the most significant bit of the basis-state index, so a state
// |x>|y> over an n1-qubit input register and an n2-qubit output register sits
// at index x * 2^n2 + y.
struct PureState {
  int num_qubits = 0;
  std::vector<Complex> amplitudes;

  PureState(int n, std::vector<Complex> amps) : num_qubits(n), amplitudes(std::move(amps)) {
    if (n < 1 || n > 30)
      throw SizeError("PureState: qubit count out of range");
    if (amplitudes.size() != (std::size_t{1} << n))
      throw DimensionError("PureState: amplitude vector length is not 2^n");
    double norm2 = 0.0;
    for (const Complex& a : amplitudes) norm2 += std::norm(a);
    if (std::abs(norm2 - 1.0) > kNormTolerance)
      throw NormalizationError("PureState: squared norm deviates from 1 by " +
                               std::to_string(std::abs(norm2 - 1.0)));
  }

  static PureState basis(int n, std::size_t index) {
    std::vector<Complex> amps(std::size_t{1} << n);
    amps.at(index) = 1.0;
    return PureState(n, std::move(amps));
  }

  std::size_t dim() const { return amplitudes.size(); }
};

struct DensityMatrix {
  int num_qubits = 0;
  ComplexMatrix matrix;

  DensityMatrix(int n, ComplexMatrix m) : num_qubits(n), matrix(std::move(m)) {
    if (n < 1 || !matrix.square() || matrix.rows != (std::size_t{1} << n))
      throw DimensionError("DensityMatrix: expected a 2^n x 2^n matrix");
    if (hermiticity_violation(matrix) > kHermitianTolerance)
      throw StateError("DensityMatrix: matrix is not Hermitian within tolerance");
    const Complex t = trace(matrix);
    if (std::abs(t - Complex{1.0}) > kTraceTolerance)
      throw StateError("DensityMatrix: trace deviates from 1 by " +
                       std::to_string(std::abs(t - Complex{1.0})));
  }

  std::size_t dim() const { return matrix.rows; }
};

// Positive semidefiniteness is O(dim^3), so it is checked here on demand
// rather than on every construction.
inline void validate_density_matrix(const DensityMatrix& rho) {
  if (min_eigenvalue(rho.matrix) < -kHermitianTolerance)
    throw StateError("density matrix has a negative eigenvalue beyond tolerance");
}

inline DensityMatrix maximally_mixed(int num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxQubits)
    throw SizeError("maximally_mixed: qubit count out of [1, 12]");
  const std::size_t d = std::size_t{1} << num_qubits;
  ComplexMatrix m(d, d);
  const double p = std::ldexp(1.0, -num_qubits);  // exact
  for (std::size_t i = 0; i < d; ++i) m(i, i) = p;
  return DensityMatrix(num_qubits, std::move(m));
}

// (1 - epsilon) * M + epsilon * |psi><psi| kept in structured form; the full
// matrix is produced only on materialize(). Evolution on the structured form
// is O(2^n) in storage versus O(4^n) materialized.
struct PseudoPureState {
  double epsilon = 0.0;
  PureState pure;

  DensityMatrix materialize() const {
    const std::size_t d = pure.dim();
    ComplexMatrix m(d, d);
    const double noise = (1.0 - epsilon) / static_cast<double>(d);
    for (std::size_t i = 0; i < d; ++i) {
      const Complex ai = pure.amplitudes[i];
      for (std::size_t j = 0; j < d; ++j)
        m(i, j) = epsilon * ai * std::conj(pure.amplitudes[j]);
      m(i, i) += noise;
    }
    return DensityMatrix(pure.num_qubits, std::move(m));
  }
};

inline PseudoPureState pseudo_pure(double epsilon, PureState psi) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0))
    throw ParameterError("pseudo_pure: epsilon must lie in [0, 1]");
  return PseudoPureState{epsilon, std::move(psi)};
}

// Tr(A rho) on the materialized state. For traceless Hermitian A this equals
// epsilon * <psi|A|psi>.
inline Complex expectation(const ComplexMatrix& a, const PseudoPureState& state) {
  const std::size_t d = state.pure.dim();
  if (a.rows != d || a.cols != d)
    throw DimensionError("expectation: observable dimension differs from state dimension");
  const DensityMatrix rho = state.materialize();
  Complex acc = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) acc += a(i, j) * rho.matrix(j, i);
  return acc;
}

struct WernerParameters {
  double delta = 0.0;
};

// (1 - delta) * M4 + delta * |Phi+><Phi+| on two qubits, with the maximally
// entangled |Phi+> = (|00> + |11>)/sqrt(2).
inline DensityMatrix werner(const WernerParameters& params) {
  const double delta = params.delta;
  if (!(delta >= 0.0 && delta <= 1.0))
    throw ParameterError("werner: delta must lie in [0, 1]");
  ComplexMatrix m(4, 4);
  const double mixed = (1.0 - delta) / 4.0;
  for (std::size_t i = 0; i < 4; ++i) m(i, i) = mixed;
  m(0, 0) += delta / 2.0;
  m(3, 3) += delta / 2.0;
  m(0, 3) += delta / 2.0;
  m(3, 0) += delta / 2.0;
  return DensityMatrix(2, std::move(m));
}

}  // namespace ppqc
