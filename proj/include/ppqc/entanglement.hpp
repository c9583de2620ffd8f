#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ppqc/circuits.hpp"
#include "ppqc/errors.hpp"
#include "ppqc/linalg.hpp"
#include "ppqc/oracle.hpp"
#include "ppqc/protocols.hpp"
#include "ppqc/states.hpp"

namespace ppqc {

// Minimum partial-transpose eigenvalues this far below zero count as
// entanglement; genuine negative witnesses at the scales of interest are
// O(1e-2), eigensolver noise is O(1e-14).
inline constexpr double kPptTolerance = 1e-10;

// Two inputs with different images under f, fixing the effective two-qubit
// subspace. Values are bit strings of widths n1 and n2.
struct WitnessPair {
  std::uint32_t x1 = 0;
  std::uint32_t x2 = 0;
  std::uint32_t f_x1 = 0;
  std::uint32_t f_x2 = 0;
  int n1 = 0;
  int n2 = 0;
};

// Deterministic choice: x1 = 0...0, x2 = the smallest input whose image
// differs from f(x1).
inline WitnessPair find_witness_pair(const OracleFunction& f) {
  const std::uint32_t f0 = f(0);
  for (std::uint32_t x = 1; x < f.domain_size(); ++x)
    if (f(x) != f0) return WitnessPair{0, x, f0, f(x), f.n1, f.n2};
  throw ConstantFunctionError("find_witness_pair: function is constant");
}

struct EntanglementVerdict {
  bool entangled = false;
  double min_pt_eigenvalue = 0.0;
  double tolerance_used = kPptTolerance;
};

// Peres-Horodecki test on a two-qubit state; exact for a 2x2 split.
inline EntanglementVerdict ppt_check(const DensityMatrix& rho, double tolerance = kPptTolerance) {
  if (rho.dim() != 4)
    throw StateError("ppt_check: expected a 4x4 two-qubit density matrix");
  validate_density_matrix(rho);
  const ComplexMatrix pt = partial_transpose(rho.matrix, SubsystemSplit{2, 2}, Subsystem::B);
  const double lambda_min = min_eigenvalue(pt);
  return EntanglementVerdict{lambda_min < -tolerance, lambda_min, tolerance};
}

// Noise weight of the projected state: eps' = eps / ((1-eps) 2^(1-n2) + eps).
// Strictly increasing in eps and independent of n1.
inline double epsilon_prime(double epsilon, int n2) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0))
    throw ParameterError("epsilon_prime: epsilon must lie in [0, 1]");
  if (n2 < 1) throw ParameterError("epsilon_prime: n2 must be >= 1");
  return epsilon / ((1.0 - epsilon) * std::ldexp(1.0, 1 - n2) + epsilon);
}

// Largest eps for which the projected state is guaranteed separable:
// 1 / (1 + 2^n2). Fixed point: epsilon_prime(bound, n2) = 1/3.
inline double separability_bound(int n2) {
  if (n2 < 1) throw ParameterError("separability_bound: n2 must be >= 1");
  return 1.0 / (1.0 + std::ldexp(1.0, n2));
}

// Project the post-oracle state onto span{|x1>,|x2>} (x) span{|f(x1)>,|f(x2)>},
// renormalize, and re-express in the four surviving basis states ordered
// (x1,f1), (x1,f2), (x2,f1), (x2,f2). The result is a Werner-form state with
// noise weight epsilon_prime(eps, n2).
inline DensityMatrix project_to_effective_qubits(const PseudoPureState& state,
                                                 const WitnessPair& pair) {
  const std::size_t d = state.pure.dim();
  if (state.pure.num_qubits != pair.n1 + pair.n2)
    throw DimensionError("project_to_effective_qubits: state size differs from the pair's registers");
  const std::size_t dout = std::size_t{1} << pair.n2;
  const std::size_t keep[4] = {
      pair.x1 * dout + pair.f_x1, pair.x1 * dout + pair.f_x2,
      pair.x2 * dout + pair.f_x1, pair.x2 * dout + pair.f_x2};
  // The post-oracle state for the pair's oracle carries weight 2^(-n1/2) on
  // |x1>|f(x1)> and |x2>|f(x2)>; absent amplitude there means the state was
  // produced with a different function.
  if (std::norm(state.pure.amplitudes[keep[0]]) < 1e-24 ||
      std::norm(state.pure.amplitudes[keep[3]]) < 1e-24)
    throw OracleError("project_to_effective_qubits: state does not match the witness pair");

  ComplexMatrix projector(d, d);
  for (std::size_t idx : keep) projector(idx, idx) = 1.0;
  const DensityMatrix rho = state.materialize();
  ComplexMatrix projected = projector * rho.matrix * projector;
  const double norm = trace(projected).real();
  if (norm < 1e-30)
    throw ProjectionError("project_to_effective_qubits: projected state has zero weight");

  ComplexMatrix reduced(4, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) reduced(i, j) = projected(keep[i], keep[j]) / norm;
  return DensityMatrix(2, std::move(reduced));
}

// Bisect for the noise weight at which the projected state switches from
// PPT-separable to PPT-entangled under the full protocol pipeline.
inline double empirical_threshold(const OracleFunction& f, int n1, int n2, double tol) {
  if (f.n1 != n1 || f.n2 != n2)
    throw OracleError("empirical_threshold: oracle registers differ from n1/n2");
  if (!(tol > 0.0)) throw ParameterError("empirical_threshold: tolerance must be positive");
  const WitnessPair pair = find_witness_pair(f);  // rejects constant f
  const Circuit circuit = build_protocol(f);
  const PureState ground = PureState::basis(n1 + n2, 0);

  auto entangled_at = [&](double eps) {
    const PseudoPureState after = circuit.apply(pseudo_pure(eps, ground));
    return ppt_check(project_to_effective_qubits(after, pair)).entangled;
  };
  if (entangled_at(0.0) || !entangled_at(1.0))
    throw StateError("empirical_threshold: endpoints do not bracket a transition");

  double lo = 0.0, hi = 1.0;
  for (int iter = 0; iter < 60 && (hi - lo) > tol; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (entangled_at(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace ppqc
