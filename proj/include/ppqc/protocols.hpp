#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ppqc/circuits.hpp"
#include "ppqc/errors.hpp"
#include "ppqc/numtheory.hpp"
#include "ppqc/oracle.hpp"
#include "ppqc/rng.hpp"
#include "ppqc/states.hpp"

namespace ppqc {

// Outcome probabilities in the computational basis, straight from the
// structured form: (1 - eps)/2^n + eps * |<i|psi>|^2 per outcome. Equals the
// diagonal of the materialized density matrix.
inline std::vector<double> measurement_distribution(const PseudoPureState& state) {
  const std::size_t d = state.pure.dim();
  const double noise = (1.0 - state.epsilon) / static_cast<double>(d);
  std::vector<double> dist(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double p = noise + state.epsilon * std::norm(state.pure.amplitudes[i]);
    dist[i] = p < 0.0 ? 0.0 : p;
  }
  return dist;
}

struct ProtocolRun {
  Circuit circuit;
  PseudoPureState initial;
  PseudoPureState final_state;
  std::vector<double> outcome_distribution;
};

// Maps a measured basis index to correct/incorrect; must be deterministic.
struct AnswerChecker {
  std::function<bool(std::size_t)> predicate;
  std::string description;
};

inline double success_probability(const ProtocolRun& run, const AnswerChecker& checker) {
  double p = 0.0;
  for (std::size_t i = 0; i < run.outcome_distribution.size(); ++i)
    if (checker.predicate(i)) p += run.outcome_distribution[i];
  return p;
}

// Hadamard layer on the input register followed by the XOR oracle, then any
// extra gates. Acting on the ground state the first two steps produce the
// uniform superposition of |x>|f(x)>.
inline Circuit build_protocol(const OracleFunction& f, std::vector<Gate> extra_gates = {}) {
  std::vector<Gate> gates;
  gates.push_back(Gate::hadamard_layer(f.n1));
  gates.push_back(Gate::oracle_xor(f));
  for (Gate& g : extra_gates) gates.push_back(std::move(g));
  return Circuit(f.n1 + f.n2, f.n1, f.n2, std::move(gates));
}

inline ProtocolRun execute(const Circuit& circuit, const PseudoPureState& initial) {
  PseudoPureState final_state = circuit.apply(initial);
  std::vector<double> dist = measurement_distribution(final_state);
  return ProtocolRun{circuit, initial, std::move(final_state), std::move(dist)};
}

struct DeutschJozsaResult {
  ProtocolRun run;
  bool oracle_is_constant = false;
  // Probability that the input register reads all zeros, i.e. that the
  // protocol declares "constant".
  double p_all_zeros_input = 0.0;
  // Probability of classifying the oracle correctly.
  double success_probability = 0.0;
};

// Single-output-qubit phase-kickback formulation: the output qubit is
// prepared with X then H, and the input register gets a closing Hadamard
// layer so a noiseless run classifies with certainty.
inline DeutschJozsaResult run_deutsch_jozsa(int n1, const OracleFunction& f, double epsilon) {
  if (f.n2 != 1)
    throw OracleError("run_deutsch_jozsa: oracle must have a single output bit");
  if (f.n1 != n1)
    throw OracleError("run_deutsch_jozsa: oracle input size differs from n1");
  const bool is_constant = f.constant();
  if (!is_constant && !f.balanced_binary())
    throw OracleError("run_deutsch_jozsa: oracle is neither constant nor balanced");

  ComplexMatrix pauli_x(2, 2);
  pauli_x(0, 1) = 1.0;
  pauli_x(1, 0) = 1.0;
  const int output_qubit = n1;
  std::vector<Gate> gates;
  gates.push_back(Gate::custom(pauli_x, {output_qubit}, "X(q" + std::to_string(output_qubit) + ")"));
  gates.push_back(Gate::hadamard(output_qubit));
  gates.push_back(Gate::hadamard_layer(n1));
  gates.push_back(Gate::oracle_xor(f));
  gates.push_back(Gate::hadamard_layer(n1));
  Circuit circuit(n1 + 1, n1, 1, std::move(gates));

  ProtocolRun run = execute(circuit, pseudo_pure(epsilon, PureState::basis(n1 + 1, 0)));
  // Input register reads zero at outcome indices 0 (output bit 0) and 1.
  const double p_zeros = run.outcome_distribution[0] + run.outcome_distribution[1];
  const double p_success = is_constant ? p_zeros : 1.0 - p_zeros;
  return DeutschJozsaResult{std::move(run), is_constant, p_zeros, p_success};
}

// Classical post-processing of one measured input-register value: walk the
// continued-fraction convergents of y / 2^n1 in increasing denominator order
// and return the first denominator the checker accepts (base^q = 1 mod N).
inline std::optional<std::uint64_t> extract_period_candidate(std::uint64_t y, std::uint64_t q,
                                                             std::uint32_t base,
                                                             std::uint32_t modulus) {
  for (std::uint64_t den : convergent_denominators(y, q)) {
    if (den > modulus) break;
    if (den >= 1 && pow_mod(base, den, modulus) == 1) return den;
  }
  return std::nullopt;
}

struct OrderFindingResult {
  ProtocolRun run;
  std::uint32_t modulus = 0;
  std::uint32_t base = 0;
  int n1 = 0;
  int n2 = 0;
  // Exact probability that a single measured sample post-processes to a
  // checker-verified period.
  double per_sample_success = 0.0;
  // Period recovered by seeded sampling; 0 when no sample succeeded.
  std::uint64_t extracted_period = 0;
  int samples_used = 0;
};

// Order finding for a modulo N: modular-exponentiation oracle, then the
// Fourier transform on the input register, then continued fractions on
// sampled outcomes. Desk scale: N <= 21. The input register holds N^2 when
// that fits the 12-qubit budget and N otherwise.
inline OrderFindingResult run_order_finding(std::uint32_t modulus, std::uint32_t base,
                                            double epsilon, std::uint64_t seed = 0,
                                            int max_samples = 1000) {
  if (modulus > 21) throw SizeError("run_order_finding: modulus above desk-scale cap 21");
  if (modulus < 2) throw ParameterError("run_order_finding: modulus must be >= 2");
  if (std::gcd(static_cast<std::uint64_t>(base % modulus), static_cast<std::uint64_t>(modulus)) != 1)
    throw ParameterError("run_order_finding: base must be coprime to the modulus");

  auto bits_for = [](std::uint64_t value) {
    int b = 1;
    while ((std::uint64_t{1} << b) < value) ++b;
    return b;
  };
  const int n2 = bits_for(modulus);
  int n1 = bits_for(static_cast<std::uint64_t>(modulus) * modulus);
  if (n1 + n2 > kMaxQubits) n1 = bits_for(modulus);

  OracleFunction f = OracleFunction::mod_power(base, modulus, n1, n2);
  Circuit circuit = build_protocol(f, {Gate::qft(n1)});
  ProtocolRun run = execute(circuit, pseudo_pure(epsilon, PureState::basis(n1 + n2, 0)));

  const std::uint64_t q = std::uint64_t{1} << n1;
  std::vector<std::uint64_t> period_for_y(q, 0);
  for (std::uint64_t y = 0; y < q; ++y)
    if (auto r = extract_period_candidate(y, q, base, modulus)) period_for_y[y] = *r;

  const AnswerChecker checker{
      [&period_for_y, n2](std::size_t outcome) { return period_for_y[outcome >> n2] != 0; },
      "continued fractions yield a verified period"};
  const double p_success = success_probability(run, checker);

  // Sample from the exact outcome distribution until the checker accepts.
  std::vector<double> cdf(run.outcome_distribution.size());
  std::partial_sum(run.outcome_distribution.begin(), run.outcome_distribution.end(), cdf.begin());
  SplitMix64 rng(derive_stream_seed(seed, 0));
  std::uint64_t period = 0;
  int samples = 0;
  for (int attempt = 0; attempt < max_samples; ++attempt) {
    const double u = rng.next_double() * cdf.back();
    const std::size_t idx = static_cast<std::size_t>(
        std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    ++samples;
    if (period_for_y[idx >> n2] != 0) {
      period = period_for_y[idx >> n2];
      break;
    }
  }
  return OrderFindingResult{std::move(run), modulus, base, n1, n2, p_success, period, samples};
}

}  // namespace ppqc
