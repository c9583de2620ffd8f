#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "ppqc/entanglement.hpp"
#include "ppqc/errors.hpp"
#include "ppqc/rng.hpp"

namespace ppqc {

// Draws per geometric trial are capped to guard against denormal-small p.
inline constexpr std::uint64_t kGeometricDrawCap = 10'000'000;

inline double expected_repetitions(double p) {
  if (!(p > 0.0 && p <= 1.0))
    throw ParameterError("expected_repetitions: p must lie in (0, 1]");
  return 1.0 / p;
}

// Smallest r with 1 - (1-p)^r >= 0.99: the concrete reading of "correct with
// probability of order one".
inline double repetitions_for_order_one(double p) {
  if (!(p > 0.0 && p <= 1.0))
    throw ParameterError("repetitions_for_order_one: p must lie in (0, 1]");
  if (p == 1.0) return 1.0;
  return std::ceil(std::log(0.01) / std::log1p(-p));
}

struct RepetitionEstimate {
  double success_probability = 0.0;
  double expected_repetitions = 0.0;      // 1/p
  double repetitions_for_order_one = 0.0; // reported alongside 1/p
  double monte_carlo_mean = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t cap_hits = 0;
};

// Geometric trials: repeat until first success, averaged over `trials` runs.
// Each trial draws from its own (seed, trial-index) stream, so results do not
// depend on execution order.
inline RepetitionEstimate monte_carlo_repetitions(double p, std::uint64_t trials,
                                                  std::uint64_t seed) {
  if (!(p > 0.0 && p <= 1.0))
    throw ParameterError("monte_carlo_repetitions: p must lie in (0, 1]");
  if (trials < 1) throw ParameterError("monte_carlo_repetitions: trials must be >= 1");
  double total = 0.0;
  std::uint64_t cap_hits = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    SplitMix64 rng(derive_stream_seed(seed, t));
    std::uint64_t draws = 1;
    while (rng.next_double() >= p) {
      if (++draws >= kGeometricDrawCap) {
        ++cap_hits;
        break;
      }
    }
    total += static_cast<double>(draws);
  }
  return RepetitionEstimate{p,
                            expected_repetitions(p),
                            repetitions_for_order_one(p),
                            total / static_cast<double>(trials),
                            trials,
                            seed,
                            cap_hits};
}

struct NmrScalingRow {
  int n = 0;
  double epsilon = 0.0;             // n / 2^n
  double sample_lower_bound = 0.0;  // 2^n / n
};

// Polarization scaling of the standard pseudo-pure preparation and the
// induced lower bound on sample size. The unit constant in n/2^n is a
// scaling proxy, not a calibrated physical value.
inline std::vector<NmrScalingRow> nmr_scaling_table(int max_n) {
  if (max_n < 1 || max_n > 64)
    throw ParameterError("nmr_scaling_table: max_n must lie in [1, 64]");
  std::vector<NmrScalingRow> rows;
  rows.reserve(static_cast<std::size_t>(max_n));
  for (int n = 1; n <= max_n; ++n) {
    const double eps = std::ldexp(static_cast<double>(n), -n);
    rows.push_back(NmrScalingRow{n, eps, std::ldexp(1.0 / static_cast<double>(n), n)});
  }
  return rows;
}

struct ThresholdRepetitionRow {
  int n2 = 0;
  double epsilon = 0.0;
  bool entangled = false;             // epsilon above the separability bound
  double separability_bound = 0.0;    // 1 / (1 + 2^n2)
  double repetitions_at_bound = 0.0;  // 1 + 2^n2
};

// For each n2, the repetition count a computation pays when run exactly at
// the separability bound, plus an entangled/separable tag for every epsilon
// grid point.
inline std::vector<ThresholdRepetitionRow> threshold_repetition_curve(
    const std::vector<int>& n2_values, const std::vector<double>& epsilon_grid) {
  std::vector<ThresholdRepetitionRow> rows;
  rows.reserve(n2_values.size() * epsilon_grid.size());
  for (int n2 : n2_values) {
    const double bound = separability_bound(n2);
    const double reps = expected_repetitions(bound);
    for (double eps : epsilon_grid) {
      if (!(eps >= 0.0 && eps <= 1.0))
        throw ParameterError("threshold_repetition_curve: epsilon grid point out of [0, 1]");
      rows.push_back(ThresholdRepetitionRow{n2, eps, eps > bound, bound, reps});
    }
  }
  return rows;
}

}  // namespace ppqc
