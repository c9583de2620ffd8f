#include <catch2/catch_amalgamated.hpp>

#include "ppqc/protocols.hpp"
#include "test_helpers.hpp"

using namespace ppqc;
using namespace ppqc::testing;

TEST_CASE("the parity protocol produces the hand-expanded statevector") {
  const OracleFunction f = OracleFunction::parity(2, 1);
  const PureState out = build_protocol(f).apply(PureState::basis(3, 0));
  // (|00>|0> + |01>|1> + |10>|1> + |11>|0>)/2 at indices 0, 3, 5, 6
  for (std::size_t i = 0; i < 8; ++i) {
    const bool occupied = (i == 0 || i == 3 || i == 5 || i == 6);
    CHECK(std::abs(out.amplitudes[i] - (occupied ? Complex{0.5} : Complex{})) < 1e-15);
  }
}

TEST_CASE("a constant oracle leaves the registers in a product state") {
  const OracleFunction f = OracleFunction::constant_fn(2, 1, 0);
  const PureState out = build_protocol(f).apply(PureState::basis(3, 0));
  for (std::size_t x = 0; x < 4; ++x) {
    CHECK(std::abs(out.amplitudes[2 * x] - Complex{0.5}) < 1e-15);  // |x>|0>
    CHECK(out.amplitudes[2 * x + 1] == Complex{});
  }
}

TEST_CASE("the post-oracle state occupies exactly 2^n1 basis states at weight 2^(-n1/2)") {
  auto rng = make_rng(81);
  const int n1 = 3, n2 = 2;
  const OracleFunction f = random_nonconstant_oracle(rng, n1, n2);
  const PureState out = build_protocol(f).apply(PureState::basis(n1 + n2, 0));
  std::size_t occupied = 0;
  const double weight = std::pow(2.0, -n1 / 2.0);
  for (const Complex& a : out.amplitudes) {
    if (a == Complex{}) continue;
    ++occupied;
    CHECK(std::abs(std::abs(a) - weight) < 1e-15);
  }
  CHECK(occupied == (std::size_t{1} << n1));
}

TEST_CASE("measurement distribution endpoints") {
  const PseudoPureState point = pseudo_pure(1.0, PureState::basis(2, 1));
  const std::vector<double> dist_point = measurement_distribution(point);
  CHECK(dist_point[1] == 1.0);
  CHECK(dist_point[0] + dist_point[2] + dist_point[3] == 0.0);

  const std::vector<double> dist_noise =
      measurement_distribution(pseudo_pure(0.0, PureState::basis(2, 1)));
  for (double p : dist_noise) CHECK(p == 0.25);
}

TEST_CASE("measurement distribution mixes the point mass with uniform noise") {
  const std::vector<double> dist =
      measurement_distribution(pseudo_pure(0.5, PureState::basis(2, 0)));
  CHECK(dist[0] == Catch::Approx(0.625).margin(1e-15));
  for (int i = 1; i < 4; ++i) CHECK(dist[i] == Catch::Approx(0.125).margin(1e-15));
}

TEST_CASE("measurement distributions are normalized") {
  auto rng = make_rng(82);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 1 + static_cast<int>(rng() % 5);
    const std::vector<double> dist = measurement_distribution(
        pseudo_pure(static_cast<double>(rng() % 1000) / 1000.0, random_pure_state(rng, n)));
    double sum = 0.0;
    for (double p : dist) {
      CHECK(p >= 0.0);
      sum += p;
    }
    CHECK(std::abs(sum - 1.0) < 1e-10);
  }
}

TEST_CASE("measurement distribution equals the materialized diagonal") {
  auto rng = make_rng(84);
  const PseudoPureState state = pseudo_pure(0.63, random_pure_state(rng, 3));
  const std::vector<double> dist = measurement_distribution(state);
  const DensityMatrix rho = state.materialize();
  for (std::size_t i = 0; i < dist.size(); ++i)
    CHECK(std::abs(dist[i] - rho.matrix(i, i).real()) < 1e-15);
}

TEST_CASE("noiseless Deutsch-Jozsa classifies with certainty") {
  const DeutschJozsaResult constant =
      run_deutsch_jozsa(2, OracleFunction::constant_fn(2, 1, 1), 1.0);
  CHECK(constant.p_all_zeros_input == Catch::Approx(1.0).margin(1e-12));
  CHECK(constant.success_probability == Catch::Approx(1.0).margin(1e-12));

  const DeutschJozsaResult balanced = run_deutsch_jozsa(2, OracleFunction::parity(2, 1), 1.0);
  CHECK(balanced.p_all_zeros_input == Catch::Approx(0.0).margin(1e-12));
  CHECK(balanced.success_probability == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("Deutsch-Jozsa under noise matches the closed form") {
  for (int n1 : {2, 3, 4})
    for (double eps : {0.0, 0.1, 0.5, 1.0}) {
      const DeutschJozsaResult result =
          run_deutsch_jozsa(n1, OracleFunction::constant_fn(n1, 1, 0), eps);
      const double expected = eps + (1.0 - eps) * std::ldexp(1.0, -n1);
      CHECK(result.success_probability == Catch::Approx(expected).margin(1e-12));
    }
}

TEST_CASE("single-qubit Deutsch problem") {
  const DeutschJozsaResult balanced =
      run_deutsch_jozsa(1, OracleFunction::identity_fn(1, 1), 0.3);
  CHECK(balanced.success_probability == Catch::Approx(0.3 + 0.7 * 0.5).margin(1e-12));
  const DeutschJozsaResult constant =
      run_deutsch_jozsa(1, OracleFunction::constant_fn(1, 1, 1), 0.3);
  CHECK(constant.success_probability == Catch::Approx(0.3 + 0.7 * 0.5).margin(1e-12));
}

TEST_CASE("a fully noisy balanced run sees all-zeros at chance level") {
  const DeutschJozsaResult result = run_deutsch_jozsa(3, OracleFunction::parity(3, 1), 0.0);
  CHECK(result.p_all_zeros_input == Catch::Approx(std::ldexp(1.0, -3)).margin(1e-12));
}

TEST_CASE("Deutsch-Jozsa rejects oracles that are neither constant nor balanced") {
  const OracleFunction lopsided =
      OracleFunction::from_function(2, 1, [](std::uint32_t x) { return x == 0 ? 1u : 0u; });
  CHECK_THROWS_AS(run_deutsch_jozsa(2, lopsided, 0.5), OracleError);
  CHECK_THROWS_AS(run_deutsch_jozsa(2, OracleFunction::parity(3, 1), 0.5), OracleError);
  CHECK_THROWS_AS(run_deutsch_jozsa(2, OracleFunction::identity_fn(2, 2), 0.5), OracleError);
}

TEST_CASE("success probability sums the checker-accepted outcomes") {
  const DeutschJozsaResult dj = run_deutsch_jozsa(3, OracleFunction::constant_fn(3, 1, 0), 0.1);
  const AnswerChecker accept_all{[](std::size_t) { return true; }, "always"};
  const AnswerChecker accept_none{[](std::size_t) { return false; }, "never"};
  CHECK(success_probability(dj.run, accept_all) == Catch::Approx(1.0).margin(1e-12));
  CHECK(success_probability(dj.run, accept_none) == 0.0);

  const AnswerChecker zeros_input{[](std::size_t outcome) { return (outcome >> 1) == 0; },
                                  "input register all zeros"};
  CHECK(success_probability(dj.run, zeros_input) ==
        Catch::Approx(0.1 + 0.9 * 0.125).margin(1e-12));
}

TEST_CASE("success probability decomposes into pure and noise terms") {
  auto rng = make_rng(83);
  const int n1 = 3, n2 = 2;
  const OracleFunction f = random_nonconstant_oracle(rng, n1, n2);
  const Circuit circuit = build_protocol(f);
  // accept outcomes whose output register reads f(0)
  const AnswerChecker checker{
      [&f, n2](std::size_t outcome) { return (outcome & ((1u << n2) - 1)) == f(0); },
      "output register equals f(0)"};

  const ProtocolRun pure_run = execute(circuit, pseudo_pure(1.0, PureState::basis(n1 + n2, 0)));
  const double p_pure = success_probability(pure_run, checker);
  std::size_t accepting = 0;
  for (std::size_t i = 0; i < pure_run.outcome_distribution.size(); ++i)
    if (checker.predicate(i)) ++accepting;

  for (double eps : {0.0, 0.3, 0.8}) {
    const ProtocolRun run = execute(circuit, pseudo_pure(eps, PureState::basis(n1 + n2, 0)));
    const double expected =
        eps * p_pure +
        (1.0 - eps) * static_cast<double>(accepting) / static_cast<double>(run.outcome_distribution.size());
    CHECK(success_probability(run, checker) == Catch::Approx(expected).margin(1e-12));
    CHECK(success_probability(run, checker) >= eps * p_pure - 1e-12);
  }
}

TEST_CASE("the noise term's accepting mass decays exponentially for Deutsch-Jozsa") {
  double previous = 1.0;
  for (int n1 = 2; n1 <= 6; ++n1) {
    // k accepting outcomes out of 2^n: the two all-zeros-input outcomes
    const double noise_mass = 2.0 / std::ldexp(1.0, n1 + 1);
    CHECK(noise_mass < previous);
    CHECK(noise_mass == std::ldexp(1.0, -n1));
    previous = noise_mass;
    // cross-check against the simulated distribution at eps = 0
    const DeutschJozsaResult result =
        run_deutsch_jozsa(n1, OracleFunction::constant_fn(n1, 1, 0), 0.0);
    CHECK(result.p_all_zeros_input == Catch::Approx(noise_mass).margin(1e-12));
  }
}

TEST_CASE("continued fractions recover periods from ideal outcomes") {
  // y/Q = 64/256 -> denominators 1, 4
  const auto denominators = convergent_denominators(64, 256);
  REQUIRE(denominators.size() >= 2);
  CHECK(denominators[0] == 1);
  CHECK(denominators[1] == 4);
  CHECK(extract_period_candidate(64, 256, 7, 15) == std::uint64_t{4});
  CHECK(extract_period_candidate(192, 256, 7, 15) == std::uint64_t{4});
  CHECK_FALSE(extract_period_candidate(0, 256, 7, 15).has_value());
  CHECK_FALSE(extract_period_candidate(128, 256, 7, 15).has_value());
}

TEST_CASE("multiplicative order by brute force") {
  CHECK(multiplicative_order(7, 15) == 4);  // 7, 4, 13, 1
  CHECK(multiplicative_order(4, 15) == 2);  // 4, 1
  CHECK(multiplicative_order(2, 21) == 6);
  CHECK_THROWS_AS(multiplicative_order(6, 15), ParameterError);
}

TEST_CASE("order finding recovers the period of 7 modulo 15") {
  const OrderFindingResult result = run_order_finding(15, 7, 1.0, 7);
  CHECK(result.n1 == 8);
  CHECK(result.n2 == 4);
  CHECK(result.extracted_period == 4);
  CHECK(pow_mod(7, result.extracted_period, 15) == 1);
  // r = 4 divides 2^8, so exactly the outcomes y in {64, 192} succeed
  CHECK(result.per_sample_success == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("order finding recovers the period of 4 modulo 15") {
  const OrderFindingResult result = run_order_finding(15, 4, 1.0, 11);
  CHECK(result.extracted_period == 2);
  CHECK(pow_mod(4, result.extracted_period, 15) == 1);
}

TEST_CASE("sampling at full purity succeeds at the exact rate") {
  const OrderFindingResult result = run_order_finding(15, 7, 1.0, 123);
  // batch of 10 independent samples from the exact distribution
  SplitMix64 rng(derive_stream_seed(123, 1));
  std::vector<double> cdf(result.run.outcome_distribution.size());
  std::partial_sum(result.run.outcome_distribution.begin(),
                   result.run.outcome_distribution.end(), cdf.begin());
  int hits = 0;
  for (int sample = 0; sample < 10; ++sample) {
    const double u = rng.next_double() * cdf.back();
    const std::size_t idx =
        static_cast<std::size_t>(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    if (extract_period_candidate(idx >> result.n2, std::uint64_t{1} << result.n1, 7, 15))
      ++hits;
  }
  CHECK(hits >= 4);  // exact per-sample rate is 1/2
}

TEST_CASE("order finding at reduced purity still reports the exact success mass") {
  const OrderFindingResult result = run_order_finding(15, 4, 0.5, 3);
  // eps * (pure mass) + (1 - eps) * (noise mass); both computed from the run
  double noise_mass = 0.0;
  const std::size_t dim = result.run.outcome_distribution.size();
  for (std::size_t i = 0; i < dim; ++i)
    if (extract_period_candidate(i >> result.n2, std::uint64_t{1} << result.n1, 4, 15))
      noise_mass += 1.0 / static_cast<double>(dim);
  const OrderFindingResult pure = run_order_finding(15, 4, 1.0, 3);
  const double expected = 0.5 * pure.per_sample_success + 0.5 * noise_mass;
  CHECK(result.per_sample_success == Catch::Approx(expected).margin(1e-12));
}

TEST_CASE("desk-scale cap and coprimality are enforced") {
  CHECK_THROWS_AS(run_order_finding(22, 3, 1.0), SizeError);
  CHECK_THROWS_AS(run_order_finding(15, 6, 1.0), ParameterError);
  CHECK_THROWS_AS(run_order_finding(1, 1, 1.0), ParameterError);
}

TEST_CASE("order finding above the register budget falls back to a single-width input") {
  const OrderFindingResult result = run_order_finding(21, 2, 1.0, 5);
  CHECK(result.n2 == 5);
  CHECK(result.n1 == 5);  // 2^5 >= 21, relaxed from the N^2 rule
  if (result.extracted_period != 0) CHECK(pow_mod(2, result.extracted_period, 21) == 1);
  CHECK(result.per_sample_success > 0.0);
}
