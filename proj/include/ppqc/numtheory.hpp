#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "ppqc/errors.hpp"

namespace ppqc {

// a^e mod m for m < 2^32 (intermediate products fit in 64 bits).
inline std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  if (m == 0) throw ParameterError("pow_mod: zero modulus");
  std::uint64_t base = a % m;
  std::uint64_t result = 1 % m;
  while (e > 0) {
    if (e & 1) result = result * base % m;
    base = base * base % m;
    e >>= 1;
  }
  return result;
}

// Smallest r >= 1 with a^r = 1 (mod m); requires gcd(a, m) = 1.
inline std::uint64_t multiplicative_order(std::uint64_t a, std::uint64_t m) {
  if (m < 2) throw ParameterError("multiplicative_order: modulus must be >= 2");
  if (std::gcd(a % m, m) != 1)
    throw ParameterError("multiplicative_order: base not coprime to modulus");
  std::uint64_t acc = a % m;
  for (std::uint64_t r = 1; r <= m; ++r) {
    if (acc == 1) return r;
    acc = acc * (a % m) % m;
  }
  throw ParameterError("multiplicative_order: no order found");  // unreachable for coprime inputs
}

// Denominators of the continued-fraction convergents of y/q, in increasing
// order. Starts from the trivial convergent (denominator 1).
inline std::vector<std::uint64_t> convergent_denominators(std::uint64_t y, std::uint64_t q) {
  if (q == 0) throw ParameterError("convergent_denominators: zero denominator");
  std::vector<std::uint64_t> out;
  std::uint64_t num = y, den = q;
  std::uint64_t k_prev = 0, k_curr = 1;  // k_{-1}, k_0 after the first quotient
  bool first = true;
  while (den != 0) {
    const std::uint64_t a = num / den;
    const std::uint64_t rem = num % den;
    if (first) {
      k_curr = 1;  // denominator of a0/1
      first = false;
    } else {
      const std::uint64_t k_next = a * k_curr + k_prev;
      k_prev = k_curr;
      k_curr = k_next;
    }
    out.push_back(k_curr);
    num = den;
    den = rem;
  }
  return out;
}

}  // namespace ppqc
