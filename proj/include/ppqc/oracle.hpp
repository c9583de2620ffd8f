#pragma once

#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ppqc/errors.hpp"
#include "ppqc/numtheory.hpp"

namespace ppqc {

// Explicit truth table of f: {0,1}^n1 -> {0,1}^n2.
struct OracleFunction {
  int n1 = 0;
  int n2 = 0;
  std::vector<std::uint32_t> table;  // table[x] = f(x), 2^n1 entries

  OracleFunction(int input_bits, int output_bits, std::vector<std::uint32_t> values)
      : n1(input_bits), n2(output_bits), table(std::move(values)) {
    if (n1 < 1 || n1 > 16 || n2 < 1 || n2 > 16)
      throw OracleError("OracleFunction: register sizes out of [1, 16]");
    if (table.size() != (std::size_t{1} << n1))
      throw OracleError("OracleFunction: truth table must have 2^n1 entries");
    const std::uint32_t limit = std::uint32_t{1} << n2;
    for (std::uint32_t v : table)
      if (v >= limit) throw OracleError("OracleFunction: table entry does not fit in n2 bits");
  }

  std::uint32_t operator()(std::uint32_t x) const { return table[x]; }

  std::size_t domain_size() const { return table.size(); }

  bool constant() const {
    for (std::uint32_t v : table)
      if (v != table[0]) return false;
    return true;
  }

  // Exactly half the inputs map to 1; only meaningful for single-bit outputs.
  bool balanced_binary() const {
    if (n2 != 1) return false;
    std::size_t ones = 0;
    for (std::uint32_t v : table) ones += v;
    return ones * 2 == table.size();
  }

  static OracleFunction from_function(int n1, int n2,
                                      const std::function<std::uint32_t(std::uint32_t)>& f) {
    if (n1 < 1 || n1 > 16) throw OracleError("OracleFunction: n1 out of [1, 16]");
    std::vector<std::uint32_t> values(std::size_t{1} << n1);
    for (std::uint32_t x = 0; x < values.size(); ++x) values[x] = f(x);
    return OracleFunction(n1, n2, std::move(values));
  }

  static OracleFunction constant_fn(int n1, int n2, std::uint32_t value) {
    return from_function(n1, n2, [value](std::uint32_t) { return value; });
  }

  static OracleFunction parity(int n1, int n2 = 1) {
    return from_function(n1, n2, [](std::uint32_t x) { return std::popcount(x) & 1u; });
  }

  static OracleFunction identity_fn(int n1, int n2) {
    return from_function(n1, n2, [](std::uint32_t x) { return x; });
  }

  // f(x) = x truncated to the output register.
  static OracleFunction truncate(int n1, int n2) {
    const std::uint32_t mask = (std::uint32_t{1} << n2) - 1;
    return from_function(n1, n2, [mask](std::uint32_t x) { return x & mask; });
  }

  // f(x) = base^x mod modulus.
  static OracleFunction mod_power(std::uint32_t base, std::uint32_t modulus, int n1, int n2) {
    if (modulus < 2) throw OracleError("mod_power: modulus must be >= 2");
    if ((std::uint64_t{1} << n2) < modulus)
      throw OracleError("mod_power: output register cannot hold values mod modulus");
    return from_function(n1, n2, [base, modulus](std::uint32_t x) {
      return static_cast<std::uint32_t>(pow_mod(base, x, modulus));
    });
  }

  // Text format: a header line "n1=<int> n2=<int>", then 2^n1 lines holding
  // the integer f(x) for x = 0, 1, ... in order.
  static OracleFunction load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open oracle file: " + path);
    std::string header;
    if (!std::getline(in, header))
      throw OracleError("oracle file is empty: " + path);
    int n1 = 0, n2 = 0;
    if (std::sscanf(header.c_str(), "n1=%d n2=%d", &n1, &n2) != 2)
      throw OracleError("oracle file header must be 'n1=<int> n2=<int>': " + path);
    if (n1 < 1 || n1 > 16 || n2 < 1 || n2 > 16)
      throw OracleError("oracle file register sizes out of [1, 16]: " + path);
    std::vector<std::uint32_t> values;
    values.reserve(std::size_t{1} << n1);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::istringstream ls(line);
      std::int64_t v = -1;
      if (!(ls >> v) || v < 0)
        throw OracleError("oracle file has a malformed value line: " + path);
      values.push_back(static_cast<std::uint32_t>(v));
    }
    if (values.size() != (std::size_t{1} << n1))
      throw OracleError("oracle file must list exactly 2^n1 values: " + path);
    return OracleFunction(n1, n2, std::move(values));
  }
};

}  // namespace ppqc
