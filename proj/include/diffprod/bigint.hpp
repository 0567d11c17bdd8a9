#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace diffprod {

using BigInt = boost::multiprecision::cpp_int;

inline BigInt factorial(std::uint64_t n) {
  BigInt acc = 1;
  for (std::uint64_t i = 2; i <= n; ++i) acc *= i;
  return acc;
}

inline std::string to_decimal(const BigInt& v) { return v.str(); }

inline std::size_t decimal_digits(const BigInt& v) {
  std::string s = v.str();
  return s.front() == '-' ? s.size() - 1 : s.size();
}

/// Parses a non-negative decimal integer; returns false on any other input.
inline bool parse_decimal(const std::string& text, BigInt& out) {
  if (text.empty()) return false;
  for (char c : text)
    if (c < '0' || c > '9') return false;
  out = BigInt(text);
  return true;
}

}  // namespace diffprod
