#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "diffprod/errors.hpp"

namespace diffprod {

/// Exact non-negative fraction kept in lowest terms. Used for densities;
/// there is deliberately no conversion from floating point.
class Rational {
 public:
  constexpr Rational() = default;

  Rational(std::uint64_t numerator, std::uint64_t denominator) {
    detail::require(denominator != 0, "rational denominator must be positive");
    const std::uint64_t g = std::gcd(numerator, denominator);
    num_ = numerator / g;
    den_ = denominator / g;
  }

  /// Accepts `p/q` or a bare integer `p`. Decimal points, signs and
  /// exponents are rejected.
  static Rational parse(const std::string& text) {
    const auto slash = text.find('/');
    const std::string p = text.substr(0, slash);
    const std::string q = slash == std::string::npos ? "1" : text.substr(slash + 1);
    return Rational(parse_part(p, text), parse_part(q, text));
  }

  std::uint64_t numerator() const { return num_; }
  std::uint64_t denominator() const { return den_; }

  bool is_zero() const { return num_ == 0; }

  /// True when the value lies in (0, 1].
  bool is_density() const { return num_ != 0 && num_ <= den_; }

  /// ceil(value * n), exact.
  std::uint64_t ceil_times(std::uint64_t n) const {
    const unsigned __int128 prod = static_cast<unsigned __int128>(num_) * n;
    return static_cast<std::uint64_t>((prod + den_ - 1) / den_);
  }

  std::string str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend bool operator==(const Rational&, const Rational&) = default;

  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<unsigned __int128>(a.num_) * b.den_ <
           static_cast<unsigned __int128>(b.num_) * a.den_;
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }

 private:
  static std::uint64_t parse_part(const std::string& part, const std::string& whole) {
    if (part.empty() || part.size() > 19)
      throw InvalidArgument("malformed fraction '" + whole + "' (expected p/q)");
    std::uint64_t v = 0;
    for (char c : part) {
      if (c < '0' || c > '9')
        throw InvalidArgument("malformed fraction '" + whole + "' (expected p/q)");
      v = v * 10 + static_cast<std::uint64_t>(c - '0');
    }
    return v;
  }

  std::uint64_t num_ = 0;
  std::uint64_t den_ = 1;
};

}  // namespace diffprod
