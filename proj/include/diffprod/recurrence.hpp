#pragma once

// Finite cyclic measure-preserving systems (Z_N, x -> x + 1, uniform
// measure): return-time sets, recurrence witnesses, the exact k0 bound
// pipeline and a replay of the factorization kb = x * y.

#include <bit>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "diffprod/bigint.hpp"
#include "diffprod/errors.hpp"
#include "diffprod/rational.hpp"
#include "diffprod/residue_set.hpp"
#include "diffprod/setcore.hpp"

namespace diffprod {

/// mu(A) = |A| / N.
inline Rational density(const ResidueSet& a) { return Rational(a.size(), a.modulus()); }

/// R(A) = {n : A ∩ (A + n) is nonempty}, evaluated shift by shift from the
/// definition (rotation + AND), independently of difference_set.
inline ResidueSet return_set(const ResidueSet& a) {
  const std::size_t n = a.modulus();
  const auto aw = a.words();
  ResidueSet out(a.modulus(), a.modulus());
  if (a.empty()) return out;

  std::vector<Word> doubled(bits::words_for(2 * n) + 2, 0);
  bits::or_shifted_left(doubled, aw, 0);
  bits::or_shifted_left(doubled, aw, n);

  for (std::size_t s = 0; s < n; ++s) {
    // bit x of A + s is A[x - s mod N] = doubled[x + (N - s)]
    const std::size_t offset = n - s;
    for (std::size_t w = 0; w < aw.size(); ++w) {
      if (aw[w] & bits::extract(doubled, offset + w * kWordBits)) {
        out.insert(static_cast<std::uint32_t>(s));
        break;
      }
    }
  }
  return out;
}

/// floor(N / |A|) + 1, the recurrence bound for a single shift.
inline std::uint64_t poincare_bound(const ResidueSet& a) {
  detail::require(!a.empty(), "recurrence needs a nonempty set");
  return a.modulus() / a.size() + 1;
}

/// floor((N / |A|)^L) + 1, exact.
inline BigInt lemma1_bound(const ResidueSet& a, std::uint64_t L) {
  detail::require(!a.empty(), "recurrence needs a nonempty set");
  detail::require(L >= 1 && L <= 4096, "L must lie in [1, 4096] to print the bound");
  const unsigned exp = static_cast<unsigned>(L);
  BigInt num = boost::multiprecision::pow(BigInt(a.modulus()), exp);
  BigInt den = boost::multiprecision::pow(BigInt(a.size()), exp);
  return num / den + 1;
}

namespace detail {

/// m <= floor((N / size)^L) + 1, decided without materializing the power
/// when L is large: once N^i >= (m - 1) * size^i the inequality holds for
/// every larger exponent.
inline bool within_lemma1_bound(std::uint64_t m, std::uint64_t n, std::uint64_t size, std::uint64_t L) {
  if (m <= 2) return true;
  if (size == n) return false;
  BigInt lhs = m - 1;
  BigInt rhs = 1;
  for (std::uint64_t i = 1; i <= L; ++i) {
    lhs *= size;
    rhs *= n;
    if (rhs >= lhs) return true;
  }
  return false;
}

inline bool intersects_shift(const ResidueSet& a, std::uint64_t shift) {
  const std::uint64_t n = a.modulus();
  bool hit = false;
  a.for_each([&](std::uint32_t x) { hit = hit || a.contains((x + n - shift) % n); });
  return hit;
}

}  // namespace detail

/// Smallest m >= 1 with A ∩ (A + m b) nonempty. Throws VerificationError if
/// m exceeds floor(N / |A|) + 1.
inline std::uint64_t poincare_min_return(const ResidueSet& a, std::int64_t b) {
  detail::require(!a.empty(), "poincare_min_return needs a nonempty set");
  detail::require(b != 0, "b must be nonzero");
  const std::uint64_t n = a.modulus();
  const std::uint64_t step = a.reduce(b);
  std::uint64_t m = 1;
  while (!detail::intersects_shift(a, m * step % n)) ++m;
  if (m > poincare_bound(a))
    detail::fail_verification("poincare return " + std::to_string(m) + " exceeds bound " +
                              std::to_string(poincare_bound(a)));
  return m;
}

/// Smallest m >= 1 with {m b, 2 m b, ..., L m b} contained in R(A) (mod N).
/// Throws VerificationError if m exceeds floor((N / |A|)^L) + 1.
inline std::uint64_t lemma1_witness(const ResidueSet& a, std::uint64_t L, std::int64_t b) {
  detail::require(!a.empty(), "lemma1_witness needs a nonempty set");
  detail::require(L >= 1, "L must be positive");
  detail::require(b != 0, "b must be nonzero");
  const ResidueSet r = return_set(a);
  const std::uint64_t n = a.modulus();
  const std::uint64_t step = a.reduce(b);
  // i -> i m b mod N has period dividing N, so N multiples decide the check.
  const std::uint64_t checks = std::min<std::uint64_t>(L, n);
  std::uint64_t m = 1;
  for (;; ++m) {
    const std::uint64_t base = m % n * step % n;
    bool ok = true;
    for (std::uint64_t i = 1; i <= checks && ok; ++i) ok = r.contains(i * base % n);
    if (ok) break;
  }
  if (!detail::within_lemma1_bound(m, n, a.size(), L))
    detail::fail_verification("lemma 1 witness m = " + std::to_string(m) + " exceeds floor((N/|A|)^L) + 1");
  return m;
}

/// Exact record of the bound construction: N_B = floor(1/beta) + 1,
/// L = N_B!, n = floor(1/alpha^L) + 1, k0 = L * n!.
struct BoundReport {
  Rational alpha;
  Rational beta;
  std::uint64_t N_B = 0;
  BigInt L;
  BigInt n;
  BigInt k0;

  std::string to_key_value() const {
    std::string out;
    out += "alpha=" + alpha.str() + "\n";
    out += "beta=" + beta.str() + "\n";
    out += "N_B=" + std::to_string(N_B) + "\n";
    out += "L=" + to_decimal(L) + "\n";
    out += "n=" + to_decimal(n) + "\n";
    out += "k0=" + to_decimal(k0) + "\n";
    out += "digits=" + std::to_string(decimal_digits(k0)) + "\n";
    return out;
  }

  /// Big integers are decimal strings; field order is fixed.
  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["alpha"] = alpha.str();
    j["beta"] = beta.str();
    j["N_B"] = N_B;
    j["L"] = to_decimal(L);
    j["n"] = to_decimal(n);
    j["k0"] = to_decimal(k0);
    j["digits"] = decimal_digits(k0);
    return j;
  }
};

/// Caps on the size of numbers theoretical_bound will materialize. Most
/// densities below 1/3 produce n far beyond any factorial that fits in memory.
struct BoundLimits {
  std::uint64_t max_factorial_arg = 20000;
  std::uint64_t max_power_bits = std::uint64_t{1} << 22;
};

/// N_B, L and n of the bound construction, without the factorial k0.
struct BoundParameters {
  std::uint64_t N_B = 0;
  BigInt L;
  BigInt n;
};

inline BoundParameters bound_parameters(const Rational& alpha, const Rational& beta, const BoundLimits& limits = {}) {
  if (!alpha.is_density() || !beta.is_density())
    throw InvalidArgument("densities must lie in (0, 1]; got alpha=" + alpha.str() + " beta=" + beta.str());

  BoundParameters p;
  p.N_B = beta.denominator() / beta.numerator() + 1;
  if (p.N_B > limits.max_factorial_arg) throw LimitExceeded("N_B = " + std::to_string(p.N_B) + " too large for N_B!");
  p.L = factorial(p.N_B);

  if (alpha.numerator() == alpha.denominator()) {
    p.n = 2;
    return p;
  }
  // floor(q^L / p^L) for alpha = p/q; q^L has about L * log2(q) bits.
  const unsigned qbits = static_cast<unsigned>(std::bit_width(alpha.denominator()));
  if (p.L > BigInt(limits.max_power_bits / qbits))
    throw LimitExceeded("1/alpha^L with L = " + to_decimal(p.L) + " is too large to materialize");
  const unsigned exp = p.L.convert_to<unsigned>();
  const BigInt num = boost::multiprecision::pow(BigInt(alpha.denominator()), exp);
  const BigInt den = boost::multiprecision::pow(BigInt(alpha.numerator()), exp);
  p.n = num / den + 1;
  return p;
}

/// Exact k0 = L * n! for densities alpha, beta. Throws LimitExceeded when
/// n! is beyond `limits` (true for most densities below 1/2).
inline BoundReport theoretical_bound(const Rational& alpha, const Rational& beta, const BoundLimits& limits = {}) {
  BoundParameters p = bound_parameters(alpha, beta, limits);
  if (p.n > limits.max_factorial_arg) throw LimitExceeded("n = " + to_decimal(p.n) + " too large for n!");
  BoundReport r{alpha, beta, p.N_B, std::move(p.L), std::move(p.n), 0};
  r.k0 = r.L * factorial(r.n.convert_to<std::uint64_t>());
  return r;
}

/// d = gcd(k0, N).
inline std::uint64_t cor2_divisor(const BigInt& k0, std::uint64_t modulus) {
  detail::require(k0 >= 1, "k0 must be positive");
  detail::require(modulus >= 1, "N must be positive");
  const BigInt residue = k0 % modulus;
  return std::gcd(residue.convert_to<std::uint64_t>(), modulus);
}

/// One replayed factorization k * b = x * y with x in R(A), y in R(B).
struct FactorWitness {
  std::int64_t b = 0;
  std::uint64_t m = 0;
  std::uint64_t j = 0;
  BigInt x;
  BigInt y;
  BigInt k;
};

/// Replays the constructive factorization for one b: finds m <= n with
/// {m b, ..., L m b} in R(A), then j <= N_B with j * k0 / (L m) in R(B),
/// and returns x = (L m / j) b, y = j k0 / (L m). Every step is checked;
/// a missing witness raises VerificationError.
inline FactorWitness factor_witness(const ResidueSet& a, const ResidueSet& b_set, std::int64_t b,
                                    const BoundReport& report) {
  detail::require(!a.empty() && !b_set.empty(), "factor_witness needs nonempty A and B");
  detail::require(b != 0, "b must be nonzero");
  detail::require(report.alpha <= density(a), "report alpha " + report.alpha.str() + " exceeds mu(A)");
  detail::require(report.beta <= density(b_set), "report beta " + report.beta.str() + " exceeds nu(B)");

  const ResidueSet ra = return_set(a);
  const ResidueSet rb = return_set(b_set);
  const std::uint64_t na = a.modulus();
  const std::uint64_t nb = b_set.modulus();
  const std::uint64_t step = a.reduce(b);
  const std::uint64_t checks = report.L > BigInt(na) ? na : report.L.convert_to<std::uint64_t>();

  FactorWitness w;
  w.b = b;
  w.k = report.k0;

  std::uint64_t m = 1;
  for (;; ++m) {
    const std::uint64_t base = m % na * step % na;
    bool ok = true;
    for (std::uint64_t i = 1; i <= checks && ok; ++i) ok = ra.contains(i * base % na);
    if (ok) break;
    if (m > na) detail::fail_verification("no m with {mb, ..., Lmb} in R(A)");
  }
  if (BigInt(m) > report.n)
    detail::fail_verification("m = " + std::to_string(m) + " exceeds n = " + to_decimal(report.n));
  w.m = m;

  const BigInt lm = report.L * m;
  if (report.k0 % lm != 0) detail::fail_verification("L*m does not divide k0");
  const BigInt c = report.k0 / lm;
  const std::uint64_t c_mod = (c % nb).convert_to<std::uint64_t>();

  std::uint64_t j = 0;
  for (std::uint64_t cand = 1; cand <= report.N_B; ++cand) {
    if (rb.contains(cand % nb * c_mod % nb)) {
      j = cand;
      break;
    }
  }
  if (j == 0) detail::fail_verification("no j <= N_B with j * k0/(L m) in R(B)");
  if (lm % j != 0) detail::fail_verification("j does not divide L*m");
  w.j = j;

  w.x = lm / j * b;
  w.y = c * j;
  if (w.x * w.y != report.k0 * b) detail::fail_verification("x * y != k0 * b");
  const BigInt xa = ((w.x % na) + na) % na;
  if (!ra.contains(xa.convert_to<std::uint64_t>())) detail::fail_verification("x not in R(A)");
  if (!rb.contains((w.y % nb).convert_to<std::uint64_t>())) detail::fail_verification("y not in R(B)");
  return w;
}

/// Minimal divisor d of N with dZ_N inside (E1 - E1)(E2 - E2).
inline std::uint32_t verify_instance(const ResidueSet& e1, const ResidueSet& e2,
                                     ProductBackend backend = ProductBackend::naive) {
  require_same_modulus(e1, e2);
  detail::require(!e1.empty() && !e2.empty(), "verify_instance needs nonempty sets");
  const ResidueSet prod = product_set(difference_set(e1), difference_set(e2), backend);
  const auto d = minimal_divisor(prod);
  if (!d) detail::fail_verification("0 missing from a product of difference sets");
  if (e1.modulus() % *d != 0 || !contains_subgroup(prod, *d)) detail::fail_verification("dZ_N not contained");
  return *d;
}

}  // namespace diffprod
