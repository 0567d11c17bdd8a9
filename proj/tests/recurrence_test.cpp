#include <cstdint>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "diffprod/recurrence.hpp"
#include "oracles.hpp"

namespace diffprod {
namespace {

using Elems = std::vector<std::uint32_t>;

ResidueSet from_mask(std::uint32_t n, std::uint64_t mask) {
  ResidueSet s(n);
  for (std::uint32_t i = 0; i < n; ++i)
    if (mask >> i & 1) s.insert(i);
  return s;
}

TEST(ReturnSetTest, Examples) {
  EXPECT_EQ(return_set(make_residue_set(4, {0, 1})).elements(), Elems({0, 1, 3}));
  EXPECT_EQ(return_set(ResidueSet::full(9)), ResidueSet::full(9));
  EXPECT_TRUE(return_set(ResidueSet(5)).empty());
}

TEST(ReturnSetTest, EqualsDifferenceSetExhaustively) {
  for (std::uint32_t n = 1; n <= 10; ++n)
    for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
      const auto a = from_mask(n, mask);
      ASSERT_EQ(return_set(a), difference_set(a)) << "n=" << n << " mask=" << mask;
    }
}

TEST(ReturnSetTest, EqualsDifferenceSetOnLargeRandomSets) {
  std::mt19937_64 rng(7);
  for (std::uint32_t n : {63u, 64u, 65u, 127u, 200u, 1000u}) {
    ResidueSet a(n);
    for (std::uint32_t i = 0; i < n; ++i)
      if (rng() % 9 == 0) a.insert(i);
    EXPECT_EQ(return_set(a), difference_set(a)) << n;
  }
}

TEST(PoincareMinReturnTest, Examples) {
  const auto single = make_residue_set(5, {0});
  EXPECT_EQ(poincare_min_return(single, 1), 5u);
  EXPECT_EQ(poincare_bound(single), 6u);
  EXPECT_EQ(poincare_min_return(ResidueSet::full(6), 1), 1u);
  const auto pair = make_residue_set(8, {0, 2});
  EXPECT_EQ(poincare_min_return(pair, 1), 2u);
  EXPECT_EQ(poincare_bound(pair), 5u);
}

TEST(PoincareMinReturnTest, Errors) {
  EXPECT_THROW(poincare_min_return(ResidueSet(5), 1), InvalidArgument);
  EXPECT_THROW(poincare_min_return(ResidueSet::full(5), 0), InvalidArgument);
}

TEST(PoincareMinReturnTest, NegativeAndNonCoprimeSteps) {
  const auto a = make_residue_set(8, {0, 2});
  EXPECT_EQ(poincare_min_return(a, -1), 2u);
  EXPECT_EQ(poincare_min_return(a, 2), 1u);
  EXPECT_EQ(poincare_min_return(a, 8), 1u);
}

TEST(PoincareMinReturnTest, BoundHoldsForAllStepsUpToTen) {
  for (std::uint32_t n = 1; n <= 10; ++n)
    for (std::uint64_t mask = 1; mask < (1ull << n); ++mask) {
      const auto a = from_mask(n, mask);
      for (std::int64_t b = 1; b <= static_cast<std::int64_t>(n); ++b) {
        const auto m = poincare_min_return(a, b);
        ASSERT_LE(m, n / a.size() + 1);
        // Minimality against a direct scan.
        for (std::uint64_t k = 1; k < m; ++k) {
          bool hit = false;
          for (auto x : a.elements()) hit = hit || a.contains_residue(static_cast<std::int64_t>(x + k * b));
          ASSERT_FALSE(hit);
        }
      }
    }
}

TEST(Lemma1WitnessTest, Examples) {
  EXPECT_EQ(lemma1_witness(ResidueSet::full(7), 3, 2), 1u);
  const auto a = make_residue_set(4, {0, 1});
  EXPECT_EQ(lemma1_witness(a, 2, 1), 4u);
  EXPECT_EQ(lemma1_bound(a, 2), 5);
  const auto b = make_residue_set(4, {0, 1, 2});
  EXPECT_EQ(lemma1_witness(b, 2, 1), 1u);
  EXPECT_EQ(lemma1_bound(b, 2), 2);
}

TEST(Lemma1WitnessTest, LargeLDoesNotMaterializeThePower) {
  const auto a = make_residue_set(4, {0, 1});
  EXPECT_EQ(lemma1_witness(a, 1'000'000'000ull, 1), 4u);
}

TEST(Lemma1WitnessTest, MatchesBruteForce) {
  for (std::uint32_t n = 1; n <= 9; ++n)
    for (std::uint64_t mask = 1; mask < (1ull << n); ++mask) {
      const auto a = from_mask(n, mask);
      const auto r = oracle::difference(oracle::from_mask(mask, static_cast<int>(n)), n);
      for (std::uint64_t L = 1; L <= 3; ++L)
        for (std::int64_t b = 1; b < static_cast<std::int64_t>(n); ++b) {
          std::uint64_t expected = 1;
          while (true) {
            bool ok = true;
            for (std::uint64_t i = 1; i <= L; ++i)
              ok = ok && r.count(oracle::mod(static_cast<std::int64_t>(i * expected) * b, n));
            if (ok) break;
            ++expected;
          }
          ASSERT_EQ(lemma1_witness(a, L, b), expected);
        }
    }
}

TEST(TheoreticalBoundTest, Examples) {
  auto r = theoretical_bound(Rational(1, 1), Rational(1, 1));
  EXPECT_EQ(r.N_B, 2u);
  EXPECT_EQ(r.L, 2);
  EXPECT_EQ(r.n, 2);
  EXPECT_EQ(r.k0, 4);

  r = theoretical_bound(Rational(1, 2), Rational(1, 1));
  EXPECT_EQ(r.N_B, 2u);
  EXPECT_EQ(r.L, 2);
  EXPECT_EQ(r.n, 5);
  EXPECT_EQ(r.k0, 240);

  r = theoretical_bound(Rational(1, 2), Rational(1, 2));
  EXPECT_EQ(r.N_B, 3u);
  EXPECT_EQ(r.L, 6);
  EXPECT_EQ(r.n, 65);
  const std::string oracle_k0 = oracle::times_small(oracle::factorial_decimal(65), 6);
  EXPECT_EQ(to_decimal(r.k0), oracle_k0);
  EXPECT_EQ(decimal_digits(r.k0), 92u);
}

TEST(TheoreticalBoundTest, RejectsNonDensities) {
  EXPECT_THROW(theoretical_bound(Rational(0, 1), Rational(1, 2)), InvalidArgument);
  EXPECT_THROW(theoretical_bound(Rational(1, 2), Rational(0, 3)), InvalidArgument);
  EXPECT_THROW(theoretical_bound(Rational(3, 2), Rational(1, 2)), InvalidArgument);
}

TEST(TheoreticalBoundTest, RefusesUnmaterializableFactorials) {
  // beta = 1/4: L = 120, alpha = 1/2: n = 2^120 + 1.
  EXPECT_THROW(theoretical_bound(Rational(1, 2), Rational(1, 4)), LimitExceeded);
  const auto p = bound_parameters(Rational(1, 2), Rational(1, 4));
  EXPECT_EQ(p.L, 120);
  EXPECT_EQ(p.n, (BigInt(1) << 120) + 1);
}

TEST(TheoreticalBoundTest, KeyValueAndJsonUseDecimalStrings) {
  const auto r = theoretical_bound(Rational(1, 2), Rational(1, 1));
  EXPECT_EQ(r.to_key_value(), "alpha=1/2\nbeta=1\nN_B=2\nL=2\nn=5\nk0=240\ndigits=3\n");
  const auto j = r.to_json();
  EXPECT_EQ(j.dump(), R"({"alpha":"1/2","beta":"1","N_B":2,"L":"2","n":"5","k0":"240","digits":3})");
  const auto big = theoretical_bound(Rational(1, 2), Rational(1, 2)).to_json();
  EXPECT_EQ(nlohmann::ordered_json::parse(big.dump()).dump(), big.dump());
  EXPECT_TRUE(big["k0"].is_string());
}

TEST(TheoreticalBoundTest, MonotoneOnDenominatorGrid) {
  std::vector<Rational> grid;
  for (std::uint64_t q = 1; q <= 4; ++q)
    for (std::uint64_t p = 1; p <= q; ++p) {
      Rational r(p, q);
      if (std::find(grid.begin(), grid.end(), r) == grid.end()) grid.push_back(r);
    }
  ASSERT_EQ(grid.size(), 6u);
  for (const auto& a1 : grid)
    for (const auto& b1 : grid)
      for (const auto& a2 : grid)
        for (const auto& b2 : grid) {
          if (!(a2 <= a1 && b2 <= b1)) continue;
          // k0 = L * n! is increasing in L and n, so monotone (L, n) suffices.
          const auto hi = bound_parameters(a1, b1);
          const auto lo = bound_parameters(a2, b2);
          EXPECT_GE(lo.L, hi.L);
          EXPECT_GE(lo.n, hi.n);
          if (lo.n <= 2000 && hi.n <= 2000)
            EXPECT_GE(theoretical_bound(a2, b2).k0, theoretical_bound(a1, b1).k0);
        }
}

TEST(Cor2DivisorTest, Examples) {
  EXPECT_EQ(cor2_divisor(4, 10), 2u);
  const BigInt k0 = theoretical_bound(Rational(1, 2), Rational(1, 2)).k0;
  for (std::uint64_t p : {67ull, 71ull, 101ull, 1000003ull}) EXPECT_EQ(cor2_divisor(k0, p), 1u);
  EXPECT_EQ(cor2_divisor(240, 240), 240u);
  EXPECT_EQ(cor2_divisor(k0, 64), 64u);
  EXPECT_THROW(cor2_divisor(0, 5), InvalidArgument);
}

TEST(FactorWitnessTest, FullSystems) {
  const auto report = theoretical_bound(Rational(1, 1), Rational(1, 1));
  const auto w = factor_witness(ResidueSet::full(3), ResidueSet::full(3), 1, report);
  EXPECT_EQ(w.k, 4);
  EXPECT_EQ(w.x * w.y, 4);
  EXPECT_EQ(w.m, 1u);
  EXPECT_EQ(w.j, 1u);
}

TEST(FactorWitnessTest, HalfDensityReplay) {
  const auto report = theoretical_bound(Rational(1, 2), Rational(1, 1));
  const auto w = factor_witness(make_residue_set(4, {0, 1}), ResidueSet::full(2), 1, report);
  EXPECT_EQ(w.x * w.y, 240);
  EXPECT_EQ(w.m, 4u);
  EXPECT_EQ(w.j, 1u);
  EXPECT_EQ(w.x, 8);
  EXPECT_EQ(w.y, 30);
}

TEST(FactorWitnessTest, DegenerateZ1) {
  const auto one = make_residue_set(1, {0});
  const auto report = theoretical_bound(Rational(1, 1), Rational(1, 1));
  for (std::int64_t b : {-3, -1, 1, 5}) {
    const auto w = factor_witness(one, one, b, report);
    EXPECT_EQ(w.x * w.y, report.k0 * b);
  }
}

TEST(FactorWitnessTest, DifferentModuliAndNegativeSteps) {
  const auto report = theoretical_bound(Rational(1, 2), Rational(1, 2));
  const auto a = make_residue_set(8, {0, 1, 2, 5});
  const auto b = make_residue_set(6, {0, 1, 3});
  for (std::int64_t step : {-3, -2, -1, 1, 2, 3, 7}) {
    const auto w = factor_witness(a, b, step, report);
    EXPECT_EQ(w.x * w.y, report.k0 * step);
    EXPECT_EQ((report.L * w.m) % w.j, 0);
  }
}

TEST(FactorWitnessTest, RejectsReportDensitiesAboveActual) {
  const auto report = theoretical_bound(Rational(1, 1), Rational(1, 1));
  EXPECT_THROW(factor_witness(make_residue_set(4, {0, 1}), ResidueSet::full(2), 1, report), InvalidArgument);
  EXPECT_THROW(factor_witness(ResidueSet(4), ResidueSet::full(2), 1, report), InvalidArgument);
}

TEST(VerifyInstanceTest, Examples) {
  const auto e = make_residue_set(4, {0, 1});
  EXPECT_EQ(verify_instance(e, e), 4u);
  EXPECT_EQ(verify_instance(ResidueSet::full(6), ResidueSet::full(6)), 1u);
  const auto f = make_residue_set(7, {0, 1, 3});
  EXPECT_EQ(verify_instance(f, f), 1u);
  EXPECT_THROW(verify_instance(e, ResidueSet::full(5)), InvalidArgument);
  EXPECT_THROW(verify_instance(e, ResidueSet(4)), InvalidArgument);
}

TEST(VerifyInstanceTest, TranslationAndDilationInvariant) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 300; ++t) {
    const std::uint32_t n = 2 + static_cast<std::uint32_t>(rng() % 40);
    ResidueSet e1(n), e2(n);
    for (std::uint32_t i = 0; i < n; ++i) {
      if (rng() % 3 == 0) e1.insert(i);
      if (rng() % 3 == 0) e2.insert(i);
    }
    e1.insert(static_cast<std::uint32_t>(rng() % n));
    e2.insert(static_cast<std::uint32_t>(rng() % n));
    const auto d = verify_instance(e1, e2);
    EXPECT_EQ(n % d, 0u);
    const auto l1 = e1.elements(), l2 = e2.elements();
    EXPECT_EQ(d, static_cast<std::uint32_t>(oracle::verify(oracle::Set(l1.begin(), l1.end()),
                                                           oracle::Set(l2.begin(), l2.end()), n)));
    const auto shift = static_cast<std::int64_t>(rng() % n);
    EXPECT_EQ(verify_instance(translate(e1, shift), e2), d);
    EXPECT_EQ(verify_instance(e1, translate(e2, -shift)), d);
    std::int64_t u = 1 + static_cast<std::int64_t>(rng() % n);
    while (std::gcd<std::int64_t>(u, n) != 1) ++u;
    EXPECT_EQ(verify_instance(dilate(e1, u), e2), d);
    EXPECT_EQ(verify_instance(e1, dilate(e2, u)), d);
  }
}

}  // namespace
}  // namespace diffprod
