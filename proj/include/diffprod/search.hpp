#pragma once

// Empirical extremal search for the worst-case minimal divisor d of
// (E1 - E1)(E2 - E2) over subsets of Z_N with prescribed densities.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "diffprod/bigint.hpp"
#include "diffprod/errors.hpp"
#include "diffprod/rational.hpp"
#include "diffprod/recurrence.hpp"
#include "diffprod/residue_set.hpp"
#include "diffprod/setcore.hpp"

namespace diffprod {

// ---------------------------------------------------------------------------
// Random numbers

/// Identifier recorded with every sampled result. Engine output is fixed by
/// the C++ standard; bounded draws use rejection sampling on raw 64-bit
/// outputs (std distributions are implementation-defined, so not used).
inline constexpr std::string_view kRngAlgorithm = "mt19937_64/splitmix64-streams/rejection";

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

class Rng {
 public:
  /// Stream `stream` of the generator family keyed by `seed`.
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : engine_(splitmix64(seed ^ splitmix64(stream + 0x632BE59BD9B4E019ull))) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    detail::require(bound > 0, "empty range");
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do x = next();
    while (x >= limit);
    return x % bound;
  }

  /// Uniform big integer in [0, bound).
  BigInt below(const BigInt& bound) {
    detail::require(bound > 0, "empty range");
    const std::size_t nbits = boost::multiprecision::msb(bound) + 1;
    const std::size_t chunks = (nbits + 63) / 64;
    const BigInt mask = (BigInt(1) << nbits) - 1;
    while (true) {
      BigInt x = 0;
      for (std::size_t i = 0; i < chunks; ++i) x = (x << 64) | BigInt(next());
      x &= mask;
      if (x < bound) return x;
    }
  }

 private:
  std::mt19937_64 engine_;
};

// ---------------------------------------------------------------------------
// Combinatorics helpers

inline BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline std::uint64_t euler_phi(std::uint64_t n) {
  std::uint64_t r = n;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    while (n % p == 0) n /= p;
    r -= r / p;
  }
  if (n > 1) r -= r / n;
  return r;
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Number of translation classes of size-k subsets of Z_N (Burnside).
inline BigInt translation_orbit_count(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k == 0) return 1;
  BigInt total = 0;
  const std::uint64_t g = std::gcd(n, k);
  for (std::uint64_t d = 1; d <= g; ++d)
    if (g % d == 0) total += binomial(n / d, k / d) * euler_phi(d);
  return total / n;
}

/// Visits every k-subset of {0, ..., n-1} in lexicographic order.
template <class F>
void for_each_combination(std::uint32_t n, std::uint32_t k, F&& f) {
  if (k > n) return;
  std::vector<std::uint32_t> c(k);
  std::iota(c.begin(), c.end(), 0u);
  while (true) {
    f(static_cast<const std::vector<std::uint32_t>&>(c));
    std::int64_t i = static_cast<std::int64_t>(k) - 1;
    while (i >= 0 && c[static_cast<std::size_t>(i)] == n - k + static_cast<std::uint32_t>(i)) --i;
    if (i < 0) return;
    ++c[static_cast<std::size_t>(i)];
    for (std::size_t t = static_cast<std::size_t>(i) + 1; t < k; ++t) c[t] = c[t - 1] + 1;
  }
}

/// The rank-th k-subset of {0, ..., n-1} in lexicographic order.
inline std::vector<std::uint32_t> unrank_combination(std::uint32_t n, std::uint32_t k, BigInt rank) {
  detail::require(rank < binomial(n, k), "combination rank out of range");
  std::vector<std::uint32_t> out;
  out.reserve(k);
  std::uint32_t x = 0;
  while (out.size() < k) {
    const std::uint32_t left = k - static_cast<std::uint32_t>(out.size());
    const BigInt with_x = binomial(n - x - 1, left - 1);
    if (rank < with_x) {
      out.push_back(x);
    } else {
      rank -= with_x;
    }
    ++x;
  }
  return out;
}

inline ResidueSet residue_set_of(std::uint32_t modulus, const std::vector<std::uint32_t>& members) {
  ResidueSet s(modulus, modulus);
  for (auto x : members) s.insert(x);
  return s;
}

// ---------------------------------------------------------------------------
// Canonical forms

/// Lexicographically least image of E under translations (and unit
/// dilations when `dilations` is set).
inline ResidueSet canonical_form(const ResidueSet& e, bool dilations = false) {
  if (e.empty()) return e;
  const std::uint32_t n = e.modulus();
  ResidueSet best = e;
  auto consider = [&](const ResidueSet& base) {
    // The least translate contains 0, so only shifts by -t for t in base matter.
    base.for_each([&](std::uint32_t t) {
      ResidueSet cand = translate(base, -static_cast<std::int64_t>(t));
      if (lex_less(cand, best)) best = std::move(cand);
    });
  };
  if (!dilations) {
    consider(e);
    return best;
  }
  for (std::uint32_t u = 1; u <= n; ++u)
    if (std::gcd(u % n, n) == 1) consider(dilate(e, u));
  return best;
}

/// Size of the translation orbit of E.
inline std::uint32_t translation_orbit_size(const ResidueSet& e) {
  for (std::uint32_t d : divisors(e.modulus()))
    if (translate(e, d) == e) return d;
  return e.modulus();
}

/// Calls f once per canonical representative of the size-`size` subsets of
/// Z_N, in lexicographic order.
template <class F>
void for_each_canonical(std::uint32_t n, std::uint32_t size, bool dilations, F&& f) {
  detail::require(size >= 1 && size <= n, "size must lie in [1, N]");
  // Representatives contain 0; enumerate the remaining size - 1 elements.
  for_each_combination(n - 1, size - 1, [&](const std::vector<std::uint32_t>& rest) {
    ResidueSet s(n, n);
    s.insert(0);
    for (auto x : rest) s.insert(x + 1);
    if (canonical_form(s, dilations) == s) f(s);
  });
}

inline std::vector<ResidueSet> enumerate_canonical(std::uint32_t n, std::uint32_t size, bool dilations = false) {
  std::vector<ResidueSet> out;
  for_each_canonical(n, size, dilations, [&](const ResidueSet& s) { out.push_back(s); });
  return out;
}

// ---------------------------------------------------------------------------
// Sweeps

enum class SearchMode { exhaustive, hill_climb };

inline std::string to_string(SearchMode m) { return m == SearchMode::exhaustive ? "exhaustive" : "hill_climb"; }

inline SearchMode parse_search_mode(std::string_view s) {
  if (s == "exhaustive") return SearchMode::exhaustive;
  if (s == "hill_climb") return SearchMode::hill_climb;
  throw InvalidArgument("unknown search mode '" + std::string(s) + "'");
}

struct SearchConfig {
  std::uint32_t modulus = 1;
  Rational alpha{1, 2};
  Rational beta{1, 2};
  SearchMode mode = SearchMode::exhaustive;
  std::uint64_t seed = 0;
  std::uint64_t iterations = 0;
  std::uint64_t restarts = 0;
  std::uint32_t workers = 1;
  /// Maximum number of canonical (E1, E2) pairs an exhaustive sweep may visit.
  BigInt budget = 50'000'000;
  /// Also reduce by unit dilations in exhaustive enumeration.
  bool dilations = false;

  std::uint32_t size1() const { return required_size(alpha); }
  std::uint32_t size2() const { return required_size(beta); }

  void validate() const {
    detail::require(modulus >= 1 && modulus <= kDefaultModulusCap, "modulus out of range");
    detail::require(alpha.is_density() && beta.is_density(), "densities must lie in (0, 1]");
    detail::require(workers >= 1, "workers must be positive");
  }

 private:
  std::uint32_t required_size(const Rational& r) const {
    return static_cast<std::uint32_t>(std::max<std::uint64_t>(1, r.ceil_times(modulus)));
  }
};

struct ExperimentRecord {
  SearchConfig config;
  std::uint32_t best_d = 0;
  ResidueSet witness_e1{1};
  ResidueSet witness_e2{1};
  BigInt candidates = 0;
  double wall_time_s = 0;
  std::string rng{kRngAlgorithm};
};

/// Builds a record after re-checking verify_instance on the witnesses.
inline ExperimentRecord make_record(const SearchConfig& config, std::uint32_t best_d, ResidueSet e1, ResidueSet e2,
                                    BigInt candidates, double wall_time_s) {
  const std::uint32_t d = verify_instance(e1, e2);
  if (d != best_d)
    detail::fail_verification("record best_d " + std::to_string(best_d) + " but witnesses give " + std::to_string(d));
  return ExperimentRecord{config, best_d, std::move(e1), std::move(e2), std::move(candidates), wall_time_s,
                          std::string(kRngAlgorithm)};
}

namespace detail {

/// Runs f(shard) for shard in [0, workers) on separate threads and rethrows
/// the first exception.
template <class F>
void run_shards(std::uint32_t workers, F&& f) {
  if (workers <= 1) {
    f(0u);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (std::uint32_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          f(w);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Orders candidate results: larger d first, then lexicographically
/// smaller (E1, E2).
inline bool better_pair(std::uint32_t d, const ResidueSet& a1, const ResidueSet& a2, std::uint32_t best_d,
                        const ResidueSet& b1, const ResidueSet& b2) {
  if (d != best_d) return d > best_d;
  if (a1 != b1) return lex_less(a1, b1);
  return lex_less(a2, b2);
}

}  // namespace detail

/// Canonical representatives of every size >= min_size, sorted lexicographically.
inline std::vector<ResidueSet> canonical_pool(std::uint32_t n, std::uint32_t min_size, bool dilations) {
  std::vector<ResidueSet> pool;
  for (std::uint32_t s = min_size; s <= n; ++s)
    for_each_canonical(n, s, dilations, [&](const ResidueSet& r) { pool.push_back(r); });
  std::sort(pool.begin(), pool.end(), [](const ResidueSet& a, const ResidueSet& b) { return lex_less(a, b); });
  return pool;
}

/// Upper bound on the canonical pair count (translation classes only).
inline BigInt exhaustive_pair_count(const SearchConfig& config) {
  BigInt c1 = 0, c2 = 0;
  for (std::uint32_t s = config.size1(); s <= config.modulus; ++s) c1 += translation_orbit_count(config.modulus, s);
  for (std::uint32_t s = config.size2(); s <= config.modulus; ++s) c2 += translation_orbit_count(config.modulus, s);
  return c1 * c2;
}

/// Maximum of verify_instance over all canonical pairs with
/// |E1| >= ceil(alpha N), |E2| >= ceil(beta N).
inline ExperimentRecord exhaustive_sweep(const SearchConfig& config) {
  config.validate();
  detail::require(config.mode == SearchMode::exhaustive, "exhaustive_sweep requires mode exhaustive");
  const auto t0 = std::chrono::steady_clock::now();

  const BigInt pairs = exhaustive_pair_count(config);
  if (pairs > config.budget)
    throw LimitExceeded("budget exceeded: " + to_decimal(pairs) + " canonical pairs > budget " +
                        to_decimal(config.budget));

  const std::uint32_t n = config.modulus;
  const auto pool1 = canonical_pool(n, config.size1(), config.dilations);
  const auto pool2 = config.size2() == config.size1() ? pool1 : canonical_pool(n, config.size2(), config.dilations);
  std::vector<ResidueSet> diff1, diff2;
  for (const auto& e : pool1) diff1.push_back(difference_set(e));
  for (const auto& e : pool2) diff2.push_back(difference_set(e));

  struct Best {
    std::uint32_t d = 0;
    std::size_t i = 0, j = 0;
  };
  std::vector<Best> shard_best(config.workers);
  detail::run_shards(config.workers, [&](std::uint32_t w) {
    Best best;
    for (std::size_t i = w; i < pool1.size(); i += config.workers) {
      for (std::size_t j = 0; j < pool2.size(); ++j) {
        const auto d = minimal_divisor(product_set(diff1[i], diff2[j]));
        if (!d) detail::fail_verification("0 missing from product of difference sets");
        // Pools are sorted, so index order is the lexicographic pair order.
        if (*d > best.d || (*d == best.d && std::pair(i, j) < std::pair(best.i, best.j))) best = {*d, i, j};
      }
    }
    shard_best[w] = best;
  });

  Best best;
  for (const auto& b : shard_best)
    if (b.d > best.d || (b.d == best.d && b.d != 0 && std::pair(b.i, b.j) < std::pair(best.i, best.j))) best = b;

  const BigInt examined = BigInt(pool1.size()) * pool2.size();
  return make_record(config, best.d, pool1[best.i], pool2[best.j], examined, detail::seconds_since(t0));
}

struct HillClimbRun {
  std::uint32_t best_d = 0;
  ResidueSet e1{1};
  ResidueSet e2{1};
  std::uint64_t evaluations = 0;
};

/// Observer called after every iteration with the current objective.
using HillClimbObserver = std::function<void(std::uint64_t iteration, std::uint32_t objective, bool accepted)>;

namespace detail {

inline ResidueSet random_subset(Rng& rng, std::uint32_t n, std::uint32_t size) {
  std::vector<std::uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  for (std::uint32_t i = 0; i < size; ++i) std::swap(perm[i], perm[i + rng.below(n - i)]);
  perm.resize(size);
  return residue_set_of(n, perm);
}

/// Swaps one uniformly chosen member out and one uniformly chosen
/// non-member in.
inline ResidueSet swap_move(Rng& rng, const ResidueSet& s) {
  const std::uint32_t n = s.modulus();
  const auto members = s.elements();
  std::vector<std::uint32_t> outside;
  outside.reserve(n - members.size());
  for (std::uint32_t x = 0; x < n; ++x)
    if (!s.contains(x)) outside.push_back(x);
  const std::uint32_t drop = members[rng.below(members.size())];
  const std::uint32_t add = outside[rng.below(outside.size())];
  std::vector<Word> w(s.words().begin(), s.words().end());
  w[drop / kWordBits] &= ~(Word{1} << (drop % kWordBits));
  w[add / kWordBits] |= Word{1} << (add % kWordBits);
  return ResidueSet::from_words(n, std::move(w));
}

}  // namespace detail

/// One seeded hill-climbing run (restart index `run`). Moves never
/// decrease the objective.
inline HillClimbRun hill_climb_run(const SearchConfig& config, std::uint64_t run,
                                   const HillClimbObserver& observer = {}) {
  Rng rng(config.seed, run);
  const std::uint32_t n = config.modulus;
  ResidueSet e1 = detail::random_subset(rng, n, config.size1());
  ResidueSet e2 = detail::random_subset(rng, n, config.size2());
  std::uint32_t current = verify_instance(e1, e2);

  HillClimbRun out{current, canonical_form(e1), canonical_form(e2), 1};
  const bool movable1 = e1.size() < n;
  const bool movable2 = e2.size() < n;
  for (std::uint64_t it = 0; it < config.iterations; ++it) {
    bool accepted = false;
    if (movable1 || movable2) {
      const bool first = movable1 && (!movable2 || rng.below(std::uint64_t{2}) == 0);
      ResidueSet cand = detail::swap_move(rng, first ? e1 : e2);
      const std::uint32_t value = first ? verify_instance(cand, e2) : verify_instance(e1, cand);
      ++out.evaluations;
      if (value >= current) {
        (first ? e1 : e2) = std::move(cand);
        current = value;
        accepted = true;
        if (current > out.best_d) out = {current, canonical_form(e1), canonical_form(e2), out.evaluations};
      }
    }
    if (observer) observer(it, current, accepted);
  }
  return out;
}

/// Seeded stochastic local search for the maximum of verify_instance over
/// pairs of sets with exactly the minimal admissible sizes. Runs
/// restarts + 1 independent runs; output is independent of worker count.
inline ExperimentRecord hill_climb_sweep(const SearchConfig& config) {
  config.validate();
  detail::require(config.mode == SearchMode::hill_climb, "hill_climb_sweep requires mode hill_climb");
  const auto t0 = std::chrono::steady_clock::now();

  const std::uint64_t runs = config.restarts + 1;
  std::vector<std::optional<HillClimbRun>> results(runs);
  detail::run_shards(config.workers, [&](std::uint32_t w) {
    for (std::uint64_t r = w; r < runs; r += config.workers) results[r] = hill_climb_run(config, r);
  });

  const HillClimbRun* best = nullptr;
  BigInt evaluations = 0;
  for (const auto& r : results) {
    evaluations += r->evaluations;
    if (!best || detail::better_pair(r->best_d, r->e1, r->e2, best->best_d, best->e1, best->e2)) best = &*r;
  }
  return make_record(config, best->best_d, best->e1, best->e2, evaluations, detail::seconds_since(t0));
}

inline ExperimentRecord run_sweep(const SearchConfig& config) {
  return config.mode == SearchMode::exhaustive ? exhaustive_sweep(config) : hill_climb_sweep(config);
}

// ---------------------------------------------------------------------------
// Prime-field coverage

struct PrimeCoverageReport {
  std::uint32_t p = 0;
  std::uint32_t min_size = 0;
  std::uint64_t seed = 0;
  BigInt qualifying = 0;
  BigInt examined = 0;
  bool exhaustive = true;
  BigInt failures = 0;
  std::vector<ResidueSet> witnesses;
};

inline constexpr std::size_t kMaxCoverageWitnesses = 10;

/// Counts sets E in Z_p with |E| >= min_size for which (E - E)(E - E) is
/// not all of Z_p. Exhaustive when the qualifying count is at most `cap`,
/// otherwise `cap` uniform samples. When min_size > p/2 any failure is a
/// VerificationError, since then E - E = Z_p.
inline PrimeCoverageReport prime_coverage_report(std::uint32_t p, std::uint32_t min_size, const BigInt& cap,
                                                 std::uint64_t seed = 0) {
  if (!is_prime(p)) throw InvalidArgument(std::to_string(p) + " is not prime");
  detail::require(p <= kDefaultModulusCap, "p exceeds modulus cap");
  detail::require(min_size >= 1 && min_size <= p, "min_size must lie in [1, p]");
  detail::require(cap >= 1, "cap must be positive");

  PrimeCoverageReport rep;
  rep.p = p;
  rep.min_size = min_size;
  rep.seed = seed;
  std::vector<BigInt> per_size(p + 1, 0);
  for (std::uint32_t s = min_size; s <= p; ++s) {
    per_size[s] = binomial(p, s);
    rep.qualifying += per_size[s];
  }
  const bool pigeonhole = 2 * static_cast<std::uint64_t>(min_size) > p;

  auto check = [&](const ResidueSet& e) {
    ++rep.examined;
    const ResidueSet diff = difference_set(e);
    if (pigeonhole && !diff.is_full()) detail::fail_verification("|E| > p/2 but E - E != Z_p");
    if (product_set(diff, diff, ProductBackend::saturating).is_full()) return;
    ++rep.failures;
    if (rep.witnesses.size() < kMaxCoverageWitnesses) rep.witnesses.push_back(e);
  };

  rep.exhaustive = rep.qualifying <= cap;
  if (rep.exhaustive) {
    for (std::uint32_t s = min_size; s <= p; ++s)
      for_each_combination(p, s, [&](const std::vector<std::uint32_t>& c) { check(residue_set_of(p, c)); });
  } else {
    Rng rng(seed);
    for (BigInt i = 0; i < cap; ++i) {
      BigInt rank = rng.below(rep.qualifying);
      std::uint32_t s = min_size;
      while (rank >= per_size[s]) rank -= per_size[s++];
      check(residue_set_of(p, unrank_combination(p, s, rank)));
    }
  }
  if (pigeonhole && rep.failures != 0) detail::fail_verification("coverage failure with |E| > p/2");
  return rep;
}

}  // namespace diffprod
