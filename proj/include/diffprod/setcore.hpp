#pragma once

// Exact set arithmetic over Z_N and over integer windows.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "diffprod/errors.hpp"
#include "diffprod/residue_set.hpp"
#include "diffprod/window_set.hpp"

namespace diffprod {

/// E - E = {a - b mod N : a, b in E}, computed word-parallel.
///
/// E is laid out twice in a 2N-bit buffer so that the cyclic rotation of E
/// by -a is the contiguous N-bit window starting at bit a; the result is the
/// OR of those windows over a in E.
inline ResidueSet difference_set(const ResidueSet& e) {
  const std::size_t n = e.modulus();
  const std::size_t nw = bits::words_for(n);
  std::vector<Word> out(nw, 0);
  const std::vector<std::uint32_t> members = e.elements();
  if (members.empty()) return ResidueSet::from_words(e.modulus(), std::move(out));

  std::vector<Word> doubled(bits::words_for(2 * n) + 2, 0);
  bits::or_shifted_left(doubled, e.words(), 0);
  bits::or_shifted_left(doubled, e.words(), n);

  for (std::size_t idx = 0; idx < members.size(); ++idx) {
    const std::size_t a = members[idx];
    const std::size_t q = a / kWordBits;
    const unsigned r = static_cast<unsigned>(a % kWordBits);
    const Word* src = doubled.data() + q;
    if (r == 0) {
      for (std::size_t w = 0; w < nw; ++w) out[w] |= src[w];
    } else {
      const unsigned l = static_cast<unsigned>(kWordBits) - r;
      for (std::size_t w = 0; w < nw; ++w) out[w] |= (src[w] >> r) | (src[w + 1] << l);
    }
    if ((idx & 63) == 63) {
      bits::clear_tail(out, n);
      if (bits::popcount(out) == n) break;
    }
  }
  return ResidueSet::from_words(e.modulus(), std::move(out));
}

/// Reference oracle for difference_set: a double loop over ordered pairs.
inline ResidueSet difference_set_naive(const ResidueSet& e) {
  const std::uint64_t n = e.modulus();
  ResidueSet out(e.modulus(), e.modulus());
  const auto members = e.elements();
  for (std::uint64_t a : members)
    for (std::uint64_t b : members) out.insert(static_cast<std::uint32_t>((a + n - b) % n));
  return out;
}

enum class ProductBackend {
  naive,       ///< double loop over both element lists (the oracle)
  saturating,  ///< scans the smaller set against the larger bitset, stops once the result is all of Z_N
};

/// S1 * S2 = {a * b mod N : a in S1, b in S2}.
inline ResidueSet product_set(const ResidueSet& s1, const ResidueSet& s2,
                              ProductBackend backend = ProductBackend::naive) {
  require_same_modulus(s1, s2);
  const std::uint64_t n = s1.modulus();
  ResidueSet out(s1.modulus(), s1.modulus());

  if (backend == ProductBackend::naive) {
    const auto a_list = s1.elements();
    const auto b_list = s2.elements();
    for (std::uint64_t a : a_list)
      for (std::uint64_t b : b_list) out.insert(static_cast<std::uint32_t>(a * b % n));
    return out;
  }

  const bool swap = s2.size() < s1.size();
  const ResidueSet& outer = swap ? s2 : s1;
  const ResidueSet& inner = swap ? s1 : s2;
  std::vector<Word> acc(bits::words_for(n), 0);
  std::size_t count = 0;
  for (std::uint64_t a : outer.elements()) {
    bits::for_each_set_bit(inner.words(), [&](std::size_t b) {
      const std::size_t p = a * b % n;
      const Word mask = Word{1} << (p % kWordBits);
      Word& w = acc[p / kWordBits];
      count += (w & mask) == 0;
      w |= mask;
    });
    if (count == n) break;
  }
  return ResidueSet::from_words(s1.modulus(), std::move(acc));
}

/// Positive divisors of n in increasing order.
inline std::vector<std::uint32_t> divisors(std::uint32_t n) {
  detail::require(n >= 1, "divisors of 0 are not enumerable");
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 1; static_cast<std::uint64_t>(i) * i <= n; ++i) {
    if (n % i) continue;
    out.push_back(i);
    if (i != n / i) out.push_back(n / i);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// True iff dZ_N = {0, d, 2d, ..., N - d} is contained in S. d must divide N.
inline bool contains_subgroup(const ResidueSet& s, std::uint32_t d) {
  if (d == 0 || s.modulus() % d != 0)
    throw InvalidArgument(std::to_string(d) + " does not divide modulus " + std::to_string(s.modulus()));
  for (std::uint32_t x = 0; x < s.modulus(); x += d)
    if (!s.contains(x)) return false;
  return true;
}

/// Smallest divisor d of N with dZ_N contained in S; absent iff 0 is not in S.
inline std::optional<std::uint32_t> minimal_divisor(const ResidueSet& s) {
  if (!s.contains(0)) return std::nullopt;
  for (std::uint32_t d : divisors(s.modulus()))
    if (contains_subgroup(s, d)) return d;
  detail::fail_verification("d = N must contain {0}");
}

/// All pairwise differences of a window set. The result lives on
/// [lo - hi + 1, hi - lo).
inline WindowSet window_difference_set(const WindowSet& e) {
  const std::int64_t w = e.width();
  WindowSet out(1 - w, w, 2 * w);
  // x = b - a is stored at bit (b - lo) + (hi - 1 - a).
  for (std::int64_t a : e.elements())
    bits::or_shifted_left(out.mutable_words(), e.words(), static_cast<std::size_t>(e.hi() - 1 - a));
  return out;
}

struct WindowProduct {
  WindowSet set;
  /// Ordered pairs (a, b) whose product fell outside the clip window.
  std::uint64_t dropped = 0;
};

/// Products a * b (a in S1, b in S2) that land in [clip_lo, clip_hi).
inline WindowProduct window_product_set(const WindowSet& s1, const WindowSet& s2, std::int64_t clip_lo,
                                        std::int64_t clip_hi) {
  WindowProduct out{WindowSet(clip_lo, clip_hi), 0};
  const auto b_list = s2.elements();
  for (std::int64_t a : s1.elements()) {
    for (std::int64_t b : b_list) {
      const __int128 p = static_cast<__int128>(a) * b;
      if (p >= clip_lo && p < clip_hi)
        out.set.insert(static_cast<std::int64_t>(p));
      else
        ++out.dropped;
    }
  }
  return out;
}

/// True iff every multiple of k inside S's window belongs to S. This is
/// finite-window evidence about kZ, never a proof of containment.
inline bool window_progression_evidence(const WindowSet& s, std::uint64_t k) {
  detail::require(k >= 1, "k must be positive");
  const std::int64_t step = static_cast<std::int64_t>(k);
  std::int64_t first = s.lo() % step == 0 ? s.lo() : s.lo() - (s.lo() % step) + (s.lo() > 0 ? step : 0);
  for (std::int64_t x = first; x < s.hi(); x += step)
    if (!s.contains(x)) return false;
  return true;
}

}  // namespace diffprod
