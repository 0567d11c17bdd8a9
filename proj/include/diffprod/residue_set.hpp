#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "diffprod/errors.hpp"

namespace diffprod {

using Word = std::uint64_t;
inline constexpr std::size_t kWordBits = 64;

/// Largest modulus accepted unless a caller passes an explicit cap.
inline constexpr std::uint32_t kDefaultModulusCap = 1u << 20;

namespace bits {

inline std::size_t words_for(std::size_t nbits) { return (nbits + kWordBits - 1) / kWordBits; }

inline bool test(std::span<const Word> w, std::size_t i) { return (w[i / kWordBits] >> (i % kWordBits)) & 1u; }

inline void set(std::span<Word> w, std::size_t i) { w[i / kWordBits] |= Word{1} << (i % kWordBits); }

inline std::size_t popcount(std::span<const Word> w) {
  std::size_t n = 0;
  for (Word x : w) n += static_cast<std::size_t>(std::popcount(x));
  return n;
}

/// Clears every bit at position >= nbits.
inline void clear_tail(std::span<Word> w, std::size_t nbits) {
  const std::size_t full = nbits / kWordBits;
  const std::size_t rem = nbits % kWordBits;
  if (full < w.size()) {
    w[full] &= rem ? (Word{1} << rem) - 1 : Word{0};
    std::fill(w.begin() + static_cast<std::ptrdiff_t>(full) + 1, w.end(), Word{0});
  }
}

/// dst |= src << shift, truncated to dst's length.
inline void or_shifted_left(std::span<Word> dst, std::span<const Word> src, std::size_t shift) {
  const std::size_t ws = shift / kWordBits;
  const unsigned r = static_cast<unsigned>(shift % kWordBits);
  if (r == 0) {
    for (std::size_t i = 0; i < src.size() && i + ws < dst.size(); ++i) dst[i + ws] |= src[i];
    return;
  }
  for (std::size_t i = 0; i < src.size() && i + ws < dst.size(); ++i) {
    dst[i + ws] |= src[i] << r;
    if (i + ws + 1 < dst.size()) dst[i + ws + 1] |= src[i] >> (kWordBits - r);
  }
}

/// Reads 64 bits starting at bit position `pos`; bits past the end read as 0.
inline Word extract(std::span<const Word> w, std::size_t pos) {
  const std::size_t q = pos / kWordBits;
  const unsigned r = static_cast<unsigned>(pos % kWordBits);
  const Word lo = q < w.size() ? w[q] : 0;
  if (r == 0) return lo;
  const Word hi = q + 1 < w.size() ? w[q + 1] : 0;
  return (lo >> r) | (hi << (kWordBits - r));
}

template <class F>
void for_each_set_bit(std::span<const Word> w, F&& f) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    Word x = w[i];
    while (x) {
      f(i * kWordBits + static_cast<std::size_t>(std::countr_zero(x)));
      x &= x - 1;
    }
  }
}

}  // namespace bits

/// A subset of Z_N stored as a membership bit array. Bits at positions
/// >= N are always zero, so word-wise equality is set equality.
class ResidueSet {
 public:
  /// The empty subset of Z_modulus.
  explicit ResidueSet(std::uint32_t modulus, std::uint32_t cap = kDefaultModulusCap) : modulus_(modulus) {
    detail::require(modulus >= 1, "modulus must be at least 1");
    detail::require(modulus <= cap, "modulus " + std::to_string(modulus) + " exceeds cap " + std::to_string(cap));
    words_.assign(bits::words_for(modulus), 0);
  }

  static ResidueSet full(std::uint32_t modulus) {
    ResidueSet s(modulus, modulus);
    std::fill(s.words_.begin(), s.words_.end(), ~Word{0});
    bits::clear_tail(s.words_, modulus);
    return s;
  }

  static ResidueSet from_words(std::uint32_t modulus, std::vector<Word> words) {
    ResidueSet s(modulus, modulus);
    detail::require(words.size() == s.words_.size(), "word count does not match modulus");
    s.words_ = std::move(words);
    bits::clear_tail(s.words_, modulus);
    return s;
  }

  std::uint32_t modulus() const { return modulus_; }
  std::size_t size() const { return bits::popcount(words_); }
  bool empty() const {
    return std::all_of(words_.begin(), words_.end(), [](Word w) { return w == 0; });
  }
  bool is_full() const { return size() == modulus_; }

  /// Membership for r in [0, N).
  bool contains(std::uint64_t r) const { return bits::test(words_, r); }

  /// Membership of an arbitrary integer, reduced mod N first.
  bool contains_residue(std::int64_t x) const { return contains(reduce(x)); }

  void insert(std::uint32_t r) {
    detail::require(r < modulus_, "residue out of range");
    bits::set(words_, r);
  }

  std::uint32_t reduce(std::int64_t x) const {
    const std::int64_t n = modulus_;
    return static_cast<std::uint32_t>(((x % n) + n) % n);
  }

  std::vector<std::uint32_t> elements() const {
    std::vector<std::uint32_t> out;
    out.reserve(size());
    bits::for_each_set_bit(words_, [&](std::size_t i) { out.push_back(static_cast<std::uint32_t>(i)); });
    return out;
  }

  template <class F>
  void for_each(F&& f) const {
    bits::for_each_set_bit(words_, [&](std::size_t i) { f(static_cast<std::uint32_t>(i)); });
  }

  std::span<const Word> words() const { return words_; }

  friend bool operator==(const ResidueSet&, const ResidueSet&) = default;

 private:
  std::uint32_t modulus_;
  std::vector<Word> words_;
};

inline void require_same_modulus(const ResidueSet& a, const ResidueSet& b) {
  if (a.modulus() != b.modulus())
    throw InvalidArgument("modulus mismatch: " + std::to_string(a.modulus()) + " vs " + std::to_string(b.modulus()));
}

/// Builds {x mod N : x in elements}; duplicates collapse.
inline ResidueSet make_residue_set(std::uint32_t modulus, std::span<const std::int64_t> elements,
                                   std::uint32_t cap = kDefaultModulusCap) {
  if (modulus == 0) throw InvalidArgument("modulus must be at least 1");
  ResidueSet s(modulus, cap);
  for (std::int64_t x : elements) s.insert(s.reduce(x));
  return s;
}

inline ResidueSet make_residue_set(std::uint32_t modulus, std::initializer_list<std::int64_t> elements) {
  return make_residue_set(modulus, std::span<const std::int64_t>(elements.begin(), elements.size()));
}

/// E + t (mod N).
inline ResidueSet translate(const ResidueSet& e, std::int64_t t) {
  ResidueSet out(e.modulus(), e.modulus());
  const std::uint32_t shift = e.reduce(t);
  const std::uint64_t n = e.modulus();
  e.for_each([&](std::uint32_t x) { out.insert(static_cast<std::uint32_t>((x + shift) % n)); });
  return out;
}

/// u * E (mod N).
inline ResidueSet dilate(const ResidueSet& e, std::int64_t u) {
  ResidueSet out(e.modulus(), e.modulus());
  const std::uint64_t f = e.reduce(u);
  const std::uint64_t n = e.modulus();
  e.for_each([&](std::uint32_t x) { out.insert(static_cast<std::uint32_t>(x * f % n)); });
  return out;
}

/// Lexicographic order on the increasing element sequences of two subsets
/// of the same Z_N; a proper prefix sorts first.
inline bool lex_less(const ResidueSet& a, const ResidueSet& b) {
  require_same_modulus(a, b);
  const auto wa = a.words();
  const auto wb = b.words();
  for (std::size_t i = 0; i < wa.size(); ++i) {
    const Word diff = wa[i] ^ wb[i];
    if (!diff) continue;
    const Word low = diff & (~diff + 1);
    const bool in_a = wa[i] & low;
    // The owner of the smallest differing element sorts first, unless the
    // other sequence has already ended there (it is then a prefix).
    const Word above = ~((low << 1) - 1);
    bool rest_a = (wa[i] & above) != 0, rest_b = (wb[i] & above) != 0;
    for (std::size_t j = i + 1; j < wa.size(); ++j) {
      rest_a = rest_a || wa[j];
      rest_b = rest_b || wb[j];
    }
    return in_a ? rest_b : !rest_a;
  }
  return false;
}

inline std::strong_ordering lex_compare(const ResidueSet& a, const ResidueSet& b) {
  if (lex_less(a, b)) return std::strong_ordering::less;
  if (lex_less(b, a)) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace diffprod
