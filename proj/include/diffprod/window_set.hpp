#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "diffprod/errors.hpp"
#include "diffprod/residue_set.hpp"

namespace diffprod {

/// Widest window (in bits) a WindowSet may occupy.
inline constexpr std::int64_t kDefaultWindowCap = std::int64_t{1} << 28;

/// A subset of the integer interval [lo, hi); x is stored at bit x - lo.
class WindowSet {
 public:
  WindowSet(std::int64_t lo, std::int64_t hi, std::int64_t cap = kDefaultWindowCap) : lo_(lo), hi_(hi) {
    detail::require(lo < hi, "window requires lo < hi");
    detail::require(hi - lo <= cap, "window width exceeds cap");
    words_.assign(bits::words_for(static_cast<std::size_t>(hi - lo)), 0);
  }

  static WindowSet from(std::int64_t lo, std::int64_t hi, std::span<const std::int64_t> elements) {
    WindowSet w(lo, hi);
    for (std::int64_t x : elements) w.insert(x);
    return w;
  }
  static WindowSet from(std::int64_t lo, std::int64_t hi, std::initializer_list<std::int64_t> elements) {
    return from(lo, hi, std::span<const std::int64_t>(elements.begin(), elements.size()));
  }

  std::int64_t lo() const { return lo_; }
  std::int64_t hi() const { return hi_; }
  std::int64_t width() const { return hi_ - lo_; }
  bool in_window(std::int64_t x) const { return x >= lo_ && x < hi_; }

  bool contains(std::int64_t x) const { return in_window(x) && bits::test(words_, static_cast<std::size_t>(x - lo_)); }

  void insert(std::int64_t x) {
    detail::require(in_window(x), "element " + std::to_string(x) + " outside window");
    bits::set(words_, static_cast<std::size_t>(x - lo_));
  }

  std::size_t size() const { return bits::popcount(words_); }
  bool empty() const { return size() == 0; }

  std::vector<std::int64_t> elements() const {
    std::vector<std::int64_t> out;
    bits::for_each_set_bit(words_, [&](std::size_t i) { out.push_back(lo_ + static_cast<std::int64_t>(i)); });
    return out;
  }

  std::span<const Word> words() const { return words_; }
  std::span<Word> mutable_words() { return words_; }

  friend bool operator==(const WindowSet&, const WindowSet&) = default;

 private:
  std::int64_t lo_;
  std::int64_t hi_;
  std::vector<Word> words_;
};

}  // namespace diffprod
