#pragma once

// Text formats for sets:
//   literal:  comma-separated decimal integers, e.g. "0,1,3" (empty set = "")
//   file:     optional "mod N" header line, then one integer per line;
//             lines starting with '#' are comments. Comma lists on a line
//             are also accepted so saved literal output reads back.

#include <charconv>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "diffprod/errors.hpp"
#include "diffprod/residue_set.hpp"
#include "diffprod/window_set.hpp"

namespace diffprod {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::int64_t parse_int(std::string_view tok) {
  std::int64_t v = 0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (tok.empty() || ec != std::errc{} || ptr != last)
    throw InvalidArgument("malformed integer '" + std::string(tok) + "'");
  return v;
}

}  // namespace detail

inline std::vector<std::int64_t> parse_set_literal(std::string_view text) {
  std::vector<std::int64_t> out;
  text = detail::trim(text);
  if (text.empty()) return out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = text.find(',', pos);
    out.push_back(detail::parse_int(detail::trim(text.substr(pos, comma - pos))));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

template <class Range>
std::string join_integers(const Range& values) {
  std::string out;
  bool first = true;
  for (auto v : values) {
    if (!first) out += ',';
    out += std::to_string(v);
    first = false;
  }
  return out;
}

inline std::string format_set_literal(const ResidueSet& s) { return join_integers(s.elements()); }
inline std::string format_set_literal(const WindowSet& s) { return join_integers(s.elements()); }

struct SetFile {
  std::optional<std::uint32_t> modulus;
  std::vector<std::int64_t> elements;
};

inline SetFile parse_set_file(std::string_view content) {
  SetFile out;
  std::istringstream in{std::string(content)};
  std::string raw;
  while (std::getline(in, raw)) {
    const auto line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.substr(0, 4) == "mod ") {
      if (out.modulus || !out.elements.empty()) throw InvalidArgument("'mod N' must be the first line of a set file");
      const std::int64_t n = detail::parse_int(detail::trim(line.substr(4)));
      if (n < 1 || n > 0xffffffffLL) throw InvalidArgument("modulus must be at least 1");
      out.modulus = static_cast<std::uint32_t>(n);
      continue;
    }
    for (std::int64_t v : parse_set_literal(line)) out.elements.push_back(v);
  }
  return out;
}

inline std::string format_set_file(const ResidueSet& s) {
  std::string out = "mod " + std::to_string(s.modulus()) + "\n";
  for (auto x : s.elements()) out += std::to_string(x) + "\n";
  return out;
}

}  // namespace diffprod
