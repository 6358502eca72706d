#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mertens {

// Sampling rule over [1, limit].
//   all              every n
//   powers           1, 10, 100, ...
//   geometric:<r>    1, then max(prev + 1, floor(prev * r)), r > 1
//   arithmetic:<s>   1, 1 + s, 1 + 2s, ...
struct Grid {
  enum class Kind { all, powers, geometric, arithmetic };
  Kind kind = Kind::all;
  double ratio = 2.0;
  std::uint64_t step = 1;

  static Grid parse(std::string_view spec);
  std::string to_string() const;

  // Next grid point after `point` (which must itself be a grid point).
  std::uint64_t successor(std::uint64_t point) const;

  // Ascending, duplicate-free.
  std::vector<std::uint64_t> points(std::uint64_t limit) const;
  bool contains(std::uint64_t n) const;
};

}  // namespace mertens
