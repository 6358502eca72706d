#include "mertens/grid.hpp"

#include <charconv>
#include <algorithm>
#include <cmath>

#include "mertens/errors.hpp"

namespace mertens {

Grid Grid::parse(std::string_view spec) {
  Grid g;
  const auto colon = spec.find(':');
  const auto head = spec.substr(0, colon);
  const auto arg = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  const auto bad = [&] { return DomainError("invalid grid '" + std::string(spec) + "'"); };
  if (head == "all" && arg.empty()) {
    g.kind = Kind::all;
  } else if (head == "powers" && arg.empty()) {
    g.kind = Kind::powers;
  } else if (head == "geometric") {
    g.kind = Kind::geometric;
    if (!arg.empty()) {
      auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), g.ratio);
      if (ec != std::errc{} || ptr != arg.data() + arg.size()) throw bad();
    }
    if (!(g.ratio > 1.0) || !std::isfinite(g.ratio)) throw bad();
  } else if (head == "arithmetic") {
    g.kind = Kind::arithmetic;
    auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), g.step);
    if (arg.empty() || ec != std::errc{} || ptr != arg.data() + arg.size() || g.step == 0) {
      throw bad();
    }
  } else {
    throw bad();
  }
  return g;
}

std::string Grid::to_string() const {
  switch (kind) {
    case Kind::all:
      return "all";
    case Kind::powers:
      return "powers";
    case Kind::geometric: {
      char buf[32];
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, ratio);
      return "geometric:" + std::string(buf, ptr);
    }
    case Kind::arithmetic:
      return "arithmetic:" + std::to_string(step);
  }
  return "all";
}

std::uint64_t Grid::successor(std::uint64_t point) const {
  switch (kind) {
    case Kind::all:
      return point + 1;
    case Kind::powers:
      return point * 10;
    case Kind::geometric: {
      const auto next =
          static_cast<std::uint64_t>(std::floor(static_cast<double>(point) * ratio));
      return std::max(point + 1, next);
    }
    case Kind::arithmetic:
      return point + step;
  }
  return point + 1;
}

std::vector<std::uint64_t> Grid::points(std::uint64_t limit) const {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 1; n <= limit;) {
    out.push_back(n);
    const std::uint64_t next = successor(n);
    if (next <= n) break;  // overflow
    n = next;
  }
  return out;
}

bool Grid::contains(std::uint64_t n) const {
  switch (kind) {
    case Kind::all:
      return n >= 1;
    case Kind::arithmetic:
      return n >= 1 && (n - 1) % step == 0;
    case Kind::powers:
      while (n >= 10 && n % 10 == 0) n /= 10;
      return n == 1;
    case Kind::geometric: {
      const auto pts = points(n);
      return !pts.empty() && pts.back() == n;
    }
  }
  return false;
}

}  // namespace mertens
