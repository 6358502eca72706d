#include "mertens/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "mertens/errors.hpp"

namespace mertens::verify {

bool SweepReport::theorem_violated() const {
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    if (bounds::is_theorem(bounds[i].kind()) && summaries[i].violations > 0) return true;
  }
  return false;
}

SweepReport sweep(std::uint64_t limit, const Grid& grid,
                  const std::vector<bounds::BoundDefinition>& defs, const SweepOptions& options) {
  if (limit == 0) throw DomainError("sweep: limit must be >= 1");
  SweepReport report;
  report.limit = limit;
  report.grid = grid;
  report.bounds = defs;
  report.summaries.resize(defs.size());

  std::uint64_t next_point = 1;
  for_each_mertens(1, limit, 0, options.sieve,
                   [&](std::uint64_t first, std::span<const std::int64_t> values) {
                     const std::uint64_t last = first + values.size() - 1;
                     while (next_point <= last) {
                       const std::uint64_t n = next_point;
                       const std::int64_t m = values[n - first];
                       ++report.grid_size;
                       const double magnitude = static_cast<double>(std::llabs(m));
                       if (n >= 2) {
                         const double r = magnitude / std::sqrt(static_cast<double>(n));
                         if (r > report.extremal.ratio) report.extremal = {r, n, m};
                       }
                       for (std::size_t b = 0; b < defs.size(); ++b) {
                         auto& summary = report.summaries[b];
                         if (!defs[b].in_domain(n)) {
                           ++summary.skipped;
                           continue;
                         }
                         const double value = defs[b].value(n);
                         const bool ok = magnitude <= value;
                         const double ratio = magnitude / value;
                         ++summary.evaluated;
                         if (summary.argmax_n == 0 || ratio > summary.max_ratio) {
                           summary.max_ratio = ratio;
                           summary.argmax_n = n;
                         }
                         if (!ok) {
                           ++summary.violations;
                           if (report.violations.size() < options.max_violation_records) {
                             report.violations.push_back({b, n, m, value});
                           }
                         }
                         if (options.keep_rows) {
                           report.rows.push_back({n, m, b, {n, value, ok, ratio}});
                         }
                       }
                       const std::uint64_t next = grid.successor(n);
                       if (next <= n) {
                         next_point = limit + 1;
                         break;
                       }
                       next_point = next;
                     }
                   });

  for (std::size_t b = 0; b < defs.size(); ++b) {
    auto& summary = report.summaries[b];
    if (summary.skipped > 0) {
      summary.note = "domain begins at n = " + std::to_string(defs[b].valid_from()) + "; " +
                     std::to_string(summary.skipped) + " grid points skipped";
    }
  }
  return report;
}

namespace {

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

CrossoverResult crossover(const bounds::BoundDefinition& a, const bounds::BoundDefinition& b,
                          std::uint64_t lo, std::uint64_t hi) {
  CrossoverResult result;
  if (lo == 0) lo = 1;
  const std::uint64_t start = std::max({lo, a.valid_from(), b.valid_from()});
  if (hi < lo) {
    result.reason = "empty range";
    return result;
  }
  if (start > hi) {
    result.reason = "disjoint domains: " + std::string(a.name()) + " from n = " +
                    std::to_string(a.valid_from()) + ", " + std::string(b.name()) +
                    " from n = " + std::to_string(b.valid_from()) + ", range ends at " +
                    std::to_string(hi);
    return result;
  }
  const auto diff = [&](std::uint64_t n) { return sign_of(a.value(n) - b.value(n)); };

  // Scan points: every integer for short ranges, else a dense mixed
  // arithmetic/geometric lattice refined by bisection.
  constexpr std::uint64_t kExhaustive = 2'000'000;
  std::vector<std::uint64_t> scan;
  if (hi - start <= kExhaustive) {
    for (std::uint64_t n = start; n <= hi; ++n) scan.push_back(n);
  } else {
    const double ratio = std::pow(static_cast<double>(hi) / static_cast<double>(start),
                                  1.0 / static_cast<double>(kExhaustive / 2));
    const std::uint64_t stride = (hi - start) / (kExhaustive / 2) + 1;
    double g = static_cast<double>(start);
    for (std::uint64_t n = start; n <= hi; n += stride) scan.push_back(n);
    while (g <= static_cast<double>(hi)) {
      scan.push_back(static_cast<std::uint64_t>(g));
      g *= ratio;
    }
    scan.push_back(hi);
    std::sort(scan.begin(), scan.end());
    scan.erase(std::unique(scan.begin(), scan.end()), scan.end());
  }

  int prev_sign = 0;
  std::uint64_t prev_n = 0;
  for (std::uint64_t n : scan) {
    const int s = diff(n);
    if (s == 0) continue;
    if (prev_sign != 0 && s != prev_sign) {
      // Smallest m in (prev_n, n] whose sign is no longer prev_sign.
      std::uint64_t left = prev_n;
      std::uint64_t right = n;
      while (right - left > 1) {
        const std::uint64_t mid = left + (right - left) / 2;
        if (diff(mid) == prev_sign) {
          left = mid;
        } else {
          right = mid;
        }
      }
      result.crossings.push_back(right);
    }
    prev_sign = s;
    prev_n = n;
  }
  return result;
}

}  // namespace mertens::verify
