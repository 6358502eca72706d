#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "mertens/bounds.hpp"
#include "mertens/grid.hpp"
#include "mertens/mobius.hpp"

namespace mertens::verify {

struct SweepRow {
  std::uint64_t n = 0;
  std::int64_t m = 0;
  std::size_t bound = 0;  // index into SweepReport::bounds
  bounds::BoundEvaluation eval;
};

struct BoundSummary {
  std::uint64_t evaluated = 0;
  std::uint64_t skipped = 0;  // grid points below the bound's domain
  std::uint64_t violations = 0;
  double max_ratio = 0.0;
  std::uint64_t argmax_n = 0;
  std::string note;
};

struct Violation {
  std::size_t bound = 0;
  std::uint64_t n = 0;
  std::int64_t m = 0;
  double value = 0.0;
};

// max |M(n)|/√n over grid points n >= 2 (at n = 1 the ratio is exactly 1).
struct Extremal {
  double ratio = 0.0;
  std::uint64_t n = 0;
  std::int64_t m = 0;
};

struct SweepReport {
  std::uint64_t limit = 0;
  Grid grid;
  std::vector<bounds::BoundDefinition> bounds;
  std::uint64_t grid_size = 0;
  std::vector<SweepRow> rows;  // empty unless SweepOptions::keep_rows
  std::vector<BoundSummary> summaries;
  std::vector<Violation> violations;  // first max_violation_records only
  Extremal extremal;

  // Any violation of a proven bound on its domain.
  bool theorem_violated() const;
};

struct SweepOptions {
  SieveOptions sieve;
  bool keep_rows = true;
  std::size_t max_violation_records = 100000;
};

// One segmented-sieve pass over [1, limit]; every bound is evaluated at
// every in-domain grid point.
SweepReport sweep(std::uint64_t limit, const Grid& grid,
                  const std::vector<bounds::BoundDefinition>& bounds,
                  const SweepOptions& options = {});

struct CrossoverResult {
  std::vector<std::uint64_t> crossings;  // first n after each sign change of A - B
  std::string reason;                    // set when nothing could be compared
};

CrossoverResult crossover(const bounds::BoundDefinition& a, const bounds::BoundDefinition& b,
                          std::uint64_t lo, std::uint64_t hi);

// CSV columns: n,M,bound_name,params,value,ratio,satisfied. precision <= 0
// prints the shortest round-trip form.
void write_sweep_csv(std::ostream& out, const SweepReport& report, int precision = 0);
void write_sweep_json(std::ostream& out, const SweepReport& report, int precision = 0);
// Per-bound summary table (bound_name,params,evaluated,skipped,violations,max_ratio,argmax_n).
void write_summary_csv(std::ostream& out, const SweepReport& report, int precision = 0);
// <dir>/<bound_name>.dat with "n value" lines, plus mertens.dat with "n |M(n)|".
void write_gnuplot(const std::filesystem::path& dir, const SweepReport& report, int precision = 0);

}  // namespace mertens::verify
