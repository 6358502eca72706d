#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mertens/bounds.hpp"
#include "mertens/grid.hpp"

// Exact i.i.d. sampling of the J = 0 chain: each site independently takes
// s in {+1, 0, -1} with probability proportional to e^{βs}.
namespace mertens::ensemble {

// splitmix64 finalizer; also used to derive per-sample stream seeds.
std::uint64_t mix64(std::uint64_t x);

// xoshiro256** seeded through splitmix64.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed);
  std::uint64_t operator()();

 private:
  std::uint64_t s_[4];
};

struct RandomSequenceModel {
  enum class Kind { canonical, uniform3 };
  Kind kind = Kind::uniform3;
  double beta = 0.0;  // canonical only
  std::uint64_t n = 1;
  std::uint64_t seed = 0;

  static RandomSequenceModel canonical(double beta, std::uint64_t n, std::uint64_t seed);
  static RandomSequenceModel uniform3(std::uint64_t n, std::uint64_t seed);

  std::string name() const;  // "canonical" or "uniform3"
  double effective_beta() const { return kind == Kind::canonical ? beta : 0.0; }
};

struct SiteProbabilities {
  double plus = 0.0;
  double zero = 0.0;
  double minus = 0.0;
};

SiteProbabilities site_probabilities(const RandomSequenceModel& model);

// Independent stream for sample `index`; any worker can reproduce it.
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index);

// U = Σ s_i for sample `index` of the model.
std::int64_t sample_energy(const RandomSequenceModel& model, std::uint64_t index = 0);

struct EnsembleStats {
  std::uint64_t samples = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double std_error_mean = 0.0;
};

EnsembleStats ensemble_moments(const RandomSequenceModel& model, std::uint64_t samples,
                               unsigned threads = 1);

struct ViolationRate {
  double bound_value = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t exceedances = 0;
  double rate = 0.0;
  double ci_halfwidth = 0.0;  // 95% normal-approximation binomial interval
};

// Fraction of sampled sums U > bound.value(model.n).
ViolationRate violation_rate(const RandomSequenceModel& model,
                             const bounds::BoundDefinition& bound, std::uint64_t trials,
                             unsigned threads = 1);

// One CSV row: model,n,beta,alpha,bound,trials,rate,ci
void write_violation_csv_header(std::ostream& out);
void write_violation_csv_row(std::ostream& out, const RandomSequenceModel& model,
                             const bounds::BoundDefinition& bound, const ViolationRate& result);

struct TrajectoryPoint {
  std::uint64_t i = 0;
  std::int64_t mertens = 0;
  double actual_scaled = 0.0;    // |M(i)| / √i
  double envelope = 0.0;         // (1 - α) quantile of |Σ_{j≤i} s_j| over trajectories
  double envelope_scaled = 0.0;  // envelope / √i
  bool below = false;            // |M(i)| <= envelope
};

struct TrajectoryReport {
  std::uint64_t limit = 0;
  std::uint64_t trials = 0;
  double alpha = 0.05;
  std::vector<TrajectoryPoint> points;
  double fraction_below = 0.0;
};

// Random trajectories of length `limit` (model.n is ignored) against the
// actual M(i), at the points of `grid`.
TrajectoryReport mertens_trajectory_compare(std::uint64_t limit, const RandomSequenceModel& model,
                                            std::uint64_t trials, double alpha = 0.05,
                                            const Grid& grid = {}, unsigned threads = 1);

void write_trajectory_csv(std::ostream& out, const TrajectoryReport& report);

}  // namespace mertens::ensemble
