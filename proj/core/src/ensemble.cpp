#include "mertens/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "mertens/errors.hpp"
#include "mertens/format.hpp"
#include "mertens/mobius.hpp"

namespace mertens::ensemble {

namespace {

__extension__ typedef __int128 int128;

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

// Integer thresholds on a 32-bit uniform u: s = [u < plus] + [u < plus_zero] - 1.
struct Thresholds {
  std::uint64_t plus = 0;
  std::uint64_t plus_zero = 0;
};

Thresholds thresholds(const RandomSequenceModel& model) {
  const auto p = site_probabilities(model);
  constexpr double kScale = 4294967296.0;  // 2^32
  Thresholds t;
  t.plus = static_cast<std::uint64_t>(std::llround(p.plus * kScale));
  t.plus_zero = static_cast<std::uint64_t>(std::llround((p.plus + p.zero) * kScale));
  return t;
}

// Draws spins two per 64-bit word (low half first) and reports the running
// sum at each requested length via `at`.
class SpinStream {
 public:
  SpinStream(std::uint64_t seed, Thresholds t) : rng_(seed), t_(t) {}

  int next() {
    if (!have_high_) {
      word_ = rng_();
      have_high_ = true;
      return spin(word_ & 0xffffffffULL);
    }
    have_high_ = false;
    return spin(word_ >> 32);
  }

  // Sum of the next `count` spins.
  std::int64_t sum(std::uint64_t count) {
    std::int64_t total = 0;
    if (have_high_ && count > 0) {
      total += next();
      --count;
    }
    std::uint64_t hits = 0;
    for (std::uint64_t k = 0; k + 1 < count; k += 2) {
      const std::uint64_t w = rng_();
      const std::uint64_t lo = w & 0xffffffffULL;
      const std::uint64_t hi = w >> 32;
      hits += (lo < t_.plus) + (lo < t_.plus_zero) + (hi < t_.plus) + (hi < t_.plus_zero);
    }
    total += static_cast<std::int64_t>(hits) - static_cast<std::int64_t>(count & ~1ULL);
    if (count & 1ULL) total += next();
    return total;
  }

 private:
  int spin(std::uint64_t u) const {
    return static_cast<int>(u < t_.plus) + static_cast<int>(u < t_.plus_zero) - 1;
  }

  Xoshiro256 rng_;
  Thresholds t_;
  std::uint64_t word_ = 0;
  bool have_high_ = false;
};

// Runs body(index) for index in [0, count) split into contiguous chunks.
template <typename PerWorker, typename Body>
std::vector<PerWorker> parallel_chunks(std::uint64_t count, unsigned threads, Body body) {
  threads = std::max(1u, threads);
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(count, 1)));
  std::vector<PerWorker> partial(threads);
  auto run = [&](unsigned w) {
    const std::uint64_t begin = count * w / threads;
    const std::uint64_t end = count * (w + 1) / threads;
    for (std::uint64_t i = begin; i < end; ++i) body(partial[w], i);
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < threads; ++w) pool.emplace_back(run, w);
    run(0);
  }
  return partial;
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Xoshiro256::Xoshiro256(std::uint64_t seed) {
  std::uint64_t z = seed;
  for (auto& s : s_) {
    z += 0x9e3779b97f4a7c15ULL;
    s = mix64(z);
  }
}

std::uint64_t Xoshiro256::operator()() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

RandomSequenceModel RandomSequenceModel::canonical(double beta, std::uint64_t n,
                                                   std::uint64_t seed) {
  if (!std::isfinite(beta)) throw DomainError("canonical model: beta must be finite");
  if (n == 0) throw DomainError("model: n must be >= 1");
  return {Kind::canonical, beta, n, seed};
}

RandomSequenceModel RandomSequenceModel::uniform3(std::uint64_t n, std::uint64_t seed) {
  if (n == 0) throw DomainError("model: n must be >= 1");
  return {Kind::uniform3, 0.0, n, seed};
}

std::string RandomSequenceModel::name() const {
  return kind == Kind::canonical ? "canonical" : "uniform3";
}

SiteProbabilities site_probabilities(const RandomSequenceModel& model) {
  if (model.kind == RandomSequenceModel::Kind::uniform3) return {1.0 / 3, 1.0 / 3, 1.0 / 3};
  // Weights e^{β}, 1, e^{-β} scaled by e^{-|β|}.
  const double t = std::exp(-std::abs(model.beta));
  const double z = 1.0 + t + t * t;
  const double big = 1.0 / z;
  const double mid = t / z;
  const double small = t * t / z;
  return model.beta >= 0.0 ? SiteProbabilities{big, mid, small}
                           : SiteProbabilities{small, mid, big};
}

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(mix64(master) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

std::int64_t sample_energy(const RandomSequenceModel& model, std::uint64_t index) {
  SpinStream stream(stream_seed(model.seed, index), thresholds(model));
  return stream.sum(model.n);
}

EnsembleStats ensemble_moments(const RandomSequenceModel& model, std::uint64_t samples,
                               unsigned threads) {
  if (samples < 2) throw DomainError("ensemble_moments: need at least 2 samples");
  struct Sums {
    int128 sum = 0;
    int128 sum_sq = 0;
  };
  const Thresholds t = thresholds(model);
  const auto partial = parallel_chunks<Sums>(samples, threads, [&](Sums& acc, std::uint64_t i) {
    SpinStream stream(stream_seed(model.seed, i), t);
    const std::int64_t u = stream.sum(model.n);
    acc.sum += u;
    acc.sum_sq += static_cast<int128>(u) * u;
  });
  int128 sum = 0;
  int128 sum_sq = 0;
  for (const auto& p : partial) {
    sum += p.sum;
    sum_sq += p.sum_sq;
  }
  const auto count = static_cast<int128>(samples);
  EnsembleStats out;
  out.samples = samples;
  out.mean = static_cast<double>(static_cast<long double>(sum) / static_cast<long double>(count));
  const int128 centered = count * sum_sq - sum * sum;  // N² × biased variance
  out.variance = static_cast<double>(static_cast<long double>(centered) /
                                     (static_cast<long double>(count) *
                                      static_cast<long double>(count - 1)));
  out.std_error_mean = std::sqrt(out.variance / static_cast<double>(samples));
  return out;
}

ViolationRate violation_rate(const RandomSequenceModel& model,
                             const bounds::BoundDefinition& bound, std::uint64_t trials,
                             unsigned threads) {
  if (trials < 100) throw DomainError("violation_rate: need at least 100 trials");
  ViolationRate out;
  out.trials = trials;
  out.bound_value = bound.value(model.n);
  const Thresholds t = thresholds(model);
  const auto partial =
      parallel_chunks<std::uint64_t>(trials, threads, [&](std::uint64_t& acc, std::uint64_t i) {
        SpinStream stream(stream_seed(model.seed, i), t);
        if (static_cast<double>(stream.sum(model.n)) > out.bound_value) ++acc;
      });
  for (auto c : partial) out.exceedances += c;
  const double tr = static_cast<double>(trials);
  out.rate = static_cast<double>(out.exceedances) / tr;
  out.ci_halfwidth = bounds::normal_quantile(0.05) * std::sqrt(out.rate * (1.0 - out.rate) / tr);
  return out;
}

void write_violation_csv_header(std::ostream& out) {
  out << "model,n,beta,alpha,bound,trials,rate,ci\n";
}

void write_violation_csv_row(std::ostream& out, const RandomSequenceModel& model,
                             const bounds::BoundDefinition& bound, const ViolationRate& result) {
  const auto& params = bound.params();
  const auto alpha = params.find("alpha");
  out << model.name() << ',' << model.n << ',' << format_exact(model.effective_beta()) << ','
      << (alpha == params.end() ? std::string() : format_exact(alpha->second)) << ','
      << bound.name() << ',' << result.trials << ',' << format_exact(result.rate) << ','
      << format_exact(result.ci_halfwidth) << '\n';
}

TrajectoryReport mertens_trajectory_compare(std::uint64_t limit, const RandomSequenceModel& model,
                                            std::uint64_t trials, double alpha, const Grid& grid,
                                            unsigned threads) {
  if (trials == 0) throw DomainError("mertens_trajectory_compare: needs >= 1 trajectory");
  if (limit == 0) throw DomainError("mertens_trajectory_compare: limit must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");

  const auto points = grid.points(limit);
  const MertensTable actual = mertens_prefix(limit);
  const Thresholds t = thresholds(model);

  // magnitudes[p * trials + k] = |Σ_{j ≤ points[p]} s_j| for trajectory k.
  std::vector<std::int64_t> magnitudes(points.size() * trials);
  parallel_chunks<char>(trials, threads, [&](char&, std::uint64_t k) {
    SpinStream stream(stream_seed(model.seed, k), t);
    std::int64_t running = 0;
    std::uint64_t at = 0;
    for (std::size_t p = 0; p < points.size(); ++p) {
      running += stream.sum(points[p] - at);
      at = points[p];
      magnitudes[p * trials + k] = running < 0 ? -running : running;
    }
  });

  TrajectoryReport report;
  report.limit = limit;
  report.trials = trials;
  report.alpha = alpha;
  const auto rank = static_cast<std::size_t>(
      std::max(0.0, std::ceil((1.0 - alpha) * static_cast<double>(trials)) - 1.0));
  std::size_t below = 0;
  for (std::size_t p = 0; p < points.size(); ++p) {
    auto first = magnitudes.begin() + static_cast<std::ptrdiff_t>(p * trials);
    auto last = first + static_cast<std::ptrdiff_t>(trials);
    std::nth_element(first, first + static_cast<std::ptrdiff_t>(rank), last);
    TrajectoryPoint pt;
    pt.i = points[p];
    pt.mertens = actual.at(pt.i);
    const double root = std::sqrt(static_cast<double>(pt.i));
    pt.actual_scaled = static_cast<double>(std::llabs(pt.mertens)) / root;
    pt.envelope = static_cast<double>(*(first + static_cast<std::ptrdiff_t>(rank)));
    pt.envelope_scaled = pt.envelope / root;
    pt.below = static_cast<double>(std::llabs(pt.mertens)) <= pt.envelope;
    below += pt.below;
    report.points.push_back(pt);
  }
  report.fraction_below =
      static_cast<double>(below) / static_cast<double>(std::max<std::size_t>(points.size(), 1));
  return report;
}

void write_trajectory_csv(std::ostream& out, const TrajectoryReport& report) {
  out << "i,M,actual_scaled,envelope,envelope_scaled,below\n";
  for (const auto& p : report.points) {
    out << p.i << ',' << p.mertens << ',' << format_exact(p.actual_scaled) << ','
        << format_exact(p.envelope) << ',' << format_exact(p.envelope_scaled) << ','
        << (p.below ? 1 : 0) << '\n';
  }
}

}  // namespace mertens::ensemble
