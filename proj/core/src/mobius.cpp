#include "mertens/mobius.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <new>
#include <thread>

#include "mertens/errors.hpp"

namespace mertens {

MobiusValue::MobiusValue(int v) : value_(static_cast<std::int8_t>(v)) {
  if (v < -1 || v > 1) {
    throw DomainError("Möbius value must be -1, 0 or +1, got " + std::to_string(v));
  }
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::trial:
      return "trial";
    case Method::linear_sieve:
      return "linear-sieve";
    case Method::segmented_sieve:
      return "segmented-sieve";
    case Method::recurrence:
      return "recurrence";
  }
  return "unknown";
}

Method method_from_string(std::string_view tag) {
  for (Method m : {Method::trial, Method::linear_sieve, Method::segmented_sieve,
                   Method::recurrence}) {
    if (to_string(m) == tag) return m;
  }
  throw DomainError("unknown method tag '" + std::string(tag) + "'");
}

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::uint64_t recurrence_threshold(std::uint64_t n) {
  const auto t = std::llround(std::cbrt(static_cast<long double>(n)) *
                              std::cbrt(static_cast<long double>(n)));
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(t));
}

MobiusValue mobius_trial(std::uint64_t k) {
  if (k == 0) throw DomainError("mobius_trial: k must be >= 1");
  int sign = 1;
  for (std::uint64_t p = 2; p <= k / p; ++p) {
    if (k % p != 0) continue;
    k /= p;
    if (k % p == 0) return MobiusValue(0);
    sign = -sign;
  }
  if (k > 1) sign = -sign;
  return MobiusValue(sign);
}

std::vector<MobiusValue> mobius_sieve(std::uint64_t limit) {
  if (limit == 0) throw DomainError("mobius_sieve: limit must be >= 1");
  if (limit > std::numeric_limits<std::uint32_t>::max()) {
    throw DomainError("mobius_sieve: limit exceeds 2^32 - 1; use the segmented sieve");
  }
  try {
    std::vector<std::int8_t> mu(limit + 1, 0);
    std::vector<std::uint32_t> least_prime(limit + 1, 0);
    std::vector<std::uint32_t> primes;
    mu[1] = 1;
    for (std::uint64_t i = 2; i <= limit; ++i) {
      if (least_prime[i] == 0) {
        least_prime[i] = static_cast<std::uint32_t>(i);
        primes.push_back(static_cast<std::uint32_t>(i));
        mu[i] = -1;
      }
      for (std::uint32_t p : primes) {
        if (p > least_prime[i] || i * p > limit) break;
        least_prime[i * p] = p;
        mu[i * p] = (p == least_prime[i]) ? std::int8_t{0} : static_cast<std::int8_t>(-mu[i]);
      }
    }
    std::vector<MobiusValue> out;
    out.reserve(limit);
    for (std::uint64_t k = 1; k <= limit; ++k) out.emplace_back(mu[k]);
    return out;
  } catch (const std::bad_alloc&) {
    throw ResourceError("mobius_sieve: cannot allocate tables for limit " +
                        std::to_string(limit));
  }
}

PrimeTable small_primes(std::uint64_t bound) {
  PrimeTable table;
  table.bound = bound;
  if (bound < 2) return table;
  std::vector<bool> composite(bound + 1, false);
  for (std::uint64_t p = 2; p <= bound; ++p) {
    if (composite[p]) continue;
    table.primes.push_back(static_cast<std::uint32_t>(p));
    for (std::uint64_t j = p * p; j <= bound; j += p) composite[j] = true;
  }
  return table;
}

namespace {

void check_cover(std::uint64_t hi, const PrimeTable& primes) {
  const std::uint64_t need = isqrt(hi);
  if (need > primes.bound) {
    throw DomainError("prime table covers p <= " + std::to_string(primes.bound) +
                      " but the segment needs primes up to " + std::to_string(need));
  }
}

// Fills mu[i] = μ(lo + i). `product` is scratch of the same length holding the
// product of small prime factors found so far.
void sieve_segment(std::uint64_t lo, std::span<std::int8_t> mu,
                   std::span<std::uint64_t> product, const PrimeTable& primes) {
  const std::uint64_t hi = lo + mu.size() - 1;
  std::fill(mu.begin(), mu.end(), std::int8_t{1});
  std::fill(product.begin(), product.end(), std::uint64_t{1});
  const std::uint64_t root = isqrt(hi);
  for (std::uint32_t p32 : primes.primes) {
    const std::uint64_t p = p32;
    if (p > root) break;
    for (std::uint64_t j = (lo + p - 1) / p * p; j <= hi; j += p) {
      mu[j - lo] = static_cast<std::int8_t>(-mu[j - lo]);
      product[j - lo] *= p;
    }
    const std::uint64_t square = p * p;
    for (std::uint64_t j = (lo + square - 1) / square * square; j <= hi; j += square) {
      mu[j - lo] = 0;
    }
  }
  // At most one prime factor above sqrt(hi) remains.
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu[i] != 0 && product[i] != lo + i) mu[i] = static_cast<std::int8_t>(-mu[i]);
  }
}

}  // namespace

std::vector<MobiusValue> mobius_segment(std::uint64_t lo, std::uint64_t hi,
                                        const PrimeTable& primes) {
  if (lo == 0 || hi < lo) {
    throw DomainError("mobius_segment: need 1 <= lo <= hi");
  }
  check_cover(hi, primes);
  const std::size_t len = hi - lo + 1;
  try {
    std::vector<std::int8_t> mu(len);
    std::vector<std::uint64_t> product(len);
    sieve_segment(lo, mu, product, primes);
    std::vector<MobiusValue> out;
    out.reserve(len);
    for (std::int8_t v : mu) out.emplace_back(v);
    return out;
  } catch (const std::bad_alloc&) {
    throw ResourceError("mobius_segment: cannot allocate " + std::to_string(len) + " entries");
  }
}

namespace {

struct Worker {
  std::vector<std::int8_t> mu;
  std::vector<std::uint64_t> product;
  std::vector<std::int64_t> partial;  // running sum of μ within the segment
};

}  // namespace

void for_each_mertens(std::uint64_t from, std::uint64_t to, std::int64_t m_before,
                      const SieveOptions& options, const MertensVisitor& visit) {
  if (from == 0) throw DomainError("for_each_mertens: ranges start at n = 1");
  if (to < from) return;
  const std::size_t segment = std::max<std::size_t>(options.segment_size, 1);
  const unsigned threads = std::max(1u, options.threads);
  const PrimeTable primes = small_primes(isqrt(to));

  std::vector<Worker> workers(threads);
  std::int64_t running = m_before;
  std::uint64_t lo = from;
  try {
    while (lo <= to) {
      // One batch: up to `threads` consecutive segments.
      std::vector<std::pair<std::uint64_t, std::size_t>> jobs;
      for (unsigned w = 0; w < threads && lo <= to; ++w) {
        const std::size_t len =
            static_cast<std::size_t>(std::min<std::uint64_t>(segment, to - lo + 1));
        jobs.emplace_back(lo, len);
        lo += len;
      }
      auto run = [&](std::size_t w) {
        auto& wk = workers[w];
        const auto [start, len] = jobs[w];
        wk.mu.resize(len);
        wk.product.resize(len);
        wk.partial.resize(len);
        sieve_segment(start, wk.mu, wk.product, primes);
        std::int64_t acc = 0;
        for (std::size_t i = 0; i < len; ++i) {
          acc += wk.mu[i];
          wk.partial[i] = acc;
        }
      };
      if (jobs.size() == 1) {
        run(0);
      } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 1; w < jobs.size(); ++w) pool.emplace_back(run, w);
        run(0);
      }
      for (std::size_t w = 0; w < jobs.size(); ++w) {
        auto& partial = workers[w].partial;
        for (auto& v : partial) v += running;
        running = partial.back();
        visit(jobs[w].first, partial);
      }
    }
  } catch (const std::bad_alloc&) {
    throw ResourceError("for_each_mertens: cannot allocate segment buffers of " +
                        std::to_string(segment) + " entries");
  }
}

MertensTable mertens_prefix(std::uint64_t limit, Method method, const SieveOptions& options) {
  if (limit == 0) throw DomainError("mertens_prefix: limit must be >= 1");
  MertensTable table;
  table.start = 1;
  table.generated_by = method;
  try {
    table.values.reserve(limit);
    switch (method) {
      case Method::trial: {
        std::int64_t acc = 0;
        for (std::uint64_t k = 1; k <= limit; ++k) {
          acc += mobius_trial(k);
          table.values.push_back(acc);
        }
        break;
      }
      case Method::linear_sieve: {
        std::int64_t acc = 0;
        for (MobiusValue v : mobius_sieve(limit)) {
          acc += v;
          table.values.push_back(acc);
        }
        break;
      }
      case Method::segmented_sieve:
        for_each_mertens(1, limit, 0, options,
                         [&](std::uint64_t, std::span<const std::int64_t> values) {
                           table.values.insert(table.values.end(), values.begin(),
                                               values.end());
                         });
        break;
      case Method::recurrence:
        throw DomainError("mertens_prefix: recurrence yields single values, not a table");
    }
  } catch (const std::bad_alloc&) {
    throw ResourceError("mertens_prefix: cannot allocate table for limit " +
                        std::to_string(limit));
  }
  return table;
}

std::int64_t mertens_recurrence(std::uint64_t n) {
  if (n == 0) throw DomainError("mertens_recurrence: n must be >= 1");
  const std::uint64_t threshold = std::min(n, recurrence_threshold(n));

  std::vector<std::int32_t> small(threshold + 1, 0);
  {
    std::int32_t acc = 0;
    std::uint64_t k = 1;
    for (MobiusValue v : mobius_sieve(threshold)) {
      acc += v;
      small[k++] = acc;
    }
  }
  if (n <= threshold) return small[n];

  // large[i] = M(n / i) for every i with n / i > threshold.
  const std::uint64_t count = n / (threshold + 1);
  std::vector<std::int64_t> large(count + 1, 0);
  for (std::uint64_t i = count; i >= 1; --i) {
    const std::uint64_t v = n / i;
    std::int64_t sum = 1;
    const std::uint64_t k_split = v / (threshold + 1);  // v / k > threshold iff k <= k_split
    for (std::uint64_t k = 2; k <= k_split; ++k) sum -= large[i * k];
    for (std::uint64_t k = std::max<std::uint64_t>(2, k_split + 1); k <= v;) {
      const std::uint64_t q = v / k;
      const std::uint64_t k_end = v / q;
      sum -= static_cast<std::int64_t>(small[q]) * static_cast<std::int64_t>(k_end - k + 1);
      k = k_end + 1;
    }
    large[i] = sum;
  }
  return large[1];
}

}  // namespace mertens
