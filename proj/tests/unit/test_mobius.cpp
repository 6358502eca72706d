#include <doctest.h>

#include <numeric>
#include <random>
#include <vector>

#include "mertens/errors.hpp"
#include "mertens/mobius.hpp"
#include "oracles.hpp"

using namespace mertens;

namespace {

std::vector<int> as_ints(const std::vector<MobiusValue>& v) {
  return {v.begin(), v.end()};
}

}  // namespace

TEST_CASE("mobius_trial matches the definition on small values") {
  CHECK(mobius_trial(1) == 1);
  CHECK(mobius_trial(4) == 0);
  CHECK(mobius_trial(30) == -1);  // 2·3·5
  CHECK(mobius_trial(2) == -1);
  CHECK(mobius_trial(6) == 1);
  CHECK(mobius_trial(49) == 0);
  CHECK(mobius_trial(1'000'000'007) == -1);           // prime
  CHECK(mobius_trial(999'999'999'989ULL * 2) == 1);    // 2·p
  CHECK_THROWS_AS(mobius_trial(0), DomainError);
}

TEST_CASE("MobiusValue rejects values outside {-1, 0, +1}") {
  CHECK_NOTHROW(MobiusValue(-1));
  CHECK_THROWS_AS(MobiusValue(2), DomainError);
  CHECK_THROWS_AS(MobiusValue(-2), DomainError);
}

TEST_CASE("mobius_sieve small tables") {
  CHECK(as_ints(mobius_sieve(4)) == std::vector<int>{1, -1, -1, 0});
  CHECK(as_ints(mobius_sieve(1)) == std::vector<int>{1});
  const auto ten = as_ints(mobius_sieve(10));
  CHECK(std::accumulate(ten.begin(), ten.end(), 0) == -1);
  CHECK_THROWS_AS(mobius_sieve(0), DomainError);
}

TEST_CASE("linear sieve agrees with trial division and an independent factoriser") {
  constexpr std::uint64_t kLimit = 100'000;
  const auto sieve = mobius_sieve(kLimit);
  const auto reference = oracle::mobius_by_factorisation(kLimit);
  for (std::uint64_t k = 1; k <= kLimit; ++k) {
    REQUIRE(sieve[k - 1] == mobius_trial(k));
    REQUIRE(int(sieve[k - 1]) == reference[k]);
  }
}

TEST_CASE("multiplicativity on coprime pairs up to 1000") {
  const auto mu = mobius_sieve(1'000'000);
  for (std::uint64_t a = 1; a <= 1000; ++a) {
    for (std::uint64_t b = 1; b <= 1000; ++b) {
      if (std::gcd(a, b) != 1) continue;
      REQUIRE(int(mu[a * b - 1]) == int(mu[a - 1]) * int(mu[b - 1]));
    }
  }
}

TEST_CASE("divisor sum of μ is [n = 1]") {
  constexpr std::uint64_t kLimit = 10'000;
  const auto mu = mobius_sieve(kLimit);
  std::vector<int> sum(kLimit + 1, 0);
  for (std::uint64_t d = 1; d <= kLimit; ++d) {
    for (std::uint64_t m = d; m <= kLimit; m += d) sum[m] += mu[d - 1];
  }
  CHECK(sum[1] == 1);
  for (std::uint64_t n = 2; n <= kLimit; ++n) REQUIRE(sum[n] == 0);
}

TEST_CASE("mobius_segment") {
  const auto primes = small_primes(1000);
  CHECK(as_ints(mobius_segment(1, 4, primes)) == std::vector<int>{1, -1, -1, 0});
  CHECK(as_ints(mobius_segment(7919, 7919, primes)) == std::vector<int>{-1});
  CHECK(as_ints(mobius_segment(1'000'003, 1'000'003, primes)) == std::vector<int>{-1});

  SUBCASE("tail of 10^6 matches the monolithic sieve") {
    const auto full = mobius_sieve(1'000'000);
    const auto tail = mobius_segment(999'991, 1'000'000, primes);
    REQUIRE(tail.size() == 10);
    for (std::size_t i = 0; i < tail.size(); ++i) CHECK(tail[i] == full[999'990 + i]);
  }

  SUBCASE("insufficient prime table names the required bound") {
    const auto few = small_primes(10);
    try {
      mobius_segment(1, 1000, few);
      FAIL("expected DomainError");
    } catch (const DomainError& e) {
      CHECK(std::string(e.what()).find("31") != std::string::npos);
    }
  }

  CHECK_THROWS_AS(mobius_segment(0, 5, primes), DomainError);
  CHECK_THROWS_AS(mobius_segment(6, 5, primes), DomainError);
}

TEST_CASE("random segments agree with the monolithic sieve") {
  constexpr std::uint64_t kLimit = 2'000'000;
  const auto full = mobius_sieve(kLimit);
  const auto primes = small_primes(isqrt(kLimit));
  std::mt19937_64 gen(12345);
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint64_t lo = 1 + gen() % kLimit;
    const std::uint64_t hi = std::min(kLimit, lo + gen() % 5000);
    const auto seg = mobius_segment(lo, hi, primes);
    for (std::uint64_t k = lo; k <= hi; ++k) REQUIRE(seg[k - lo] == full[k - 1]);
  }
}

TEST_CASE("isqrt and recurrence threshold") {
  CHECK(isqrt(0) == 0);
  CHECK(isqrt(15) == 3);
  CHECK(isqrt(16) == 4);
  CHECK(isqrt((1ULL << 62) - 1) == (1ULL << 31) - 1);
  CHECK(recurrence_threshold(1) == 1);
  CHECK(recurrence_threshold(1'000'000) == 10'000);
}

TEST_CASE("mertens_prefix known values and table invariants") {
  CHECK(mertens_prefix(2).last() == 0);
  CHECK(mertens_prefix(10).last() == -1);
  CHECK(mertens_prefix(100).last() == 1);
  CHECK(mertens_prefix(10, Method::trial).last() == -1);
  CHECK(mertens_prefix(100, Method::linear_sieve).last() == 1);

  const auto table = mertens_prefix(100'000);
  CHECK(table.start == 1);
  CHECK(table.values.front() == 1);
  for (std::size_t i = 1; i < table.values.size(); ++i) {
    const auto step = table.values[i] - table.values[i - 1];
    REQUIRE(step == mobius_trial(i + 1));
  }
  CHECK_THROWS_AS(mertens_prefix(0), DomainError);
  CHECK_THROWS_AS(mertens_prefix(10, Method::recurrence), DomainError);
}

TEST_CASE("segmented prefix is independent of segment size and thread count") {
  constexpr std::uint64_t kLimit = 300'000;
  const auto reference = mertens_prefix(kLimit, Method::linear_sieve);
  for (std::size_t seg : {1UL, 7UL, 4096UL, 1UL << 22}) {
    for (unsigned threads : {1U, 3U}) {
      if (seg == 1 && threads == 3) continue;
      const auto t = mertens_prefix(kLimit, Method::segmented_sieve, {seg, threads});
      REQUIRE(t.values == reference.values);
    }
  }
}

TEST_CASE("for_each_mertens resumes from a known prefix") {
  const auto full = mertens_prefix(50'000);
  std::vector<std::int64_t> tail;
  for_each_mertens(20'001, 50'000, full.at(20'000), {1000, 2},
                   [&](std::uint64_t first, std::span<const std::int64_t> v) {
                     CHECK(first == 20'001 + tail.size());
                     tail.insert(tail.end(), v.begin(), v.end());
                   });
  REQUIRE(tail.size() == 30'000);
  CHECK(std::equal(tail.begin(), tail.end(), full.values.begin() + 20'000));
}

TEST_CASE("mertens_recurrence equals the sieve prefix") {
  const auto table = mertens_prefix(10'000);
  CHECK(mertens_recurrence(1) == 1);
  CHECK(mertens_recurrence(10) == -1);
  for (std::uint64_t n = 1; n <= 10'000; ++n) REQUIRE(mertens_recurrence(n) == table.at(n));
  CHECK(mertens_recurrence(100'000) == mertens_prefix(100'000).last());
  CHECK(mertens_recurrence(1'000'000) == mertens_prefix(1'000'000).last());
  CHECK_THROWS_AS(mertens_recurrence(0), DomainError);
}

TEST_CASE("method tags round trip") {
  for (Method m : {Method::trial, Method::linear_sieve, Method::segmented_sieve,
                   Method::recurrence}) {
    CHECK(method_from_string(to_string(m)) == m);
  }
  CHECK(to_string(Method::linear_sieve) == "linear-sieve");
  CHECK_THROWS_AS(method_from_string("magic"), DomainError);
}
