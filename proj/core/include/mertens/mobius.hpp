#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mertens {

// μ(k) in {-1, 0, +1}. Construction from an out-of-range integer throws.
class MobiusValue {
 public:
  constexpr MobiusValue() = default;
  explicit MobiusValue(int v);

  constexpr int value() const { return value_; }
  constexpr operator int() const { return value_; }  // NOLINT: arithmetic use

  friend constexpr bool operator==(MobiusValue, MobiusValue) = default;

 private:
  std::int8_t value_ = 0;
};

enum class Method { trial, linear_sieve, segmented_sieve, recurrence };

std::string_view to_string(Method m);
Method method_from_string(std::string_view tag);

// Primes up to and including `bound`, with the bound they cover.
struct PrimeTable {
  std::uint64_t bound = 0;
  std::vector<std::uint32_t> primes;
};

inline constexpr std::size_t kDefaultSegmentSize = std::size_t{1} << 22;

std::uint64_t isqrt(std::uint64_t n);
// round(n^(2/3)), at least 1.
std::uint64_t recurrence_threshold(std::uint64_t n);

// Ground-truth μ(k) by trial division. Throws DomainError for k = 0.
MobiusValue mobius_trial(std::uint64_t k);

// μ(1..limit) by a linear sieve; element i holds μ(i + 1).
std::vector<MobiusValue> mobius_sieve(std::uint64_t limit);

PrimeTable small_primes(std::uint64_t bound);

// μ(lo..hi); element i holds μ(lo + i). `primes` must cover isqrt(hi).
std::vector<MobiusValue> mobius_segment(std::uint64_t lo, std::uint64_t hi,
                                        const PrimeTable& primes);

// M(start), M(start + 1), ...
struct MertensTable {
  std::uint64_t start = 1;
  std::vector<std::int64_t> values;
  Method generated_by = Method::segmented_sieve;

  std::uint64_t last_n() const { return start + values.size() - 1; }
  std::int64_t last() const { return values.back(); }
  std::int64_t at(std::uint64_t n) const { return values.at(n - start); }
  bool empty() const { return values.empty(); }
};

struct SieveOptions {
  std::size_t segment_size = kDefaultSegmentSize;
  unsigned threads = 1;
};

// Called once per segment in ascending order with M(first_n + i) in values[i].
using MertensVisitor =
    std::function<void(std::uint64_t first_n, std::span<const std::int64_t> values)>;

// Streams M(n) for n in [from, to], given M(from - 1) (0 when from = 1).
// Segments are sieved in parallel; prefix sums are reduced in order.
void for_each_mertens(std::uint64_t from, std::uint64_t to, std::int64_t m_before,
                      const SieveOptions& options, const MertensVisitor& visit);

// M(1..limit). Method must be linear_sieve, segmented_sieve or trial.
MertensTable mertens_prefix(std::uint64_t limit, Method method = Method::segmented_sieve,
                            const SieveOptions& options = {});

// M(n) via sum_{k<=n} M(n/k) = 1 over distinct floor values, sieving below
// round(n^(2/3)).
std::int64_t mertens_recurrence(std::uint64_t n);

}  // namespace mertens
