#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

// Upper bounds on |M(n)|: the partition-function bounds, the probabilistic
// (CLT / Chebyshev) bounds, the canonical-ensemble fluctuation interval and
// the classical explicit bounds. "log" is the natural logarithm throughout.
namespace mertens::bounds {

enum class BoundKind {
  statmech3,
  statmech2,
  statmech3_p,
  statmech2_p,
  wei_clt,
  wei_cheb,
  rw_clt,
  rw_cheb,
  fluct_interval,
  macleod,
  elmarraki_sqrtlog,
  elmarraki_log,
  ramare,
};

std::string_view to_string(BoundKind kind);
BoundKind bound_from_string(std::string_view tag);
std::span<const BoundKind> all_bound_kinds();

// Proven inequalities; a violation on their domain is a hard failure.
bool is_theorem(BoundKind kind);

struct BoundEvaluation {
  std::uint64_t n = 0;
  double value = 0.0;
  std::optional<bool> satisfied;  // |M(n)| <= value, when M(n) was supplied
  std::optional<double> ratio;    // |M(n)| / value
};

class BoundDefinition {
 public:
  // Required parameters: statmech3/2 {beta}; statmech*_p {beta, p};
  // wei_*/rw_* {alpha}; fluct_interval {alpha, beta}; classical none.
  static BoundDefinition make(BoundKind kind, std::map<std::string, double> params = {});

  BoundKind kind() const { return kind_; }
  std::string_view name() const { return to_string(kind_); }
  const std::map<std::string, double>& params() const { return params_; }
  double param(const std::string& key) const { return params_.at(key); }
  std::uint64_t valid_from() const { return valid_from_; }
  bool in_domain(std::uint64_t n) const { return n >= valid_from_; }

  // "alpha=0.05;beta=1" (keys sorted, shortest round-trip formatting).
  std::string params_string() const;

  // Throws DomainError below valid_from().
  double value(std::uint64_t n) const;
  BoundEvaluation evaluate(std::uint64_t n, std::optional<std::int64_t> m = std::nullopt) const;

  friend bool operator==(const BoundDefinition&, const BoundDefinition&) = default;

 private:
  BoundDefinition(BoundKind kind, std::map<std::string, double> params);
  BoundKind kind_;
  std::map<std::string, double> params_;
  std::uint64_t valid_from_ = 1;
  // Precomputed so value() stays cheap inside sweeps.
  double scale_ = 0.0;
  double offset_ = 0.0;
  double alpha_ = 0.0;
};

struct ParamDefaults {
  double beta = 1.0;
  double alpha = 0.05;
  double p = 1.0;
};

// "name" or "name:key=value[:key=value...]"; required parameters not given
// explicitly are taken from `defaults`.
BoundDefinition parse_bound(std::string_view spec, const ParamDefaults& defaults = {});

// (1/beta) ln(1 + 2cosh beta), or (1/beta) ln(2cosh beta) without zero spins.
double coeff_statmech(double beta, bool include_zero);

// (1/beta) [ln p + n ln(site sum)].
double bound_statmech_with_p(double beta, double p, std::uint64_t n, bool include_zero);

struct CoeffMinimum {
  double beta = 0.0;
  double coeff = 0.0;
  bool at_boundary = false;  // minimizer sits on beta_max: infimum not attained
};

CoeffMinimum minimize_coeff(bool include_zero, double beta_max);

// K such that the standard normal mass on [-K, K] is 1 - alpha.
double normal_quantile(double alpha);

// Upper tail P(Z > x) of the standard normal.
double normal_upper_tail(double x);

enum class Family { wei, rw };
enum class Variant { clt, cheb };

// σ = sqrt(6/π²) for wei, sqrt(2/3) for rw.
double family_sigma(Family family);

// clt: σ K_{α/2} √n;  cheb: σ/√α · √n.
double bound_probabilistic(std::uint64_t n, double alpha, Family family, Variant variant);

struct Fluctuation {
  double a = 0.0;  // mean energy per site, d ln Q_n / dβ / n
  double b = 0.0;  // energy variance per site, d² ln Q_n / dβ² / n
};

Fluctuation fluctuation_coefficients(double beta);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

// [A n - sqrt(B n / α), A n + sqrt(B n / α)].
Interval bound_fluctuation_interval(std::uint64_t n, double alpha, double beta);

enum class Classical { macleod, elmarraki_sqrtlog, elmarraki_log, ramare };

std::uint64_t classical_valid_from(Classical which);

// Throws DomainError naming the threshold when n is outside the stated domain.
double bound_classical(std::uint64_t n, Classical which);

}  // namespace mertens::bounds
