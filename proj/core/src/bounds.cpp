#include "mertens/bounds.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <set>

#include "mertens/errors.hpp"
#include "mertens/transfer_matrix.hpp"

namespace mertens::bounds {

namespace {

constexpr std::array kAllKinds = {
    BoundKind::statmech3,     BoundKind::statmech2,     BoundKind::statmech3_p,
    BoundKind::statmech2_p,   BoundKind::wei_clt,       BoundKind::wei_cheb,
    BoundKind::rw_clt,        BoundKind::rw_cheb,       BoundKind::fluct_interval,
    BoundKind::macleod,       BoundKind::elmarraki_sqrtlog, BoundKind::elmarraki_log,
    BoundKind::ramare,
};

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void require_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw DomainError("beta must be positive and finite, got " + format_double(beta));
  }
}

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("alpha must lie in (0, 1), got " + format_double(alpha));
  }
}

void require_p(double p) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw DomainError("p must lie in (0, 1], got " + format_double(p));
  }
}

std::set<std::string> required_params(BoundKind kind) {
  switch (kind) {
    case BoundKind::statmech3:
    case BoundKind::statmech2:
      return {"beta"};
    case BoundKind::statmech3_p:
    case BoundKind::statmech2_p:
      return {"beta", "p"};
    case BoundKind::wei_clt:
    case BoundKind::wei_cheb:
    case BoundKind::rw_clt:
    case BoundKind::rw_cheb:
      return {"alpha"};
    case BoundKind::fluct_interval:
      return {"alpha", "beta"};
    default:
      return {};
  }
}

Classical as_classical(BoundKind kind) {
  switch (kind) {
    case BoundKind::macleod:
      return Classical::macleod;
    case BoundKind::elmarraki_sqrtlog:
      return Classical::elmarraki_sqrtlog;
    case BoundKind::elmarraki_log:
      return Classical::elmarraki_log;
    default:
      return Classical::ramare;
  }
}

}  // namespace

std::string_view to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::statmech3: return "statmech3";
    case BoundKind::statmech2: return "statmech2";
    case BoundKind::statmech3_p: return "statmech3_p";
    case BoundKind::statmech2_p: return "statmech2_p";
    case BoundKind::wei_clt: return "wei_clt";
    case BoundKind::wei_cheb: return "wei_cheb";
    case BoundKind::rw_clt: return "rw_clt";
    case BoundKind::rw_cheb: return "rw_cheb";
    case BoundKind::fluct_interval: return "fluct_interval";
    case BoundKind::macleod: return "macleod";
    case BoundKind::elmarraki_sqrtlog: return "elmarraki_sqrtlog";
    case BoundKind::elmarraki_log: return "elmarraki_log";
    case BoundKind::ramare: return "ramare";
  }
  return "unknown";
}

BoundKind bound_from_string(std::string_view tag) {
  for (BoundKind k : kAllKinds) {
    if (to_string(k) == tag) return k;
  }
  throw DomainError("unknown bound '" + std::string(tag) + "'");
}

std::span<const BoundKind> all_bound_kinds() { return kAllKinds; }

bool is_theorem(BoundKind kind) {
  switch (kind) {
    case BoundKind::macleod:
    case BoundKind::elmarraki_sqrtlog:
    case BoundKind::elmarraki_log:
    case BoundKind::ramare:
      return true;
    default:
      return false;
  }
}

BoundDefinition::BoundDefinition(BoundKind kind, std::map<std::string, double> params)
    : kind_(kind), params_(std::move(params)) {}

BoundDefinition BoundDefinition::make(BoundKind kind, std::map<std::string, double> params) {
  const auto required = required_params(kind);
  for (const auto& key : required) {
    if (!params.contains(key)) {
      throw DomainError(std::string(to_string(kind)) + " requires parameter '" + key + "'");
    }
  }
  for (const auto& [key, v] : params) {
    if (!required.contains(key)) {
      throw DomainError(std::string(to_string(kind)) + " takes no parameter '" + key + "'");
    }
    if (!std::isfinite(v)) throw DomainError("parameter '" + key + "' must be finite");
  }
  if (params.contains("alpha")) require_alpha(params.at("alpha"));
  if (params.contains("p")) require_p(params.at("p"));
  // The fluctuation interval takes any real beta; beta = 0 gives the centred interval.
  if (params.contains("beta") && kind != BoundKind::fluct_interval) require_beta(params.at("beta"));

  BoundDefinition def(kind, std::move(params));
  const auto get = [&](const char* key) { return def.params_.at(key); };
  switch (kind) {
    case BoundKind::statmech3:
    case BoundKind::statmech2:
      def.scale_ = coeff_statmech(get("beta"), kind == BoundKind::statmech3);
      break;
    case BoundKind::statmech3_p:
    case BoundKind::statmech2_p:
      def.scale_ = coeff_statmech(get("beta"), kind == BoundKind::statmech3_p);
      def.offset_ = std::log(get("p")) / get("beta");
      break;
    case BoundKind::wei_clt:
    case BoundKind::rw_clt:
      def.scale_ = family_sigma(kind == BoundKind::wei_clt ? Family::wei : Family::rw) *
                   normal_quantile(get("alpha"));
      break;
    case BoundKind::wei_cheb:
    case BoundKind::rw_cheb:
      def.scale_ = family_sigma(kind == BoundKind::wei_cheb ? Family::wei : Family::rw) /
                   std::sqrt(get("alpha"));
      break;
    case BoundKind::fluct_interval: {
      const auto f = fluctuation_coefficients(get("beta"));
      def.scale_ = f.a;
      def.offset_ = f.b;
      def.alpha_ = get("alpha");
      break;
    }
    default:
      break;
  }
  if (is_theorem(kind)) {
    def.valid_from_ = classical_valid_from(as_classical(kind));
  } else if (kind == BoundKind::statmech3_p || kind == BoundKind::statmech2_p) {
    // First n at which the bound is positive.
    const bool zero = kind == BoundKind::statmech3_p;
    const double beta = def.param("beta");
    const double p = def.param("p");
    const double per_site = ising::log_site_sum(beta, zero);
    auto n0 = static_cast<std::uint64_t>(std::floor(-std::log(p) / per_site)) + 1;
    while (bound_statmech_with_p(beta, p, n0, zero) <= 0.0) ++n0;
    while (n0 > 1 && bound_statmech_with_p(beta, p, n0 - 1, zero) > 0.0) --n0;
    def.valid_from_ = n0;
  }
  return def;
}

std::string BoundDefinition::params_string() const {
  std::string out;
  for (const auto& [key, v] : params_) {
    if (!out.empty()) out += ';';
    out += key + '=' + format_double(v);
  }
  return out;
}

double BoundDefinition::value(std::uint64_t n) const {
  if (!in_domain(n)) {
    throw DomainError(std::string(name()) + " holds only for n >= " +
                      std::to_string(valid_from_) + ", got n = " + std::to_string(n));
  }
  const double nn = static_cast<double>(n);
  switch (kind_) {
    case BoundKind::statmech3:
    case BoundKind::statmech2:
      return scale_ * nn;
    case BoundKind::statmech3_p:
    case BoundKind::statmech2_p:
      return nn * scale_ + offset_;
    case BoundKind::wei_clt:
    case BoundKind::wei_cheb:
    case BoundKind::rw_clt:
    case BoundKind::rw_cheb:
      return scale_ * std::sqrt(nn);
    case BoundKind::fluct_interval:
      return scale_ * nn + std::sqrt(offset_ * nn / alpha_);
    default:
      return bound_classical(n, as_classical(kind_));
  }
}

BoundEvaluation BoundDefinition::evaluate(std::uint64_t n, std::optional<std::int64_t> m) const {
  BoundEvaluation out;
  out.n = n;
  out.value = value(n);
  if (m) {
    const auto magnitude = static_cast<double>(std::llabs(*m));
    out.satisfied = magnitude <= out.value;
    out.ratio = magnitude / out.value;
  }
  return out;
}

BoundDefinition parse_bound(std::string_view spec, const ParamDefaults& defaults) {
  const auto colon = spec.find(':');
  const BoundKind kind = bound_from_string(spec.substr(0, colon));
  std::map<std::string, double> params;
  for (const auto& key : required_params(kind)) {
    params[key] = key == "beta" ? defaults.beta : key == "alpha" ? defaults.alpha : defaults.p;
  }
  std::string_view rest = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  while (!rest.empty()) {
    const auto next = rest.find(':');
    const auto item = rest.substr(0, next);
    rest = next == std::string_view::npos ? std::string_view{} : rest.substr(next + 1);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw DomainError("bound parameter '" + std::string(item) + "' is not key=value");
    }
    const std::string key(item.substr(0, eq));
    const auto text = item.substr(eq + 1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      throw DomainError("bound parameter '" + key + "' has non-numeric value");
    }
    params[key] = v;
  }
  return BoundDefinition::make(kind, std::move(params));
}

double coeff_statmech(double beta, bool include_zero) {
  require_beta(beta);
  return ising::log_site_sum(beta, include_zero) / beta;
}

double bound_statmech_with_p(double beta, double p, std::uint64_t n, bool include_zero) {
  require_beta(beta);
  require_p(p);
  return static_cast<double>(n) * coeff_statmech(beta, include_zero) + std::log(p) / beta;
}

CoeffMinimum minimize_coeff(bool include_zero, double beta_max) {
  constexpr double kLower = 1e-6;
  if (!(beta_max > kLower)) throw DomainError("minimize_coeff: beta_max must exceed 1e-6");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  const auto f = [&](double b) { return coeff_statmech(b, include_zero); };

  double lo = kLower;
  double hi = beta_max;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > 1e-10 * std::max(1.0, beta_max)) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  CoeffMinimum out;
  out.beta = (lo + hi) / 2.0;
  out.coeff = f(out.beta);
  // The endpoint itself may beat the interior bracket.
  if (f(beta_max) <= out.coeff) {
    out.beta = beta_max;
    out.coeff = f(beta_max);
  }
  out.at_boundary = beta_max - out.beta <= 1e-6 * beta_max;
  return out;
}

double normal_upper_tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double normal_quantile(double alpha) {
  require_alpha(alpha);
  // Acklam's rational approximation of the lower-tail quantile at t = α/2,
  // negated, then one Newton step on the upper tail.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double kLowRegion = 0.02425;

  const double t = alpha / 2.0;
  double lower;
  if (t < kLowRegion) {
    const double q = std::sqrt(-2.0 * std::log(t));
    lower = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else {
    const double q = t - 0.5;
    const double r = q * q;
    lower = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  double k = -lower;
  const double density = std::exp(-0.5 * k * k) / std::sqrt(2.0 * std::numbers::pi);
  k += (normal_upper_tail(k) - t) / density;
  return k;
}

double family_sigma(Family family) {
  return family == Family::wei ? std::sqrt(6.0) / std::numbers::pi : std::sqrt(2.0 / 3.0);
}

double bound_probabilistic(std::uint64_t n, double alpha, Family family, Variant variant) {
  require_alpha(alpha);
  if (n == 0) throw DomainError("bound_probabilistic: n must be >= 1");
  const double root_n = std::sqrt(static_cast<double>(n));
  const double sigma = family_sigma(family);
  const double scale = variant == Variant::clt ? sigma * normal_quantile(alpha)
                                               : sigma / std::sqrt(alpha);
  return scale * root_n;
}

Fluctuation fluctuation_coefficients(double beta) {
  // With t = e^{-|β|}: A = sign(β)(1 - t²)/(1 + t + t²), B = t(1 + 4t + t²)/(1 + t + t²)².
  const double t = std::exp(-std::abs(beta));
  const double site = 1.0 + t + t * t;
  Fluctuation out;
  out.a = std::copysign((1.0 - t * t) / site, beta);
  if (beta == 0.0) out.a = 0.0;
  out.b = t * (1.0 + 4.0 * t + t * t) / (site * site);
  return out;
}

Interval bound_fluctuation_interval(std::uint64_t n, double alpha, double beta) {
  require_alpha(alpha);
  const auto [a, b] = fluctuation_coefficients(beta);
  const double nn = static_cast<double>(n);
  const double half = std::sqrt(b * nn / alpha);
  return {a * nn - half, a * nn + half};
}

std::uint64_t classical_valid_from(Classical which) {
  switch (which) {
    case Classical::macleod:
      return 1;
    case Classical::elmarraki_sqrtlog:
      return 142194;
    case Classical::elmarraki_log:
      return 2;  // x > 1
    case Classical::ramare:
      return 464402;
  }
  return 1;
}

double bound_classical(std::uint64_t n, Classical which) {
  const std::uint64_t from = classical_valid_from(which);
  if (n < from) {
    static constexpr const char* names[] = {"macleod", "elmarraki_sqrtlog", "elmarraki_log",
                                            "ramare"};
    throw DomainError(std::string(names[static_cast<int>(which)]) + " holds only for n >= " +
                      std::to_string(from) + ", got n = " + std::to_string(n));
  }
  const double x = static_cast<double>(n);
  const double lg = std::log(x);
  switch (which) {
    case Classical::macleod:
      return (x + 1.0) / 80.0 + 5.5;
    case Classical::elmarraki_sqrtlog:
      return 0.002969 * x / std::sqrt(lg);
    case Classical::elmarraki_log:
      return 0.6437752 * x / lg;
    case Classical::ramare:
      return (0.0146 * lg - 0.1098) * x / (lg * lg);
  }
  return 0.0;
}

}  // namespace mertens::bounds
