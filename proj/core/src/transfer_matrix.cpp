#include "mertens/transfer_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "mertens/errors.hpp"

namespace mertens::ising {

namespace {

std::size_t index_of(Spin s) {
  switch (s) {
    case Spin::zero:
      return 0;
    case Spin::up:
      return 1;
    case Spin::down:
      return 2;
  }
  return 0;
}

constexpr double kMaxLog = 709.0;  // exp() stays finite below ln(DBL_MAX) ≈ 709.78

PartitionValue from_log(double log_q) {
  PartitionValue out;
  out.log_q = log_q;
  if (log_q < kMaxLog) out.q = std::exp(log_q);
  return out;
}

std::complex<double> ipow(std::complex<double> base, std::size_t exp) {
  std::complex<double> result = 1.0;
  while (exp > 0) {
    if (exp & 1U) result *= base;
    base *= base;
    exp >>= 1U;
  }
  return result;
}

}  // namespace

SpinConfig::SpinConfig(std::vector<Spin> spins) : spins_(std::move(spins)) {
  if (spins_.empty()) throw DomainError("SpinConfig: chain length must be >= 1");
}

SpinConfig SpinConfig::from_ints(const std::vector<int>& spins) {
  std::vector<Spin> out;
  out.reserve(spins.size());
  for (int s : spins) {
    if (s < -1 || s > 1) throw DomainError("SpinConfig: spin must be -1, 0 or +1");
    out.push_back(static_cast<Spin>(s));
  }
  return SpinConfig(std::move(out));
}

int SpinConfig::total() const {
  int sum = 0;
  for (Spin s : spins_) sum += value(s);
  return sum;
}

int SpinConfig::pair_sum() const {
  int sum = 0;
  for (std::size_t i = 0; i < spins_.size(); ++i) sum += value(spins_[i]) * value(next(i));
  return sum;
}

ModelParams::ModelParams(double x, double y, double beta)
    : x_(x), y_(y), beta_(beta), log_x_(std::log(x)) {}

ModelParams ModelParams::from_weights(double x, double y) {
  if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y)) {
    throw DomainError("ModelParams: x and y must be positive and finite");
  }
  return ModelParams(x, y, std::log(y));
}

ModelParams ModelParams::from_beta(double x, double beta) {
  if (!(x > 0.0) || !std::isfinite(x) || !std::isfinite(beta)) {
    throw DomainError("ModelParams: x must be positive and beta finite");
  }
  return ModelParams(x, std::exp(beta), beta);
}

double TransferMatrix::operator()(Spin row, Spin col) const {
  return entries[index_of(row)][index_of(col)];
}

double TransferMatrix::trace() const { return entries[0][0] + entries[1][1] + entries[2][2]; }

double TransferMatrix::determinant() const {
  const auto& a = entries;
  return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
         a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
         a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

double TransferMatrix::principal_minor_sum() const {
  const auto& a = entries;
  return (a[0][0] * a[1][1] - a[0][1] * a[1][0]) + (a[0][0] * a[2][2] - a[0][2] * a[2][0]) +
         (a[1][1] * a[2][2] - a[1][2] * a[2][1]);
}

double hamiltonian(const SpinConfig& config, const ModelParams& params) {
  return -params.log_x() * config.pair_sum() - params.beta() * config.total();
}

double partition_bruteforce(std::size_t n, const ModelParams& params) {
  if (n == 0) throw DomainError("partition_bruteforce: n must be >= 1");
  if (n > kMaxBruteForceLength) {
    throw SizeError("partition_bruteforce: n = " + std::to_string(n) + " exceeds " +
                    std::to_string(kMaxBruteForceLength) + " (3^n enumeration)");
  }
  // Odometer over base-3 digits mapped to {-1, 0, +1}.
  std::vector<int> digits(n, 0);
  std::vector<Spin> spins(n, Spin::down);
  double total = 0.0;
  while (true) {
    total += std::exp(-hamiltonian(SpinConfig(spins), params));
    std::size_t i = 0;
    while (i < n && digits[i] == 2) {
      digits[i] = 0;
      spins[i] = Spin::down;
      ++i;
    }
    if (i == n) break;
    ++digits[i];
    spins[i] = static_cast<Spin>(digits[i] - 1);
  }
  return total;
}

TransferMatrix build_matrix(const ModelParams& params) {
  TransferMatrix m;
  for (Spin row : kStateOrder) {
    for (Spin col : kStateOrder) {
      m.entries[index_of(row)][index_of(col)] =
          std::pow(params.x(), value(row) * value(col)) * std::pow(params.y(), value(row));
    }
  }
  return m;
}

Eigenvalues eigenvalues(const TransferMatrix& m) {
  // λ^3 + b λ^2 + c λ + d = 0
  const double b = -m.trace();
  const double c = m.principal_minor_sum();
  const double d = -m.determinant();

  // Depressed cubic t^3 + p t + q = 0 with λ = t - b/3.
  const double shift = -b / 3.0;
  const double p = c - b * b / 3.0;
  const double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
  const double disc = q * q / 4.0 + p * p * p / 27.0;

  const double scale = std::max({std::abs(b), std::abs(c), std::abs(d), 1.0});
  const double eps = 64 * std::numeric_limits<double>::epsilon() * scale * scale * scale;

  Eigenvalues out;
  std::array<std::complex<double>, 3> roots;
  if (disc > eps) {
    // One real root and a complex-conjugate pair.
    const double sq = std::sqrt(disc);
    const double u = std::cbrt(-q / 2.0 + sq);
    const double v = std::cbrt(-q / 2.0 - sq);
    const double re = -(u + v) / 2.0 + shift;
    const double im = std::sqrt(3.0) / 2.0 * (u - v);
    roots = {std::complex<double>(u + v + shift, 0.0), std::complex<double>(re, im),
             std::complex<double>(re, -im)};
    out.has_complex = im != 0.0;
  } else if (p < 0.0) {
    // Three real roots, trigonometric form.
    const double r = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * r), -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) {
      roots[k] = r * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0) + shift;
    }
  } else {
    // p ≈ 0 and q ≈ 0: triple root.
    const double t = std::cbrt(-q);
    roots = {std::complex<double>(t + shift), std::complex<double>(shift),
             std::complex<double>(shift)};
  }

  // One Newton step on each real root.
  if (!out.has_complex) {
    for (auto& z : roots) {
      const double x = z.real();
      const double f = ((x + b) * x + c) * x + d;
      const double df = (3.0 * x + 2.0 * b) * x + c;
      if (df != 0.0) {
        const double step = f / df;
        if (std::abs(step) < 1e-6 * std::max(1.0, std::abs(x))) z = x - step;
      }
    }
  }

  std::stable_sort(roots.begin(), roots.end(),
                   [](const auto& l, const auto& r) { return std::abs(l) > std::abs(r); });
  out.values = roots;
  return out;
}

PartitionValue partition_transfer(std::size_t n, const ModelParams& params) {
  if (n == 0) throw DomainError("partition_transfer: n must be >= 1");
  const Eigenvalues ev = eigenvalues(build_matrix(params));
  // The leading root of a positive matrix is real and positive.
  const double lead = ev.values[0].real();
  std::complex<double> ratio_sum = 0.0;
  for (const auto& lambda : ev.values) {
    ratio_sum += ipow(lambda / lead, n);
  }
  const double log_q = static_cast<double>(n) * std::log(lead) + std::log(ratio_sum.real());
  if (log_q >= kMaxLog) return from_log(log_q);
  std::complex<double> direct = 0.0;
  for (const auto& lambda : ev.values) direct += ipow(lambda, n);
  return PartitionValue{log_q, direct.real()};
}

double log_site_sum(double beta, bool include_zero) {
  const double a = std::abs(beta);
  const double t = std::exp(-a);
  // 1 + e^a + e^-a = e^a (1 + t + t^2);  e^a + e^-a = e^a (1 + t^2)
  return include_zero ? a + std::log1p(t + t * t) : a + std::log1p(t * t);
}

PartitionValue partition_closed_form(std::size_t n, double beta, bool include_zero) {
  if (n == 0) throw DomainError("partition_closed_form: n must be >= 1");
  const double log_site = log_site_sum(beta, include_zero);
  const double log_q = static_cast<double>(n) * log_site;
  if (n <= 500 && log_q < kMaxLog) {
    const double site = include_zero ? 1.0 + 2.0 * std::cosh(beta) : 2.0 * std::cosh(beta);
    return PartitionValue{log_q, std::pow(site, static_cast<double>(n))};
  }
  return from_log(log_q);
}

}  // namespace mertens::ising
