#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

// Three-state (s in {+1, 0, -1}) periodic spin chain with bond weight
// x^(s s') and field weight y^s. Energies are reported in units of kT.
namespace mertens::ising {

enum class Spin : std::int8_t { down = -1, zero = 0, up = 1 };

constexpr int value(Spin s) { return static_cast<int>(s); }

// Matrix row/column order.
inline constexpr std::array<Spin, 3> kStateOrder = {Spin::zero, Spin::up, Spin::down};

class SpinConfig {
 public:
  explicit SpinConfig(std::vector<Spin> spins);
  static SpinConfig from_ints(const std::vector<int>& spins);

  std::size_t size() const { return spins_.size(); }
  Spin operator[](std::size_t i) const { return spins_[i]; }
  // s_{i+1} with s_n wrapping to s_1.
  Spin next(std::size_t i) const { return spins_[(i + 1) % spins_.size()]; }
  int total() const;
  int pair_sum() const;  // sum over the n cyclic bonds of s_i s_{i+1}

 private:
  std::vector<Spin> spins_;
};

// x = exp(J/2kT), y = exp(ξh/kT), beta = ln y.
class ModelParams {
 public:
  static ModelParams from_weights(double x, double y);
  static ModelParams from_beta(double x, double beta);

  double x() const { return x_; }
  double y() const { return y_; }
  double beta() const { return beta_; }
  double log_x() const { return log_x_; }

 private:
  ModelParams(double x, double y, double beta);
  double x_;
  double y_;
  double beta_;
  double log_x_;
};

struct TransferMatrix {
  // entries[r][c] over kStateOrder.
  std::array<std::array<double, 3>, 3> entries{};

  double operator()(Spin row, Spin col) const;
  double trace() const;
  double determinant() const;
  double principal_minor_sum() const;
};

struct Eigenvalues {
  std::array<std::complex<double>, 3> values;  // descending |λ|
  bool has_complex = false;
};

// ln Q is always set; Q itself only when it is representable as a double.
struct PartitionValue {
  double log_q = 0.0;
  std::optional<double> q;

  bool log_only() const { return !q.has_value(); }
};

inline constexpr std::size_t kMaxBruteForceLength = 14;

// H/kT = -ln(x) Σ s_i s_{i+1} - beta Σ s_i.
double hamiltonian(const SpinConfig& config, const ModelParams& params);

// Σ over all 3^n configurations of exp(-H/kT). Throws SizeError above n = 14.
double partition_bruteforce(std::size_t n, const ModelParams& params);

TransferMatrix build_matrix(const ModelParams& params);

// Roots of det(P - λI) via the closed-form cubic.
Eigenvalues eigenvalues(const TransferMatrix& m);

// Σ λ_i^n.
PartitionValue partition_transfer(std::size_t n, const ModelParams& params);

// [1 + 2cosh(beta)]^n with zero spins allowed, else [2cosh(beta)]^n.
PartitionValue partition_closed_form(std::size_t n, double beta, bool include_zero);

// ln(1 + 2cosh beta) or ln(2cosh beta), stable for large |beta|.
double log_site_sum(double beta, bool include_zero);

}  // namespace mertens::ising
