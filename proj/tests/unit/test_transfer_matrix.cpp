#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mertens/errors.hpp"
#include "mertens/transfer_matrix.hpp"

using namespace mertens;
using namespace mertens::ising;

namespace {

bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

TEST_CASE("hamiltonian") {
  const auto any = ModelParams::from_weights(1.7, 0.3);
  CHECK(hamiltonian(SpinConfig::from_ints({0, 0, 0, 0}), any) == 0.0);

  const double b = 0.8;
  CHECK(hamiltonian(SpinConfig::from_ints({1, 1}), ModelParams::from_beta(1.0, b)) ==
        doctest::Approx(-2 * b));

  const auto cfg = SpinConfig::from_ints({1, -1, 0});
  CHECK(cfg.pair_sum() == -1);
  CHECK(hamiltonian(cfg, ModelParams::from_weights(2.0, 1.0)) == doctest::Approx(std::log(2.0)));

  // A single spin bonds with itself through the periodic boundary.
  CHECK(SpinConfig::from_ints({-1}).pair_sum() == 1);
  CHECK_THROWS_AS(SpinConfig(std::vector<Spin>{}), DomainError);
  CHECK_THROWS_AS(SpinConfig::from_ints({2}), DomainError);
}

TEST_CASE("ModelParams invariants") {
  const auto p = ModelParams::from_weights(1.0, std::numbers::e);
  CHECK(p.beta() == doctest::Approx(1.0));
  CHECK(p.log_x() == 0.0);
  CHECK(ModelParams::from_beta(2.0, 0.5).y() == doctest::Approx(std::exp(0.5)));
  CHECK_THROWS_AS(ModelParams::from_weights(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(ModelParams::from_weights(1.0, -2.0), DomainError);
}

TEST_CASE("partition_bruteforce") {
  CHECK(partition_bruteforce(1, ModelParams::from_weights(1, 1)) == doctest::Approx(3.0));
  CHECK(partition_bruteforce(2, ModelParams::from_weights(1, 1)) == doctest::Approx(9.0));
  CHECK(partition_bruteforce(3, ModelParams::from_weights(2, 1)) == doctest::Approx(41.0));
  CHECK_THROWS_AS(partition_bruteforce(15, ModelParams::from_weights(1, 1)), SizeError);
  CHECK_THROWS_AS(partition_bruteforce(0, ModelParams::from_weights(1, 1)), DomainError);
}

TEST_CASE("build_matrix follows x^(s s') y^s over (0, +1, -1)") {
  const auto ones = build_matrix(ModelParams::from_weights(1, 1));
  for (const auto& row : ones.entries) {
    for (double v : row) CHECK(v == 1.0);
  }

  const auto m = build_matrix(ModelParams::from_weights(1, 2));
  CHECK(m.entries[0] == std::array<double, 3>{1, 1, 1});
  CHECK(m.entries[1] == std::array<double, 3>{2, 2, 2});
  CHECK(m.entries[2] == std::array<double, 3>{0.5, 0.5, 0.5});

  const auto g = build_matrix(ModelParams::from_weights(2, 3));
  CHECK(g.entries[1][0] == doctest::Approx(3));
  CHECK(g.entries[1][1] == doctest::Approx(6));
  CHECK(g.entries[1][2] == doctest::Approx(1.5));
  CHECK(g(Spin::down, Spin::down) == doctest::Approx(2.0 / 3.0));  // x / y
  CHECK(g(Spin::down, Spin::up) == doctest::Approx(1.0 / 6.0));    // 1 / (x y)
}

TEST_CASE("eigenvalues at x = 1 are (1 + y + 1/y, 0, 0)") {
  for (double y : {0.5, 1.0, 2.0, std::numbers::e}) {
    const auto ev = eigenvalues(build_matrix(ModelParams::from_weights(1, y)));
    CHECK_FALSE(ev.has_complex);
    CHECK(std::abs(ev.values[0].real() - (1 + y + 1 / y)) <= 1e-12);
    CHECK(std::abs(ev.values[1]) <= 1e-12);
    CHECK(std::abs(ev.values[2]) <= 1e-12);
  }
}

TEST_CASE("eigenvalues at x = 2, y = 1") {
  // P = [[1,1,1],[1,2,.5],[1,.5,2]] has eigenvector (0,1,-1) with λ = 3/2;
  // the remaining pair solves λ² - 3.5λ + 0.5 = 0.
  const auto m = build_matrix(ModelParams::from_weights(2, 1));
  const auto ev = eigenvalues(m);
  CHECK(ev.values[0].real() == doctest::Approx((3.5 + std::sqrt(10.25)) / 2).epsilon(1e-13));
  CHECK(ev.values[1].real() == doctest::Approx(1.5).epsilon(1e-13));
  CHECK(ev.values[2].real() == doctest::Approx((3.5 - std::sqrt(10.25)) / 2).epsilon(1e-12));
  double sum = 0.0;
  double cubes = 0.0;
  for (const auto& l : ev.values) {
    sum += l.real();
    cubes += std::pow(l.real(), 3);
  }
  CHECK(sum == doctest::Approx(5.0));
  CHECK(cubes == doctest::Approx(41.0));
}

TEST_CASE("eigenvalue sum and product equal trace and determinant") {
  for (double x : {0.5, 1.0, 2.0, 3.7}) {
    for (double y : {0.5, 1.0, 2.0, 0.2}) {
      const auto m = build_matrix(ModelParams::from_weights(x, y));
      const auto ev = eigenvalues(m);
      std::complex<double> sum = 0.0;
      std::complex<double> prod = 1.0;
      for (const auto& l : ev.values) {
        sum += l;
        prod *= l;
      }
      CHECK(rel_close(sum.real(), m.trace(), 1e-9));
      if (std::abs(m.determinant()) > 1e-12) {
        CHECK(rel_close(prod.real(), m.determinant(), 1e-9));
      } else {
        CHECK(std::abs(prod) <= 1e-9);
      }
      // Magnitudes are sorted.
      CHECK(std::abs(ev.values[0]) >= std::abs(ev.values[1]));
      CHECK(std::abs(ev.values[1]) >= std::abs(ev.values[2]));
    }
  }
}

TEST_CASE("complex eigenvalue pairs are reported") {
  TransferMatrix rot;
  rot.entries = {{{0, -1, 0}, {1, 0, 0}, {0, 0, 2}}};
  const auto ev = eigenvalues(rot);
  CHECK(ev.has_complex);
  CHECK(ev.values[0].real() == doctest::Approx(2.0));
  CHECK(std::abs(ev.values[1].imag()) == doctest::Approx(1.0));
  CHECK(ev.values[1] == std::conj(ev.values[2]));
}

TEST_CASE("partition_transfer equals enumeration for n <= 12") {
  for (double x : {0.5, 1.0, 2.0}) {
    for (double y : {0.5, 1.0, 2.0}) {
      const auto params = ModelParams::from_weights(x, y);
      for (std::size_t n = 1; n <= 12; ++n) {
        const auto q = partition_transfer(n, params);
        REQUIRE(q.q.has_value());
        REQUIRE(rel_close(*q.q, partition_bruteforce(n, params), 1e-9));
        REQUIRE(q.log_q == doctest::Approx(std::log(*q.q)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("partition_transfer examples") {
  CHECK(*partition_transfer(5, ModelParams::from_weights(1, 1)).q == doctest::Approx(243.0));
  CHECK(*partition_transfer(3, ModelParams::from_weights(2, 1)).q == doctest::Approx(41.0));
  CHECK(*partition_transfer(7, ModelParams::from_weights(1, 2)).q ==
        doctest::Approx(std::pow(3.5, 7)).epsilon(1e-12));
  const auto big = partition_transfer(1000, ModelParams::from_weights(1, 2.718));
  CHECK(big.log_only());
  CHECK(big.log_q == doctest::Approx(1000 * std::log(1 + 2.718 + 1 / 2.718)).epsilon(1e-12));
  CHECK_THROWS_AS(partition_transfer(0, ModelParams::from_weights(1, 1)), DomainError);
}

TEST_CASE("partition_closed_form") {
  CHECK(*partition_closed_form(1, 0.0, true).q == doctest::Approx(3.0));
  CHECK(*partition_closed_form(2, 0.0, false).q == doctest::Approx(4.0));
  const double expected = std::pow(1 + 2 * std::cosh(1.0), 10);
  CHECK(*partition_closed_form(10, 1.0, true).q == doctest::Approx(expected).epsilon(1e-12));
  CHECK(*partition_closed_form(10, 1.0, true).q ==
        doctest::Approx(*partition_transfer(10, ModelParams::from_weights(1, std::numbers::e)).q)
            .epsilon(1e-9));

  SUBCASE("agrees with the transfer matrix at x = 1") {
    for (double beta : {-2.0, -0.3, 0.0, 0.7, 1.5}) {
      for (std::size_t n : {1UL, 2UL, 9UL, 40UL}) {
        const auto closed = partition_closed_form(n, beta, true);
        const auto transfer = partition_transfer(n, ModelParams::from_beta(1.0, beta));
        REQUIRE(rel_close(*closed.q, *transfer.q, 1e-9));
      }
    }
  }

  SUBCASE("symmetric under beta -> -beta") {
    for (bool zero : {true, false}) {
      for (double beta : {0.1, 1.0, 3.0, 40.0}) {
        for (std::size_t n : {1UL, 17UL, 800UL}) {
          CHECK(partition_closed_form(n, beta, zero).log_q ==
                partition_closed_form(n, -beta, zero).log_q);
        }
      }
    }
  }

  SUBCASE("large n stays in log space") {
    const auto q = partition_closed_form(100'000, 2.0, true);
    CHECK(q.log_only());
    CHECK(q.log_q == doctest::Approx(1e5 * std::log(1 + 2 * std::cosh(2.0))).epsilon(1e-12));
    const auto small = partition_closed_form(600, 0.0, false);  // 2^600 fits a double
    REQUIRE(small.q.has_value());
    CHECK(*small.q == doctest::Approx(std::pow(2.0, 600)).epsilon(1e-12));
  }
}
