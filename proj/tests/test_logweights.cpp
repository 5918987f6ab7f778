#include <doctest.h>

#include "treelip/logweights.hpp"

#include <cmath>

using namespace treelip;
using doctest::Approx;

// Reference values below were evaluated at 50 significant digits with mpmath.

TEST_CASE("ell chain") {
  CHECK(ell(0, 5.0) == 1.0);
  CHECK(ell(1, 1.0) == 1.0);
  for (unsigned j = 0; j <= 8; ++j) CHECK(ell(j, 1.0) == 1.0);
  CHECK(ell(2, std::exp(1.0)) == Approx(1.6931471805599453).epsilon(1e-15));
  CHECK(ell(3, 1e6) == Approx(2.3071631203222284).epsilon(1e-14));
  CHECK(ell(6, 1e6) == Approx(1.4747420528375540).epsilon(1e-14));
  CHECK_THROWS_AS(ell(1, 0.5), WeightDomainError);
  CHECK_THROWS_AS(ell(0, 0.0), WeightDomainError);
  CHECK_THROWS_AS(ell(2, std::nan("")), WeightDomainError);
}

TEST_CASE("weight table") {
  const WeightTable t(3, 100);
  CHECK(t.k() == 3);
  CHECK(t.mu(1) == 1.0);
  CHECK(t.mu(10) == Approx(72.48201744822698).epsilon(1e-14));
  for (std::size_t n = 1; n <= 100; ++n) {
    CHECK(t.ell(0, n) == 1.0);
    CHECK(t.mu_next(n) == t.mu(n) * t.ell(3, n));
    if (n > 1) {
      CHECK(t.mu(n) > t.mu(n - 1));
      for (unsigned j = 1; j <= 3; ++j) CHECK(t.ell(j, n) >= t.ell(j, n - 1));
    }
  }
  CHECK(t.mu(5, WeightTable::Order::k_plus_one) == t.mu_next(5));
  CHECK(t.ell_matrix().rows() == 4);
  CHECK(t.ell_matrix().cols() == 100);

  const WeightTable one(1, 4);
  CHECK(one.mu(2) == 2.0);
  CHECK(one.mu_next(2) == Approx(2.0 * (1.0 + std::log(2.0))));

  CHECK_THROWS_AS((void)t.mu(0), std::out_of_range);
  CHECK_THROWS_AS((void)t.mu(101), std::out_of_range);
  CHECK_THROWS_AS((void)t.ell(4, 5), std::out_of_range);
  CHECK_THROWS_AS(WeightTable(0, 10), WeightDomainError);
  CHECK_THROWS_AS(WeightTable(9, 10), WeightDomainError);
  CHECK_THROWS_AS(WeightTable(1, 0), WeightDomainError);
}

TEST_CASE("alpha") {
  CHECK(alpha(1, 2) == Approx(1.6931471805599453).epsilon(1e-15));
  CHECK(alpha(2, 2) == Approx(1.5265890341390445).epsilon(1e-15));
  const double d = alpha_excess(1, 1'000'000);
  CHECK(d > 0.0);
  CHECK(d < 1e-6);
  CHECK(d == Approx(6.7496868473403503e-8).epsilon(1e-12));
  CHECK(alpha_excess(6, 1'000'000) == Approx(1.8186141747363257e-9).epsilon(1e-11));
  CHECK(alpha(3, 50) > alpha(3, 51));
  CHECK_THROWS_AS(alpha(1, 1), WeightDomainError);
  CHECK_THROWS_AS(alpha(0, 5), WeightDomainError);
}

TEST_CASE("increment keeps relative precision") {
  // ell_1(n) - ell_1(n-1) = ln(n / (n-1)).
  CHECK(ell_increment(1, 1'000'000) == Approx(std::log1p(1.0 / 999'999.0)).epsilon(1e-15));
  CHECK(ell_increment(0, 7) == 0.0);
  CHECK_THROWS_AS(ell_increment(1, 1), WeightDomainError);
}

TEST_CASE("phi") {
  CHECK(phi(1, 2) == Approx(0.38629436111989062).epsilon(1e-14));
  CHECK(phi(2, 2) == Approx(0.78318547693261590).epsilon(1e-14));
  CHECK(phi(6, 2) == Approx(2.4215262736549147).epsilon(1e-14));
  for (unsigned k = 1; k <= 6; ++k) CHECK(phi(k, 2) > 0.0);
  const double tail = phi(1, 100'000);
  CHECK(tail > 0.0);
  CHECK(tail < 1e-4);
  CHECK(tail == Approx(5.0000333335833353e-6).epsilon(1e-9));
  CHECK(phi(3, 1000) == Approx(5.8426534746019185e-4).epsilon(1e-10));
  CHECK_THROWS_AS(phi(1, 0), WeightDomainError);
}

TEST_CASE("gamma") {
  CHECK(gamma(1, 2) == Approx(1.2862964222779530).epsilon(1e-14));
  CHECK(gamma(6, 2) == Approx(1.1217244584567111).epsilon(1e-14));
  const double g = gamma(1, 1'000'000) - 1.0;
  CHECK(g > 0.0);
  CHECK(g < 1e-6);
  CHECK(g == Approx(3.3748433477397235e-8).epsilon(1e-10));
  CHECK(gamma(2, 1000) == Approx(1.0000206224458520).epsilon(1e-15));
  // (phi_{k+1} + 1) = (phi_k + 1) gamma_k
  const double lhs = phi(2, 5) + 1.0;
  const double rhs = (phi(1, 5) + 1.0) * gamma(1, 5);
  CHECK(std::abs(lhs - rhs) / lhs < 1e-12);
  CHECK_THROWS_AS(gamma(1, 1), WeightDomainError);
}

TEST_CASE("derivative identity") {
  CHECK(ell_derivative(1, 10.0) == Approx(0.1));
  CHECK(ell_derivative_residual(1, 10.0, 1e-4) < 1e-8);
  const double coarse = ell_derivative_residual(2, 100.0, 0.1);
  const double fine = ell_derivative_residual(2, 100.0, 0.05);
  CHECK(coarse / fine == Approx(4.0).epsilon(0.05));
  CHECK_THROWS_AS(ell_derivative_residual(1, 1.5, 1.0), WeightDomainError);
  CHECK_THROWS_AS(ell_derivative_residual(1, 10.0, 0.0), WeightDomainError);
  CHECK_THROWS_AS(ell_derivative(1, 1.0), WeightDomainError);
}
