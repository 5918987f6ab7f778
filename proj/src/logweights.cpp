#include "treelip/logweights.hpp"

#include <cmath>
#include <string>

namespace treelip {

namespace {

void require_order(unsigned k) {
  if (k < 1) throw WeightDomainError("space index k must be positive");
}

void require_step(std::size_t n) {
  if (n < 2) throw WeightDomainError("n must be at least 2, got " + std::to_string(n));
}

// (1 + x) ln(1 + x) / x - 1 for x > 0; the series branch avoids cancellation
// for small x. Coefficients are (-1)^(m+1) / (m (m + 1)).
double excess_of_xlogx(double x) {
  if (x > 0.05) return (1.0 + x) * std::log1p(x) / x - 1.0;
  double sum = 0.0;
  double power = x;
  for (int m = 1; m < 40; ++m) {
    const double term = power / (static_cast<double>(m) * (m + 1));
    sum += (m % 2 == 1) ? term : -term;
    if (term < 1e-18 * sum) break;
    power *= x;
  }
  return sum;
}

}  // namespace

double ell(unsigned j, double x) {
  if (!(x >= 1.0)) throw WeightDomainError("ell requires x >= 1, got " + std::to_string(x));
  if (j == 0) return 1.0;
  double value = 1.0 + std::log(x);
  for (unsigned i = 2; i <= j; ++i) value = 1.0 + std::log(value);
  return value;
}

double ell_increment(unsigned j, std::size_t n) {
  require_step(n);
  if (j == 0) return 0.0;
  const double prev = static_cast<double>(n - 1);
  double increment = std::log1p(1.0 / prev);  // ell_1(n) - ell_1(n - 1)
  double lower = 1.0 + std::log(prev);        // ell_1(n - 1)
  for (unsigned i = 2; i <= j; ++i) {
    // ell_i(n) - ell_i(n - 1) = ln(ell_{i-1}(n) / ell_{i-1}(n - 1))
    increment = std::log1p(increment / lower);
    lower = 1.0 + std::log(lower);
  }
  return increment;
}

double ell_derivative(unsigned k, double x) {
  if (!(x > 1.0)) throw WeightDomainError("ell_derivative requires x > 1");
  double denom = x;
  for (unsigned j = 1; j < k; ++j) denom *= ell(j, x);
  return 1.0 / denom;
}

double alpha_excess(unsigned k, std::size_t n) {
  require_order(k);
  require_step(n);
  return ell_increment(k, n) / ell(k, static_cast<double>(n - 1));
}

double alpha(unsigned k, std::size_t n) { return 1.0 + alpha_excess(k, n); }

double phi(unsigned k, std::size_t n) {
  require_order(k);
  require_step(n);
  const double x = static_cast<double>(n);
  double weight = x;
  for (unsigned j = 1; j < k; ++j) weight *= ell(j, x);
  return weight * ell_increment(k, n) - 1.0;
}

double gamma(unsigned k, std::size_t n) {
  return 1.0 + excess_of_xlogx(alpha_excess(k, n));
}

double ell_derivative_residual(unsigned k, double x, double h) {
  if (!(h > 0.0) || !(x - h > 1.0)) {
    throw WeightDomainError("derivative check needs h > 0 and x - h > 1");
  }
  const double central = (ell(k, x + h) - ell(k, x - h)) / (2.0 * h);
  return std::abs(central - ell_derivative(k, x));
}

WeightTable::WeightTable(unsigned k, std::size_t max_n, unsigned max_order)
    : k_(k), max_n_(max_n) {
  require_order(k);
  if (k > max_order) {
    throw WeightDomainError("k = " + std::to_string(k) + " exceeds the order cap " +
                            std::to_string(max_order));
  }
  if (max_n < 1) throw WeightDomainError("max_n must be at least 1");

  const auto cols = static_cast<Eigen::Index>(max_n);
  ell_.resize(k + 1, cols);
  mu_.resize(cols);
  mu_next_.resize(cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    const double n = static_cast<double>(c + 1);
    ell_(0, c) = 1.0;
    if (k >= 1) ell_(1, c) = 1.0 + std::log(n);
    for (unsigned j = 2; j <= k; ++j) ell_(j, c) = 1.0 + std::log(ell_(j - 1, c));
    double weight = n;
    for (unsigned j = 0; j < k; ++j) weight *= ell_(j, c);
    mu_(c) = weight;
    mu_next_(c) = weight * ell_(k, c);
  }
}

Eigen::Index WeightTable::index(std::size_t n) const {
  if (n < 1 || n > max_n_) {
    throw std::out_of_range("depth " + std::to_string(n) + " outside weight table [1, " +
                            std::to_string(max_n_) + "]");
  }
  return static_cast<Eigen::Index>(n - 1);
}

double WeightTable::ell(unsigned j, std::size_t n) const {
  if (j > k_) {
    throw std::out_of_range("ell order " + std::to_string(j) + " not tabulated (k = " +
                            std::to_string(k_) + ")");
  }
  return ell_(static_cast<Eigen::Index>(j), index(n));
}

}  // namespace treelip
