#include "expint/special.hpp"

#include <cmath>
#include <stdexcept>

namespace expint {

double erfcx(double x) {
  if (x < 25.0) return std::exp(x * x) * std::erfc(x);
  // asymptotic series, relative error < 1e-16 for x >= 25
  const double inv2 = 1.0 / (2.0 * x * x);
  double sum = 1.0, term = 1.0;
  for (int k = 1; k <= 6; ++k) {
    term *= -(2.0 * k - 1.0) * inv2;
    sum += term;
  }
  return sum / (x * std::sqrt(3.14159265358979323846));
}

namespace {

// series expansion of P(a,x), for x < a + 1
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < 500; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16)
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  throw std::runtime_error("gamma_p: series did not converge");
}

// continued fraction for Q(a,x), for x >= a + 1
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16)
      return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  throw std::runtime_error("gamma_q: continued fraction did not converge");
}

}  // namespace

double gamma_p(double a, double x) {
  if (a <= 0.0) throw std::invalid_argument("gamma_p: a must be positive");
  if (x < 0.0) throw std::invalid_argument("gamma_p: x must be nonnegative");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
  if (a <= 0.0) throw std::invalid_argument("gamma_q: a must be positive");
  if (x < 0.0) throw std::invalid_argument("gamma_q: x must be nonnegative");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double digamma(double x) {
  if (x <= 0.0) throw std::invalid_argument("digamma: x must be positive");
  double result = 0.0;
  while (x < 6.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x, inv2 = inv * inv;
  result += std::log(x) - 0.5 * inv;
  result -= inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 -
                    inv2 * (1.0 / 240.0 - inv2 / 132.0))));
  return result;
}

double normal_cdf(double z) {
  return 0.5 * std::erfc(-z / 1.41421356237309504880);
}

}  // namespace expint
