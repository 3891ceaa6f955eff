#pragma once

namespace expint {

// exp(x^2) * erfc(x), stable for large x.
double erfcx(double x);

// Regularized incomplete gamma functions P(a,x) and Q(a,x) = 1 - P(a,x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

double digamma(double x);

double normal_cdf(double z);

}  // namespace expint
