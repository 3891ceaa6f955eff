#pragma once

#include <cstddef>
#include <functional>

namespace expint {

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  bool converged = false;
  std::size_t panels = 0;
};

// Adaptive Gauss-Kronrod (G7/K15) with bisection refinement.
QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, double abs_tol = 1e-8,
                           std::size_t max_panels = 1'000'000);

// Integral over [a, inf) via the substitution x = a + t/(1-t).
QuadratureResult integrate_to_inf(const std::function<double(double)>& f,
                                  double a, double abs_tol = 1e-8,
                                  std::size_t max_panels = 1'000'000);

}  // namespace expint
