#pragma once

#include <optional>
#include <string>
#include <variant>

#include "expint/distributions.hpp"
#include "expint/laplace.hpp"
#include "expint/rng.hpp"

namespace expint {

struct BrownianWithDrift {
  double sigma, drift;  // xi_t = sigma B_t + drift t
};
struct Deterministic {
  double slope;  // xi_t = slope t
};
struct StableSubordinator {
  double alpha;       // in (0,1)
  double drift = 0.0; // Laplace exponent phi(u) = drift u + u^alpha
};
struct InverseGaussianSub {
  double beta, delta;  // phi(u) = delta (sqrt(beta^2 + 2u) - beta)
};
struct CompoundPoissonSpec {
  double rate;
  Distribution jump;
};
struct PoissonCounting {
  double rate;
};

using LevySpec = std::variant<BrownianWithDrift, Deterministic,
                              StableSubordinator, InverseGaussianSub,
                              CompoundPoissonSpec, PoissonCounting>;

// Levy process with exact marginal sampling and triplet accessors.
class LevyProcess {
 public:
  explicit LevyProcess(LevySpec spec);

  const LevySpec& spec() const { return spec_; }

  // Exact draw of X_t from the marginal law.
  double sample_increment(double t, RngStream& rng) const;

  // tau ~ stop, then X_tau.
  double sample_stopped(const Distribution& stop, RngStream& rng) const;

  // Analytic Laplace transform of X_tau: u -> L_tau(phi(u)).  Subordinator
  // variants only, and the stop law must have an analytic transform.  The
  // returned note records voided HCM guarantees (stable drift present, or an
  // inverse Gaussian stopped at an exponential with lambda < delta beta).
  LaplaceFn stopped_laplace(const Distribution& stop) const;

  bool is_subordinator() const;
  // phi(u) with E[exp(-u X_t)] = exp(-t phi(u)); nullopt for signed variants.
  std::optional<double> laplace_exponent(double u) const;
  // E[exp(-u X_1)] = exp(-t psi(u)) exponent, defined also for Brownian and
  // deterministic variants (may be negative there).
  std::optional<double> neg_exp_exponent(double u) const;

  // Levy-Khintchine pieces (truncation |x| <= 1): nu((x, inf)) and a_xi.
  double levy_tail(double x) const;
  double triplet_drift() const;
  bool has_jumps() const;
  // A(x) = a_xi + nu((1,inf)) + int_1^x nu((y,inf)) dy
  double a_function(double x) const;

  std::optional<double> mean() const;  // E[xi_1], may be +infinity
  // true/false when decidable from the family's mean drift; nullopt at the
  // null-drift boundary or when the jump mean is unknown.
  std::optional<bool> drifts_to_plus_infinity() const;
  std::optional<bool> jumps_finite_log_moment() const;

  // E[exp(-xi_tau)] when analytic: L_tau(psi(1)).
  std::optional<double> stopped_neg_exp_mean(const Distribution& stop) const;

  std::string describe() const;

 private:
  LevySpec spec_;
};

// Renewal compound sum Sum_{i <= M_t} X_i with i.i.d. positive waiting times.
struct CompoundSum {
  Distribution waiting;
  Distribution jump;
  CompoundSum(Distribution waiting_law, Distribution jump_law);
};

// A(x) = int_0^x P(X_1 > u) du, evaluated as E[min(x, X_1^+)].
double renewal_a_function(const Distribution& jump, double x);
// A(inf) = E[X_1^+]; +infinity for heavy-tailed jumps, nullopt when unknown.
std::optional<double> renewal_a_limit(const Distribution& jump);

// Bivariate dependent compound Poisson model: normalized Levy measure
// p delta_0(dx) rho_0(dy) + (1-p) delta_1(dx) rho_1(dy), integrator scaling
// c^{-xi}.  rho_0 lives on (0,inf), rho_1 on [0,inf); both need finite
// log-moments, which is enforced per family at construction.
struct DependentCPP {
  double rate;
  double p;
  Distribution rho0;
  Distribution rho1;
  double log_scale_c;  // c > 1; c = e reproduces the e^{-1}-decomposable case

  DependentCPP(double rate_, double p_, Distribution rho0_, Distribution rho1_,
               double log_scale_c_ = 2.71828182845904523536);
};

}  // namespace expint
