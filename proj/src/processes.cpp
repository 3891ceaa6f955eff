#include "expint/processes.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "expint/quadrature.hpp"
#include "expint/special.hpp"

namespace expint {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// E[X 1{|X| <= 1}] for a jump law, by quadrature over the density.
std::optional<double> truncated_mean(const Distribution& jump) {
  if (const auto* pm = std::get_if<PointMassLaw>(&jump.spec()))
    return std::fabs(pm->c) <= 1.0 ? pm->c : 0.0;
  if (!jump.has_density()) return std::nullopt;
  const Support s = jump.support();
  const double lo = std::max(s.lo, -1.0);
  const double hi = std::min(s.hi, 1.0);
  if (lo >= hi) return 0.0;
  auto res = integrate([&](double x) { return x * jump.density(x); }, lo, hi,
                       1e-10);
  if (!res.converged) return std::nullopt;
  return res.value;
}

// P(X > y): analytic cdf when available, otherwise density-tail quadrature.
std::optional<double> tail_prob(const Distribution& jump, double y) {
  if (auto c = jump.cdf(y)) return 1.0 - *c;
  if (!jump.has_density()) return std::nullopt;
  if (y >= jump.support().hi) return 0.0;
  auto res = integrate_to_inf([&](double x) { return jump.density(x); },
                              std::max(y, jump.support().lo), 1e-10);
  if (!res.converged) return std::nullopt;
  return res.value;
}

}  // namespace

LevyProcess::LevyProcess(LevySpec spec) : spec_(std::move(spec)) {
  std::visit(
      [](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, BrownianWithDrift>) {
          require(p.sigma >= 0.0, "brownian_with_drift: sigma must be >= 0");
        } else if constexpr (std::is_same_v<T, StableSubordinator>) {
          require(p.alpha > 1e-6 && p.alpha < 1.0 - 1e-6,
                  "stable_subordinator: alpha must lie in (0,1)");
          require(p.drift >= 0.0, "stable_subordinator: drift must be >= 0");
        } else if constexpr (std::is_same_v<T, InverseGaussianSub>) {
          require(p.beta > 0.0 && p.delta > 0.0,
                  "inverse_gaussian_sub: beta and delta must be positive");
        } else if constexpr (std::is_same_v<T, CompoundPoissonSpec>) {
          require(p.rate > 0.0, "compound_poisson: rate must be positive");
        } else if constexpr (std::is_same_v<T, PoissonCounting>) {
          require(p.rate > 0.0, "poisson_counting: rate must be positive");
        }
      },
      spec_);
}

double LevyProcess::sample_increment(double t, RngStream& rng) const {
  if (!(t > 0.0))
    throw std::invalid_argument("sample_increment: t must be positive");
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, BrownianWithDrift>) {
          return p.drift * t + p.sigma * std::sqrt(t) * rng.normal();
        } else if constexpr (std::is_same_v<T, Deterministic>) {
          return p.slope * t;
        } else if constexpr (std::is_same_v<T, StableSubordinator>) {
          // self-similarity: S_t = t^{1/alpha} S_1
          return p.drift * t +
                 std::pow(t, 1.0 / p.alpha) * rng.stable_one_sided(p.alpha);
        } else if constexpr (std::is_same_v<T, InverseGaussianSub>) {
          const double dt = p.delta * t;
          return rng.inverse_gaussian(dt / p.beta, dt * dt);
        } else if constexpr (std::is_same_v<T, CompoundPoissonSpec>) {
          const std::uint64_t n = rng.poisson(p.rate * t);
          double sum = 0.0;
          for (std::uint64_t i = 0; i < n; ++i) sum += p.jump.sample(rng);
          return sum;
        } else {
          static_assert(std::is_same_v<T, PoissonCounting>);
          return static_cast<double>(rng.poisson(p.rate * t));
        }
      },
      spec_);
}

double LevyProcess::sample_stopped(const Distribution& stop,
                                   RngStream& rng) const {
  if (!stop.positive_support())
    throw std::invalid_argument(
        "sample_stopped: stop law must have positive support");
  const double tau = stop.sample(rng);
  return sample_increment(tau, rng);
}

bool LevyProcess::is_subordinator() const {
  return std::visit(
      [](const auto& p) -> bool {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, BrownianWithDrift>) {
          return false;
        } else if constexpr (std::is_same_v<T, Deterministic>) {
          return p.slope >= 0.0;
        } else if constexpr (std::is_same_v<T, CompoundPoissonSpec>) {
          return p.jump.nonneg_support();
        } else {
          return true;
        }
      },
      spec_);
}

std::optional<double> LevyProcess::laplace_exponent(double u) const {
  if (!is_subordinator()) return std::nullopt;
  return neg_exp_exponent(u);
}

std::optional<double> LevyProcess::neg_exp_exponent(double u) const {
  return std::visit(
      [u](const auto& p) -> std::optional<double> {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, BrownianWithDrift>) {
          return p.drift * u - 0.5 * p.sigma * p.sigma * u * u;
        } else if constexpr (std::is_same_v<T, Deterministic>) {
          return p.slope * u;
        } else if constexpr (std::is_same_v<T, StableSubordinator>) {
          return p.drift * u + std::pow(u, p.alpha);
        } else if constexpr (std::is_same_v<T, InverseGaussianSub>) {
          return p.delta * (std::sqrt(p.beta * p.beta + 2.0 * u) - p.beta);
        } else if constexpr (std::is_same_v<T, CompoundPoissonSpec>) {
          if (!p.jump.has_laplace()) return std::nullopt;
          return p.rate * (1.0 - p.jump.laplace()(u));
        } else {
          static_assert(std::is_same_v<T, PoissonCounting>);
          return p.rate * (1.0 - std::exp(-u));
        }
      },
      spec_);
}

LaplaceFn LevyProcess::stopped_laplace(const Distribution& stop) const {
  if (!is_subordinator())
    throw UnsupportedError(
        "stopped_laplace: supported only for subordinator variants "
        "(deterministic, stable_subordinator, inverse_gaussian_sub, "
        "compound_poisson with nonnegative jumps, poisson_counting)");
  if (!stop.has_laplace())
    throw UnsupportedError(
        "stopped_laplace: the stop law has no analytic Laplace transform");
  if (const auto* cpp = std::get_if<CompoundPoissonSpec>(&spec_)) {
    if (!cpp->jump.has_laplace())
      throw UnsupportedError(
          "stopped_laplace: compound Poisson jumps need an analytic Laplace "
          "transform");
  }

  LaplaceFn stop_lt = stop.laplace();
  auto self = *this;
  LaplaceFn out = LaplaceFn::analytic(
      [self, stop_lt](double u) {
        return stop_lt(*self.laplace_exponent(u));
      });

  // mean of eta_tau = E[tau] * E[eta_1] when both are finite
  auto m1 = mean();
  if (stop_lt.mean && m1 && std::isfinite(*m1))
    out.mean = *stop_lt.mean * *m1;

  if (const auto* st = std::get_if<StableSubordinator>(&spec_)) {
    if (st->drift > 0.0)
      out.note =
          "non-HCM candidate: stable subordinator with a drift term";
  }
  if (const auto* ig = std::get_if<InverseGaussianSub>(&spec_)) {
    if (const auto* ex = std::get_if<ExponentialLaw>(&stop.spec())) {
      if (ex->rate < ig->delta * ig->beta)
        out.note =
            "HCM guarantee void: exponential stop rate < delta*beta";
    }
  }
  return out;
}

double LevyProcess::levy_tail(double x) const {
  if (x <= 0.0)
    throw std::invalid_argument("levy_tail: x must be positive");
  return std::visit(
      [x](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, BrownianWithDrift> ||
                      std::is_same_v<T, Deterministic>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, StableSubordinator>) {
          // nu(dx) = alpha/Gamma(1-alpha) x^{-1-alpha} dx
          return std::pow(x, -p.alpha) / std::tgamma(1.0 - p.alpha);
        } else if constexpr (std::is_same_v<T, InverseGaussianSub>) {
          auto res = integrate_to_inf(
              [&p](double y) {
                return p.delta / std::sqrt(2.0 * kPi) * std::pow(y, -1.5) *
                       std::exp(-0.5 * p.beta * p.beta * y);
              },
              x, 1e-12);
          return res.value;
        } else if constexpr (std::is_same_v<T, CompoundPoissonSpec>) {
          auto t = tail_prob(p.jump, x);
          if (!t)
            throw UnsupportedError(
                "levy_tail: jump law has neither cdf nor density");
          return p.rate * *t;
        } else {
          static_assert(std::is_same_v<T, PoissonCounting>);
          return x < 1.0 ? p.rate : 0.0;
        }
      },
      spec_);
}

double LevyProcess::triplet_drift() const {
  return std::visit(
      [](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, BrownianWithDrift>) {
          return p.drift;
        } else if constexpr (std::is_same_v<T, Deterministic>) {
          return p.slope;
        } else if constexpr (std::is_same_v<T, StableSubordinator>) {
          return p.drift + p.alpha / std::tgamma(2.0 - p.alpha);
        } else if constexpr (std::is_same_v<T, InverseGaussianSub>) {
          auto res = integrate(
              [&p](double y) {
                if (y <= 0.0) return 0.0;
                return p.delta / std::sqrt(2.0 * kPi) * std::pow(y, -0.5) *
                       std::exp(-0.5 * p.beta * p.beta * y);
              },
              0.0, 1.0, 1e-12);
          return res.value;
        } else if constexpr (std::is_same_v<T, CompoundPoissonSpec>) {
          auto tm = truncated_mean(p.jump);
          if (!tm)
            throw UnsupportedError(
                "triplet_drift: truncated jump mean not computable");
          return p.rate * *tm;
        } else {
          static_assert(std::is_same_v<T, PoissonCounting>);
          return p.rate;  // atom at 1 lies inside the truncation ball
        }
      },
      spec_);
}

bool LevyProcess::has_jumps() const {
  return !std::holds_alternative<BrownianWithDrift>(spec_) &&
         !std::holds_alternative<Deterministic>(spec_);
}

double LevyProcess::a_function(double x) const {
  if (!(x > 0.0))
    throw std::invalid_argument("a_function: x must be positive");
  double a = triplet_drift();
  if (!has_jumps()) return a;
  a += levy_tail(1.0);
  if (x > 1.0) {
    auto res = integrate([this](double y) { return levy_tail(y); }, 1.0, x,
                         1e-8, 1'000'000);
    a += res.value;
  }
  return a;
}

std::optional<double> LevyProcess::mean() const {
  return std::visit(
      [](const auto& p) -> std::optional<double> {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, BrownianWithDrift>) {
          return p.drift;
        } else if constexpr (std::is_same_v<T, Deterministic>) {
          return p.slope;
        } else if constexpr (std::is_same_v<T, StableSubordinator>) {
          return kInf;
        } else if constexpr (std::is_same_v<T, InverseGaussianSub>) {
          return p.delta / p.beta;
        } else if constexpr (std::is_same_v<T, CompoundPoissonSpec>) {
          auto m = p.jump.mean();
          if (!m) return std::nullopt;
          return p.rate * *m;
        } else {
          static_assert(std::is_same_v<T, PoissonCounting>);
          return p.rate;
        }
      },
      spec_);
}

std::optional<bool> LevyProcess::drifts_to_plus_infinity() const {
  if (is_subordinator()) {
    // a nonzero subordinator increases to +infinity
    if (const auto* det = std::get_if<Deterministic>(&spec_))
      return det->slope > 0.0;
    if (const auto* cpp = std::get_if<CompoundPoissonSpec>(&spec_)) {
      if (const auto* pm = std::get_if<PointMassLaw>(&cpp->jump.spec()))
        if (pm->c == 0.0) return false;
    }
    return true;
  }
  auto m = mean();
  if (!m) return std::nullopt;
  if (*m > 0.0) return true;
  if (*m < 0.0) return false;
  return std::nullopt;  // null-drift boundary deliberately undecided
}

std::optional<bool> LevyProcess::jumps_finite_log_moment() const {
  return std::visit(
      [](const auto& p) -> std::optional<bool> {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, BrownianWithDrift> ||
                      std::is_same_v<T, Deterministic>) {
          return true;  // no jump part
        } else if constexpr (std::is_same_v<T, CompoundPoissonSpec>) {
          return p.jump.finite_log_moment();
        } else {
          return true;  // stable / IG / counting tails have finite log-moment
        }
      },
      spec_);
}

std::optional<double> LevyProcess::stopped_neg_exp_mean(
    const Distribution& stop) const {
  auto psi1 = neg_exp_exponent(1.0);
  if (!psi1 || !stop.has_laplace()) return std::nullopt;
  if (*psi1 < 0.0) {
    // E[exp(-xi_tau)] = E[exp(tau |psi|)]; only safe in closed form for a
    // degenerate stop, where it exceeds 1 and the engine rejects downstream
    if (const auto* pm = std::get_if<PointMassLaw>(&stop.spec()))
      return std::exp(-pm->c * *psi1);
    return std::nullopt;
  }
  return stop.laplace()(*psi1);
}

std::string LevyProcess::describe() const {
  std::ostringstream os;
  std::visit(
      [&os](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, BrownianWithDrift>) {
          os << "brownian_with_drift(sigma=" << p.sigma
             << ", drift=" << p.drift << ")";
        } else if constexpr (std::is_same_v<T, Deterministic>) {
          os << "deterministic(slope=" << p.slope << ")";
        } else if constexpr (std::is_same_v<T, StableSubordinator>) {
          os << "stable_subordinator(alpha=" << p.alpha
             << ", drift=" << p.drift << ")";
        } else if constexpr (std::is_same_v<T, InverseGaussianSub>) {
          os << "inverse_gaussian_sub(beta=" << p.beta
             << ", delta=" << p.delta << ")";
        } else if constexpr (std::is_same_v<T, CompoundPoissonSpec>) {
          os << "compound_poisson(rate=" << p.rate
             << ", jump=" << p.jump.describe() << ")";
        } else {
          static_assert(std::is_same_v<T, PoissonCounting>);
          os << "poisson_counting(rate=" << p.rate << ")";
        }
      },
      spec_);
  return os.str();
}

CompoundSum::CompoundSum(Distribution waiting_law, Distribution jump_law)
    : waiting(std::move(waiting_law)), jump(std::move(jump_law)) {
  if (!waiting.positive_support())
    throw std::invalid_argument(
        "compound_sum: waiting law must be strictly positive");
}

double renewal_a_function(const Distribution& jump, double x) {
  if (!(x > 0.0))
    throw std::invalid_argument("renewal_a_function: x must be positive");
  // int_0^x P(X > u) du = E[min(x, X^+)]
  if (const auto* pm = std::get_if<PointMassLaw>(&jump.spec()))
    return std::min(x, std::max(pm->c, 0.0));
  if (jump.has_density()) {
    const Support s = jump.support();
    const double lo = std::max(0.0, s.lo);
    auto head = integrate([&](double t) { return t * jump.density(t); }, lo,
                          std::min(x, s.hi), 1e-10);
    double tail = 0.0;
    if (s.hi > x) {
      if (auto c = jump.cdf(x)) {
        tail = x * (1.0 - *c);
      } else {
        auto tr = integrate_to_inf([&](double t) { return jump.density(t); },
                                   x, 1e-10);
        tail = x * tr.value;
      }
    }
    return head.value + tail;
  }
  throw UnsupportedError(
      "renewal_a_function: jump law has neither point mass nor density");
}

std::optional<double> renewal_a_limit(const Distribution& jump) {
  if (jump.nonneg_support()) return jump.mean();
  if (const auto* pm = std::get_if<PointMassLaw>(&jump.spec()))
    return std::max(pm->c, 0.0);
  if (jump.has_density()) {
    const Support s = jump.support();
    if (s.hi <= 0.0) return 0.0;
    auto res = integrate_to_inf(
        [&](double t) { return t * jump.density(t); }, std::max(0.0, s.lo),
        1e-10);
    if (!res.converged) {
      auto m = jump.mean();
      if (m && *m == kInf) return kInf;
      return std::nullopt;
    }
    return res.value;
  }
  return std::nullopt;
}

DependentCPP::DependentCPP(double rate_, double p_, Distribution rho0_,
                           Distribution rho1_, double log_scale_c_)
    : rate(rate_),
      p(p_),
      rho0(std::move(rho0_)),
      rho1(std::move(rho1_)),
      log_scale_c(log_scale_c_) {
  require(rate > 0.0, "dependent_cpp: rate must be positive");
  require(p > 0.0 && p < 1.0,
          "dependent_cpp: p must lie strictly inside (0,1)");
  require(log_scale_c > 1.0, "dependent_cpp: scale base c must exceed 1");
  require(rho0.positive_support(),
          "dependent_cpp: rho0 must live on (0, infinity)");
  require(rho1.nonneg_support(),
          "dependent_cpp: rho1 must live on [0, infinity)");
  auto l0 = rho0.finite_log_moment();
  auto l1 = rho1.finite_log_moment();
  require(l0.has_value() && *l0,
          "dependent_cpp: rho0 must have a finite log-moment");
  require(l1.has_value() && *l1,
          "dependent_cpp: rho1 must have a finite log-moment");
}

}  // namespace expint
