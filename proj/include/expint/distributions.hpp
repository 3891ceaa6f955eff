#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "expint/laplace.hpp"
#include "expint/rng.hpp"

namespace expint {

// Thrown when a closed form (density, Laplace transform, ...) does not exist
// for the requested law; callers are pointed at the empirical route.
struct UnsupportedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GammaLaw {
  double shape, rate;
};
struct ExponentialLaw {
  double rate;
};
struct NormalLaw {
  double mean, var;
};
struct HalfNormalLaw {};
struct LogNormalLaw {
  double mu, sigma2;  // parameters of the underlying normal
};
struct PositiveStableLaw {
  double alpha;  // Laplace transform exp(-u^alpha), alpha in (0,1)
};
struct InverseGaussianLaw {
  double beta, delta;  // Laplace transform exp(-delta(sqrt(beta^2+2u)-beta))
};
struct PointMassLaw {
  double c;
};
struct ParetoTailLaw {
  double x_min, shape;  // P(X > y) = (x_min/y)^shape, y >= x_min
};
struct SlowLogTailLaw {};  // P(Y > y) = 1/log y for y > e; infinite log-moment
// Density exp(-lambda1 x) / (B(lambda1,lambda2) (1+exp(-x))^{lambda1+lambda2});
// the log of a ratio of independent gamma(lambda_i, 1) variables, reducing to
// the log-ratio of two unit exponentials when lambda1 = lambda2 = 1.
struct LogRatioLaw {
  double lambda1, lambda2;
};

enum class MapKind { NegExp, Log, Power, Scale, Shift };
struct MapStep {
  MapKind kind;
  double c = 0.0;  // parameter for Power/Scale/Shift
};

struct TransformedLaw;

using DistSpec =
    std::variant<GammaLaw, ExponentialLaw, NormalLaw, HalfNormalLaw,
                 LogNormalLaw, PositiveStableLaw, InverseGaussianLaw,
                 PointMassLaw, ParetoTailLaw, SlowLogTailLaw, LogRatioLaw,
                 TransformedLaw>;

struct TransformedLaw {
  std::shared_ptr<const DistSpec> base;
  std::vector<MapStep> maps;  // applied left-to-right, at most 3
};

struct Support {
  double lo, hi;  // closure of the support
};

// Validated scalar law: sampler plus densities / transforms / moments where
// closed forms exist.  Immutable after construction and safe to share.
class Distribution {
 public:
  explicit Distribution(DistSpec spec);

  const DistSpec& spec() const { return *spec_; }
  Support support() const { return support_; }
  bool nonneg_support() const { return support_.lo >= 0.0; }
  // P(X > 0) = 1 (counts continuous laws whose infimum is exactly 0)
  bool positive_support() const;

  double sample(RngStream& rng) const;

  bool has_density() const;
  double density(double x) const;  // throws UnsupportedError
  std::optional<double> cdf(double x) const;

  bool has_laplace() const;
  LaplaceFn laplace() const;  // throws UnsupportedError

  // Moments; +infinity is a meaningful return, nullopt means "unknown".
  std::optional<double> mean() const;
  std::optional<double> mean_abs() const;
  std::optional<double> neg_exp_mean() const;  // E[exp(-X)]
  // Whether E[log^+ |X|] is finite; nullopt when not derivable analytically.
  std::optional<bool> finite_log_moment() const;

  std::string describe() const;

 private:
  std::shared_ptr<const DistSpec> spec_;
  Support support_;
  bool lo_attained_ = false;
};

// n i.i.d. draws consumed sequentially from one stream.
std::vector<double> sample(const Distribution& d, RngStream& rng,
                           std::size_t n);

// Parallel sampling, draw i from RngStream(seed, stream_base + i); output is
// identical for every worker count.
std::vector<double> sample_par(const Distribution& d, std::uint64_t seed,
                               std::uint64_t stream_base, std::size_t n,
                               unsigned workers = 0);

unsigned resolve_workers(unsigned requested);

// Runs fn(i) over [0, n) on the resolved number of threads.
void parallel_for(std::size_t n, unsigned workers,
                  const std::function<void(std::size_t)>& fn);

}  // namespace expint
