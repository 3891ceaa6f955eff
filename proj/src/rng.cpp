#include "expint/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace expint {

namespace {

inline std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_index)
    : seed_(seed), stream_(stream_index) {
  std::uint64_t x = seed ^ (0xA0761D6478BD642FULL * (stream_index + 1));
  x ^= stream_index;
  for (auto& s : s_) s = splitmix64(x);
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 0x2545F4914F6CDD1DULL;
}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform_pos() {
  double u;
  do {
    u = uniform();
  } while (u <= 0.0);
  return u;
}

double RngStream::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  double v1, v2, s;
  do {
    v1 = 2.0 * uniform() - 1.0;
    v2 = 2.0 * uniform() - 1.0;
    s = v1 * v1 + v2 * v2;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  cached_normal_ = v2 * factor;
  has_cached_normal_ = true;
  return v1 * factor;
}

double RngStream::exponential(double rate) {
  return -std::log(uniform_pos()) / rate;
}

double RngStream::gamma(double shape, double rate) {
  if (shape < 1.0) {
    // gamma(a) = gamma(a+1) * U^{1/a}
    const double g = gamma(shape + 1.0, 1.0);
    return g * std::pow(uniform_pos(), 1.0 / shape) / rate;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_pos();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
      return d * v / rate;
  }
}

double RngStream::stable_one_sided(double alpha) {
  // S = (A(U)/E)^{(1-alpha)/alpha},
  // A(u) = sin((1-alpha)u) sin(alpha u)^{alpha/(1-alpha)} / sin(u)^{1/(1-alpha)}
  const double pi = 3.14159265358979323846;
  const double u = pi * uniform_pos();
  const double e = exponential(1.0);
  const double r = alpha / (1.0 - alpha);
  const double a = std::sin((1.0 - alpha) * u) *
                   std::pow(std::sin(alpha * u), r) /
                   std::pow(std::sin(u), 1.0 + r);
  return std::pow(a / e, 1.0 / r);
}

double RngStream::inverse_gaussian(double mu, double lambda) {
  const double z = normal();
  const double v = z * z;
  const double x = mu + mu * mu * v / (2.0 * lambda) -
                   mu / (2.0 * lambda) *
                       std::sqrt(4.0 * mu * lambda * v + mu * mu * v * v);
  if (uniform() <= mu / (mu + x)) return x;
  return mu * mu / x;
}

std::uint64_t RngStream::poisson(double mean) {
  if (mean < 0.0) throw std::invalid_argument("poisson: negative mean");
  std::uint64_t k = 0;
  double s = exponential(1.0);
  while (s <= mean) {
    ++k;
    s += exponential(1.0);
  }
  return k;
}

std::uint64_t RngStream::geometric(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("geometric: p must be in (0,1)");
  const double u = uniform_pos();
  const double k = std::floor(std::log(u) / std::log(p));
  return k < 0.0 ? 0 : static_cast<std::uint64_t>(k);
}

}  // namespace expint
