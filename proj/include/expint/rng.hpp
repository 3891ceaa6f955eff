#pragma once

#include <cstdint>

namespace expint {

// Counter-seeded xoshiro256++ stream with built-in variate generators.
//
// A stream is fully determined by (seed, stream_index): the same pair and the
// same draw sequence reproduce bitwise-identical output.  Distinct stream
// indices give statistically independent streams, which is what the parallel
// Monte Carlo drivers rely on (one substream per draw).
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_index = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_index() const { return stream_; }

  std::uint64_t next_u64();

  double uniform();      // [0, 1)
  double uniform_pos();  // (0, 1)
  double normal();       // standard normal, Marsaglia polar method
  double exponential(double rate = 1.0);
  // Marsaglia-Tsang; shape < 1 handled by the boost U^{1/shape} trick.
  double gamma(double shape, double rate = 1.0);
  // Kanter construction, one-sided stable with Laplace transform exp(-u^alpha).
  double stable_one_sided(double alpha);
  // Michael-Schucany-Haas transform-with-rejection, mean mu, shape lambda.
  double inverse_gaussian(double mu, double lambda);
  // Exact via cumulative Exp(1) arrivals; O(mean) but underflow-free.
  std::uint64_t poisson(double mean);
  // P(M = k) = (1-p) p^k for k = 0,1,2,...
  std::uint64_t geometric(double p);

 private:
  std::uint64_t s_[4];
  std::uint64_t seed_;
  std::uint64_t stream_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace expint
