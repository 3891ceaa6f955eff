#include "expint/laplace.hpp"

#include <cmath>
#include <stdexcept>

namespace expint {

LaplaceFn LaplaceFn::analytic(std::function<double(double)> f,
                              std::optional<double> mean, std::string note) {
  LaplaceFn out;
  out.kind = Kind::Analytic;
  out.value = std::move(f);
  out.mean = mean;
  out.note = std::move(note);
  return out;
}

std::pair<double, double> empirical_laplace(const std::vector<double>& samples,
                                            double u) {
  if (samples.empty())
    throw std::invalid_argument("empirical_laplace: empty sample");
  if (u < 0.0)
    throw std::invalid_argument("empirical_laplace: u must be nonnegative");
  if (u > 0.0) {
    double mn = samples[0];
    for (double x : samples) mn = std::min(mn, x);
    if (u * mn <= -700.0)
      throw std::invalid_argument(
          "empirical_laplace: u = " + std::to_string(u) +
          " overflows exp(-u*x) on this sample (u*min <= -700)");
  }
  double sum = 0.0, sumsq = 0.0;
  for (double x : samples) {
    const double e = std::exp(-u * x);
    sum += e;
    sumsq += e * e;
  }
  const double n = static_cast<double>(samples.size());
  const double mean = sum / n;
  double var = sumsq / n - mean * mean;
  if (var < 0.0) var = 0.0;
  const double se = samples.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
  return {mean, se};
}

EmpiricalLT::EmpiricalLT(std::shared_ptr<const std::vector<double>> samples)
    : samples_(std::move(samples)) {
  if (!samples_ || samples_->empty())
    throw std::invalid_argument("EmpiricalLT: empty sample");
}

EmpiricalLT::EmpiricalLT(std::vector<double> samples)
    : EmpiricalLT(std::make_shared<const std::vector<double>>(
          std::move(samples))) {}

std::pair<double, double> EmpiricalLT::at(double u) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(u);
    if (it != cache_.end()) return it->second;
  }
  auto est = empirical_laplace(*samples_, u);
  std::lock_guard<std::mutex> lock(mu_);
  cache_.emplace(u, est);
  return est;
}

LaplaceFn EmpiricalLT::as_laplace_fn() const {
  LaplaceFn out;
  out.kind = LaplaceFn::Kind::Empirical;
  auto holder = std::make_shared<EmpiricalLT>(samples_);
  out.value = [holder](double u) { return holder->at(u).first; };
  out.stderr_fn = [holder](double u) { return holder->at(u).second; };
  return out;
}

}  // namespace expint
