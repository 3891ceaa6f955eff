#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace expint {

// Evaluable Laplace transform u >= 0 -> (0, 1].  Analytic transforms have zero
// standard error and value(0) == 1 exactly; empirical ones carry the
// Monte-Carlo standard error per evaluation point.
struct LaplaceFn {
  enum class Kind { Analytic, Empirical };

  Kind kind = Kind::Analytic;
  std::function<double(double)> value;
  std::function<double(double)> stderr_fn;  // absent or zero for analytic
  std::optional<double> mean;  // mean of the underlying law, when known
  std::string note;  // advisory flags, e.g. "HCM guarantee void: ..."

  double operator()(double u) const { return value(u); }
  double stderr_at(double u) const { return stderr_fn ? stderr_fn(u) : 0.0; }

  static LaplaceFn analytic(std::function<double(double)> f,
                            std::optional<double> mean = std::nullopt,
                            std::string note = {});
};

// Mean and standard error of exp(-u * X_i) over the sample.
// Requires u * min(sample) > -700 so the exponential cannot overflow.
std::pair<double, double> empirical_laplace(const std::vector<double>& samples,
                                            double u);

// Empirical Laplace transform over a fixed sample with per-u caching.
// Safe for concurrent reads; population of a new u is serialized.
class EmpiricalLT {
 public:
  explicit EmpiricalLT(std::shared_ptr<const std::vector<double>> samples);
  explicit EmpiricalLT(std::vector<double> samples);

  std::pair<double, double> at(double u) const;  // (estimate, stderr)
  LaplaceFn as_laplace_fn() const;
  std::size_t sample_size() const { return samples_->size(); }

 private:
  std::shared_ptr<const std::vector<double>> samples_;
  mutable std::mutex mu_;
  mutable std::map<double, std::pair<double, double>> cache_;
};

}  // namespace expint
