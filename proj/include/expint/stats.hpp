#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace expint {

struct MCSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double std_error = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::vector<std::pair<double, double>> quantiles;  // (level, value)
};

MCSummary summarize(const std::vector<double>& xs);

// type-7 (linear interpolation) quantile of a sorted vector
double quantile_sorted(const std::vector<double>& sorted, double q);

double sample_mean(const std::vector<double>& xs);
double sample_std_error(const std::vector<double>& xs);

}  // namespace expint
