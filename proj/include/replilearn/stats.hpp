#pragma once

#include <cstdint>
#include <vector>

namespace replilearn {

struct Interval {
  double lo, hi;
};

// Wilson score interval (z = 1.96 for 95%).
Interval wilson(std::uint64_t k, std::uint64_t n, double z = 1.96);
// Binomial standard error sqrt(p(1-p)/n) at the observed p.
double binomial_se(double p, std::uint64_t n);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Empirical q-quantile (type 7, linear interpolation); v is copied.
double quantile(std::vector<double> v, double q);

struct Estimate {
  std::uint64_t k = 0, n = 0;
  double p() const { return n ? static_cast<double>(k) / static_cast<double>(n) : 0.0; }
  double se() const { return binomial_se(p(), n); }
  Interval ci() const { return wilson(k, n); }
};

}  // namespace replilearn
