#pragma once

#include <cstddef>
#include <variant>
#include <vector>

namespace replilearn {

// Distribution over d shattered points; label of point i is Rad(p_i).
class FiniteLabeledDistribution {
 public:
  explicit FiniteLabeledDistribution(std::vector<double> biases);  // uniform marginal
  FiniteLabeledDistribution(std::vector<double> biases, std::vector<double> marginal);

  std::size_t d() const { return biases_.size(); }
  const std::vector<double>& biases() const { return biases_; }
  const std::vector<double>& marginal() const { return marginal_; }
  bool uniform_marginal() const { return uniform_; }

 private:
  std::vector<double> biases_;
  std::vector<double> marginal_;
  bool uniform_ = true;
};

// Continuous piecewise-linear CDF through knots (xs[k], Fs[k]); Fs[0]=0, Fs.back()=1.
class PiecewiseLinearCdf {
 public:
  PiecewiseLinearCdf(std::vector<double> xs, std::vector<double> Fs);
  static PiecewiseLinearCdf uniform(double lo, double hi) { return {{lo, hi}, {0.0, 1.0}}; }

  double lo() const { return xs_.front(); }
  double hi() const { return xs_.back(); }
  double operator()(double x) const;
  // Smallest x with F(x) >= u.
  double inverse(double u) const;
  const std::vector<double>& knots() const { return xs_; }

 private:
  std::vector<double> xs_, Fs_;
};

struct ThresholdTask {
  ThresholdTask(PiecewiseLinearCdf cdf, double true_threshold, double noise);

  PiecewiseLinearCdf cdf;
  double true_threshold;
  double noise;

  double lo() const { return cdf.lo(); }
  double hi() const { return cdf.hi(); }
};

using Task = std::variant<FiniteLabeledDistribution, ThresholdTask>;

// What a hypothesis or dataset lives on: d indexed points, or a real interval.
struct Domain {
  bool finite = true;
  std::size_t d = 0;
  double lo = 0.0, hi = 1.0;

  static Domain points(std::size_t d) { return {true, d, 0.0, 0.0}; }
  static Domain interval(double lo, double hi) { return {false, 0, lo, hi}; }
  bool operator==(const Domain&) const = default;
};

Domain domain_of(const Task& task);

}  // namespace replilearn
