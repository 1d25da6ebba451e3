#include "replilearn/task.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace replilearn {

FiniteLabeledDistribution::FiniteLabeledDistribution(std::vector<double> biases)
    : biases_(std::move(biases)) {
  if (biases_.empty()) throw std::invalid_argument("FiniteLabeledDistribution: d must be >= 1");
  for (double p : biases_)
    if (!(p >= -1.0 && p <= 1.0)) throw std::invalid_argument("bias outside [-1, 1]");
  marginal_.assign(biases_.size(), 1.0 / static_cast<double>(biases_.size()));
}

FiniteLabeledDistribution::FiniteLabeledDistribution(std::vector<double> biases,
                                                     std::vector<double> marginal)
    : FiniteLabeledDistribution(std::move(biases)) {
  if (marginal.size() != biases_.size()) throw std::invalid_argument("marginal size != d");
  double total = 0.0;
  for (double w : marginal) {
    if (!(w >= 0.0)) throw std::invalid_argument("negative marginal weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("marginal does not sum to 1");
  marginal_ = std::move(marginal);
  uniform_ = std::all_of(marginal_.begin(), marginal_.end(),
                         [&](double w) { return w == marginal_.front(); });
}

PiecewiseLinearCdf::PiecewiseLinearCdf(std::vector<double> xs, std::vector<double> Fs)
    : xs_(std::move(xs)), Fs_(std::move(Fs)) {
  if (xs_.size() < 2 || xs_.size() != Fs_.size()) throw std::invalid_argument("cdf: need >= 2 knots");
  for (std::size_t k = 1; k < xs_.size(); ++k) {
    if (!(xs_[k] > xs_[k - 1])) throw std::invalid_argument("cdf: knots must increase");
    if (Fs_[k] < Fs_[k - 1]) throw std::invalid_argument("cdf: F must be nondecreasing");
  }
  if (Fs_.front() != 0.0 || Fs_.back() != 1.0) throw std::invalid_argument("cdf: F(lo)=0, F(hi)=1");
}

double PiecewiseLinearCdf::operator()(double x) const {
  if (x <= xs_.front()) return 0.0;
  if (x >= xs_.back()) return 1.0;
  auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  std::size_t k = static_cast<std::size_t>(it - xs_.begin());
  double w = (x - xs_[k - 1]) / (xs_[k] - xs_[k - 1]);
  return Fs_[k - 1] + w * (Fs_[k] - Fs_[k - 1]);
}

double PiecewiseLinearCdf::inverse(double u) const {
  if (u <= 0.0) return xs_.front();
  if (u >= 1.0) return xs_.back();
  auto it = std::lower_bound(Fs_.begin(), Fs_.end(), u);
  std::size_t k = static_cast<std::size_t>(it - Fs_.begin());
  double w = (u - Fs_[k - 1]) / (Fs_[k] - Fs_[k - 1]);
  return xs_[k - 1] + w * (xs_[k] - xs_[k - 1]);
}

ThresholdTask::ThresholdTask(PiecewiseLinearCdf c, double t, double eta)
    : cdf(std::move(c)), true_threshold(t), noise(eta) {
  if (!(t >= cdf.lo() && t <= cdf.hi())) throw std::invalid_argument("true threshold outside [lo, hi]");
  if (!(eta >= 0.0 && eta < 0.5)) throw std::invalid_argument("noise must be in [0, 1/2)");
}

Domain domain_of(const Task& task) {
  if (auto* f = std::get_if<FiniteLabeledDistribution>(&task)) return Domain::points(f->d());
  const auto& t = std::get<ThresholdTask>(task);
  return Domain::interval(t.lo(), t.hi());
}

}  // namespace replilearn
