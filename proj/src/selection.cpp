#include "replilearn/selection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "replilearn/eval.hpp"
#include "replilearn/learner.hpp"

namespace replilearn {

std::size_t correlated_sample(const std::vector<double>& weights, const SharedRandomness& rng) {
  if (weights.empty()) throw std::invalid_argument("correlated_sample: no weights");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("correlated_sample: weights must be finite, >= 0");
    total += w;
  }
  if (!(total > 0.0)) throw std::invalid_argument("correlated_sample: all-zero weights");
  Rng g = rng.child("corrsamp").stream();
  const auto n = weights.size();
  for (;;) {
    std::size_t u = g.below(n);
    double v = g.uniform01();
    if (v < weights[u] / total) return u;
  }
}

void SelectionParams::validate() const {
  auto in01 = [](double v) { return v > 0.0 && v < 1.0; };
  if (!in01(alpha) || !in01(beta) || !in01(rho) || !in01(tau))
    throw std::invalid_argument("selection: alpha, beta, rho, tau in (0,1)");
  if (tau > alpha) throw std::invalid_argument("selection: tau must not exceed alpha");
}

double SelectionParams::temperature(std::size_t n) const {
  return 2.0 * std::log(2.0 * static_cast<double>(n) / beta) / alpha;
}

std::uint64_t selection_sample_need(std::size_t n, double beta, double tau, const Constants& c) {
  return ceil_count(c.c_sel * std::log(static_cast<double>(n) / beta) / (tau * tau));
}

double robust_radius(std::size_t n, double alpha, double beta, double rho, const Constants& c) {
  return rho * alpha / (c.c_rob * std::log(static_cast<double>(n) / beta));
}

namespace {
std::vector<double> mechanism_weights(const std::vector<double>& errors, double t) {
  const double best = *std::min_element(errors.begin(), errors.end());
  std::vector<double> w(errors.size());
  for (std::size_t i = 0; i < errors.size(); ++i) w[i] = std::exp(-t * (errors[i] - best));
  return w;
}
}  // namespace

std::vector<double> selection_distribution(const std::vector<double>& errors, const SelectionParams& p) {
  if (errors.empty()) throw std::invalid_argument("selection: no hypotheses");
  auto w = mechanism_weights(errors, p.temperature(errors.size()));
  double total = 0.0;
  for (double x : w) total += x;
  for (double& x : w) x /= total;
  return w;
}

std::size_t select_from_errors(const std::vector<double>& errors, const SelectionParams& p,
                               const SharedRandomness& rng) {
  if (errors.empty()) throw std::invalid_argument("selection: no hypotheses");
  return correlated_sample(mechanism_weights(errors, p.temperature(errors.size())), rng.child("hypsel"));
}

std::size_t hypothesis_selection(const std::vector<Hypothesis>& hyps, const Dataset& S, const SelectionParams& p,
                                 const SharedRandomness& rng, const Constants& c) {
  p.validate();
  if (hyps.empty()) throw std::invalid_argument("hypothesis_selection: no hypotheses");
  const auto m = selection_sample_need(hyps.size(), p.beta, p.tau, c);
  if (S.size() < m)
    throw std::invalid_argument("hypothesis_selection: |S| = " + std::to_string(S.size()) + " < " + std::to_string(m));
  return select_from_errors(empirical_errors(S, hyps), p, rng);
}

}  // namespace replilearn
