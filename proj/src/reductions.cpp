#include "replilearn/reductions.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <stdexcept>

namespace replilearn {

namespace {

// Runs A on exactly sample_need draws from the finite task, then counts the
// draws that landed on point r (after the fit, so any blocking A does is kept).
std::pair<Hypothesis, Tally> fit_and_count(const Learner& A, const std::vector<double>& biases,
                                           const SharedRandomness& data, const SharedRandomness& shared) {
  auto task = std::make_shared<const Task>(FiniteLabeledDistribution(biases));
  auto S = Dataset::sample(task, A.sample_need, data);
  Hypothesis h = A(S, shared);
  return {std::move(h), S.tally()};
}

}  // namespace

double bias_cap(std::uint64_t m, std::size_t d, double rho, const Constants& c) {
  const double per = static_cast<double>(m) / static_cast<double>(std::max<std::size_t>(d, 1));
  return c.bias_cap * per * std::sqrt(std::log(1.0 / rho));
}

BiasOutcome bias_estimator_pointwise(const Learner& A, std::size_t d, double alpha, double rho, double p,
                                     const SharedRandomness& data, const SharedRandomness& shared,
                                     const Constants& c) {
  const std::size_t n = 2 * d + 1;
  Rng g = shared.child("reduce").child("plant").stream();
  const std::size_t r = g.below(n);
  std::vector<double> biases(n, p);
  if (d > 0) {
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < n; ++i)
      if (i != r) rest.push_back(i);
    for (std::size_t i = rest.size() - 1; i > 0; --i) std::swap(rest[i], rest[g.below(i + 1)]);
    for (std::size_t k = 0; k < rest.size(); ++k) biases[rest[k]] = k < d ? alpha : -alpha;
  }
  auto [h, t] = fit_and_count(A, biases, data, shared);
  BiasOutcome out{0, false, r, t.plus[r] + t.minus[r]};
  out.capped = static_cast<double>(out.planted_n) > bias_cap(A.sample_need, d, rho, c);
  out.answer = out.capped ? 1 : h.at_index(r);
  return out;
}

double amplify_cap(std::uint64_t m, std::size_t d, double rho, const Constants& c) {
  return c.amp_cap * static_cast<double>(m) / static_cast<double>(d) * std::sqrt(std::log(1.0 / rho));
}

AmplifyOutcome apx_repl_hardness_amplification(const Learner& A0, std::size_t d, double alpha, double rho, double p,
                                               const SharedRandomness& data, const SharedRandomness& shared,
                                               const Constants& c) {
  if (d == 0) throw std::invalid_argument("hardness amplification: d >= 1");
  Rng g = shared.child("reduce").child("amplify").stream();
  AmplifyOutcome out{0, false, g.below(d), std::vector<double>(d)};
  for (std::size_t i = 0; i < d; ++i) out.biases[i] = g.uniform(-alpha, alpha);
  out.biases[out.planted] = p;
  auto [h, t] = fit_and_count(A0, out.biases, data, shared);
  const auto landed = t.plus[out.planted] + t.minus[out.planted];
  out.capped = static_cast<double>(landed) >= amplify_cap(A0.sample_need, d, rho, c);
  out.answer = out.capped ? 1 : h.at_index(out.planted);
  return out;
}

double sign_oneway_error(const std::vector<std::int8_t>& v, const std::vector<double>& p) {
  if (v.size() != p.size() || p.empty()) throw std::invalid_argument("sign_oneway_error: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += planted_error(v[i], p[i]);
  return s / static_cast<double>(p.size());
}

SignOnewayOutcome sign_one_way_from_learner(const Learner& A, const std::vector<double>& p,
                                            const SharedRandomness& data, const SharedRandomness& shared,
                                            const Constants& c) {
  const std::size_t d = p.size();
  if (d == 0) throw std::invalid_argument("sign_one_way: empty bias vector");
  auto [h, t] = fit_and_count(A, p, data, shared);
  SignOnewayOutcome out{std::nullopt, 0, ceil_count(c.sign_cap * static_cast<double>(A.sample_need) / static_cast<double>(d))};
  for (std::size_t i = 0; i < d; ++i) out.max_count = std::max(out.max_count, t.plus[i] + t.minus[i]);
  if (out.max_count <= out.cap) out.v = h.labels_on(d);
  return out;
}

}  // namespace replilearn
