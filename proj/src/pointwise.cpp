#include "replilearn/pointwise.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "replilearn/eval.hpp"

namespace replilearn {

namespace {
bool in01(double v) { return v > 0.0 && v < 1.0; }
}  // namespace

void PointwiseParams::validate() const {
  if (!in01(alpha) || !in01(beta) || !in01(rho)) throw std::invalid_argument("pointwise: alpha, beta, rho in (0,1)");
  if (!(c_T > 0.0)) throw std::invalid_argument("pointwise: c_T must be positive");
}

std::uint64_t PointwiseParams::T() const { return std::max<std::uint64_t>(1, ceil_count(c_T / (rho * rho))); }

Learner basic_pointwise_blocks(const BaseLearner& base, std::uint64_t block, std::uint64_t T) {
  if (T == 0) throw std::invalid_argument("basic_pointwise: T >= 1");
  Learner out;
  out.name = "basic_pointwise(" + base.name + ")";
  out.sample_need = checked_mul(T, block);
  auto fit = base.fit;
  out.fit = [fit, block, T](const Dataset& S, const SharedRandomness& r) {
    auto parts = S.slices(block, T);
    std::vector<Hypothesis> subs;
    subs.reserve(T);
    const auto alg = r.child("pointwise");
    for (std::uint64_t i = 0; i < T; ++i) subs.push_back(fit(parts[i], alg.child("base", i)));
    double cut = alg.child("cut").stream().uniform01();
    return Hypothesis::aggregate(std::move(subs), cut);
  };
  return out;
}

Learner basic_pointwise(const BaseLearner& base, const PointwiseParams& p) {
  p.validate();
  const double ab = p.alpha * p.beta / 2.0;
  return basic_pointwise_blocks(base, base.need(ab, ab), p.T());
}

BoostPlan boost_plan(double alpha, double beta, const Constants& c) {
  if (!in01(alpha) || !in01(beta)) throw std::invalid_argument("boost: alpha, beta in (0,1)");
  const auto K = std::max<std::uint64_t>(1, ceil_count(c.boost_K * std::log(1.0 / beta)));
  const auto m_test = ceil_count(c.boost_test * std::log(2.0 * static_cast<double>(K) / beta) / (alpha * alpha));
  return {K, m_test};
}

std::size_t first_within(const std::vector<double>& errors, double slack) {
  if (errors.empty()) throw std::invalid_argument("first_within: empty list");
  const double best = *std::min_element(errors.begin(), errors.end());
  for (std::size_t k = 0; k < errors.size(); ++k)
    if (errors[k] <= best + slack) return k;
  return 0;
}

Learner boost_pointwise_error(const Learner& base, double alpha, double beta, double rho, const Constants& c) {
  if (!in01(rho)) throw std::invalid_argument("boost: rho in (0,1)");
  const auto plan = boost_plan(alpha, beta, c);
  Learner out;
  out.name = "boost_pointwise_error(" + base.name + ")";
  out.sample_need = checked_add(checked_mul(plan.K, base.sample_need), plan.m_test);
  out.fit = [base, plan, alpha](const Dataset& S, const SharedRandomness& r) {
    std::vector<std::uint64_t> sizes(plan.K, base.sample_need);
    sizes.push_back(plan.m_test);
    auto parts = S.partition(sizes);
    std::vector<Hypothesis> hs;
    hs.reserve(plan.K);
    const auto alg = r.child("boost");
    for (std::uint64_t k = 0; k < plan.K; ++k) hs.push_back(base(parts[k], alg.child("run", k)));
    auto errs = empirical_errors(parts[plan.K], hs);
    return hs[first_within(errs, alpha / 2.0)];
  };
  return out;
}

Learner pointwise_learner(const BaseLearner& base, double alpha, double beta, double rho, const Constants& c) {
  auto inner = basic_pointwise(base, {alpha / 2.0, rho, rho, c.c_T});
  return boost_pointwise_error(inner, alpha / 2.0, beta, rho, c);
}

}  // namespace replilearn
