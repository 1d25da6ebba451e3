#pragma once

#include <cstdint>
#include <vector>

#include "replilearn/constants.hpp"
#include "replilearn/learner.hpp"

namespace replilearn {

struct PointwiseParams {
  double alpha = 0.1;
  double beta = 0.1;
  double rho = 0.2;
  double c_T = kDefaultConstants.c_T;

  std::uint64_t T() const;
  void validate() const;
};

// T base runs on disjoint blocks at accuracy (alpha beta/2, alpha beta/2),
// combined as Aggregate(subs, r) with r ~ U[0,1] from ("pointwise","cut").
Learner basic_pointwise(const BaseLearner& base, const PointwiseParams& params);
// Same, with an explicit per-block budget (for base learners without an (alpha, beta) scale).
Learner basic_pointwise_blocks(const BaseLearner& base, std::uint64_t block, std::uint64_t T);

struct BoostPlan {
  std::uint64_t K;
  std::uint64_t m_test;
};
BoostPlan boost_plan(double alpha, double beta, const Constants& c = kDefaultConstants);

// Index of the first entry within slack of the minimum.
std::size_t first_within(const std::vector<double>& errors, double slack);

// K runs of a pointwise-replicable base (substreams ("boost","run",k)), then
// the first hypothesis within alpha/2 of the best error on a test block.
Learner boost_pointwise_error(const Learner& base, double alpha, double beta, double rho,
                              const Constants& c = kDefaultConstants);

// Full pointwise pipeline: basic_pointwise at (alpha/2, rho, rho), boosted at
// (alpha/2, beta). Agnostic (alpha, beta)-accurate and 2rho-pointwise replicable.
Learner pointwise_learner(const BaseLearner& base, double alpha, double beta, double rho,
                          const Constants& c = kDefaultConstants);

}  // namespace replilearn
