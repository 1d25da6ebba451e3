#pragma once

#include <cstdint>
#include <vector>

#include "replilearn/constants.hpp"
#include "replilearn/learner.hpp"
#include "replilearn/thresholds.hpp"

namespace replilearn {

// Unlabeled sample drawn from the marginal through a shared string; both
// runs of a paired trial hold the same pool.
struct SharedPool {
  Domain domain;
  std::vector<double> unlabeled;
};

// m_u = ceil(semi_pool (d_eff + ln(2/beta)) / alpha)
std::uint64_t pool_size(const HypothesisClass& cls, double alpha, double beta, const Constants& c = kDefaultConstants);
SharedPool shared_pool(const Task& task, std::uint64_t m_u, const SharedRandomness& rng);

// ERM outputs on every labeling of U the class realizes, deduplicated.
std::vector<Hypothesis> build_cover(const SharedPool& U, const HypothesisClass& cls);

// Largest cover any pool of size m_u can produce.
double max_cover_size(const HypothesisClass& cls, std::uint64_t m_u);
// Selection radius rho (alpha/2) / (c_rob ln(n/beta)) used only for the budget.
double semi_tau(std::size_t n, double alpha, double beta, double rho, const Constants& c = kDefaultConstants);
// Labeled budget for selection over n candidates, before rounding up.
double semi_labeled_budget_raw(double n, double alpha, double beta, double rho, const Constants& c = kDefaultConstants);
std::uint64_t semi_labeled_budget(const HypothesisClass& cls, double alpha, double beta, double rho,
                                  const Constants& c = kDefaultConstants);

struct SemiOutcome {
  Hypothesis h;
  std::size_t cover_size;
  std::size_t distinct_pool;
};
// Pool from ("semi","pool") of rng, cover, then selection at
// (alpha/2, beta/2, rho) on the labeled sample S.
SemiOutcome semi_replicable_run(const HypothesisClass& cls, const Dataset& S, double alpha, double beta, double rho,
                                const SharedRandomness& rng, const Constants& c = kDefaultConstants);
// Budget fixed at the worst-case cover size; S must carry its task.
Learner semi_replicable_learn(const HypothesisClass& cls, double alpha, double beta, double rho,
                              const Constants& c = kDefaultConstants);

}  // namespace replilearn
