#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "replilearn/dataset.hpp"
#include "replilearn/hypothesis.hpp"
#include "replilearn/random.hpp"

namespace replilearn {

using FitFn = std::function<Hypothesis(const Dataset&, const SharedRandomness&)>;

// A learner at fixed parameters: consumes exactly `sample_need` samples.
struct Learner {
  std::string name;
  std::uint64_t sample_need = 0;
  FitFn fit;
  // Unlabeled samples drawn through the shared string (semi-replicable learners).
  std::uint64_t shared_need = 0;

  // Checks the budget, then fits on the first sample_need examples of S.
  Hypothesis operator()(const Dataset& S, const SharedRandomness& r) const;
};

// A learner family indexed by accuracy parameters (the oracle A of the transforms).
struct BaseLearner {
  std::string name;
  std::function<std::uint64_t(double alpha, double beta)> need;
  FitFn fit;

  Learner at(double alpha, double beta) const;
};

// ceil() that ignores floating-point noise below 1e-12 relative, so that
// e.g. 3/0.1 = 30.000000000000004 counts as 30.
std::uint64_t ceil_count(double x);

// Budget arithmetic that throws std::overflow_error instead of wrapping.
std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b);
std::uint64_t checked_add(std::uint64_t a, std::uint64_t b);

}  // namespace replilearn
