#pragma once

#include <cstdint>

#include "replilearn/constants.hpp"
#include "replilearn/learner.hpp"

namespace replilearn {

// Per point: +1 iff #(+1) > #(-1); unseen points and ties get +1.
Hypothesis erm_finite(const Dataset& S, std::size_t d);
// Threshold at lo, a midpoint between consecutive distinct sample x's, or hi;
// minimal empirical error, ties to the smallest t. Needs an explicit sample.
Hypothesis erm_threshold(const Dataset& S);
// Minimal empirical error of the class (thresholds or all labelings) on S.
double erm_threshold_error(const Dataset& S);

std::uint64_t sample_need_agnostic(double d, double alpha, double beta, const Constants& c = kDefaultConstants);

BaseLearner erm_finite_learner(std::size_t d, const Constants& c = kDefaultConstants);
BaseLearner erm_threshold_learner(const Constants& c = kDefaultConstants);
// Ignores data; always returns h. Consumes one sample.
BaseLearner constant_learner(Hypothesis h);

}  // namespace replilearn
