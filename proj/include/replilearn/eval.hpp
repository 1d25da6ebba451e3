#pragma once

#include <vector>

#include "replilearn/dataset.hpp"
#include "replilearn/hypothesis.hpp"
#include "replilearn/task.hpp"

namespace replilearn {

// Exact quantities. Aggregates over threshold tasks are evaluated on the
// partition induced by their breakpoints, where they are constant.
double true_error(const Task& task, const Hypothesis& h);
double opt_error(const Task& task);
double excess_error(const Task& task, const Hypothesis& h);
double classification_distance(const Task& task, const Hypothesis& h1, const Hypothesis& h2);

// Empirical quantities; S must be nonempty.
double empirical_error(const Dataset& S, const Hypothesis& h);
double empirical_distance(const Dataset& S, const Hypothesis& h1, const Hypothesis& h2);
// Vectorized forms realize S once for all hypotheses.
std::vector<double> empirical_errors(const Dataset& S, const std::vector<Hypothesis>& hyps);
// Symmetric matrix, row-major n x n.
std::vector<double> empirical_distance_matrix(const Dataset& S, const std::vector<Hypothesis>& hyps);

// Union of the hypotheses' breakpoints.
std::vector<double> breakpoints_of(const std::vector<Hypothesis>& hyps);

}  // namespace replilearn
