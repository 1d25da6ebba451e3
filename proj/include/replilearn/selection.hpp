#pragma once

#include <cstdint>
#include <vector>

#include "replilearn/constants.hpp"
#include "replilearn/dataset.hpp"
#include "replilearn/hypothesis.hpp"
#include "replilearn/random.hpp"

namespace replilearn {

// Shared-uniform rejection sampling: read (u_k, v_k) ~ U[n] x U[0,1] from the
// ("corrsamp") substream and return the first u_k with v_k <= P(u_k), P the
// normalized weights. Marginal is exactly P; two calls sharing rng on P and Q
// differ with probability 2TV/(1+TV) <= 2TV.
std::size_t correlated_sample(const std::vector<double>& weights, const SharedRandomness& rng);

struct SelectionParams {
  double alpha = 0.1;
  double beta = 0.05;
  double rho = 0.2;
  double tau = 0.01;

  void validate() const;
  // t = 2 ln(2n/beta) / alpha
  double temperature(std::size_t n) const;
};

std::uint64_t selection_sample_need(std::size_t n, double beta, double tau, const Constants& c = kDefaultConstants);
// Largest tau for which the robust replicability contract applies.
double robust_radius(std::size_t n, double alpha, double beta, double rho, const Constants& c = kDefaultConstants);

// Exact selection law for given empirical errors.
std::vector<double> selection_distribution(const std::vector<double>& errors, const SelectionParams& p);

// Exponential mechanism over empirical errors on S, sampled with correlated
// sampling on ("hypsel"). Requires |S| >= selection_sample_need.
std::size_t hypothesis_selection(const std::vector<Hypothesis>& hyps, const Dataset& S, const SelectionParams& p,
                                 const SharedRandomness& rng, const Constants& c = kDefaultConstants);
// Same, from precomputed errors (no budget check).
std::size_t select_from_errors(const std::vector<double>& errors, const SelectionParams& p,
                               const SharedRandomness& rng);

}  // namespace replilearn
