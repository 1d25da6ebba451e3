#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "replilearn/constants.hpp"
#include "replilearn/learner.hpp"

namespace replilearn {

// ---- bias estimation from a pointwise-replicable learner ---------------------

struct BiasOutcome {
  int answer;               // +1 / -1
  bool capped;              // planted-point sample cap hit (answer forced to +1)
  std::size_t planted;      // r
  std::uint64_t planted_n;  // samples that landed on x_r
};

// Cap 2 (m/d) sqrt(ln 1/rho); d = 0 (single planted point) uses m in place of m/d.
double bias_cap(std::uint64_t m, std::size_t d, double rho, const Constants& c = kDefaultConstants);

// A learns over 2d+1 uniform points. x_r carries Rad(p); the other points are
// split by the shared string ("reduce","plant") into halves labelled
// Rad(+alpha) and Rad(-alpha). Data comes from `data`, the plant from `shared`.
BiasOutcome bias_estimator_pointwise(const Learner& A, std::size_t d, double alpha, double rho, double p,
                                     const SharedRandomness& data, const SharedRandomness& shared,
                                     const Constants& c = kDefaultConstants);

// ---- hardness amplification -------------------------------------------------

struct AmplifyOutcome {
  int answer;
  bool capped;
  std::size_t planted;
  std::vector<double> biases;  // dummy means D_i (entry r holds the target p)
};

double amplify_cap(std::uint64_t m, std::size_t d, double rho, const Constants& c = kDefaultConstants);

// Dummy biases D_i ~ U[-alpha, alpha] and r come from the shared string;
// the target bias p is the input distribution.
AmplifyOutcome apx_repl_hardness_amplification(const Learner& A0, std::size_t d, double alpha, double rho, double p,
                                               const SharedRandomness& data, const SharedRandomness& shared,
                                               const Constants& c = kDefaultConstants);

// err_r = 1[answer != sign p] |p|
inline double planted_error(int answer, double p) { return (p > 0 ? answer < 0 : p < 0 ? answer > 0 : false) ? std::abs(p) : 0.0; }

// ---- sign-one-way marginals -------------------------------------------------

// (1/d) sum_{v_i != sign p_i} |p_i|
double sign_oneway_error(const std::vector<std::int8_t>& v, const std::vector<double>& p);

struct SignOnewayOutcome {
  std::optional<std::vector<std::int8_t>> v;  // empty: per-point cap exceeded, trial discarded
  std::uint64_t max_count;
  std::uint64_t cap;
};

// Simulates A's uniform-marginal input from per-coordinate Rad(p_i) samples,
// at most ceil(sign_cap m / d) per coordinate, and reads v_i = h(x_i).
SignOnewayOutcome sign_one_way_from_learner(const Learner& A, const std::vector<double>& p,
                                            const SharedRandomness& data, const SharedRandomness& shared,
                                            const Constants& c = kDefaultConstants);

}  // namespace replilearn
