#pragma once

#include <cstdint>
#include <vector>

#include "replilearn/constants.hpp"
#include "replilearn/learner.hpp"
#include "replilearn/selection.hpp"

namespace replilearn {

// ---- proper threshold learner -----------------------------------------------

// t_0 = lower end of the domain, t_i = (i m/K)-th order statistic of the
// first m = K floor(|S|/K) samples.
std::vector<double> dkw_quantiles(const Dataset& S, std::size_t K);

struct ThresholdPlan {
  std::size_t K;
  double tau;
  std::uint64_t m_quant;  // multiple of K
  std::uint64_t m_sel;
  SelectionParams sel;    // (alpha/2, beta/2, rho/3, tau)
};
ThresholdPlan threshold_plan(double alpha, double beta, double rho, double gamma,
                             const Constants& c = kDefaultConstants);

// ConstantMinus, Threshold(q_0..q_K), ConstantPlus.
std::vector<Hypothesis> threshold_candidates(const std::vector<double>& quantiles);

Hypothesis threshold_learner(const Dataset& S, double alpha, double beta, double rho, double gamma,
                             const SharedRandomness& rng, const Constants& c = kDefaultConstants);
Learner threshold_learner(double alpha, double beta, double rho, double gamma, const Constants& c = kDefaultConstants);

// ---- realizable OPT gate ----------------------------------------------------

struct HypothesisClass {
  bool finite = false;
  std::size_t d = 0;

  static HypothesisClass points(std::size_t d) { return {true, d}; }
  static HypothesisClass thresholds() { return {false, 0}; }
  double d_eff() const { return finite ? static_cast<double>(d) : 1.0; }
};

std::uint64_t gate_sample_need(const HypothesisClass& cls, double alpha, double beta, double rho, double gamma,
                               const Constants& c = kDefaultConstants);
// min over the class of the empirical error on S.
double class_min_error(const HypothesisClass& cls, const Dataset& S);
// Accept (run ERM) unless OPT_hat > r.
inline bool gate_accepts(double opt_hat, double r) { return !(opt_hat > r); }

struct GateOutcome {
  Hypothesis h;
  double opt_hat;
  double r;
  bool accepted;
};
GateOutcome realizable_gate(const HypothesisClass& cls, double alpha, double beta, double rho, double gamma,
                            const Dataset& S, const SharedRandomness& rng, const Constants& c = kDefaultConstants);
inline Hypothesis realizable_apx_repl(const HypothesisClass& cls, double alpha, double beta, double rho, double gamma,
                                      const Dataset& S, const SharedRandomness& rng,
                                      const Constants& c = kDefaultConstants) {
  return realizable_gate(cls, alpha, beta, rho, gamma, S, rng, c).h;
}
Learner realizable_apx_repl(const HypothesisClass& cls, double alpha, double beta, double rho, double gamma,
                            const Constants& c = kDefaultConstants);

}  // namespace replilearn
