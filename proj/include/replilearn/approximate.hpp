#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "replilearn/constants.hpp"
#include "replilearn/learner.hpp"

namespace replilearn {

// A(.; r): a learner with its random string fixed. Each draw consumes one
// fresh block of learner.sample_need samples.
struct HypothesisSampler {
  Learner learner;
  SharedRandomness string;

  Hypothesis draw(const Dataset& block) const { return learner(block, string); }
};

struct ClusterParams {
  double v = 0.8;
  double gamma = 0.1;
  double eps = 0.05;
  double beta = 0.05;

  void validate() const;
};

// ---- replicable test for a (v, gamma)-cluster -------------------------------

struct TesterPlan {
  std::uint64_t m1;  // hypothesis pairs
  std::uint64_t m2;  // distance-estimation samples per pair
};
TesterPlan tester_plan(const ClusterParams& p, double rho, const Constants& c = kDefaultConstants);
std::uint64_t tester_sample_need(const Learner& A, const ClusterParams& p, double rho,
                                 const Constants& c = kDefaultConstants);

struct TesterResult {
  bool accept;
  double v_hat;  // fraction of pairs with empirical distance < gamma
  double v_cut;  // v' ~ U(v - eps, v + eps) from ("tester","cut")
};
inline bool tester_accepts(double v_hat, double v_cut) { return v_hat > v_cut; }

TesterResult replicable_stable_tester(const HypothesisSampler& P, const Dataset& S, const ClusterParams& p, double rho,
                                      const SharedRandomness& rng, const Constants& c = kDefaultConstants);

// ---- cluster detection ------------------------------------------------------

struct ClusterPlan {
  std::uint64_t n;  // hypothesis draws
  std::uint64_t m;  // shared domain samples
};
ClusterPlan cluster_plan(const ClusterParams& p, const Constants& c = kDefaultConstants);
std::uint64_t cluster_sample_need(const Learner& A, const ClusterParams& p, const Constants& c = kDefaultConstants);

// Greedy pass: f_i joins F when >= v n candidates lie within empirical
// distance 2 gamma; its neighbourhood then leaves the candidate pool.
std::vector<Hypothesis> cluster_detection(const HypothesisSampler& P, const Dataset& S, const ClusterParams& p,
                                          const Constants& c = kDefaultConstants);
// The greedy pass itself, on drawn hypotheses and their distance matrix (row-major).
std::vector<std::size_t> cluster_greedy(const std::vector<std::size_t>& draw_group, const std::vector<double>& dist,
                                        std::size_t groups, double v, double gamma);

// ---- error boosting ---------------------------------------------------------

std::uint64_t error_boost_runs(double beta, const Constants& c = kDefaultConstants);
Learner boost_error_approx(const Learner& A, double alpha, double beta, double rho, double gamma,
                           const Constants& c = kDefaultConstants);

// ---- replicability boosting -------------------------------------------------

struct ReplBoostPlan {
  std::uint64_t R;
  ClusterParams tester;
  double tester_rho;
  ClusterParams cluster;
};
ReplBoostPlan repl_boost_plan(double beta, double rho, double gamma, const Constants& c = kDefaultConstants);
// beta_1 = multiplier * beta * (rho^2/R + 1/(R ln(R/beta)))
double repl_boost_beta1(double beta, double rho, const Constants& c = kDefaultConstants);

struct ReplBoostOutcome {
  Hypothesis h;
  std::optional<std::size_t> accepted;  // string index; empty = fallback run
};
ReplBoostOutcome boost_replicability_run(const Learner& A, const ReplBoostPlan& plan, const Dataset& S,
                                         const SharedRandomness& rng, const Constants& c = kDefaultConstants);
std::uint64_t repl_boost_sample_need(const Learner& A, const ReplBoostPlan& plan, const Constants& c = kDefaultConstants);
Learner boost_replicability(const Learner& A, double alpha, double beta, double rho, double gamma,
                            const Constants& c = kDefaultConstants);

// ---- end-to-end pipelines ---------------------------------------------------

enum class ApproxMode { ConstAlpha, ConstGamma };

// Analytic sizing of a pipeline, in floating point so that budgets far beyond
// 64-bit sample counts can still be reported.
struct PipelineCost {
  double T;              // basic_pointwise blocks per A-run
  double pointwise_rho;  // basic_pointwise pointwise level
  double base_need;      // samples per base-learner call
  double a_runs;         // A-runs per pipeline run (worst case)
  double samples;        // total samples per pipeline run
  double base_calls;     // base-learner calls per pipeline run
};
PipelineCost approx_pipeline_cost(ApproxMode mode, const BaseLearner& base, double alpha, double beta, double rho,
                                  double gamma, const Constants& c = kDefaultConstants);

// const_alpha: basic_pointwise at level rho*tau, then boost_error_approx at radius
// tau = min(gamma, rho alpha / (c_rob ln(D/beta))).
// const_gamma: basic_pointwise at level repl_inner * gamma/12 and accuracy
// (alpha, beta_1), then boost_replicability.
Learner build_approx_learner(ApproxMode mode, const BaseLearner& base, double alpha, double beta, double rho,
                             double gamma, const Constants& c = kDefaultConstants);

}  // namespace replilearn
