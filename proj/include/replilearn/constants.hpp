#pragma once

namespace replilearn {

// Every leading constant the algorithms leave as "sufficiently large/small".
// Defaults are the published/verbatim values; tests may override fields to
// run the same code at reduced scale.
struct Constants {
  double c_agnostic = 8.0;   // ERM: ceil(c (d + ln 1/beta) / alpha^2)
  double c_T = 4.0;          // basic_pointwise: T = ceil(c_T / rho^2)
  double boost_K = 7.0;      // boost_pointwise_error: K = ceil(boost_K ln 1/beta)
  double boost_test = 32.0;  // boost_pointwise_error: m_test = ceil(boost_test ln(2K/beta) / alpha^2)
  double c_sel = 64.0;       // selection: m = ceil(c_sel ln(n/beta) / tau^2)
  double c_rob = 12.0;       // robustness radius rho alpha / (c_rob ln(n/beta))
  double err_D = 200.0;      // boost_error_approx: D = ceil(err_D ln 1/beta)
  double tester_c1 = 16.0;   // replicable_stable_tester: m1
  double tester_c2 = 16.0;   // replicable_stable_tester: m2
  double cluster_cn = 16.0;  // cluster_detection: n = ceil(cluster_cn ln(1/beta) / eps^2)
  double cluster_cm = 16.0;  // cluster_detection: m = ceil(cluster_cm ln(n/beta) / gamma^2)
  double repl_R = 4.0;       // boost_replicability: R = ceil(repl_R ln 1/rho)
  double repl_v = 0.8;       // boost_replicability tester frequency
  double repl_eps = 0.01;    // boost_replicability tester/cluster slack
  double repl_cluster_v = 0.75;
  double repl_inner = 0.01;  // boost_replicability: A is (repl_inner, gamma/12)-approximately replicable
  double repl_beta1 = 0.1;   // multiplier in beta_1
  double thr_K = 3.0;        // threshold_learner: K = ceil(thr_K / alpha)
  double thr_quant = 16.0;   // threshold_learner: quantile sample ceil(thr_quant ln(1/beta) / tau^2)
  double gate_c = 16.0;      // realizable_gate: m1
  double semi_pool = 8.0;    // semi-replicable pool size constant
  double bias_cap = 2.0;     // planting cap 2 (m/d) sqrt(ln 1/rho)
  double amp_cap = 10.0;     // hardness amplification cap 10 (m/d) sqrt(ln 1/rho)
  double sign_cap = 8.0;     // sign-one-way per-point cap C m/d
};

inline const Constants kDefaultConstants{};

}  // namespace replilearn
