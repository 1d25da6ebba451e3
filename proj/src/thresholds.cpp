#include "replilearn/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "replilearn/eval.hpp"
#include "replilearn/learners.hpp"

namespace replilearn {

namespace {
bool in01(double v) { return v > 0.0 && v < 1.0; }
}  // namespace

std::vector<double> dkw_quantiles(const Dataset& S, std::size_t K) {
  if (K == 0) throw std::invalid_argument("dkw_quantiles: K >= 1");
  if (S.domain().finite) throw std::invalid_argument("dkw_quantiles: needs a real domain");
  if (S.size() < K) throw std::invalid_argument("dkw_quantiles: fewer samples than K");
  const std::uint64_t step = S.size() / K, m = step * K;
  Dataset use = m == S.size() ? S : S.split(m).first;
  std::vector<std::uint64_t> ranks(K);
  for (std::size_t i = 0; i < K; ++i) ranks[i] = (i + 1) * step;
  std::vector<double> q{S.domain().lo};
  auto os = use.order_statistics(ranks);
  q.insert(q.end(), os.begin(), os.end());
  return q;
}

ThresholdPlan threshold_plan(double alpha, double beta, double rho, double gamma, const Constants& c) {
  if (!in01(alpha) || !in01(beta) || !in01(rho) || !in01(gamma))
    throw std::invalid_argument("threshold_learner: alpha, beta, rho, gamma in (0,1)");
  if (!(beta < rho)) throw std::invalid_argument("threshold_learner: requires beta < rho");
  ThresholdPlan p{};
  p.K = ceil_count(c.thr_K / alpha);
  const double K = static_cast<double>(p.K);
  p.tau = std::min(gamma, rho * alpha / (c.c_rob * std::log(K / beta))) / 2.0;
  const auto raw = ceil_count(c.thr_quant * std::log(1.0 / beta) / (p.tau * p.tau));
  p.m_quant = checked_mul((raw + p.K - 1) / p.K, p.K);
  p.sel = {alpha / 2.0, beta / 2.0, rho / 3.0, p.tau};
  p.m_sel = selection_sample_need(p.K + 3, p.sel.beta, p.tau, c);
  return p;
}

std::vector<Hypothesis> threshold_candidates(const std::vector<double>& quantiles) {
  std::vector<Hypothesis> hs{Hypothesis::minus()};
  for (double t : quantiles) hs.push_back(Hypothesis::threshold(t));
  hs.push_back(Hypothesis::plus());
  return hs;
}

namespace {
Hypothesis fit_threshold(const Dataset& S, const ThresholdPlan& p, const SharedRandomness& rng, const Constants& c) {
  auto parts = S.partition({p.m_quant, p.m_sel});
  auto hs = threshold_candidates(dkw_quantiles(parts[0], p.K));
  return hs[hypothesis_selection(hs, parts[1], p.sel, rng.child("threshold"), c)];
}
}  // namespace

Hypothesis threshold_learner(const Dataset& S, double alpha, double beta, double rho, double gamma,
                             const SharedRandomness& rng, const Constants& c) {
  return threshold_learner(alpha, beta, rho, gamma, c)(S, rng);
}

Learner threshold_learner(double alpha, double beta, double rho, double gamma, const Constants& c) {
  const auto p = threshold_plan(alpha, beta, rho, gamma, c);
  Learner out;
  out.name = "threshold_learner";
  out.sample_need = checked_add(p.m_quant, p.m_sel);
  out.fit = [p, c](const Dataset& S, const SharedRandomness& r) { return fit_threshold(S, p, r, c); };
  return out;
}

std::uint64_t gate_sample_need(const HypothesisClass& cls, double alpha, double beta, double rho, double gamma,
                               const Constants& c) {
  if (!in01(alpha) || !in01(beta) || !in01(rho) || !in01(gamma))
    throw std::invalid_argument("realizable_apx_repl: alpha, beta, rho, gamma in (0,1)");
  return ceil_count(c.gate_c * (cls.d_eff() + std::log(1.0 / std::min(rho, beta))) /
                    (rho * rho * std::min(alpha, gamma)));
}

double class_min_error(const HypothesisClass& cls, const Dataset& S) {
  if (S.empty()) throw std::invalid_argument("class_min_error: empty dataset");
  if (!cls.finite) return erm_threshold_error(S);
  if (cls.d > 20) throw std::invalid_argument("realizable_apx_repl: finite class capped at d <= 20");
  if (!S.domain().finite || S.domain().d != cls.d) throw std::invalid_argument("class_min_error: domain mismatch");
  // All 2^d labelings are in the class, so the minimum splits per point.
  Tally t = S.tally();
  std::uint64_t wrong = 0;
  for (std::size_t i = 0; i < cls.d; ++i) wrong += std::min(t.plus[i], t.minus[i]);
  return static_cast<double>(wrong) / static_cast<double>(S.size());
}

GateOutcome realizable_gate(const HypothesisClass& cls, double alpha, double beta, double rho, double gamma,
                            const Dataset& S, const SharedRandomness& rng, const Constants& c) {
  const auto m1 = gate_sample_need(cls, alpha, beta, rho, gamma, c);
  if (S.size() < m1) throw std::invalid_argument("realizable_apx_repl: dataset smaller than m1");
  Dataset use = S.size() == m1 ? S : S.split(m1).first;
  GateOutcome out;
  out.r = rng.child("gate").child("cut").stream().uniform(0.1 * alpha, 0.2 * alpha);
  out.opt_hat = class_min_error(cls, use);
  out.accepted = gate_accepts(out.opt_hat, out.r);
  if (!out.accepted)
    out.h = Hypothesis::plus();
  else
    out.h = cls.finite ? erm_finite(use, cls.d) : erm_threshold(use);
  return out;
}

Learner realizable_apx_repl(const HypothesisClass& cls, double alpha, double beta, double rho, double gamma,
                            const Constants& c) {
  Learner out;
  out.name = "realizable_apx_repl";
  out.sample_need = gate_sample_need(cls, alpha, beta, rho, gamma, c);
  out.fit = [=](const Dataset& S, const SharedRandomness& r) {
    return realizable_gate(cls, alpha, beta, rho, gamma, S, r, c).h;
  };
  return out;
}

}  // namespace replilearn
