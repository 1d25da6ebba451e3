#include "replilearn/approximate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "replilearn/eval.hpp"
#include "replilearn/pointwise.hpp"
#include "replilearn/selection.hpp"

namespace replilearn {

void ClusterParams::validate() const {
  if (!(v - 2 * eps > 0.0 && v + 2 * eps < 1.0)) throw std::invalid_argument("cluster: need v +- 2 eps in (0,1)");
  if (!(gamma > 0.0) || !(eps > 0.0) || !(beta > 0.0 && beta < 1.0))
    throw std::invalid_argument("cluster: gamma, eps > 0 and beta in (0,1)");
}

TesterPlan tester_plan(const ClusterParams& p, double rho, const Constants& c) {
  p.validate();
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("tester: rho in (0,1)");
  const double e2 = p.eps * p.eps;
  const auto m1 = ceil_count(c.tester_c1 * (1.0 / (rho * rho * e2) + std::log(1.0 / p.beta) / e2));
  const auto m2 = ceil_count(c.tester_c2 * std::log(static_cast<double>(m1) / p.beta) / (p.gamma * p.gamma));
  return {m1, m2};
}

std::uint64_t tester_sample_need(const Learner& A, const ClusterParams& p, double rho, const Constants& c) {
  const auto plan = tester_plan(p, rho, c);
  return checked_mul(plan.m1, checked_add(checked_mul(2, A.sample_need), plan.m2));
}

TesterResult replicable_stable_tester(const HypothesisSampler& P, const Dataset& S, const ClusterParams& p, double rho,
                                      const SharedRandomness& rng, const Constants& c) {
  const auto plan = tester_plan(p, rho, c);
  const auto need = P.learner.sample_need;
  if (S.size() < tester_sample_need(P.learner, p, rho, c)) throw std::invalid_argument("tester: insufficient samples");
  auto [draw_part, dist_part] = S.split(checked_mul(2 * plan.m1, need));
  auto draws = draw_part.slices(need, 2 * plan.m1);
  auto dists = dist_part.slices(plan.m2, plan.m1);
  std::uint64_t close = 0;
  for (std::uint64_t i = 0; i < plan.m1; ++i) {
    Hypothesis f = P.draw(draws[2 * i]);
    Hypothesis g = P.draw(draws[2 * i + 1]);
    if (f == g || empirical_distance(dists[i], f, g) < p.gamma) ++close;
  }
  TesterResult out;
  out.v_hat = static_cast<double>(close) / static_cast<double>(plan.m1);
  out.v_cut = rng.child("tester").child("cut").stream().uniform(p.v - p.eps, p.v + p.eps);
  out.accept = tester_accepts(out.v_hat, out.v_cut);
  return out;
}

ClusterPlan cluster_plan(const ClusterParams& p, const Constants& c) {
  p.validate();
  const auto n = ceil_count(c.cluster_cn * std::log(1.0 / p.beta) / (p.eps * p.eps));
  const auto m = ceil_count(c.cluster_cm * std::log(static_cast<double>(n) / p.beta) / (p.gamma * p.gamma));
  return {n, m};
}

std::uint64_t cluster_sample_need(const Learner& A, const ClusterParams& p, const Constants& c) {
  const auto plan = cluster_plan(p, c);
  return checked_add(checked_mul(plan.n, A.sample_need), plan.m);
}

std::vector<std::size_t> cluster_greedy(const std::vector<std::size_t>& draw_group, const std::vector<double>& dist,
                                        std::size_t groups, double v, double gamma) {
  // Draws of one hypothesis are interchangeable: track multiplicities per
  // distinct hypothesis instead of n individual candidates.
  std::vector<std::uint64_t> mult(groups, 0);
  for (auto g : draw_group) ++mult[g];
  std::vector<bool> alive(groups, true);
  const double n = static_cast<double>(draw_group.size());
  std::vector<std::size_t> F;
  for (auto gi : draw_group) {
    std::uint64_t N = 0;
    for (std::size_t h = 0; h < groups; ++h)
      if (alive[h] && dist[gi * groups + h] < 2 * gamma) N += mult[h];
    if (static_cast<double>(N) / n >= v) {
      F.push_back(gi);
      for (std::size_t h = 0; h < groups; ++h)
        if (dist[gi * groups + h] < 2 * gamma) alive[h] = false;
    }
  }
  return F;
}

std::vector<Hypothesis> cluster_detection(const HypothesisSampler& P, const Dataset& S, const ClusterParams& p,
                                          const Constants& c) {
  const auto plan = cluster_plan(p, c);
  const auto need = P.learner.sample_need;
  if (S.size() < cluster_sample_need(P.learner, p, c)) throw std::invalid_argument("cluster_detection: insufficient samples");
  auto [draw_part, T] = S.split(checked_mul(plan.n, need));
  auto draws = draw_part.slices(need, plan.n);
  std::vector<Hypothesis> distinct;
  std::vector<std::size_t> group(plan.n);
  for (std::uint64_t i = 0; i < plan.n; ++i) {
    Hypothesis h = P.draw(draws[i]);
    auto it = std::find(distinct.begin(), distinct.end(), h);
    group[i] = static_cast<std::size_t>(it - distinct.begin());
    if (it == distinct.end()) distinct.push_back(std::move(h));
  }
  std::vector<double> dist(distinct.size() * distinct.size(), 0.0);
  if (distinct.size() > 1) dist = empirical_distance_matrix(T.split(plan.m).first, distinct);
  std::vector<Hypothesis> F;
  for (auto g : cluster_greedy(group, dist, distinct.size(), p.v, p.gamma)) F.push_back(distinct[g]);
  return F;
}

std::uint64_t error_boost_runs(double beta, const Constants& c) {
  return std::max<std::uint64_t>(1, ceil_count(c.err_D * std::log(1.0 / beta)));
}

Learner boost_error_approx(const Learner& A, double alpha, double beta, double rho, double gamma, const Constants& c) {
  const auto D = error_boost_runs(beta, c);
  const SelectionParams sp{alpha / 2, beta / 2, rho / 2, gamma};
  sp.validate();
  const auto m_sel = selection_sample_need(D, sp.beta, sp.tau, c);
  Learner out;
  out.name = "boost_error_approx(" + A.name + ")";
  out.sample_need = checked_add(checked_mul(D, A.sample_need), m_sel);
  out.fit = [A, D, sp, m_sel, c](const Dataset& S, const SharedRandomness& r) {
    auto [runs, sel] = S.split(D * A.sample_need);
    auto blocks = runs.slices(A.sample_need, D);
    const auto alg = r.child("errboost");
    std::vector<Hypothesis> hs;
    hs.reserve(D);
    for (std::uint64_t i = 0; i < D; ++i) hs.push_back(A(blocks[i], alg.child("run", i)));
    return hs[hypothesis_selection(hs, sel.split(m_sel).first, sp, alg, c)];
  };
  return out;
}

ReplBoostPlan repl_boost_plan(double beta, double rho, double gamma, const Constants& c) {
  if (!(rho > 0.0 && rho < 1.0) || !(beta > 0.0 && beta < 1.0) || !(gamma > 0.0))
    throw std::invalid_argument("boost_replicability: rho, beta in (0,1), gamma > 0");
  ReplBoostPlan p;
  p.R = std::max<std::uint64_t>(1, ceil_count(c.repl_R * std::log(1.0 / rho)));
  const double R = static_cast<double>(p.R);
  p.tester = {c.repl_v, gamma / 6, c.repl_eps, beta / (3 * R)};
  p.tester_rho = rho / (2 * R);
  p.cluster = {c.repl_cluster_v, gamma / 3, c.repl_eps, beta / (3 * R)};
  p.tester.validate();
  p.cluster.validate();
  return p;
}

double repl_boost_beta1(double beta, double rho, const Constants& c) {
  const double R = static_cast<double>(std::max<std::uint64_t>(1, ceil_count(c.repl_R * std::log(1.0 / rho))));
  return c.repl_beta1 * beta * (rho * rho / R + 1.0 / (R * std::log(R / beta)));
}

std::uint64_t repl_boost_sample_need(const Learner& A, const ReplBoostPlan& plan, const Constants& c) {
  const auto per = checked_add(tester_sample_need(A, plan.tester, plan.tester_rho, c), cluster_sample_need(A, plan.cluster, c));
  return checked_add(checked_mul(plan.R, per), A.sample_need);
}

ReplBoostOutcome boost_replicability_run(const Learner& A, const ReplBoostPlan& plan, const Dataset& S,
                                         const SharedRandomness& rng, const Constants& c) {
  const auto t_need = tester_sample_need(A, plan.tester, plan.tester_rho, c);
  const auto c_need = cluster_sample_need(A, plan.cluster, c);
  std::vector<std::uint64_t> sizes;
  for (std::uint64_t i = 0; i < plan.R; ++i) {
    sizes.push_back(t_need);
    sizes.push_back(c_need);
  }
  sizes.push_back(A.sample_need);
  auto parts = S.partition(sizes);
  const auto alg = rng.child("replboost");
  Rng strings = alg.child("strings").stream();
  for (std::uint64_t i = 0; i < plan.R; ++i) {
    HypothesisSampler P{A, SharedRandomness(strings())};
    if (!replicable_stable_tester(P, parts[2 * i], plan.tester, plan.tester_rho, alg.child("test", i), c).accept)
      continue;
    auto F = cluster_detection(P, parts[2 * i + 1], plan.cluster, c);
    if (!F.empty()) return {F.front(), i};
    break;  // accepted string without a detected cluster: fall through to the fresh run
  }
  return {A(parts.back(), alg.child("fallback")), std::nullopt};
}

Learner boost_replicability(const Learner& A, double /*alpha*/, double beta, double rho, double gamma,
                            const Constants& c) {
  const auto plan = repl_boost_plan(beta, rho, gamma, c);
  Learner out;
  out.name = "boost_replicability(" + A.name + ")";
  out.sample_need = repl_boost_sample_need(A, plan, c);
  out.fit = [A, plan, c](const Dataset& S, const SharedRandomness& r) {
    return boost_replicability_run(A, plan, S, r, c).h;
  };
  return out;
}

namespace {
double need_or_inf(const BaseLearner& base, double a, double b) {
  try {
    return static_cast<double>(base.need(a, b));
  } catch (const std::overflow_error&) {
    return std::numeric_limits<double>::infinity();
  }
}

double radius_const_alpha(double alpha, double beta, double rho, double gamma, const Constants& c) {
  const double D = static_cast<double>(error_boost_runs(beta, c));
  return std::min(gamma, rho * alpha / (c.c_rob * std::log(D / beta)));
}
}  // namespace

PipelineCost approx_pipeline_cost(ApproxMode mode, const BaseLearner& base, double alpha, double beta, double rho,
                                  double gamma, const Constants& c) {
  PipelineCost k{};
  double a_alpha, a_beta, extra = 0.0;
  if (mode == ApproxMode::ConstAlpha) {
    const double tau = radius_const_alpha(alpha, beta, rho, gamma, c);
    k.pointwise_rho = rho * tau;
    a_alpha = alpha / 2;
    a_beta = 0.01;
    k.a_runs = static_cast<double>(error_boost_runs(beta, c));
    extra = c.c_sel * std::log(k.a_runs / (beta / 2)) / (tau * tau);
  } else {
    const auto plan = repl_boost_plan(beta, rho, gamma, c);
    const auto tp = tester_plan(plan.tester, plan.tester_rho, c);
    const auto cp = cluster_plan(plan.cluster, c);
    k.pointwise_rho = c.repl_inner * gamma / 12;
    a_alpha = alpha;
    a_beta = repl_boost_beta1(beta, rho, c);
    const double R = static_cast<double>(plan.R);
    k.a_runs = R * (2.0 * static_cast<double>(tp.m1) + static_cast<double>(cp.n)) + 1.0;
    extra = R * (static_cast<double>(tp.m1) * static_cast<double>(tp.m2) + static_cast<double>(cp.m));
  }
  k.T = std::max(1.0, std::ceil(c.c_T / (k.pointwise_rho * k.pointwise_rho) * (1.0 - 1e-12)));
  k.base_need = need_or_inf(base, a_alpha * a_beta / 2, a_alpha * a_beta / 2);
  k.base_calls = k.a_runs * k.T;
  k.samples = k.base_calls * k.base_need + extra;
  return k;
}

Learner build_approx_learner(ApproxMode mode, const BaseLearner& base, double alpha, double beta, double rho,
                             double gamma, const Constants& c) {
  if (mode == ApproxMode::ConstAlpha) {
    const double tau = radius_const_alpha(alpha, beta, rho, gamma, c);
    auto A = basic_pointwise(base, {alpha / 2, 0.01, rho * tau, c.c_T});
    return boost_error_approx(A, alpha, beta, rho, tau, c);
  }
  const double beta1 = repl_boost_beta1(beta, rho, c);
  auto A = basic_pointwise(base, {alpha, beta1, c.repl_inner * gamma / 12, c.c_T});
  return boost_replicability(A, alpha, beta, rho, gamma, c);
}

}  // namespace replilearn
