#include "replilearn/semirepl.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "replilearn/eval.hpp"
#include "replilearn/selection.hpp"

namespace replilearn {

std::uint64_t pool_size(const HypothesisClass& cls, double alpha, double beta, const Constants& c) {
  if (!(alpha > 0 && alpha < 1) || !(beta > 0 && beta < 1))
    throw std::invalid_argument("semi: alpha, beta in (0,1)");
  return ceil_count(c.semi_pool * (cls.d_eff() + std::log(2.0 / beta)) / alpha);
}

SharedPool shared_pool(const Task& task, std::uint64_t m_u, const SharedRandomness& rng) {
  SharedPool U{domain_of(task), {}};
  auto S = sample(task, m_u, rng);
  for (const auto& e : S.examples()) U.unlabeled.push_back(e.x);
  return U;
}

std::vector<Hypothesis> build_cover(const SharedPool& U, const HypothesisClass& cls) {
  if (U.unlabeled.empty()) throw std::invalid_argument("build_cover: empty pool");
  auto xs = U.unlabeled;
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<Hypothesis> cover;
  if (!cls.finite) {
    // Prefix labelings: -1 on the first j sorted points. Realizable ERM over
    // {lo, midpoints, hi} (ties to the smallest t) returns exactly these cuts.
    const double lo = U.domain.lo, hi = U.domain.hi;
    cover.push_back(Hypothesis::threshold(lo));
    for (std::size_t j = 0; j < xs.size(); ++j)
      cover.push_back(Hypothesis::threshold(j + 1 < xs.size() ? xs[j] + (xs[j + 1] - xs[j]) / 2.0 : hi));
    // A pool point at lo itself is already -1 under t = lo.
    if (xs.front() <= lo) cover.erase(cover.begin() + 1);
    return cover;
  }
  if (cls.d > 12) throw std::invalid_argument("build_cover: finite class capped at d <= 12");
  const std::size_t k = xs.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    // Finite ERM labels unseen points +1 and copies the pool labels.
    std::vector<std::int8_t> labels(cls.d, 1);
    for (std::size_t j = 0; j < k; ++j)
      if (mask >> j & 1) labels[static_cast<std::size_t>(xs[j])] = -1;
    cover.push_back(Hypothesis::labeling(std::move(labels)));
  }
  return cover;
}

double max_cover_size(const HypothesisClass& cls, std::uint64_t m_u) {
  if (!cls.finite) return static_cast<double>(m_u) + 1.0;
  return std::ldexp(1.0, static_cast<int>(std::min<std::uint64_t>(cls.d, m_u)));
}

double semi_tau(std::size_t n, double alpha, double beta, double rho, const Constants& c) {
  return robust_radius(std::max<std::size_t>(n, 2), alpha / 2.0, beta, rho, c);
}

double semi_labeled_budget_raw(double n, double alpha, double beta, double rho, const Constants& c) {
  n = std::max(n, 2.0);
  const double tau = rho * (alpha / 2.0) / (c.c_rob * std::log(n / beta));
  return c.c_sel * std::log(n / (beta / 2.0)) / (tau * tau);
}

std::uint64_t semi_labeled_budget(const HypothesisClass& cls, double alpha, double beta, double rho,
                                  const Constants& c) {
  if (!(rho > 0 && rho < 1)) throw std::invalid_argument("semi: rho in (0,1)");
  const double n = max_cover_size(cls, pool_size(cls, alpha, beta, c));
  return ceil_count(semi_labeled_budget_raw(n, alpha, beta, rho, c));
}

SemiOutcome semi_replicable_run(const HypothesisClass& cls, const Dataset& S, double alpha, double beta, double rho,
                                const SharedRandomness& rng, const Constants& c) {
  if (!S.task()) throw std::invalid_argument("semi_replicable_learn: dataset must come from a task");
  const auto m_u = pool_size(cls, alpha, beta, c);
  auto U = shared_pool(*S.task(), m_u, rng.child("semi").child("pool"));
  auto cover = build_cover(U, cls);
  const double n = static_cast<double>(cover.size());
  const auto need = ceil_count(semi_labeled_budget_raw(n, alpha, beta, rho, c));
  if (S.size() < need) throw std::invalid_argument("semi_replicable_learn: labeled budget too small for the cover");
  // Radius only sizes the budget; clamp so SelectionParams stays valid.
  const double tau = std::min(semi_tau(cover.size(), alpha, beta, rho, c), alpha / 2.0);
  const SelectionParams p{alpha / 2.0, beta / 2.0, rho, tau};
  auto sorted = U.unlabeled;
  std::sort(sorted.begin(), sorted.end());
  const auto distinct = static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
  const auto i = select_from_errors(empirical_errors(S, cover), p, rng.child("semi").child("select"));
  return {cover[i], cover.size(), distinct};
}

Learner semi_replicable_learn(const HypothesisClass& cls, double alpha, double beta, double rho, const Constants& c) {
  Learner out;
  out.name = "semi_replicable_learn";
  out.sample_need = semi_labeled_budget(cls, alpha, beta, rho, c);
  out.shared_need = pool_size(cls, alpha, beta, c);
  out.fit = [=](const Dataset& S, const SharedRandomness& r) {
    return semi_replicable_run(cls, S, alpha, beta, rho, r, c).h;
  };
  return out;
}

}  // namespace replilearn
