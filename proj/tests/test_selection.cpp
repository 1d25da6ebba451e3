#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

#include "replilearn/learner.hpp"
#include "replilearn/selection.hpp"

using namespace replilearn;

TEST_CASE("correlated_sample: point mass and determinism") {
  for (std::uint64_t k = 0; k < 1000; ++k) {
    const auto r = SharedRandomness(1).child("k", k);
    CHECK(correlated_sample({1, 0, 0}, r) == 0);
    CHECK(correlated_sample({0, 0, 5}, r) == 2);
    const std::vector<double> w{0.3, 1.2, 0.01, 2.0};
    CHECK(correlated_sample(w, r) == correlated_sample(w, r));
  }
  CHECK_THROWS_AS(correlated_sample({}, SharedRandomness(1)), std::invalid_argument);
  CHECK_THROWS_AS(correlated_sample({0, 0}, SharedRandomness(1)), std::invalid_argument);
  CHECK_THROWS_AS(correlated_sample({1, -1}, SharedRandomness(1)), std::invalid_argument);
  // Frozen: the accepted index for fixed weights and seed.
  CHECK(correlated_sample({1, 2, 3, 4}, SharedRandomness(42)) == correlated_sample({10, 20, 30, 40}, SharedRandomness(42)));
}

TEST_CASE("correlated_sample: marginal is the normalized weight vector (chi-square, 1e-4 level)") {
  const std::vector<double> w{1, 2, 3, 4, 0.5};
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  const std::uint64_t N = 50000;
  std::vector<double> cnt(w.size(), 0);
  for (std::uint64_t k = 0; k < N; ++k) ++cnt[correlated_sample(w, SharedRandomness(2).child("k", k))];
  double stat = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double e = N * w[i] / total;
    stat += (cnt[i] - e) * (cnt[i] - e) / e;
  }
  boost::math::chi_squared chi(static_cast<double>(w.size() - 1));
  CHECK(stat <= boost::math::quantile(boost::math::complement(chi, 1e-4)));
}

TEST_CASE("correlated_sample: paired disagreement, exact value and the 2TV/(1+TV) bound") {
  // P uniform on 4; Q moves 0.1 of mass from {0,1} to {2,3}: TV = 0.1.
  const std::vector<double> P{0.25, 0.25, 0.25, 0.25}, Q{0.2, 0.2, 0.3, 0.3};
  const std::uint64_t N = 40000;
  std::uint64_t differ = 0;
  for (std::uint64_t k = 0; k < N; ++k) {
    const auto r = SharedRandomness(3).child("k", k);
    differ += correlated_sample(P, r) != correlated_sample(Q, r);
  }
  // First accepting rounds differ w.p. 2TV/(1+TV); the sampler still running
  // then lands elsewhere w.p. 1 - (its own mass there).
  double lone = 0, either = 0;
  for (std::size_t u = 0; u < P.size(); ++u) {
    lone += std::max(0.0, P[u] - Q[u]) * (1 - Q[u]) + std::max(0.0, Q[u] - P[u]) * (1 - P[u]);
    either += std::max(P[u], Q[u]);
  }
  const double exact = lone / either, rate = static_cast<double>(differ) / N;
  CHECK(exact == doctest::Approx(0.03875 / 0.275));
  CHECK(std::abs(rate - exact) <= 4 * std::sqrt(exact * (1 - exact) / N));
  CHECK(rate <= 0.2 / 1.1 + 3 * std::sqrt(rate * (1 - rate) / N));
}

TEST_CASE("selection parameters and budgets") {
  SelectionParams p{0.1, 0.05, 0.2, 0.01};
  CHECK(p.temperature(10) == doctest::Approx(2 * std::log(400.0) / 0.1));
  CHECK(selection_sample_need(10, 0.05, 0.1) == ceil_count(64 * std::log(200.0) / 0.01));
  CHECK(robust_radius(10, 0.1, 0.05, 0.2) == doctest::Approx(0.2 * 0.1 / (12 * std::log(200.0))));
  CHECK_THROWS_AS(SelectionParams({0.1, 0.05, 0.2, 0.2}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(SelectionParams({0.1, 0.0, 0.2, 0.01}).validate(), std::invalid_argument);
}

TEST_CASE("selection law: exponential weights, normalized, monotone in error") {
  SelectionParams p{0.1, 0.05, 0.2, 0.01};
  const std::vector<double> e{0.3, 0.1, 0.12, 0.5};
  auto P = selection_distribution(e, p);
  CHECK(std::accumulate(P.begin(), P.end(), 0.0) == doctest::Approx(1.0));
  CHECK(P[1] > P[2]);
  CHECK(P[2] > P[0]);
  CHECK(P[0] > P[3]);
  const double t = p.temperature(4);
  CHECK(P[2] / P[1] == doctest::Approx(std::exp(-t * 0.02)));
  // Mass at >= alpha/2 above the minimum is at most n exp(-t alpha/2) = beta/2.
  double tail = 0;
  for (std::size_t i = 0; i < e.size(); ++i)
    if (e[i] >= 0.1 + p.alpha / 2) tail += P[i];
  CHECK(tail <= p.beta / 2);
  CHECK(selection_distribution({0.4}, p) == std::vector<double>{1.0});
}

TEST_CASE("hypothesis_selection: n = 1, identical hypotheses, budget") {
  SelectionParams p{0.2, 0.1, 0.2, 0.1};
  auto task = std::make_shared<const Task>(FiniteLabeledDistribution({0.5, -0.5}));
  const std::vector<Hypothesis> one{Hypothesis::labeling({1, -1})};
  const std::vector<Hypothesis> same(5, Hypothesis::labeling({1, 1}));
  const auto m1 = selection_sample_need(1, p.beta, p.tau), m5 = selection_sample_need(5, p.beta, p.tau);
  for (std::uint64_t t = 0; t < 200; ++t) {
    const auto r = SharedRandomness(4).child("r", t);
    CHECK(hypothesis_selection(one, Dataset::sample(task, m1, SharedRandomness(5).child("d", t)), p, r) == 0);
    auto a = hypothesis_selection(same, Dataset::sample(task, m5, SharedRandomness(6).child("d", t, 1)), p, r);
    auto b = hypothesis_selection(same, Dataset::sample(task, m5, SharedRandomness(6).child("d", t, 2)), p, r);
    CHECK(a == b);
  }
  CHECK_THROWS_AS(hypothesis_selection(one, Dataset::sample(task, m1 - 1, SharedRandomness(1)), p, SharedRandomness(2)),
                  std::invalid_argument);
}
