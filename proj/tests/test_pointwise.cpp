#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <stdexcept>

#include "replilearn/experiments.hpp"
#include "replilearn/harness.hpp"
#include "replilearn/learners.hpp"
#include "replilearn/pointwise.hpp"

using namespace replilearn;

namespace {
std::shared_ptr<const Task> coins(std::vector<double> p) {
  return std::make_shared<const Task>(FiniteLabeledDistribution(std::move(p)));
}
}  // namespace

TEST_CASE("pointwise params: T = ceil(c_T / rho^2)") {
  CHECK(PointwiseParams{0.1, 0.1, 0.4, 4}.T() == 25);
  CHECK(PointwiseParams{0.1, 0.1, 0.2, 4}.T() == 100);
  CHECK(PointwiseParams{0.1, 0.1, 0.1, 4}.T() == 400);
  CHECK(PointwiseParams{0.1, 0.1, 0.3, 4}.T() == 45);
  CHECK_THROWS_AS(PointwiseParams({0.1, 0.1, 0.0, 4}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(PointwiseParams({1.0, 0.1, 0.2, 4}).validate(), std::invalid_argument);
}

TEST_CASE("basic_pointwise: budget, structure, frozen cut") {
  auto base = erm_finite_learner(3);
  auto L = basic_pointwise(base, {0.1, 0.1, 0.4, 4});
  CHECK(L.sample_need == 25 * base.need(0.005, 0.005));
  auto S = Dataset::sample(coins({0.4, -0.4, 0.0}), L.sample_need, SharedRandomness(1));
  auto h = L(S, SharedRandomness(42));
  REQUIRE(h.is<Aggregate>());
  CHECK(h.as<Aggregate>().subs->size() == 25);
  // The cut is the first uniform of the ("pointwise", "cut") substream.
  CHECK(h.as<Aggregate>().cut == 0.56139755916339651);
  CHECK(L(S, SharedRandomness(42)) == h);
}

TEST_CASE("basic_pointwise: constant base gives +1 everywhere and zero paired disagreement") {
  PairedTrialConfig pc;
  pc.task = coins({0.2, -0.2, 0.5, -0.9});
  pc.learner = basic_pointwise(constant_learner(Hypothesis::plus()), {0.1, 0.1, 0.2, 4});
  pc.n_trials = 200;
  pc.seed = 11;
  pc.points = {0, 1, 2, 3};
  pc.workers = 1;
  auto rep = run_paired(pc);
  for (const auto& e : rep.pointwise) CHECK(e.k == 0);
  CHECK(rep.exact_equal.k == 200);
  auto h = pc.learner(Dataset::sample(pc.task, pc.learner.sample_need, SharedRandomness(1)), SharedRandomness(2));
  for (double cut : {0.0, 0.3, 0.999999})
    CHECK(Hypothesis::aggregate(*h.as<Aggregate>().subs, cut).labels_on(4) == std::vector<std::int8_t>{1, 1, 1, 1});
}

TEST_CASE("basic_pointwise: T = 1 reproduces the single base run for every cut in (0,1)") {
  auto base = erm_finite_learner(4);
  auto L = basic_pointwise_blocks(base, 40, 1);
  auto task = coins({0.1, -0.1, 0.3, -0.3});
  for (std::uint64_t t = 0; t < 100; ++t) {
    auto S = Dataset::sample(task, 40, SharedRandomness(7).child("t", t));
    auto g = L(S, SharedRandomness(8).child("r", t));
    auto h = erm_finite(S, 4);
    for (std::size_t x = 0; x < 4; ++x) CHECK(g.at_index(x) == h.at_index(x));
  }
}

TEST_CASE("first_within: first index within the slack of the minimum") {
  CHECK(first_within({0.30, 0.10, 0.12}, 0.05) == 1);
  CHECK(first_within({0.12, 0.10, 0.30}, 0.05) == 0);
  CHECK(first_within({0.2, 0.2, 0.2}, 0.0) == 0);
  CHECK_THROWS_AS(first_within({}, 0.1), std::invalid_argument);
}

TEST_CASE("boost_pointwise_error: plan, budget, identical candidates") {
  const auto plan = boost_plan(0.1, std::exp(-1.0));
  CHECK(plan.K == 7);
  CHECK(plan.m_test == ceil_count(32 * std::log(2 * 7 / std::exp(-1.0)) / 0.01));
  auto C = constant_learner(Hypothesis::labeling({-1, 1})).at(0.1, 0.1);
  auto B = boost_pointwise_error(C, 0.1, std::exp(-1.0), 0.2);
  CHECK(B.sample_need == 7 * C.sample_need + plan.m_test);
  auto S = Dataset::sample(coins({0.5, 0.5}), B.sample_need, SharedRandomness(2));
  CHECK(B(S, SharedRandomness(3)) == Hypothesis::labeling({-1, 1}));
}

TEST_CASE("pointwise_learner: composition of basic at (alpha/2, rho, rho) and boosting at (alpha/2, beta)") {
  auto base = erm_finite_learner(2);
  auto L = pointwise_learner(base, 0.2, 0.1, 0.4);
  auto inner = basic_pointwise(base, {0.1, 0.4, 0.4, 4});
  const auto plan = boost_plan(0.1, 0.1);
  CHECK(L.sample_need == plan.K * inner.sample_need + plan.m_test);
  auto S = Dataset::sample(coins({0.6, -0.6}), L.sample_need, SharedRandomness(4));
  auto h = L(S, SharedRandomness(5));
  CHECK(h.is<Aggregate>());
  CHECK(h.labels_on(2) == std::vector<std::int8_t>{1, -1});
}

TEST_CASE("per-block ERM probability: exact law against limits and Monte-Carlo") {
  CHECK(erm_plus_probability(0, 4, -0.9) == 1.0);
  CHECK(erm_plus_probability(1, 1, 0.0) == doctest::Approx(0.5));
  // One sample on one point: +1 iff the label is +1 ... or the point is unseen.
  CHECK(erm_plus_probability(1, 2, 0.2) == doctest::Approx(0.5 + 0.5 * 0.6));
  CHECK(erm_plus_probability(1000, 2, 0.4) == doctest::Approx(1.0));
  CHECK(erm_plus_probability(1000, 2, -0.4) < 1e-12);
  // Two samples on one point: -1 only when both are -1.
  CHECK(erm_plus_probability(2, 1, 0.2) == doctest::Approx(1 - 0.4 * 0.4));

  auto task = coins({0.1, -0.1, 0.05});
  const std::uint64_t n = 15, N = 40000;
  std::uint64_t plus = 0;
  for (std::uint64_t t = 0; t < N; ++t) plus += erm_finite(Dataset::sample(task, n, SharedRandomness(9).child("t", t)), 3).at_index(1) > 0;
  const double p = erm_plus_probability(n, 3, -0.1);
  CHECK(std::abs(static_cast<double>(plus) / N - p) <= 4 * std::sqrt(p * (1 - p) / N));
}
