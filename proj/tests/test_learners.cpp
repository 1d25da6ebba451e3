#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <stdexcept>

#include "replilearn/eval.hpp"
#include "replilearn/learners.hpp"

using namespace replilearn;

namespace {
Dataset finite(std::size_t d, std::vector<Example> ex) { return Dataset::from_examples(Domain::points(d), std::move(ex)); }
Dataset real(std::vector<Example> ex) { return Dataset::from_examples(Domain::interval(0, 1), std::move(ex)); }
}  // namespace

TEST_CASE("erm_finite: majority per point, ties and unseen points to +1") {
  CHECK(erm_finite(finite(2, {{0, 1}, {0, 1}, {1, -1}}), 2) == Hypothesis::labeling({1, -1}));
  CHECK(erm_finite(finite(3, {}), 3) == Hypothesis::labeling({1, 1, 1}));
  CHECK(erm_finite(finite(2, {{0, 1}, {0, -1}, {1, -1}}), 2) == Hypothesis::labeling({1, -1}));
  CHECK_THROWS_AS(erm_finite(finite(2, {}), 3), std::invalid_argument);
}

TEST_CASE("erm_finite: 1e4 samples from p = (0.4, -0.4) give (+1, -1) in every one of 1000 runs") {
  // Each point gets ~5000 samples of mean 0.4: a wrong majority has probability < e^-400.
  auto task = std::make_shared<const Task>(FiniteLabeledDistribution({0.4, -0.4}));
  int right = 0;
  for (std::uint64_t t = 0; t < 1000; ++t)
    right += erm_finite(Dataset::sample(task, 10000, SharedRandomness(3).child("t", t)), 2) == Hypothesis::labeling({1, -1});
  CHECK(right == 1000);
}

TEST_CASE("erm_threshold: examples") {
  auto S = real({{0.2, -1}, {0.8, 1}});
  auto h = erm_threshold(S);
  CHECK(h == Hypothesis::threshold(0.5));
  CHECK(empirical_error(S, h) == 0.0);
  CHECK(erm_threshold_error(S) == 0.0);
  CHECK(erm_threshold(real({{0.3, 1}, {0.6, 1}})) == Hypothesis::threshold(0.0));
  // All -1: the cut at hi labels everything -1.
  CHECK(erm_threshold(real({{0.3, -1}, {0.6, -1}})) == Hypothesis::threshold(1.0));
  CHECK(erm_threshold_error(real({{0.1, 1}, {0.2, -1}, {0.3, 1}, {0.9, 1}})) == doctest::Approx(0.25));
  CHECK_THROWS_AS(erm_threshold(real({})), std::invalid_argument);
  CHECK_THROWS_AS(erm_threshold(finite(2, {{0, 1}})), std::invalid_argument);
}

TEST_CASE("erm_threshold: noiseless 50-point samples fit perfectly; error matches an exhaustive cut scan") {
  auto task = std::make_shared<const Task>(ThresholdTask(PiecewiseLinearCdf::uniform(0, 1), 0.37, 0.0));
  auto noisy = std::make_shared<const Task>(ThresholdTask(PiecewiseLinearCdf::uniform(0, 1), 0.37, 0.2));
  for (std::uint64_t t = 0; t < 200; ++t) {
    auto S = Dataset::sample(task, 50, SharedRandomness(5).child("t", t));
    CHECK(empirical_error(S, erm_threshold(S)) == 0.0);

    auto N = Dataset::sample(noisy, 50, SharedRandomness(6).child("t", t));
    auto ex = N.examples();
    std::vector<double> cuts{0.0, 1.0};
    for (const auto& e : ex) cuts.push_back(e.x);
    double best = 1.0;
    for (double c : cuts) best = std::min(best, empirical_error(N, Hypothesis::threshold(c)));
    best = std::min({best, empirical_error(N, Hypothesis::plus()), empirical_error(N, Hypothesis::minus())});
    CHECK(erm_threshold_error(N) == doctest::Approx(best).epsilon(1e-12));
    CHECK(empirical_error(N, erm_threshold(N)) == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("sample_need_agnostic: formula and linearity in d") {
  CHECK(sample_need_agnostic(1, 1.0 - 1e-15, std::exp(-1.0)) == 16);
  const auto a = sample_need_agnostic(3, 0.1, 0.05), b = sample_need_agnostic(6, 0.1, 0.05);
  CHECK(static_cast<double>(b - a) == doctest::Approx(8.0 * 3 / 0.01).epsilon(1e-9));
  CHECK(sample_need_agnostic(2, 0.1, 0.1) == ceil_count(8 * (2 + std::log(10.0)) / 0.01));
  CHECK_THROWS_AS(sample_need_agnostic(1, 0.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(sample_need_agnostic(1, 0.1, 1.5), std::invalid_argument);
}

TEST_CASE("budget arithmetic") {
  CHECK(ceil_count(3 / 0.1) == 30);
  CHECK(ceil_count(30.5) == 31);
  CHECK(ceil_count(0.0) == 0);
  CHECK_THROWS_AS(ceil_count(1e30), std::overflow_error);
  CHECK(checked_mul(1ULL << 31, 1ULL << 31) == 1ULL << 62);
  CHECK_THROWS_AS(checked_mul(1ULL << 32, 1ULL << 32), std::overflow_error);
  CHECK_THROWS_AS(checked_add(~0ULL, 1), std::overflow_error);
}

TEST_CASE("learner wrappers: budget check, prefix use, constant learner") {
  auto base = erm_finite_learner(2);
  auto L = base.at(0.5, 0.5);
  CHECK(L.sample_need == sample_need_agnostic(2, 0.5, 0.5));
  auto task = std::make_shared<const Task>(FiniteLabeledDistribution({1.0, -1.0}));
  CHECK_THROWS_AS(L(Dataset::sample(task, L.sample_need - 1, SharedRandomness(1)), SharedRandomness(2)),
                  std::invalid_argument);
  CHECK(L(Dataset::sample(task, L.sample_need + 10, SharedRandomness(1)), SharedRandomness(2)) ==
        Hypothesis::labeling({1, -1}));

  auto C = constant_learner(Hypothesis::minus()).at(0.1, 0.1);
  CHECK(C.sample_need == 1);
  CHECK(C(Dataset::sample(task, 1, SharedRandomness(9)), SharedRandomness(0)) == Hypothesis::minus());
}
