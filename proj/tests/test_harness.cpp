#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <stdexcept>

#include "replilearn/harness.hpp"
#include "replilearn/learners.hpp"
#include "replilearn/pointwise.hpp"
#include "replilearn/stats.hpp"

using namespace replilearn;

namespace {
std::shared_ptr<const Task> coins(std::vector<double> p) {
  return std::make_shared<const Task>(FiniteLabeledDistribution(std::move(p)));
}

// Outputs its single sample's label: a fresh coin that ignores r.
Learner data_coin() {
  Learner L;
  L.name = "data_coin";
  L.sample_need = 1;
  L.fit = [](const Dataset& S, const SharedRandomness&) {
    return Hypothesis::labeling({static_cast<std::int8_t>(S.examples().front().y)});
  };
  return L;
}

PairedTrialConfig base_config() {
  PairedTrialConfig pc;
  pc.task = coins({0.0});
  pc.learner = data_coin();
  pc.n_trials = 2000;
  pc.seed = 5;
  pc.points = {0};
  pc.gamma = 0.5;
  pc.alpha = 0.5;
  pc.workers = 1;
  return pc;
}
}  // namespace

TEST_CASE("stats: Wilson interval frozen values, quantile, slope") {
  auto a = wilson(0, 10);
  CHECK(a.lo == 0.0);
  CHECK(a.hi == doctest::Approx(0.27754017).epsilon(1e-6));
  auto b = wilson(5, 10);
  CHECK(b.lo == doctest::Approx(0.23658959).epsilon(1e-6));
  CHECK(b.hi == doctest::Approx(0.76341041).epsilon(1e-6));
  auto c = wilson(10, 10);
  CHECK(c.hi == 1.0);
  CHECK(c.lo == doctest::Approx(0.72245983).epsilon(1e-6));
  CHECK(binomial_se(0.5, 100) == doctest::Approx(0.05));
  CHECK(quantile({1, 2, 3, 4}, 0.9) == doctest::Approx(3.7));
  CHECK(quantile({5}, 0.9) == 5);
  CHECK(quantile({3, 1, 2}, 0.5) == 2);
  CHECK(loglog_slope({1, 4, 16, 64}, {1, 0.5, 0.25, 0.125}) == doctest::Approx(-0.5));
  // Property: the interval always contains the point estimate.
  for (std::uint64_t n = 1; n < 60; ++n)
    for (std::uint64_t k = 0; k <= n; ++k) {
      auto w = wilson(k, n);
      const double p = static_cast<double>(k) / static_cast<double>(n);
      CHECK((w.lo <= p && p <= w.hi && w.lo >= 0 && w.hi <= 1));
    }
}

TEST_CASE("run_trials: ordered results and lowest-index error") {
  auto v = run_trials<std::uint64_t>(100, 4, [](std::uint64_t t) { return t * t; });
  for (std::uint64_t t = 0; t < 100; ++t) CHECK(v[t] == t * t);
  try {
    run_trials<int>(50, 3, [](std::uint64_t t) -> int {
      if (t == 17 || t == 31) throw std::runtime_error("boom " + std::to_string(t));
      return 0;
    });
    FAIL("expected a TrialError");
  } catch (const TrialError& e) {
    CHECK(e.trial() == 17);
    CHECK(std::string(e.what()) == "trial 17: boom 17");
  }
}

TEST_CASE("run_paired: a data-ignoring learner is always exactly replicable") {
  auto pc = base_config();
  pc.learner = constant_learner(Hypothesis::labeling({-1})).at(0.1, 0.1);
  auto rep = run_paired(pc);
  CHECK(rep.exact_equal.k == pc.n_trials);
  CHECK(rep.exact_equal.ci().hi == 1.0);
  CHECK(rep.exact_equal.ci().lo > 0.998);
  CHECK(rep.approx_far.k == 0);
  CHECK(rep.samples_labeled == 2 * pc.n_trials);
  CHECK(rep.samples_shared == 0);
}

TEST_CASE("run_paired: a fresh coin that ignores r replicates about half the time") {
  auto rep = run_paired(base_config());
  const auto ci = rep.exact_equal.ci();
  CHECK(ci.lo <= 0.5);
  CHECK(ci.hi >= 0.5);
  CHECK(rep.pointwise[0].k + rep.exact_equal.k == rep.n_trials);
  CHECK(rep.opt == 0.5);
  for (const auto& t : rep.trials) CHECK(t.proper);
}

TEST_CASE("run_paired: identical reports across worker counts") {
  auto pc = base_config();
  pc.task = coins({0.3, -0.3, 0.1});
  pc.learner = basic_pointwise(erm_finite_learner(3), {0.2, 0.2, 0.4, 4});
  pc.points = {0, 1, 2};
  pc.n_trials = 200;
  auto a = run_paired(pc);
  pc.workers = 4;
  auto b = run_paired(pc);
  REQUIRE(a.trials.size() == b.trials.size());
  for (std::size_t t = 0; t < a.trials.size(); ++t) {
    CHECK(a.trials[t].disagree == b.trials[t].disagree);
    CHECK(a.trials[t].distance == b.trials[t].distance);
    CHECK(a.trials[t].excess1 == b.trials[t].excess1);
    CHECK_FALSE(a.trials[t].proper);  // Aggregate outputs
  }
  CHECK(a.excess_p90 == b.excess_p90);
  CHECK_THROWS_AS(run_paired(PairedTrialConfig{}), std::invalid_argument);
}

TEST_CASE("run_grid: cell order, seeding, and monotone disagreement along rho") {
  const std::vector<GridAxis> axes{{"rho", {0.4, 0.2, 0.1}}};
  auto build = [](const std::vector<double>& v) {
    PairedTrialConfig pc;
    pc.task = coins({0.0});
    // Fair-coin base, one sample per block: disagreement ~ 1/sqrt(T).
    pc.learner = basic_pointwise_blocks(erm_finite_learner(1), 1, PointwiseParams{0.1, 0.1, v[0], 4}.T());
    pc.n_trials = 1500;
    pc.points = {0};
    pc.workers = 1;
    return pc;
  };
  auto cells = run_grid(axes, 77, build);
  REQUIRE(cells.size() == 3);
  CHECK(cells[0].values == std::vector<double>{0.4});
  CHECK(cells[0].report.seed == SharedRandomness(77).child("cell", 0).key());
  CHECK(cells[2].report.seed == SharedRandomness(77).child("cell", 2).key());
  for (std::size_t i = 1; i < cells.size(); ++i) {
    // Nonincreasing up to CI overlap.
    CHECK(cells[i].report.pointwise[0].ci().lo <= cells[i - 1].report.pointwise[0].ci().hi);
  }
  CHECK(cells[2].report.pointwise[0].p() < cells[0].report.pointwise[0].p());

  auto two = run_grid({{"a", {1, 2}}, {"b", {10, 20, 30}}}, 1, [](const std::vector<double>&) {
    PairedTrialConfig pc;
    pc.task = coins({0.0});
    pc.learner = constant_learner(Hypothesis::plus()).at(0.1, 0.1);
    pc.n_trials = 1;
    return pc;
  });
  REQUIRE(two.size() == 6);
  CHECK(two[1].values == std::vector<double>{1, 20});
  CHECK(two[3].values == std::vector<double>{2, 10});
  CHECK_THROWS_AS(run_grid({}, 1, build), std::invalid_argument);
}
