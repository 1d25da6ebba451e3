#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "replilearn/dataset.hpp"
#include "replilearn/eval.hpp"
#include "replilearn/hypothesis.hpp"
#include "replilearn/random.hpp"
#include "replilearn/task.hpp"

using namespace replilearn;

namespace {
ThresholdTask uniform_task(double t, double eta) { return {PiecewiseLinearCdf::uniform(0.0, 1.0), t, eta}; }

std::vector<Hypothesis> all_labelings(std::size_t d) {
  std::vector<Hypothesis> out;
  for (std::uint64_t mask = 0; mask < (1ULL << d); ++mask) {
    std::vector<std::int8_t> l(d);
    for (std::size_t i = 0; i < d; ++i) l[i] = (mask >> i) & 1 ? 1 : -1;
    out.push_back(Hypothesis::labeling(l));
  }
  return out;
}

Hypothesis random_real_hypothesis(Rng& g) {
  switch (g.below(4)) {
    case 0:
      return Hypothesis::threshold(g.uniform(-0.1, 1.1));
    case 1:
      return g.below(2) ? Hypothesis::plus() : Hypothesis::minus();
    default: {
      std::vector<Hypothesis> subs;
      const auto k = 1 + g.below(6);
      for (std::uint64_t i = 0; i < k; ++i) subs.push_back(Hypothesis::threshold(g.uniform01()));
      return Hypothesis::aggregate(subs, g.uniform01());
    }
  }
}
}  // namespace

TEST_CASE("shared randomness: identical paths give identical streams, distinct paths differ") {
  SharedRandomness a(42), b(42);
  auto sa = a.child("pointwise").child("cut").stream();
  auto sb = b.child("pointwise").child("cut").stream();
  for (int i = 0; i < 100; ++i) CHECK(sa() == sb());
  CHECK(a.child("x", 1).key() != a.child("x", 2).key());
  CHECK(a.child("x", 1).key() != a.child("y", 1).key());
  CHECK(SharedRandomness(1).key() != SharedRandomness(2).key());
  CHECK(a.child("data", 3, 1).key() != a.child("data", 3, 2).key());
  CHECK(a.child("data", 3, 1).describe() == "42/data:3/:1");
}

TEST_CASE("rng: frozen first outputs and bounded draws") {
  // Frozen values: any change to the generator or key derivation shows up here.
  Rng g(0);
  CHECK(g() == 11091344671253066420ULL);
  CHECK(g() == 13793997310169335082ULL);
  CHECK(SharedRandomness(42).child("pointwise").child("cut").key() == 8384512033186957777ULL);
  CHECK(SharedRandomness(42).child("pointwise").child("cut").stream().uniform01() == 0.56139755916339651);
  Rng u(7);
  for (int i = 0; i < 10000; ++i) {
    double x = u.uniform01();
    CHECK((x >= 0.0 && x < 1.0));
    CHECK(u.below(3) < 3);
  }
}

TEST_CASE("rng: independent substreams are uncorrelated (smoke)") {
  SharedRandomness root(9);
  auto s1 = root.child("a").stream(), s2 = root.child("b").stream();
  const int N = 200000;
  double sxy = 0, sx = 0, sy = 0;
  for (int i = 0; i < N; ++i) {
    double x = s1.uniform01(), y = s2.uniform01();
    sxy += x * y;
    sx += x;
    sy += y;
  }
  double cov = sxy / N - (sx / N) * (sy / N);
  CHECK(std::abs(cov / (1.0 / 12.0)) < 4.0 / std::sqrt(N));
}

TEST_CASE("sample: examples from the contract") {
  SharedRandomness r(1);
  auto S = sample(FiniteLabeledDistribution({1.0}), 3, r);
  for (const auto& e : S.examples()) CHECK(e.y == 1);
  CHECK(S.size() == 3);

  auto T = sample(uniform_task(0.5, 0.0), 1, r);
  auto ex = T.examples();
  REQUIRE(ex.size() == 1);
  CHECK(ex[0].y == (ex[0].x > 0.5 ? 1 : -1));

  // Counts mode (n above the explicit limit): mean label of point 0.
  auto B = sample(FiniteLabeledDistribution({0.4, -0.4}), 100000, r);
  auto t = B.tally();
  double mean0 = (double(t.plus[0]) - double(t.minus[0])) / double(t.plus[0] + t.minus[0]);
  CHECK(std::abs(mean0 - 0.4) < 0.01);
  CHECK(t.total() == 100000);

  auto E = sample(FiniteLabeledDistribution({0.0}), 0, r);
  CHECK(E.empty());
}

TEST_CASE("sample: deterministic given rng") {
  SharedRandomness r(5);
  auto task = uniform_task(0.3, 0.1);
  auto a = sample(task, 1000, r.child("s")).examples();
  auto b = sample(task, 1000, r.child("s")).examples();
  CHECK(a == b);
  auto A = sample(FiniteLabeledDistribution({0.2, 0.5, -0.3}), 1000000, r.child("f"));
  auto B = sample(FiniteLabeledDistribution({0.2, 0.5, -0.3}), 1000000, r.child("f"));
  CHECK(A.tally().plus == B.tally().plus);
}

TEST_CASE("true_error / opt_error / classification_distance examples") {
  FiniteLabeledDistribution perfect({1.0, 1.0});
  CHECK(true_error(perfect, Hypothesis::labeling({1, 1})) == 0.0);
  FiniteLabeledDistribution coin({0.0});
  CHECK(true_error(coin, Hypothesis::labeling({1})) == doctest::Approx(0.5));
  CHECK(true_error(coin, Hypothesis::minus()) == doctest::Approx(0.5));
  auto tt = uniform_task(0.37, 0.1);
  CHECK(true_error(tt, Hypothesis::threshold(0.47)) == doctest::Approx(0.18).epsilon(1e-12));

  CHECK(opt_error(FiniteLabeledDistribution({1.0, -1.0})) == 0.0);
  CHECK(opt_error(FiniteLabeledDistribution({0.4, -0.4})) == doctest::Approx(0.3));
  CHECK(opt_error(uniform_task(0.5, 0.05)) == 0.05);

  auto h = Hypothesis::threshold(0.2);
  CHECK(classification_distance(tt, h, h) == 0.0);
  CHECK(classification_distance(tt, Hypothesis::threshold(0.2), Hypothesis::threshold(0.5)) == doctest::Approx(0.3));
  FiniteLabeledDistribution four({0, 0, 0, 0});
  CHECK(classification_distance(four, Hypothesis::labeling({1, 1, -1, 1}), Hypothesis::labeling({1, 1, 1, 1})) ==
        doctest::Approx(0.25));
}

TEST_CASE("opt over labelings equals the brute-force minimum; every labeling is >= opt") {
  Rng g(11);
  for (std::size_t d = 1; d <= 12; ++d) {
    std::vector<double> p(d), m(d);
    double tot = 0;
    for (std::size_t i = 0; i < d; ++i) {
      p[i] = g.uniform(-1, 1);
      m[i] = g.uniform01() + 0.01;
      tot += m[i];
    }
    for (auto& w : m) w /= tot;
    double drift = 1.0;
    for (auto w : m) drift -= w;
    m[0] += drift;
    FiniteLabeledDistribution task(p, m);
    double best = 1.0;
    for (const auto& h : all_labelings(d)) {
      double e = true_error(task, h);
      CHECK(e >= opt_error(task) - 1e-12);
      best = std::min(best, e);
    }
    CHECK(best == doctest::Approx(opt_error(task)).epsilon(1e-12));
  }
}

TEST_CASE("threshold true error: closed form agrees with cell evaluation") {
  ThresholdTask t({{0.0, 0.3, 1.0}, {0.0, 0.6, 1.0}}, 0.25, 0.07);
  for (double th : {0.0, 0.1, 0.25, 0.3, 0.77, 1.0}) {
    auto h = Hypothesis::threshold(th);
    auto agg = Hypothesis::aggregate({h}, 0.5);  // same function, evaluated on cells
    CHECK(true_error(t, h) == doctest::Approx(true_error(t, agg)).epsilon(1e-12));
  }
  CHECK(true_error(t, Hypothesis::plus()) == doctest::Approx(0.07 + 0.86 * t.cdf(0.25)));
}

TEST_CASE("classification distance: symmetry and triangle inequality on random triples") {
  Rng g(3);
  auto tt = ThresholdTask({{0.0, 0.5, 1.0}, {0.0, 0.2, 1.0}}, 0.5, 0.0);
  FiniteLabeledDistribution fin({0, 0, 0, 0, 0}, {0.1, 0.2, 0.3, 0.25, 0.15});
  for (int k = 0; k < 1000; ++k) {
    if (k % 2) {
      Hypothesis a = random_real_hypothesis(g), b = random_real_hypothesis(g), c = random_real_hypothesis(g);
      double ab = classification_distance(tt, a, b), bc = classification_distance(tt, b, c),
             ac = classification_distance(tt, a, c);
      CHECK(ab == doctest::Approx(classification_distance(tt, b, a)));
      CHECK(ac <= ab + bc + 1e-12);
    } else {
      auto lab = all_labelings(5);
      const auto& a = lab[g.below(32)];
      const auto& b = lab[g.below(32)];
      auto c = Hypothesis::aggregate({lab[g.below(32)], lab[g.below(32)], lab[g.below(32)]}, g.uniform01());
      double ab = classification_distance(fin, a, b), bc = classification_distance(fin, b, c),
             ac = classification_distance(fin, a, c);
      CHECK(ab == doctest::Approx(classification_distance(fin, b, a)));
      CHECK(ac <= ab + bc + 1e-12);
    }
  }
}

TEST_CASE("empirical error / distance examples") {
  auto dom = Domain::points(2);
  auto S = Dataset::from_examples(dom, {{0, 1}, {1, -1}, {0, 1}, {1, 1}});
  CHECK(empirical_error(S, Hypothesis::labeling({1, 1})) == doctest::Approx(0.25));
  CHECK(empirical_error(S, Hypothesis::labeling({1, -1})) == doctest::Approx(0.25));
  auto S2 = Dataset::from_examples(dom, {{0, 1}, {1, -1}});
  CHECK(empirical_error(S2, Hypothesis::labeling({1, -1})) == 0.0);
  CHECK(empirical_distance(S, Hypothesis::plus(), Hypothesis::plus()) == 0.0);
  CHECK_THROWS(empirical_error(Dataset::from_examples(dom, {}), Hypothesis::plus()));

  auto R = Dataset::from_examples(Domain::interval(0, 1), {{0.0, -1}, {0.2, -1}, {0.5, 1}, {0.8, 1}});
  CHECK(empirical_error(R, Hypothesis::threshold(0.0)) == doctest::Approx(0.25));  // x = lo is labelled -1
  CHECK(empirical_error(R, Hypothesis::threshold(0.5)) == doctest::Approx(0.25));  // strict: 0.5 -> -1
  CHECK(empirical_error(R, Hypothesis::threshold(0.3)) == 0.0);
}

TEST_CASE("empirical error is unbiased for the true error (N = 1e5)") {
  const std::uint64_t N = 100000;
  const double tol = 3 * std::sqrt(0.25 / N);
  SharedRandomness r(77);
  FiniteLabeledDistribution fin({0.4, -0.4, 0.1, 0.9}, {0.1, 0.2, 0.3, 0.4});
  auto S = sample(fin, N, r.child("fin"));
  for (const auto& h : all_labelings(4)) CHECK(std::abs(empirical_error(S, h) - true_error(fin, h)) < tol);

  ThresholdTask tt({{0.0, 0.5, 1.0}, {0.0, 0.8, 1.0}}, 0.4, 0.1);
  auto T = sample(tt, N, r.child("thr"));
  Rng g(5);
  for (int k = 0; k < 40; ++k) {
    auto h = random_real_hypothesis(g);
    CHECK(std::abs(empirical_error(T, h) - true_error(tt, h)) < tol);
  }
  // Lazy interval-count realization at a size far above the explicit limit.
  auto big = sample(tt, std::uint64_t{1} << 34, r.child("big"));
  std::vector<Hypothesis> hs;
  for (int k = 0; k < 40; ++k) hs.push_back(random_real_hypothesis(g));
  auto errs = empirical_errors(big, hs);
  for (std::size_t k = 0; k < hs.size(); ++k) CHECK(std::abs(errs[k] - true_error(tt, hs[k])) < 1e-4);
}

TEST_CASE("lazy dataset: partitions, coarsening, and misuse") {
  SharedRandomness r(8);
  auto tt = uniform_task(0.37, 0.1);
  auto S = sample(tt, std::uint64_t{1} << 30, r);
  auto parts = S.blocks(std::uint64_t{1} << 28, 3);
  CHECK(parts.size() == 3);
  CHECK(parts[1].size() == (std::uint64_t{1} << 28));
  auto again = S.blocks(std::uint64_t{1} << 28, 3);
  auto t1 = parts[0].tally({0.2, 0.6});
  auto t2 = again[0].tally({0.2, 0.6});
  CHECK(t1.plus == t2.plus);
  // Coarser query on the same cells is consistent.
  auto t3 = parts[0].tally({0.6});
  CHECK(t3.plus[1] == t1.plus[1] + t1.plus[2]);
  CHECK(t3.total() == parts[0].size());
  CHECK_THROWS_AS(parts[0].tally({0.5}), std::logic_error);
  CHECK_THROWS_AS(S.blocks(5, 2), std::logic_error);
  CHECK_THROWS_AS(parts[0].split(3), std::logic_error);
  // Whole-dataset tally sums all parts including the unused remainder.
  CHECK(S.tally({0.2, 0.6}).total() == S.size());

  auto E = Dataset::from_examples(Domain::points(3), {{0, 1}, {1, 1}, {2, -1}, {2, -1}});
  auto [a, b] = E.split(1);
  CHECK(a.examples() == std::vector<Example>{{0, 1}});
  CHECK(b.size() == 3);
  CHECK_THROWS(E.split(5));
}

TEST_CASE("lazy order statistics follow the uniform order-statistic law") {
  // E[U_(k)] = k/(n+1), sd ~ sqrt(k(n-k+1))/(n+1)^{1.5}
  auto tt = uniform_task(0.5, 0.0);
  const std::uint64_t n = std::uint64_t{1} << 24;
  const std::uint64_t k = n / 4;
  double sum = 0;
  const int reps = 400;
  for (int i = 0; i < reps; ++i) {
    auto S = sample(tt, n, SharedRandomness(100 + i));
    sum += S.order_statistics({k})[0];
  }
  double mean = k / double(n + 1);
  double sd = std::sqrt(double(k) * double(n - k + 1)) / std::pow(double(n + 1), 1.5);
  CHECK(std::abs(sum / reps - mean) < 4 * sd / std::sqrt(reps));

  auto small = Dataset::from_examples(Domain::interval(0, 11), {{3, 1}, {1, 1}, {2, 1}});
  CHECK(small.order_statistics({1, 3}) == std::vector<double>{1, 3});
}

TEST_CASE("hypothesis basics") {
  auto agg = Hypothesis::aggregate({Hypothesis::threshold(0.2), Hypothesis::threshold(0.6)}, 0.5);
  CHECK(agg(0.1) == -1);
  CHECK(agg(0.5) == -1);  // mean 0.5 is not > 0.5
  CHECK(agg(0.7) == 1);
  CHECK(agg.breakpoints() == std::vector<double>{0.2, 0.6});
  CHECK_FALSE(agg.proper());
  CHECK_THROWS(Hypothesis::aggregate({}, 0.5));
  CHECK_THROWS(Hypothesis::aggregate({Hypothesis::plus()}, 1.5));
  CHECK(Hypothesis::threshold(0.3) == Hypothesis::threshold(0.3));
  CHECK_FALSE(Hypothesis::threshold(0.3) == Hypothesis::plus());
  CHECK_FALSE(Hypothesis::labeling({1}).valid_for(Domain::interval(0, 1)));
  CHECK_THROWS(true_error(FiniteLabeledDistribution({0.0, 0.0}), Hypothesis::threshold(0.5)));
}
