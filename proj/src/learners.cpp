#include "replilearn/learners.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "replilearn/eval.hpp"

namespace replilearn {

Hypothesis Learner::operator()(const Dataset& S, const SharedRandomness& r) const {
  if (S.size() < sample_need)
    throw std::invalid_argument(name + ": dataset of " + std::to_string(S.size()) + " < sample_need " +
                                std::to_string(sample_need));
  if (S.size() == sample_need) return fit(S, r);
  return fit(S.split(sample_need).first, r);
}

Learner BaseLearner::at(double alpha, double beta) const { return {name, need(alpha, beta), fit}; }

std::uint64_t ceil_count(double x) {
  if (!(x > 0.0)) return 0;
  if (x >= 0x1.0p63) throw std::overflow_error("sample count overflows 64 bits");
  return static_cast<std::uint64_t>(std::ceil(x * (1.0 - 1e-12)));
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("sample budget overflows 64 bits");
  return r;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("sample budget overflows 64 bits");
  return r;
}

Hypothesis erm_finite(const Dataset& S, std::size_t d) {
  if (!S.domain().finite || S.domain().d != d) throw std::invalid_argument("erm_finite: domain mismatch");
  std::vector<std::int8_t> labels(d, 1);
  if (S.empty()) return Hypothesis::labeling(std::move(labels));
  Tally t = S.tally();
  for (std::size_t i = 0; i < d; ++i) labels[i] = t.minus[i] > t.plus[i] ? -1 : 1;
  return Hypothesis::labeling(std::move(labels));
}

namespace {
// (t, errors) for every candidate cut in increasing order.
template <class F>
void scan_cuts(const Dataset& S, F&& visit) {
  if (S.empty()) throw std::invalid_argument("erm_threshold: empty dataset");
  if (S.domain().finite) throw std::invalid_argument("erm_threshold: needs a real domain");
  auto ex = S.examples();
  std::sort(ex.begin(), ex.end(), [](const Example& a, const Example& b) { return a.x < b.x; });
  const double lo = S.domain().lo, hi = S.domain().hi;
  std::uint64_t err = 0;  // t = lo: everything above lo is +1
  for (const auto& e : ex) err += (e.x > lo ? e.y < 0 : e.y > 0);
  visit(lo, err);
  std::size_t i = 0;
  // Skip points at lo (already labelled -1 by t = lo).
  while (i < ex.size() && ex[i].x <= lo) ++i;
  while (i < ex.size()) {
    std::size_t j = i;
    const double x = ex[i].x;
    for (; j < ex.size() && ex[j].x == x; ++j) err += ex[j].y > 0 ? 1 : -1;  // now labelled -1
    double t = j < ex.size() ? x + (ex[j].x - x) / 2.0 : hi;
    visit(std::min(t, hi), err);
    i = j;
  }
  if (ex.empty() || ex.back().x < hi) visit(hi, err);
}
}  // namespace

Hypothesis erm_threshold(const Dataset& S) {
  double best_t = 0.0;
  std::uint64_t best = UINT64_MAX;
  scan_cuts(S, [&](double t, std::uint64_t err) {
    if (err < best) {
      best = err;
      best_t = t;
    }
  });
  return Hypothesis::threshold(best_t);
}

double erm_threshold_error(const Dataset& S) {
  std::uint64_t best = UINT64_MAX;
  scan_cuts(S, [&](double, std::uint64_t err) { best = std::min(best, err); });
  return static_cast<double>(best) / static_cast<double>(S.size());
}

std::uint64_t sample_need_agnostic(double d, double alpha, double beta, const Constants& c) {
  if (!(alpha > 0 && alpha < 1) || !(beta > 0 && beta < 1))
    throw std::invalid_argument("sample_need_agnostic: alpha, beta must lie in (0,1)");
  return ceil_count(c.c_agnostic * (d + std::log(1.0 / beta)) / (alpha * alpha));
}

BaseLearner erm_finite_learner(std::size_t d, const Constants& c) {
  return {"erm_finite",
          [d, c](double a, double b) { return sample_need_agnostic(static_cast<double>(d), a, b, c); },
          [d](const Dataset& S, const SharedRandomness&) { return erm_finite(S, d); }};
}

BaseLearner erm_threshold_learner(const Constants& c) {
  return {"erm_threshold", [c](double a, double b) { return sample_need_agnostic(1.0, a, b, c); },
          [](const Dataset& S, const SharedRandomness&) { return erm_threshold(S); }};
}

BaseLearner constant_learner(Hypothesis h) {
  return {"constant", [](double, double) -> std::uint64_t { return 1; },
          [h](const Dataset&, const SharedRandomness&) { return h; }};
}

}  // namespace replilearn
