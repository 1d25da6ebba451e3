#include "replilearn/eval.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace replilearn {

namespace {

const FiniteLabeledDistribution* as_finite(const Task& t) { return std::get_if<FiniteLabeledDistribution>(&t); }

void check_valid(const Task& task, const Hypothesis& h) {
  if (!h.valid_for(domain_of(task))) throw std::invalid_argument("hypothesis not valid for task: " + h.to_string());
}

// Sorted cell bounds lo = b_0 < ... < b_J = hi containing the extra points.
std::vector<double> cell_bounds(const ThresholdTask& t, std::vector<double> extra) {
  for (double k : t.cdf.knots()) extra.push_back(k);
  extra.push_back(t.lo());
  extra.push_back(t.hi());
  for (double& x : extra) x = std::clamp(x, t.lo(), t.hi());
  std::sort(extra.begin(), extra.end());
  extra.erase(std::unique(extra.begin(), extra.end()), extra.end());
  return extra;
}

}  // namespace

std::vector<double> breakpoints_of(const std::vector<Hypothesis>& hyps) {
  std::vector<double> out;
  for (const auto& h : hyps) {
    auto b = h.breakpoints();
    out.insert(out.end(), b.begin(), b.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double true_error(const Task& task, const Hypothesis& h) {
  check_valid(task, h);
  if (const auto* f = as_finite(task)) {
    auto l = h.labels_on(f->d());
    double e = 0.0;
    for (std::size_t i = 0; i < f->d(); ++i) {
      double p = f->biases()[i];
      e += f->marginal()[i] * (l[i] < 0 ? (1.0 + p) / 2.0 : (1.0 - p) / 2.0);
    }
    return e;
  }
  const auto& t = std::get<ThresholdTask>(task);
  if (h.is<Threshold>()) {
    return t.noise + (1.0 - 2.0 * t.noise) * std::abs(t.cdf(h.as<Threshold>().t) - t.cdf(t.true_threshold));
  }
  auto extra = h.breakpoints();
  extra.push_back(t.true_threshold);
  auto b = cell_bounds(t, extra);
  double e = 0.0;
  for (std::size_t j = 1; j < b.size(); ++j) {
    double mass = t.cdf(b[j]) - t.cdf(b[j - 1]);
    bool truth_plus = b[j - 1] >= t.true_threshold;
    bool agrees = (h(b[j]) > 0) == truth_plus;
    e += mass * (agrees ? t.noise : 1.0 - t.noise);
  }
  return e;
}

double opt_error(const Task& task) {
  if (const auto* f = as_finite(task)) {
    double e = 0.0;
    for (std::size_t i = 0; i < f->d(); ++i) e += f->marginal()[i] * (1.0 - std::abs(f->biases()[i])) / 2.0;
    return e;
  }
  return std::get<ThresholdTask>(task).noise;
}

double excess_error(const Task& task, const Hypothesis& h) { return true_error(task, h) - opt_error(task); }

double classification_distance(const Task& task, const Hypothesis& h1, const Hypothesis& h2) {
  check_valid(task, h1);
  check_valid(task, h2);
  if (h1 == h2) return 0.0;
  if (const auto* f = as_finite(task)) {
    auto a = h1.labels_on(f->d()), b = h2.labels_on(f->d());
    double s = 0.0;
    for (std::size_t i = 0; i < f->d(); ++i) s += a[i] != b[i] ? f->marginal()[i] : 0.0;
    return s;
  }
  const auto& t = std::get<ThresholdTask>(task);
  if (h1.is<Threshold>() && h2.is<Threshold>())
    return std::abs(t.cdf(h1.as<Threshold>().t) - t.cdf(h2.as<Threshold>().t));
  auto b = cell_bounds(t, breakpoints_of({h1, h2}));
  double s = 0.0;
  for (std::size_t j = 1; j < b.size(); ++j)
    if (h1(b[j]) != h2(b[j])) s += t.cdf(b[j]) - t.cdf(b[j - 1]);
  return s;
}

std::vector<double> empirical_errors(const Dataset& S, const std::vector<Hypothesis>& hyps) {
  if (S.empty()) throw std::invalid_argument("empirical error on an empty dataset");
  for (const auto& h : hyps)
    if (!h.valid_for(S.domain())) throw std::invalid_argument("hypothesis not valid for dataset domain");
  Tally tl = S.tally(S.domain().finite ? std::vector<double>{} : breakpoints_of(hyps));
  const double n = static_cast<double>(S.size());
  std::vector<double> out;
  out.reserve(hyps.size());
  for (const auto& h : hyps) {
    std::uint64_t wrong = 0;
    if (S.domain().finite) {
      auto l = h.labels_on(S.domain().d);
      for (std::size_t j = 0; j < tl.at.size(); ++j) wrong += l[j] > 0 ? tl.minus[j] : tl.plus[j];
    } else {
      for (std::size_t j = 0; j < tl.at.size(); ++j) wrong += h(tl.at[j]) > 0 ? tl.minus[j] : tl.plus[j];
    }
    out.push_back(static_cast<double>(wrong) / n);
  }
  return out;
}

double empirical_error(const Dataset& S, const Hypothesis& h) { return empirical_errors(S, {h}).front(); }

std::vector<double> empirical_distance_matrix(const Dataset& S, const std::vector<Hypothesis>& hyps) {
  if (S.empty()) throw std::invalid_argument("empirical distance on an empty dataset");
  const std::size_t n = hyps.size();
  std::vector<double> out(n * n, 0.0);
  // Structurally equal pairs are at distance 0 without touching S.
  bool all_equal = true;
  for (std::size_t a = 1; a < n && all_equal; ++a) all_equal = hyps[a] == hyps[0];
  if (all_equal) return out;

  Tally tl = S.tally(S.domain().finite ? std::vector<double>{} : breakpoints_of(hyps));
  std::vector<std::vector<std::int8_t>> lab(n);
  for (std::size_t a = 0; a < n; ++a) {
    if (S.domain().finite) {
      lab[a] = hyps[a].labels_on(S.domain().d);
    } else {
      lab[a].resize(tl.at.size());
      for (std::size_t j = 0; j < tl.at.size(); ++j) lab[a][j] = static_cast<std::int8_t>(hyps[a](tl.at[j]));
    }
  }
  const double total = static_cast<double>(S.size());
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      std::uint64_t diff = 0;
      for (std::size_t j = 0; j < tl.at.size(); ++j)
        if (lab[a][j] != lab[b][j]) diff += tl.plus[j] + tl.minus[j];
      out[a * n + b] = out[b * n + a] = static_cast<double>(diff) / total;
    }
  return out;
}

double empirical_distance(const Dataset& S, const Hypothesis& h1, const Hypothesis& h2) {
  return empirical_distance_matrix(S, {h1, h2})[1];
}

}  // namespace replilearn
