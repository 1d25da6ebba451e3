#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "replilearn/learner.hpp"
#include "replilearn/stats.hpp"

namespace replilearn {

// A trial's failure, tagged with its index.
class TrialError : public std::runtime_error {
 public:
  TrialError(std::uint64_t trial, const std::string& what)
      : std::runtime_error("trial " + std::to_string(trial) + ": " + what), trial_(trial) {}
  std::uint64_t trial() const { return trial_; }

 private:
  std::uint64_t trial_;
};

unsigned default_workers();

// f(t) for t = 0..n-1 on up to `workers` threads; results in trial order.
// The lowest-index failure is rethrown as a TrialError.
template <class T, class F>
std::vector<T> run_trials(std::uint64_t n, unsigned workers, F&& f) {
  std::vector<std::optional<T>> slots(n);
  std::vector<std::exception_ptr> errs(n);
  std::atomic<std::uint64_t> next{0};
  auto work = [&] {
    for (std::uint64_t t; (t = next.fetch_add(1)) < n;) {
      try {
        slots[t].emplace(f(t));
      } catch (...) {
        errs[t] = std::current_exception();
      }
    }
  };
  if (workers == 0) workers = default_workers();
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, std::max<std::uint64_t>(n, 1)));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (std::uint64_t t = 0; t < n; ++t) {
    if (!errs[t]) continue;
    try {
      std::rethrow_exception(errs[t]);
    } catch (const std::exception& e) {
      throw TrialError(t, e.what());
    }
  }
  std::vector<T> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

struct PairedTrialConfig {
  std::shared_ptr<const Task> task;
  Learner learner;
  std::uint64_t n_trials = 1000;
  std::uint64_t seed = 0;
  std::vector<double> points;  // pointwise disagreement tracked at these x
  double gamma = 0.0;          // approx: count dist(h1, h2) > gamma
  double alpha = 0.0;          // accuracy: count excess_error(h1) > alpha
  unsigned workers = 0;

  void validate() const;
};

struct TrialRecord {
  std::vector<std::uint8_t> disagree;  // per tracked point
  double distance;
  bool equal;
  double excess1, excess2;
  bool proper;  // both outputs are class members (no Aggregate)
};

struct ReplicabilityReport {
  std::uint64_t n_trials = 0, seed = 0;
  std::uint64_t samples_labeled = 0, samples_shared = 0;
  double gamma = 0, alpha = 0, opt = 0;
  std::vector<double> points;
  std::vector<Estimate> pointwise;
  Estimate exact_equal;  // h1 == h2 structurally
  Estimate approx_far;   // dist(h1, h2) > gamma
  Estimate excess_over;  // excess_error(h1) > alpha
  double excess_p90 = 0;  // over both runs
  std::vector<TrialRecord> trials;

  // Tracked point with the most disagreements (first on ties); empty if none tracked.
  std::optional<std::size_t> worst_point() const;
};

// Trial t: r = ("r", t), S_1 = ("data", t, 1), S_2 = ("data", t, 2) under the
// root seed; h_j = A(S_j; r). Output depends only on the config.
ReplicabilityReport run_paired(const PairedTrialConfig& config);

struct GridAxis {
  std::string name;
  std::vector<double> values;
};
struct GridCell {
  std::vector<double> values;  // one per axis
  ReplicabilityReport report;
};
// Builds the config of one cell from its axis values; the harness overwrites
// its seed with ("cell", index) under the root seed.
using CellBuilder = std::function<PairedTrialConfig(const std::vector<double>& values)>;
std::vector<GridCell> run_grid(const std::vector<GridAxis>& axes, std::uint64_t root_seed, const CellBuilder& build);

}  // namespace replilearn
