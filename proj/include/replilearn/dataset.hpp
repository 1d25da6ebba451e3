#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "replilearn/random.hpp"
#include "replilearn/task.hpp"

namespace replilearn {

struct Example {
  double x;  // point index for finite tasks
  int y;     // -1 or +1
  bool operator==(const Example&) const = default;
};

// Label counts at representative points. For finite domains `at` is 0..d-1.
// For real domains at[0] = lo stands for the point {lo} and at[j] (j >= 1)
// stands for the cell (b_{j-1}, b_j], with b_0 = lo and b_J = hi; any
// hypothesis whose breakpoints are among the b_j is constant on every cell,
// so evaluating it at `at` is exact.
struct Tally {
  std::vector<double> at;
  std::vector<std::uint64_t> plus, minus;
  std::uint64_t total() const;
};

namespace detail {
struct DatasetNode;
}

// An iid sample, or an explicit list of examples.
//
// Sampled datasets are realized lazily and only as far as the queries made on
// them require: small samples become explicit example lists, large ones become
// exact sufficient statistics (per-point label counts for finite tasks; label
// counts on the cells cut by the queried thresholds, or a set of order
// statistics, for threshold tasks). This is exact in distribution, and it is
// what makes learner budgets of 1e9+ samples per run simulable. A large
// threshold sample realized on one set of cuts can later be queried on any
// subset of them; other queries throw std::logic_error.
//
// Realization mutates shared internal state: a Dataset (and its parts) must
// not be queried from two threads at once. Distinct datasets are independent.
class Dataset {
 public:
  static constexpr std::uint64_t kMaxSize = std::uint64_t{1} << 53;
  static constexpr std::uint64_t kExplicitFinite = 256;
  static constexpr std::uint64_t kExplicitReal = std::uint64_t{1} << 22;

  Dataset();
  static Dataset from_examples(const Domain& dom, std::vector<Example> examples);
  static Dataset sample(std::shared_ptr<const Task> task, std::uint64_t n, const SharedRandomness& rng);

  std::uint64_t size() const;
  bool empty() const { return size() == 0; }
  const Domain& domain() const;
  const Task* task() const;

  // Disjoint consecutive parts with the given sizes (sum <= size(); any
  // remainder is left unused). Repeating the same partition returns the same parts.
  std::vector<Dataset> partition(const std::vector<std::uint64_t>& sizes) const;
  std::vector<Dataset> blocks(std::uint64_t block_size, std::uint64_t count) const {
    return partition(std::vector<std::uint64_t>(count, block_size));
  }
  std::pair<Dataset, Dataset> split(std::uint64_t k) const;

  // On-demand view of `count` consecutive blocks of `block_size`: blocks are
  // built when indexed and not retained, so millions of them cost O(1) memory.
  // The parent can afterwards only be sliced the same way again, or tallied
  // (which re-derives every block: exact, but costs a second realization).
  class Slices {
   public:
    Dataset operator[](std::uint64_t i) const;
    std::uint64_t size() const { return count_; }
    std::uint64_t block_size() const { return block_; }

   private:
    friend class Dataset;
    std::shared_ptr<detail::DatasetNode> parent_;
    std::uint64_t block_ = 0, count_ = 0;
  };
  Slices slices(std::uint64_t block_size, std::uint64_t count) const;

  // Finite domains: per-point counts. Real domains: counts on the cells cut by
  // `cuts` (values are clamped into [lo, hi]).
  Tally tally(const std::vector<double>& cuts = {}) const;
  // Sorted x values at the given 1-based ranks (ranks must be increasing).
  std::vector<double> order_statistics(const std::vector<std::uint64_t>& ranks) const;
  // All examples in order; realizes explicitly. Throws if the dataset is too
  // large for that or already realized as statistics.
  std::vector<Example> examples() const;
  bool can_materialize() const;

 private:
  explicit Dataset(std::shared_ptr<detail::DatasetNode> n) : node_(std::move(n)) {}
  std::shared_ptr<detail::DatasetNode> node_;
};

Dataset sample(const Task& task, std::uint64_t n, const SharedRandomness& rng);

}  // namespace replilearn
