#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace replilearn {

// xoshiro256** seeded through splitmix64. Satisfies UniformRandomBitGenerator
// so it can drive the <random> distributions directly.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  // 53-bit uniform on [0, 1).
  double uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  // Unbiased integer in [0, n), n >= 1 (Lemire's multiply-shift with rejection).
  std::uint64_t below(std::uint64_t n);
  bool bernoulli(double p) { return uniform01() < p; }
  std::uint64_t binomial(std::uint64_t n, double p);
  double gamma(double shape);

 private:
  std::uint64_t s_[4];
};

std::uint64_t splitmix64(std::uint64_t& state);
std::uint64_t mix64(std::uint64_t x);

struct PathElement {
  std::string label;
  std::uint64_t index = 0;
  bool operator==(const PathElement&) const = default;
};

// A named node in the substream tree. Two objects with the same (root_seed, path)
// produce the same stream; the object is a cheap value and is what paired runs share.
class SharedRandomness {
 public:
  explicit SharedRandomness(std::uint64_t root_seed = 0);

  SharedRandomness child(std::string_view label, std::uint64_t index = 0) const;
  // ("data", t, 1) style paths: label with two indices.
  SharedRandomness child(std::string_view label, std::uint64_t i, std::uint64_t j) const {
    return child(label, i).child("", j);
  }

  Rng stream() const { return Rng(key_); }
  std::uint64_t key() const { return key_; }
  std::uint64_t root_seed() const { return root_; }
  const std::vector<PathElement>& path() const { return path_; }
  std::string describe() const;

  bool operator==(const SharedRandomness& o) const { return root_ == o.root_ && path_ == o.path_; }

 private:
  std::uint64_t root_;
  std::uint64_t key_;
  std::vector<PathElement> path_;
};

}  // namespace replilearn
