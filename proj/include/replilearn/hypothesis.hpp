#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "replilearn/task.hpp"

namespace replilearn {

class Hypothesis;

struct FiniteLabeling {
  std::vector<std::int8_t> labels;
  bool operator==(const FiniteLabeling&) const = default;
};
// x -> +1 iff x > t
struct Threshold {
  double t;
  bool operator==(const Threshold&) const = default;
};
struct ConstantPlus {
  bool operator==(const ConstantPlus&) const = default;
};
struct ConstantMinus {
  bool operator==(const ConstantMinus&) const = default;
};
// x -> +1 iff mean over subs of (1+h(x))/2 > cut
struct Aggregate {
  std::shared_ptr<const std::vector<Hypothesis>> subs;
  double cut;
  bool operator==(const Aggregate& o) const;
};

class Hypothesis {
 public:
  using Variant = std::variant<FiniteLabeling, Threshold, ConstantPlus, ConstantMinus, Aggregate>;

  Hypothesis() : v_(ConstantPlus{}) {}
  Hypothesis(Variant v);  // NOLINT(implicit)
  Hypothesis(FiniteLabeling v) : Hypothesis(Variant(std::move(v))) {}  // NOLINT(implicit)
  Hypothesis(Threshold v) : Hypothesis(Variant(v)) {}                  // NOLINT(implicit)
  Hypothesis(ConstantPlus v) : Hypothesis(Variant(v)) {}               // NOLINT(implicit)
  Hypothesis(ConstantMinus v) : Hypothesis(Variant(v)) {}              // NOLINT(implicit)
  Hypothesis(Aggregate v) : Hypothesis(Variant(std::move(v))) {}       // NOLINT(implicit)

  static Hypothesis labeling(std::vector<std::int8_t> labels) { return FiniteLabeling{std::move(labels)}; }
  static Hypothesis threshold(double t) { return Threshold{t}; }
  static Hypothesis plus() { return ConstantPlus{}; }
  static Hypothesis minus() { return ConstantMinus{}; }
  static Hypothesis aggregate(std::vector<Hypothesis> subs, double cut);

  const Variant& variant() const { return v_; }
  template <class T> bool is() const { return std::holds_alternative<T>(v_); }
  template <class T> const T& as() const { return std::get<T>(v_); }

  // Label of a finite point index (x is cast) or a real x.
  int operator()(double x) const;
  int at_index(std::size_t i) const;

  bool valid_for(const Domain& dom) const;
  // Finite/threshold/constant hypotheses (anything but Aggregate).
  bool proper() const { return !is<Aggregate>(); }
  // Sorted distinct threshold positions where the hypothesis can change value.
  std::vector<double> breakpoints() const;
  // Labels on points 0..d-1.
  std::vector<std::int8_t> labels_on(std::size_t d) const;
  std::string to_string() const;

  bool operator==(const Hypothesis& o) const { return v_ == o.v_; }

 private:
  Variant v_;
};

}  // namespace replilearn
