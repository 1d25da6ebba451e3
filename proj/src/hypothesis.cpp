#include "replilearn/hypothesis.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace replilearn {

bool Aggregate::operator==(const Aggregate& o) const {
  if (cut != o.cut) return false;
  if (subs == o.subs) return true;
  return *subs == *o.subs;
}

Hypothesis::Hypothesis(Variant v) : v_(std::move(v)) {
  if (auto* a = std::get_if<Aggregate>(&v_)) {
    if (!a->subs || a->subs->empty()) throw std::invalid_argument("Aggregate needs subs");
    if (!(a->cut >= 0.0 && a->cut <= 1.0)) throw std::invalid_argument("Aggregate cut outside [0,1]");
  }
  if (auto* f = std::get_if<FiniteLabeling>(&v_)) {
    for (auto l : f->labels)
      if (l != 1 && l != -1) throw std::invalid_argument("labels must be +-1");
  }
}

Hypothesis Hypothesis::aggregate(std::vector<Hypothesis> subs, double cut) {
  return Aggregate{std::make_shared<const std::vector<Hypothesis>>(std::move(subs)), cut};
}

namespace {
struct Eval {
  double x;
  int operator()(const FiniteLabeling& f) const {
    auto i = static_cast<std::size_t>(x);
    if (i >= f.labels.size()) throw std::out_of_range("point index outside labeling");
    return f.labels[i];
  }
  int operator()(const Threshold& t) const { return x > t.t ? 1 : -1; }
  int operator()(const ConstantPlus&) const { return 1; }
  int operator()(const ConstantMinus&) const { return -1; }
  int operator()(const Aggregate& a) const {
    std::size_t plus = 0;
    for (const auto& h : *a.subs) plus += h(x) > 0;
    return static_cast<double>(plus) / static_cast<double>(a.subs->size()) > a.cut ? 1 : -1;
  }
};
}  // namespace

int Hypothesis::operator()(double x) const { return std::visit(Eval{x}, v_); }
int Hypothesis::at_index(std::size_t i) const { return std::visit(Eval{static_cast<double>(i)}, v_); }

bool Hypothesis::valid_for(const Domain& dom) const {
  struct V {
    const Domain& dom;
    bool operator()(const FiniteLabeling& f) const { return dom.finite && f.labels.size() == dom.d; }
    bool operator()(const Threshold&) const { return !dom.finite; }
    bool operator()(const ConstantPlus&) const { return true; }
    bool operator()(const ConstantMinus&) const { return true; }
    bool operator()(const Aggregate& a) const {
      return std::all_of(a.subs->begin(), a.subs->end(), [&](const Hypothesis& h) { return h.valid_for(dom); });
    }
  };
  return std::visit(V{dom}, v_);
}

std::vector<double> Hypothesis::breakpoints() const {
  std::vector<double> out;
  if (auto* t = std::get_if<Threshold>(&v_)) out.push_back(t->t);
  if (auto* a = std::get_if<Aggregate>(&v_)) {
    for (const auto& h : *a->subs) {
      auto b = h.breakpoints();
      out.insert(out.end(), b.begin(), b.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
  return out;
}

std::vector<std::int8_t> Hypothesis::labels_on(std::size_t d) const {
  if (auto* f = std::get_if<FiniteLabeling>(&v_)) {
    if (f->labels.size() != d) throw std::invalid_argument("labeling size mismatch");
    return f->labels;
  }
  if (is<ConstantPlus>()) return std::vector<std::int8_t>(d, 1);
  if (is<ConstantMinus>()) return std::vector<std::int8_t>(d, -1);
  if (auto* a = std::get_if<Aggregate>(&v_)) {
    std::vector<std::uint32_t> plus(d, 0);
    for (const auto& h : *a->subs) {
      auto l = h.labels_on(d);
      for (std::size_t i = 0; i < d; ++i) plus[i] += l[i] > 0;
    }
    std::vector<std::int8_t> out(d);
    const double n = static_cast<double>(a->subs->size());
    for (std::size_t i = 0; i < d; ++i) out[i] = static_cast<double>(plus[i]) / n > a->cut ? 1 : -1;
    return out;
  }
  throw std::invalid_argument("threshold hypothesis on a finite domain");
}

std::string Hypothesis::to_string() const {
  struct S {
    std::string operator()(const FiniteLabeling& f) const {
      std::string s = "labeling(";
      for (auto l : f.labels) s += l > 0 ? '+' : '-';
      return s + ")";
    }
    std::string operator()(const Threshold& t) const {
      char buf[48];
      std::snprintf(buf, sizeof buf, "threshold(%.17g)", t.t);
      return buf;
    }
    std::string operator()(const ConstantPlus&) const { return "plus"; }
    std::string operator()(const ConstantMinus&) const { return "minus"; }
    std::string operator()(const Aggregate& a) const {
      char buf[48];
      std::snprintf(buf, sizeof buf, "aggregate(%zu,%.17g)", a.subs->size(), a.cut);
      return buf;
    }
  };
  return std::visit(S{}, v_);
}

}  // namespace replilearn
