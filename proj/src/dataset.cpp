#include "replilearn/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace replilearn {

std::uint64_t Tally::total() const {
  std::uint64_t s = 0;
  for (std::size_t j = 0; j < at.size(); ++j) s += plus[j] + minus[j];
  return s;
}

namespace detail {

enum class Mode { Fresh, Explicit, Counts, Cells, Order, Parted, Sliced };

struct DatasetNode {
  Domain dom;
  std::shared_ptr<const Task> task;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  Mode mode = Mode::Fresh;

  std::vector<Example> ex;
  // Counts: per point. Cells: per cell (bounds[j-1], bounds[j]], index j-1.
  std::vector<double> bounds;
  std::vector<std::uint64_t> plus, minus;
  std::vector<std::uint64_t> ranks;
  std::vector<double> order;

  std::vector<std::uint64_t> part_sizes;
  std::unique_ptr<DatasetNode[]> parts;
  std::size_t n_parts = 0;

  std::uint64_t slice_size = 0, slice_count = 0;
};

}  // namespace detail

using detail::DatasetNode;
using detail::Mode;

namespace {

std::vector<double> make_bounds(const Domain& dom, const std::vector<double>& cuts) {
  std::vector<double> b{dom.lo, dom.hi};
  for (double c : cuts) b.push_back(std::clamp(c, dom.lo, dom.hi));
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

// Sequential conditional binomials: exact multinomial(n, probs).
std::vector<std::uint64_t> multinomial(Rng& rng, std::uint64_t n, const std::vector<double>& probs) {
  std::vector<double> suffix(probs.size() + 1, 0.0);
  for (std::size_t k = probs.size(); k-- > 0;) suffix[k] = suffix[k + 1] + probs[k];
  std::vector<std::uint64_t> out(probs.size(), 0);
  std::uint64_t left = n;
  for (std::size_t k = 0; k < probs.size() && left > 0; ++k) {
    if (probs[k] <= 0.0) continue;
    if (suffix[k + 1] <= 0.0) {
      out[k] = left;
      left = 0;
      break;
    }
    double q = std::min(1.0, probs[k] / suffix[k]);
    out[k] = rng.binomial(left, q);
    left -= out[k];
  }
  return out;
}

std::uint64_t slice_seed(std::uint64_t seed, std::uint64_t i) { return mix64(seed ^ mix64(0x736c696365ULL + i)); }

bool small_enough(const DatasetNode& nd) {
  return nd.n <= (nd.dom.finite ? Dataset::kExplicitFinite : Dataset::kExplicitReal);
}

void realize_explicit(DatasetNode& nd) {
  Rng rng(nd.seed);
  nd.ex.reserve(nd.n);
  if (const auto* f = std::get_if<FiniteLabeledDistribution>(nd.task.get())) {
    std::vector<double> cum(f->d());
    std::partial_sum(f->marginal().begin(), f->marginal().end(), cum.begin());
    for (std::uint64_t i = 0; i < nd.n; ++i) {
      std::size_t idx;
      if (f->uniform_marginal()) {
        idx = rng.below(f->d());
      } else {
        double u = rng.uniform01() * cum.back();
        idx = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
        idx = std::min(idx, f->d() - 1);
      }
      int y = rng.uniform01() < (1.0 + f->biases()[idx]) / 2.0 ? 1 : -1;
      nd.ex.push_back({static_cast<double>(idx), y});
    }
  } else {
    const auto& t = std::get<ThresholdTask>(*nd.task);
    for (std::uint64_t i = 0; i < nd.n; ++i) {
      double x = t.cdf.inverse(rng.uniform01());
      int y = x > t.true_threshold ? 1 : -1;
      if (rng.uniform01() < t.noise) y = -y;
      nd.ex.push_back({x, y});
    }
  }
  nd.mode = Mode::Explicit;
}

void realize_counts(DatasetNode& nd) {
  const auto& f = std::get<FiniteLabeledDistribution>(*nd.task);
  std::vector<double> probs(2 * f.d());
  for (std::size_t i = 0; i < f.d(); ++i) {
    double p = f.biases()[i], m = f.marginal()[i];
    probs[2 * i] = m * (1.0 + p) / 2.0;
    probs[2 * i + 1] = m * (1.0 - p) / 2.0;
  }
  Rng rng(nd.seed);
  auto c = multinomial(rng, nd.n, probs);
  nd.plus.resize(f.d());
  nd.minus.resize(f.d());
  for (std::size_t i = 0; i < f.d(); ++i) {
    nd.plus[i] = c[2 * i];
    nd.minus[i] = c[2 * i + 1];
  }
  nd.mode = Mode::Counts;
}

void realize_cells(DatasetNode& nd, const std::vector<double>& cuts) {
  const auto& t = std::get<ThresholdTask>(*nd.task);
  auto all = cuts;
  all.push_back(t.true_threshold);
  nd.bounds = make_bounds(nd.dom, all);
  const std::size_t J = nd.bounds.size() - 1;
  std::vector<double> probs(2 * J);
  for (std::size_t j = 0; j < J; ++j) {
    double mass = t.cdf(nd.bounds[j + 1]) - t.cdf(nd.bounds[j]);
    double pplus = nd.bounds[j] >= t.true_threshold ? 1.0 - t.noise : t.noise;
    probs[2 * j] = mass * pplus;
    probs[2 * j + 1] = mass * (1.0 - pplus);
  }
  Rng rng(nd.seed);
  auto c = multinomial(rng, nd.n, probs);
  nd.plus.resize(J);
  nd.minus.resize(J);
  for (std::size_t j = 0; j < J; ++j) {
    nd.plus[j] = c[2 * j];
    nd.minus[j] = c[2 * j + 1];
  }
  nd.mode = Mode::Cells;
}

void realize_order(DatasetNode& nd, const std::vector<std::uint64_t>& ranks) {
  const auto& t = std::get<ThresholdTask>(*nd.task);
  Rng rng(nd.seed);
  // U_(k) = (G_1 + ... + G_k) / (G_1 + ... + G_{n+1}) with G_i ~ Exp(1), grouped into gamma spacings.
  std::vector<double> partial(ranks.size());
  double acc = 0.0;
  std::uint64_t prev = 0;
  for (std::size_t j = 0; j < ranks.size(); ++j) {
    acc += rng.gamma(static_cast<double>(ranks[j] - prev));
    partial[j] = acc;
    prev = ranks[j];
  }
  acc += rng.gamma(static_cast<double>(nd.n + 1 - prev));
  nd.order.resize(ranks.size());
  for (std::size_t j = 0; j < ranks.size(); ++j) nd.order[j] = t.cdf.inverse(partial[j] / acc);
  nd.ranks = ranks;
  nd.mode = Mode::Order;
}

void add_into(Tally& acc, const Tally& t) {
  for (std::size_t j = 0; j < acc.at.size(); ++j) {
    acc.plus[j] += t.plus[j];
    acc.minus[j] += t.minus[j];
  }
}

Tally empty_tally(const Domain& dom, const std::vector<double>& bounds) {
  Tally t;
  if (dom.finite) {
    t.at.resize(dom.d);
    std::iota(t.at.begin(), t.at.end(), 0.0);
  } else {
    t.at = bounds;  // at[0] = lo is the point {lo}; at[j] the cell ending at bounds[j]
  }
  t.plus.assign(t.at.size(), 0);
  t.minus.assign(t.at.size(), 0);
  return t;
}

Tally node_tally(DatasetNode& nd, const std::vector<double>& bounds, const std::vector<double>& cuts) {
  if (nd.mode == Mode::Fresh) {
    if (small_enough(nd)) realize_explicit(nd);
    else if (nd.dom.finite) realize_counts(nd);
    else realize_cells(nd, cuts);
  }
  Tally t = empty_tally(nd.dom, bounds);
  switch (nd.mode) {
    case Mode::Explicit:
      for (const auto& e : nd.ex) {
        std::size_t j;
        if (nd.dom.finite) {
          j = static_cast<std::size_t>(e.x);
        } else if (e.x <= nd.dom.lo) {
          j = 0;
        } else {
          j = static_cast<std::size_t>(std::lower_bound(bounds.begin() + 1, bounds.end(), e.x) - bounds.begin());
          j = std::min(j, bounds.size() - 1);
        }
        (e.y > 0 ? t.plus : t.minus)[j] += 1;
      }
      return t;
    case Mode::Counts:
      t.plus = nd.plus;
      t.minus = nd.minus;
      return t;
    case Mode::Cells: {
      // Coarsen: every requested bound must be one of the realized bounds.
      std::size_t j = 1;
      for (std::size_t k = 1; k < nd.bounds.size(); ++k) {
        t.plus[j] += nd.plus[k - 1];
        t.minus[j] += nd.minus[k - 1];
        if (nd.bounds[k] == bounds[j]) ++j;
      }
      if (j != bounds.size()) throw std::logic_error("Dataset: queried cuts are not a coarsening of the realized cells");
      return t;
    }
    case Mode::Parted:
      for (std::size_t p = 0; p < nd.n_parts; ++p) add_into(t, node_tally(nd.parts[p], bounds, cuts));
      return t;
    case Mode::Order:
      throw std::logic_error("Dataset: realized as order statistics; label counts unavailable");
    case Mode::Sliced: {
      // Re-derive every block, then the unsliced remainder.
      for (std::uint64_t i = 0; i < nd.slice_count; ++i) {
        DatasetNode c;
        c.dom = nd.dom;
        c.task = nd.task;
        c.n = nd.slice_size;
        c.seed = slice_seed(nd.seed, i);
        add_into(t, node_tally(c, bounds, cuts));
      }
      DatasetNode rest;
      rest.dom = nd.dom;
      rest.task = nd.task;
      rest.n = nd.n - nd.slice_size * nd.slice_count;
      rest.seed = mix64(nd.seed ^ mix64(0x72657374ULL));
      if (rest.n > 0) add_into(t, node_tally(rest, bounds, cuts));
      return t;
    }
    case Mode::Fresh:
      break;
  }
  throw std::logic_error("Dataset: unreachable");
}

bool node_can_materialize(const DatasetNode& nd) {
  switch (nd.mode) {
    case Mode::Explicit:
      return true;
    case Mode::Fresh:
      return nd.n <= Dataset::kExplicitReal || !nd.task;
    case Mode::Parted:
      for (std::size_t p = 0; p < nd.n_parts; ++p)
        if (!node_can_materialize(nd.parts[p])) return false;
      return true;
    default:
      return false;
  }
}

void node_examples(DatasetNode& nd, std::vector<Example>& out) {
  if (nd.mode == Mode::Fresh) {
    if (nd.n > Dataset::kExplicitReal) throw std::logic_error("Dataset: too large to materialize examples");
    realize_explicit(nd);
  }
  if (nd.mode == Mode::Explicit) {
    out.insert(out.end(), nd.ex.begin(), nd.ex.end());
  } else if (nd.mode == Mode::Parted) {
    for (std::size_t p = 0; p < nd.n_parts; ++p) node_examples(nd.parts[p], out);
  } else {
    throw std::logic_error("Dataset: realized as statistics; examples unavailable");
  }
}

}  // namespace

Dataset::Dataset() : node_(std::make_shared<DatasetNode>()) {
  node_->mode = Mode::Explicit;
  node_->dom = Domain::points(0);
}

Dataset Dataset::from_examples(const Domain& dom, std::vector<Example> examples) {
  for (const auto& e : examples) {
    if (e.y != 1 && e.y != -1) throw std::invalid_argument("labels must be +-1");
    if (dom.finite ? !(e.x >= 0 && e.x < static_cast<double>(dom.d) && e.x == std::floor(e.x))
                   : !(e.x >= dom.lo && e.x <= dom.hi))
      throw std::invalid_argument("example outside domain");
  }
  auto nd = std::make_shared<DatasetNode>();
  nd->dom = dom;
  nd->n = examples.size();
  nd->ex = std::move(examples);
  nd->mode = Mode::Explicit;
  return Dataset(nd);
}

Dataset Dataset::sample(std::shared_ptr<const Task> task, std::uint64_t n, const SharedRandomness& rng) {
  if (n > kMaxSize) throw std::invalid_argument("Dataset: sample size exceeds 2^53");
  auto nd = std::make_shared<DatasetNode>();
  nd->dom = domain_of(*task);
  nd->task = std::move(task);
  nd->n = n;
  nd->seed = rng.key();
  return Dataset(nd);
}

Dataset sample(const Task& task, std::uint64_t n, const SharedRandomness& rng) {
  return Dataset::sample(std::make_shared<const Task>(task), n, rng);
}

std::uint64_t Dataset::size() const { return node_->n; }
const Domain& Dataset::domain() const { return node_->dom; }
const Task* Dataset::task() const { return node_->task.get(); }

std::vector<Dataset> Dataset::partition(const std::vector<std::uint64_t>& sizes) const {
  DatasetNode& nd = *node_;
  std::uint64_t sum = 0;
  for (auto s : sizes) {
    if (s > nd.n - sum) throw std::invalid_argument("Dataset::partition: parts exceed dataset size");
    sum += s;
  }
  if (nd.mode == Mode::Parted) {
    if (nd.part_sizes != sizes) throw std::logic_error("Dataset: already partitioned differently");
  } else {
    if (nd.mode != Mode::Fresh && nd.mode != Mode::Explicit)
      throw std::logic_error("Dataset: cannot partition a sample realized as statistics");
    const std::size_t k = sizes.size() + 1;  // last part: unused remainder
    nd.parts.reset(new DatasetNode[k]);
    nd.n_parts = k;
    std::uint64_t off = 0;
    for (std::size_t p = 0; p < k; ++p) {
      DatasetNode& c = nd.parts[p];
      c.dom = nd.dom;
      c.task = nd.task;
      c.n = p < sizes.size() ? sizes[p] : nd.n - sum;
      c.seed = mix64(nd.seed ^ mix64(0x70617274ULL + p));
      if (nd.mode == Mode::Explicit) {
        c.ex.assign(nd.ex.begin() + static_cast<std::ptrdiff_t>(off),
                    nd.ex.begin() + static_cast<std::ptrdiff_t>(off + c.n));
        c.mode = Mode::Explicit;
      }
      off += c.n;
    }
    nd.ex.clear();
    nd.ex.shrink_to_fit();
    nd.part_sizes = sizes;
    nd.mode = Mode::Parted;
  }
  std::vector<Dataset> out;
  out.reserve(sizes.size());
  for (std::size_t p = 0; p < sizes.size(); ++p)
    out.push_back(Dataset(std::shared_ptr<DatasetNode>(node_, &nd.parts[p])));
  return out;
}

Dataset::Slices Dataset::slices(std::uint64_t block_size, std::uint64_t count) const {
  DatasetNode& nd = *node_;
  if (block_size != 0 && count > nd.n / block_size) throw std::invalid_argument("Dataset::slices: exceeds dataset size");
  if (nd.mode == Mode::Sliced) {
    if (nd.slice_size != block_size || nd.slice_count != count)
      throw std::logic_error("Dataset: already sliced differently");
  } else if (nd.mode == Mode::Fresh) {
    nd.mode = Mode::Sliced;
    nd.slice_size = block_size;
    nd.slice_count = count;
  } else if (nd.mode != Mode::Explicit) {
    throw std::logic_error("Dataset: cannot slice a partitioned or realized sample");
  }
  Slices s;
  s.parent_ = node_;
  s.block_ = block_size;
  s.count_ = count;
  return s;
}

Dataset Dataset::Slices::operator[](std::uint64_t i) const {
  if (i >= count_) throw std::out_of_range("Dataset::Slices: index out of range");
  const DatasetNode& p = *parent_;
  auto c = std::make_shared<DatasetNode>();
  c->dom = p.dom;
  c->n = block_;
  if (p.mode == Mode::Explicit) {
    c->ex.assign(p.ex.begin() + static_cast<std::ptrdiff_t>(i * block_),
                 p.ex.begin() + static_cast<std::ptrdiff_t>((i + 1) * block_));
    c->mode = Mode::Explicit;
  } else {
    c->task = p.task;
    c->seed = slice_seed(p.seed, i);
  }
  return Dataset(c);
}

std::pair<Dataset, Dataset> Dataset::split(std::uint64_t k) const {
  if (k > size()) throw std::invalid_argument("Dataset::split: k exceeds size");
  auto parts = partition({k, size() - k});
  return {parts[0], parts[1]};
}

Tally Dataset::tally(const std::vector<double>& cuts) const {
  std::vector<double> bounds;
  if (!node_->dom.finite) bounds = make_bounds(node_->dom, cuts);
  return node_tally(*node_, bounds, cuts);
}

std::vector<double> Dataset::order_statistics(const std::vector<std::uint64_t>& ranks) const {
  DatasetNode& nd = *node_;
  if (nd.dom.finite) throw std::logic_error("order statistics need a real domain");
  for (std::size_t j = 0; j < ranks.size(); ++j)
    if (ranks[j] < 1 || ranks[j] > nd.n || (j > 0 && ranks[j] <= ranks[j - 1]))
      throw std::invalid_argument("ranks must be increasing within [1, n]");
  if (nd.mode == Mode::Fresh && !small_enough(nd)) realize_order(nd, ranks);
  if (nd.mode == Mode::Order) {
    if (nd.ranks != ranks) throw std::logic_error("Dataset: order statistics realized at other ranks");
    return nd.order;
  }
  auto ex = examples();
  std::vector<double> xs(ex.size());
  for (std::size_t i = 0; i < ex.size(); ++i) xs[i] = ex[i].x;
  std::sort(xs.begin(), xs.end());
  std::vector<double> out;
  for (auto r : ranks) out.push_back(xs[r - 1]);
  return out;
}

std::vector<Example> Dataset::examples() const {
  std::vector<Example> out;
  node_examples(*node_, out);
  return out;
}

bool Dataset::can_materialize() const { return node_can_materialize(*node_); }

}  // namespace replilearn
