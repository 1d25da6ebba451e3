#include "replilearn/harness.hpp"

#include <algorithm>

#include "replilearn/eval.hpp"

namespace replilearn {

unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

void PairedTrialConfig::validate() const {
  if (!task) throw std::invalid_argument("paired config: no task");
  if (!learner.fit) throw std::invalid_argument("paired config: no learner");
  if (n_trials < 1) throw std::invalid_argument("paired config: n_trials >= 1");
}

std::optional<std::size_t> ReplicabilityReport::worst_point() const {
  if (pointwise.empty()) return std::nullopt;
  std::size_t best = 0;
  for (std::size_t i = 1; i < pointwise.size(); ++i)
    if (pointwise[i].k > pointwise[best].k) best = i;
  return best;
}

ReplicabilityReport run_paired(const PairedTrialConfig& cfg) {
  cfg.validate();
  const SharedRandomness root(cfg.seed);
  const Task& task = *cfg.task;
  auto trials = run_trials<TrialRecord>(cfg.n_trials, cfg.workers, [&](std::uint64_t t) {
    const auto r = root.child("r", t);
    auto S1 = Dataset::sample(cfg.task, cfg.learner.sample_need, root.child("data", t, 1));
    auto S2 = Dataset::sample(cfg.task, cfg.learner.sample_need, root.child("data", t, 2));
    Hypothesis h1 = cfg.learner(S1, r), h2 = cfg.learner(S2, r);
    TrialRecord rec;
    for (double x : cfg.points) rec.disagree.push_back(h1(x) != h2(x));
    rec.distance = classification_distance(task, h1, h2);
    rec.equal = h1 == h2;
    rec.excess1 = excess_error(task, h1);
    rec.excess2 = excess_error(task, h2);
    rec.proper = h1.proper() && h2.proper();
    return rec;
  });

  ReplicabilityReport rep;
  rep.n_trials = cfg.n_trials;
  rep.seed = cfg.seed;
  rep.samples_labeled = checked_mul(checked_mul(2, cfg.learner.sample_need), cfg.n_trials);
  rep.samples_shared = checked_mul(cfg.learner.shared_need, cfg.n_trials);
  rep.gamma = cfg.gamma;
  rep.alpha = cfg.alpha;
  rep.opt = opt_error(task);
  rep.points = cfg.points;
  rep.pointwise.assign(cfg.points.size(), Estimate{0, cfg.n_trials});
  rep.exact_equal.n = rep.approx_far.n = rep.excess_over.n = cfg.n_trials;
  std::vector<double> excess;
  excess.reserve(2 * trials.size());
  for (const auto& rec : trials) {
    for (std::size_t i = 0; i < rec.disagree.size(); ++i) rep.pointwise[i].k += rec.disagree[i];
    rep.exact_equal.k += rec.equal;
    rep.approx_far.k += rec.distance > cfg.gamma;
    rep.excess_over.k += rec.excess1 > cfg.alpha;
    excess.push_back(rec.excess1);
    excess.push_back(rec.excess2);
  }
  rep.excess_p90 = quantile(std::move(excess), 0.9);
  rep.trials = std::move(trials);
  return rep;
}

std::vector<GridCell> run_grid(const std::vector<GridAxis>& axes, std::uint64_t root_seed, const CellBuilder& build) {
  if (axes.empty()) throw std::invalid_argument("run_grid: no axes");
  std::size_t cells = 1;
  for (const auto& a : axes) {
    if (a.values.empty()) throw std::invalid_argument("run_grid: empty axis " + a.name);
    cells *= a.values.size();
  }
  const SharedRandomness root(root_seed);
  std::vector<GridCell> out;
  for (std::size_t idx = 0; idx < cells; ++idx) {
    // Last axis varies fastest.
    std::vector<double> vals(axes.size());
    std::size_t rest = idx;
    for (std::size_t a = axes.size(); a-- > 0;) {
      vals[a] = axes[a].values[rest % axes[a].values.size()];
      rest /= axes[a].values.size();
    }
    auto cfg = build(vals);
    cfg.seed = root.child("cell", idx).key();
    out.push_back({vals, run_paired(cfg)});
  }
  return out;
}

}  // namespace replilearn
