#include "replilearn/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <numeric>
#include <sstream>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>

#include "replilearn/approximate.hpp"
#include "replilearn/eval.hpp"
#include "replilearn/harness.hpp"
#include "replilearn/learners.hpp"
#include "replilearn/pointwise.hpp"
#include "replilearn/reductions.hpp"
#include "replilearn/selection.hpp"
#include "replilearn/semirepl.hpp"
#include "replilearn/stats.hpp"
#include "replilearn/thresholds.hpp"

namespace replilearn {

// ---- CSV and checks ---------------------------------------------------------

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_header() {
  return "experiment_id,subcommand,d,alpha,beta,rho,gamma,n_trials,seed,samples_labeled,samples_shared,"
         "est_exact_repl,est_approx_repl,est_pointwise_max,excess_err_p90,opt,ci_lo,ci_hi";
}

std::string csv_line(const CsvRow& r) {
  auto num = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  auto cnt = [](const std::optional<std::uint64_t>& v) { return v ? std::to_string(*v) : std::string(); };
  std::ostringstream s;
  s << r.experiment_id << ',' << r.subcommand << ',' << num(r.d) << ',' << num(r.alpha) << ',' << num(r.beta) << ','
    << num(r.rho) << ',' << num(r.gamma) << ',' << r.n_trials << ',' << r.seed << ',' << cnt(r.samples_labeled) << ','
    << cnt(r.samples_shared) << ',' << num(r.est_exact_repl) << ',' << num(r.est_approx_repl) << ','
    << num(r.est_pointwise_max) << ',' << num(r.excess_err_p90) << ',' << num(r.opt) << ',' << num(r.ci_lo) << ','
    << num(r.ci_hi);
  return s.str();
}

Check check_le(std::string name, double value, double bound, std::string detail) {
  return {std::move(name), value, "<=", bound, value <= bound, std::move(detail)};
}
Check check_ge(std::string name, double value, double bound, std::string detail) {
  return {std::move(name), value, ">=", bound, value >= bound, std::move(detail)};
}
Check check_true(std::string name, bool ok, std::string detail) {
  return {std::move(name), ok ? 1.0 : 0.0, "==", 1.0, ok, std::move(detail)};
}

bool ExperimentResult::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

void ExperimentResult::append(ExperimentResult o) {
  for (auto& r : o.rows) rows.push_back(std::move(r));
  for (auto& c : o.checks) checks.push_back(std::move(c));
  for (auto& n : o.notes) notes.push_back(std::move(n));
}

Constants constants_from(const Config& cfg) {
  Constants c;
  struct F {
    const char* key;
    double Constants::*field;
  };
  static const F fields[] = {
      {"c_agnostic", &Constants::c_agnostic}, {"c_T", &Constants::c_T},
      {"boost_K", &Constants::boost_K},       {"boost_test", &Constants::boost_test},
      {"c_sel", &Constants::c_sel},           {"c_rob", &Constants::c_rob},
      {"err_D", &Constants::err_D},           {"tester_c1", &Constants::tester_c1},
      {"tester_c2", &Constants::tester_c2},   {"cluster_cn", &Constants::cluster_cn},
      {"cluster_cm", &Constants::cluster_cm}, {"repl_R", &Constants::repl_R},
      {"repl_v", &Constants::repl_v},         {"repl_eps", &Constants::repl_eps},
      {"repl_cluster_v", &Constants::repl_cluster_v}, {"repl_inner", &Constants::repl_inner},
      {"repl_beta1", &Constants::repl_beta1}, {"thr_K", &Constants::thr_K},
      {"thr_quant", &Constants::thr_quant},   {"gate_c", &Constants::gate_c},
      {"semi_pool", &Constants::semi_pool},   {"bias_cap", &Constants::bias_cap},
      {"amp_cap", &Constants::amp_cap},       {"sign_cap", &Constants::sign_cap},
  };
  for (const auto& f : fields) c.*f.field = cfg.num(std::string("const.") + f.key, c.*f.field);
  for (const auto& [k, v] : cfg.entries()) {
    if (k.rfind("const.", 0) != 0) continue;
    const auto name = k.substr(6);
    if (std::none_of(std::begin(fields), std::end(fields), [&](const F& f) { return name == f.key; }))
      throw ConfigError("config: unknown constant '" + name + "'");
  }
  return c;
}

double erm_plus_probability(std::uint64_t n, std::size_t d, double p) {
  using boost::math::binomial_distribution;
  if (n == 0) return 1.0;
  const double q = (1.0 + p) / 2.0;
  binomial_distribution<double> counts(static_cast<double>(n), 1.0 / static_cast<double>(d));
  const double mu = static_cast<double>(n) / static_cast<double>(d);
  const double sd = std::sqrt(mu * (1.0 - 1.0 / static_cast<double>(d)));
  // Beyond 40 sd the count pmf is below 1e-300.
  const auto lo = static_cast<std::uint64_t>(std::max(0.0, std::floor(mu - 40 * sd - 10)));
  const auto hi = static_cast<std::uint64_t>(std::min(static_cast<double>(n), std::ceil(mu + 40 * sd + 10)));
  double total = 0.0;
  for (std::uint64_t c = lo; c <= hi; ++c) {
    const double w = boost::math::pdf(counts, static_cast<double>(c));
    if (w == 0.0) continue;
    if (c == 0 || q >= 1.0) {
      total += w;
      continue;
    }
    if (q <= 0.0) continue;  // plus = 0 < c/2
    binomial_distribution<double> lab(static_cast<double>(c), q);
    const auto need = (c + 1) / 2;  // plus >= minus  <=>  plus >= ceil(c/2)
    const double tail = need == 0 ? 1.0 : boost::math::cdf(boost::math::complement(lab, static_cast<double>(need - 1)));
    total += w * tail;
  }
  return std::min(1.0, total);
}

namespace {

std::uint64_t trials(const Config& cfg, const RunOptions& o, std::uint64_t full, std::uint64_t quick) {
  if (cfg.has("n_trials")) return cfg.count("n_trials", full);
  return o.quick ? quick : full;
}

std::uint64_t sub_seed(const RunOptions& o, const std::string& id) { return SharedRandomness(o.seed).child(id).key(); }

std::vector<double> alternating(std::size_t d, double p) {
  std::vector<double> b(d);
  for (std::size_t i = 0; i < d; ++i) b[i] = i % 2 == 0 ? p : -p;
  return b;
}

std::shared_ptr<const Task> finite_task(std::vector<double> biases) {
  return std::make_shared<const Task>(FiniteLabeledDistribution(std::move(biases)));
}

std::shared_ptr<const Task> threshold_task(double t_star, double noise, double lo = 0.0, double hi = 1.0) {
  return std::make_shared<const Task>(ThresholdTask(PiecewiseLinearCdf::uniform(lo, hi), t_star, noise));
}

std::vector<double> indices(std::size_t d) {
  std::vector<double> x(d);
  std::iota(x.begin(), x.end(), 0.0);
  return x;
}

double three_se(const Estimate& e) { return 3.0 * e.se(); }

CsvRow base_row(const std::string& id, const std::string& sub, std::uint64_t n, const RunOptions& o) {
  CsvRow r;
  r.experiment_id = id;
  r.subcommand = sub;
  r.n_trials = n;
  r.seed = o.seed;
  return r;
}

CsvRow report_row(const std::string& id, const std::string& sub, const ReplicabilityReport& rep, const RunOptions& o) {
  CsvRow r = base_row(id, sub, rep.n_trials, o);
  r.samples_labeled = rep.samples_labeled;
  r.samples_shared = rep.samples_shared;
  r.est_exact_repl = rep.exact_equal.p();
  r.est_approx_repl = 1.0 - rep.approx_far.p();
  if (auto w = rep.worst_point()) r.est_pointwise_max = rep.pointwise[*w].p();
  r.excess_err_p90 = rep.excess_p90;
  r.opt = rep.opt;
  return r;
}

void set_ci(CsvRow& r, const Estimate& e) {
  auto ci = e.ci();
  r.ci_lo = ci.lo;
  r.ci_hi = ci.hi;
}

// Complementary estimate (counts the opposite event).
Estimate flip(const Estimate& e) { return {e.n - e.k, e.n}; }

std::string fmt(double x) { return format_number(x); }

// ---- pointwise ----------------------------------------------------------------

struct PointwiseSetup {
  std::size_t d;
  double p, alpha, beta, rho;
  Constants c;
};

PointwiseSetup pointwise_setup(const Config& cfg) {
  return {cfg.count("d", 4), cfg.num("p", 0.4), cfg.num("alpha", 0.1), cfg.num("beta", 0.1), cfg.num("rho", 0.2),
          constants_from(cfg)};
}

ExperimentResult pointwise_basic(const Config& cfg, const RunOptions& o) {
  auto s = pointwise_setup(cfg);
  s.c.c_T = cfg.num("c_T", s.c.c_T);
  PairedTrialConfig pc;
  pc.task = finite_task(alternating(s.d, s.p));
  pc.learner = basic_pointwise(erm_finite_learner(s.d, s.c), {s.alpha, s.beta, s.rho, s.c.c_T});
  pc.n_trials = trials(cfg, o, 5000, 300);
  pc.seed = sub_seed(o, "pointwise-basic");
  pc.points = indices(s.d);
  pc.gamma = s.rho;
  pc.alpha = s.alpha;
  pc.workers = o.workers;
  auto rep = run_paired(pc);

  ExperimentResult out;
  auto row = report_row("pointwise_basic", "pointwise", rep, o);
  row.d = static_cast<double>(s.d);
  row.alpha = s.alpha;
  row.beta = s.beta;
  row.rho = s.rho;
  const auto& worst = rep.pointwise[*rep.worst_point()];
  set_ci(row, worst);
  out.rows.push_back(row);
  out.checks.push_back(check_le("pointwise max disagreement <= rho + 3SE", worst.p(), s.rho + three_se(worst)));
  return out;
}

ExperimentResult pointwise_boosted(const Config& cfg, const RunOptions& o) {
  auto s = pointwise_setup(cfg);
  s.beta = cfg.num("beta", 0.01);
  PairedTrialConfig pc;
  pc.task = finite_task(alternating(s.d, s.p));
  pc.learner = pointwise_learner(erm_finite_learner(s.d, s.c), s.alpha, s.beta, s.rho, s.c);
  pc.n_trials = trials(cfg, o, 3000, 200);
  pc.seed = sub_seed(o, "pointwise-boosted");
  pc.points = indices(s.d);
  pc.gamma = 2 * s.rho;
  pc.alpha = s.alpha;
  pc.workers = o.workers;
  auto rep = run_paired(pc);

  ExperimentResult out;
  auto row = report_row("pointwise_boosted", "pointwise", rep, o);
  row.d = static_cast<double>(s.d);
  row.alpha = s.alpha;
  row.beta = s.beta;
  row.rho = s.rho;
  const auto& worst = rep.pointwise[*rep.worst_point()];
  set_ci(row, worst);
  out.rows.push_back(row);
  out.checks.push_back(check_le("boosted excess-error-exceeds-alpha rate <= beta + 3SE", rep.excess_over.p(),
                                s.beta + three_se(rep.excess_over)));
  out.checks.push_back(check_le("boosted max disagreement <= 2 rho + 3SE", worst.p(), 2 * s.rho + three_se(worst)));
  return out;
}

// Pr over (S, r) of g(x) = +1 against the exact per-block ERM probability.
ExperimentResult pointwise_unbiased(const Config& cfg, const RunOptions& o) {
  auto s = pointwise_setup(cfg);
  const auto N = trials(cfg, o, 20000, 2000);
  const double tol = cfg.num("tolerance", 0.02);
  auto task = finite_task(alternating(s.d, s.p));
  const auto base = erm_finite_learner(s.d, s.c);
  struct Variant {
    std::string id;
    std::uint64_t block, T;
  };
  const PointwiseParams pp{s.alpha, s.beta, s.rho, s.c.c_T};
  const double ab = s.alpha * s.beta / 2;
  std::vector<Variant> variants{{"unbiased_configured", base.need(ab, ab), pp.T()},
                                {"unbiased_small_block", cfg.count("small_block", 15), pp.T()}};
  ExperimentResult out;
  for (const auto& v : variants) {
    auto A = basic_pointwise_blocks(base, v.block, v.T);
    const SharedRandomness root(sub_seed(o, "pointwise-" + v.id));
    auto labels = run_trials<std::vector<std::int8_t>>(N, o.workers, [&](std::uint64_t t) {
      auto S = Dataset::sample(task, A.sample_need, root.child("data", t, 1));
      return A(S, root.child("r", t)).labels_on(s.d);
    });
    double worst = 0.0;
    Estimate worst_est;
    for (std::size_t x = 0; x < s.d; ++x) {
      Estimate e{0, N};
      for (const auto& l : labels) e.k += l[x] > 0;
      const double px = erm_plus_probability(v.block, s.d, std::get<FiniteLabeledDistribution>(*task).biases()[x]);
      const double dev = std::abs(e.p() - px);
      if (dev >= worst) {
        worst = dev;
        worst_est = e;
      }
    }
    auto row = base_row(v.id, "pointwise", N, o);
    row.d = static_cast<double>(s.d);
    row.alpha = s.alpha;
    row.beta = s.beta;
    row.rho = s.rho;
    row.samples_labeled = checked_mul(N, A.sample_need);
    set_ci(row, worst_est);
    out.rows.push_back(row);
    out.checks.push_back(check_le(v.id + ": max_x |Pr[g(x)=+1] - p_x| <= tol", worst, tol,
                                  "block " + std::to_string(v.block) + ", T " + std::to_string(v.T)));
  }
  return out;
}

// Fair-coin base (one sample of an unbiased point per block): disagreement ~ T^-1/2.
ExperimentResult pointwise_scaling(const Config& cfg, const RunOptions& o) {
  const auto Ts = cfg.list("T", {16, 64, 256, 1024});
  const auto N = trials(cfg, o, 20000, 2000);
  auto task = finite_task({0.0});
  const auto base = erm_finite_learner(1);
  std::vector<double> xs, ys;
  ExperimentResult out;
  for (std::size_t i = 0; i < Ts.size(); ++i) {
    const auto T = static_cast<std::uint64_t>(Ts[i]);
    PairedTrialConfig pc;
    pc.task = task;
    pc.learner = basic_pointwise_blocks(base, 1, T);
    pc.n_trials = N;
    pc.seed = sub_seed(o, "pointwise-scaling-" + std::to_string(T));
    pc.points = {0.0};
    pc.gamma = 0.5;
    pc.alpha = 0.5;
    pc.workers = o.workers;
    auto rep = run_paired(pc);
    auto row = report_row("scaling_T" + std::to_string(T), "pointwise", rep, o);
    row.d = 1;
    set_ci(row, rep.pointwise[0]);
    out.rows.push_back(row);
    xs.push_back(static_cast<double>(T));
    ys.push_back(std::max(rep.pointwise[0].p(), 1.0 / static_cast<double>(N)));
  }
  const double slope = loglog_slope(xs, ys);
  out.checks.push_back(check_ge("disagreement-vs-T log-log slope >= -0.65", slope, -0.65));
  out.checks.push_back(check_le("disagreement-vs-T log-log slope <= -0.35", slope, -0.35));
  return out;
}

// ---- selection ----------------------------------------------------------------

ExperimentResult select_hypsel(const Config& cfg, const RunOptions& o) {
  const std::size_t n = cfg.count("n", 10);
  const double alpha = cfg.num("alpha", 0.1), beta = cfg.num("beta", 0.05), rho = cfg.num("rho", 0.2);
  const auto c = constants_from(cfg);
  const auto N = trials(cfg, o, 2000, 200);
  if (n < 4) throw ConfigError("select: n >= 4");
  const double tau = robust_radius(n, alpha, beta, rho, c);
  // Point 0 carries mass tau and a noiseless label; the n-1 heavy points share
  // the rest with biases +-0.2. h_i flips i heavy points, so true errors step
  // by ~0.4 (1-tau)/(n-1) and the mechanism genuinely randomizes among the
  // first few. Run 2 sees every candidate with point 0 flipped (a tau shift).
  const std::size_t d = n;
  std::vector<double> biases = alternating(d, 0.2), marginal(d, (1.0 - tau) / static_cast<double>(d - 1));
  biases[0] = 1.0;
  marginal[0] = tau;
  auto task = std::make_shared<const Task>(FiniteLabeledDistribution(biases, marginal));
  std::vector<std::int8_t> truth(d);
  for (std::size_t i = 0; i < d; ++i) truth[i] = biases[i] > 0 ? 1 : -1;
  std::vector<Hypothesis> hyps, perturbed;
  for (std::size_t i = 0; i < n; ++i) {
    auto l = truth;
    for (std::size_t k = 0; k < i; ++k) l[1 + k % (d - 1)] *= -1;
    hyps.push_back(Hypothesis::labeling(l));
    l[0] *= -1;
    perturbed.push_back(Hypothesis::labeling(l));
  }
  std::vector<double> true_err;
  for (const auto& h : hyps) true_err.push_back(true_error(*task, h));
  const double best_true = *std::min_element(true_err.begin(), true_err.end());
  const SelectionParams sp{alpha, beta, rho, tau};
  const auto m = selection_sample_need(n, beta, tau, c);
  const SharedRandomness root(sub_seed(o, "select-hypsel"));
  struct Rec {
    std::size_t i1, i2;
    bool tail_ok;
    double tail;
  };
  const double tail_bound = static_cast<double>(n) * std::exp(-sp.temperature(n) * alpha / 2);
  auto recs = run_trials<Rec>(N, o.workers, [&](std::uint64_t t) {
    auto S1 = Dataset::sample(task, m, root.child("data", t, 1));
    auto S2 = Dataset::sample(task, m, root.child("data", t, 2));
    const auto r = root.child("r", t);
    auto e1 = empirical_errors(S1, hyps), e2 = empirical_errors(S2, perturbed);
    Rec rec{select_from_errors(e1, sp, r), select_from_errors(e2, sp, r), true, 0.0};
    for (const auto* e : {&e1, &e2}) {
      auto P = selection_distribution(*e, sp);
      const double best = *std::min_element(e->begin(), e->end());
      double mass = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        if ((*e)[i] >= best + alpha / 2) mass += P[i];
      rec.tail = std::max(rec.tail, mass);
      rec.tail_ok = rec.tail_ok && mass <= tail_bound * (1 + 1e-12) && tail_bound <= beta / 2 * (1 + 1e-12);
    }
    return rec;
  });
  Estimate correct{0, N}, agree{0, N};
  bool tails = true;
  double worst_tail = 0;
  for (const auto& r : recs) {
    correct.k += true_err[r.i1] <= best_true + alpha;
    agree.k += r.i1 == r.i2;
    tails = tails && r.tail_ok;
    worst_tail = std::max(worst_tail, r.tail);
  }
  ExperimentResult out;
  auto row = base_row("select_n" + std::to_string(n), "select", N, o);
  row.d = static_cast<double>(d);
  row.alpha = alpha;
  row.beta = beta;
  row.rho = rho;
  row.gamma = tau;
  row.samples_labeled = checked_mul(2 * N, m);
  row.est_exact_repl = agree.p();
  set_ci(row, agree);
  out.rows.push_back(row);
  out.checks.push_back(check_ge("selection correctness >= 1 - beta - 3SE", correct.p(), 1 - beta - three_se(correct)));
  out.checks.push_back(check_ge("tau-perturbed paired agreement >= 1 - (rho + beta) - 3SE", agree.p(),
                                1 - (rho + beta) - three_se(agree)));
  out.checks.push_back(check_true("exponential-mechanism tail <= n exp(-t alpha/2) <= beta/2 on every trial", tails,
                                  "largest tail mass " + fmt(worst_tail) + ", bound " + fmt(tail_bound)));
  return out;
}

ExperimentResult select_corrsamp(const Config& cfg, const RunOptions& o) {
  const auto calls = cfg.count("determinism_calls", o.quick ? 1000 : 10000);
  const auto pairs = cfg.count("pairs", o.quick ? 10000 : 100000);
  const auto draws = cfg.count("chi_draws", o.quick ? 10000 : 100000);
  const auto vectors = cfg.count("chi_vectors", 20);
  const double chi_alpha = cfg.num("chi_significance", 1e-4);
  const auto tvs = cfg.list("tv", {0.01, 0.05, 0.1, 0.3});
  const SharedRandomness root(sub_seed(o, "select-corrsamp"));
  ExperimentResult out;

  std::uint64_t same = 0;
  {
    Rng g = root.child("weights").stream();
    for (std::uint64_t k = 0; k < calls; ++k) {
      std::vector<double> w(1 + g.below(32));
      for (auto& x : w) x = g.uniform01();
      const auto r = root.child("det", k);
      same += correlated_sample(w, r) == correlated_sample(w, r);
    }
  }
  out.checks.push_back(check_ge("identical-input determinism rate", static_cast<double>(same) / static_cast<double>(calls), 1.0));

  const std::size_t n = 10;
  for (double tv : tvs) {
    std::vector<double> P(n, 1.0 / n), Q(n, 1.0 / n);
    // Move tv mass from the first half to the second half.
    for (std::size_t i = 0; i < n / 2; ++i) Q[i] -= tv / (n / 2);
    for (std::size_t i = n / 2; i < n; ++i) Q[i] += tv / (n / 2);
    if (*std::min_element(Q.begin(), Q.end()) < 0) throw ConfigError("select: tv too large for n = 10");
    std::vector<std::uint64_t> cp(n, 0), cq(n, 0);
    Estimate dis{0, pairs};
    for (std::uint64_t k = 0; k < pairs; ++k) {
      const auto r = root.child("pair", k).child("tv", static_cast<std::uint64_t>(std::llround(tv * 1e6)));
      auto a = correlated_sample(P, r), b = correlated_sample(Q, r);
      dis.k += a != b;
      ++cp[a];
      ++cq[b];
    }
    double mp = 0, mq = 0;
    for (std::size_t i = 0; i < n; ++i) {
      mp += std::abs(static_cast<double>(cp[i]) / static_cast<double>(pairs) - P[i]) / 2;
      mq += std::abs(static_cast<double>(cq[i]) / static_cast<double>(pairs) - Q[i]) / 2;
    }
    auto row = base_row("corrsamp_tv" + fmt(tv), "select", pairs, o);
    row.est_exact_repl = 1 - dis.p();
    set_ci(row, flip(dis));
    out.rows.push_back(row);
    out.checks.push_back(check_le("collision rate <= 2 TV + 3SE at TV " + fmt(tv), dis.p(), 2 * tv + three_se(dis)));
    if (std::abs(tv - 0.1) < 1e-12) {
      // 0.01 at 1e5 pairs, scaled like the sampling noise (1/sqrt(N)) at other sizes.
      const double bound = 0.01 * std::sqrt(1e5 / static_cast<double>(pairs));
      out.checks.push_back(check_le("empirical marginal TV to P at TV 0.1", mp, bound));
      out.checks.push_back(check_le("empirical marginal TV to Q at TV 0.1", mq, bound));
    }
  }

  Rng g = root.child("chi-weights").stream();
  std::size_t passed = 0;
  double worst_stat_ratio = 0;
  for (std::uint64_t v = 0; v < vectors; ++v) {
    const std::size_t k = 2 + g.below(31);
    std::vector<double> w(k);
    double tot = 0;
    for (auto& x : w) tot += (x = 0.05 + g.uniform01());
    std::vector<std::uint64_t> cnt(k, 0);
    for (std::uint64_t j = 0; j < draws; ++j) ++cnt[correlated_sample(w, root.child("chi", v).child("", j))];
    double stat = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const double e = static_cast<double>(draws) * w[i] / tot;
      stat += (static_cast<double>(cnt[i]) - e) * (static_cast<double>(cnt[i]) - e) / e;
    }
    boost::math::chi_squared chi(static_cast<double>(k - 1));
    const double crit = boost::math::quantile(boost::math::complement(chi, chi_alpha));
    passed += stat <= crit;
    worst_stat_ratio = std::max(worst_stat_ratio, stat / crit);
  }
  out.checks.push_back(check_ge("chi-square marginal fit passes on every weight vector", static_cast<double>(passed),
                                static_cast<double>(vectors), "largest statistic / critical value " + fmt(worst_stat_ratio)));
  return out;
}

// ---- approximate --------------------------------------------------------------

struct ApproxSetup {
  ApproxMode mode;
  std::size_t d;
  double p, alpha, beta, rho, gamma;
};

ApproxSetup approx_setup(const Config& cfg, ApproxMode mode) {
  ApproxSetup s{mode, cfg.count("d", 4), cfg.num("p", 0.4), 0.2, 0.05, 0, 0};
  if (mode == ApproxMode::ConstAlpha) {
    s.alpha = cfg.num("alpha", 0.2);
    s.beta = cfg.num("beta", 0.05);
    s.rho = cfg.num("rho", 0.3);
    const double D = static_cast<double>(error_boost_runs(s.beta, constants_from(cfg)));
    s.gamma = cfg.num("gamma", s.rho * s.alpha / (12 * std::log(D / s.beta)));
  } else {
    s.alpha = cfg.num("alpha", 0.2);
    s.beta = cfg.num("beta", 0.05);
    s.rho = cfg.num("rho", 0.1);
    s.gamma = cfg.num("gamma", 0.25);
  }
  return s;
}

const char* mode_name(ApproxMode m) { return m == ApproxMode::ConstAlpha ? "const_alpha" : "const_gamma"; }

ExperimentResult approx_pipeline(const Config& cfg, const RunOptions& o, ApproxMode mode) {
  const auto s = approx_setup(cfg, mode);
  const auto c = constants_from(cfg);
  const auto N = trials(cfg, o, mode == ApproxMode::ConstAlpha ? 1500 : 1000, 100);
  // Work cap in base-learner calls: keeps the decision free of wall-clock input.
  const double max_calls = cfg.num("max_base_calls", 5e7);
  auto task = finite_task(alternating(s.d, s.p));
  const auto base = erm_finite_learner(s.d, c);
  const auto cost = approx_pipeline_cost(mode, base, s.alpha, s.beta, s.rho, s.gamma, c);
  const double calls = cost.base_calls * 2.0 * static_cast<double>(N);
  const std::string id = std::string("approx_") + mode_name(mode);
  std::ostringstream why;
  why << "per run: T = " << fmt(cost.T) << " blocks/A-run at pointwise level " << fmt(cost.pointwise_rho) << ", "
      << fmt(cost.a_runs) << " A-runs, " << fmt(cost.base_calls) << " base calls, " << fmt(cost.samples)
      << " samples; " << fmt(calls) << " base calls for " << N << " paired trials";

  ExperimentResult out;
  auto row = base_row(id, "approx", N, o);
  row.d = static_cast<double>(s.d);
  row.alpha = s.alpha;
  row.beta = s.beta;
  row.rho = s.rho;
  row.gamma = s.gamma;
  if (!(calls <= max_calls)) {
    out.notes.push_back(id + " not run: " + why.str() + " (limit " + fmt(max_calls) + ")");
    out.rows.push_back(row);
    out.checks.push_back(check_le(id + " total base-learner calls within the work limit", calls, max_calls, why.str()));
    return out;
  }
  PairedTrialConfig pc;
  pc.task = task;
  pc.learner = build_approx_learner(mode, base, s.alpha, s.beta, s.rho, s.gamma, c);
  pc.n_trials = N;
  pc.seed = sub_seed(o, id);
  pc.gamma = s.gamma;
  pc.alpha = s.alpha;
  pc.workers = o.workers;
  auto rep = run_paired(pc);
  row = report_row(id, "approx", rep, o);
  row.d = static_cast<double>(s.d);
  row.alpha = s.alpha;
  row.beta = s.beta;
  row.rho = s.rho;
  row.gamma = s.gamma;
  set_ci(row, flip(rep.approx_far));
  out.rows.push_back(row);
  out.checks.push_back(check_le(id + " distance-exceeds-gamma rate <= rho + 3SE", rep.approx_far.p(),
                                s.rho + three_se(rep.approx_far)));
  out.checks.push_back(check_le(id + " excess-error rate <= beta + 3SE", rep.excess_over.p(),
                                s.beta + three_se(rep.excess_over)));
  return out;
}

// boost_error_approx directly on ERM at the const_alpha reference parameters.
ExperimentResult approx_erm_boost(const Config& cfg, const RunOptions& o) {
  const auto s = approx_setup(cfg, ApproxMode::ConstAlpha);
  const auto c = constants_from(cfg);
  PairedTrialConfig pc;
  pc.task = finite_task(alternating(s.d, s.p));
  pc.learner = boost_error_approx(erm_finite_learner(s.d, c).at(s.alpha / 2, 0.01), s.alpha, s.beta, s.rho, s.gamma, c);
  pc.n_trials = trials(cfg, o, 1500, 100);
  pc.seed = sub_seed(o, "approx-erm-boost");
  pc.gamma = s.gamma;
  pc.alpha = s.alpha;
  pc.workers = o.workers;
  auto rep = run_paired(pc);
  ExperimentResult out;
  auto row = report_row("approx_erm_boost", "approx", rep, o);
  row.d = static_cast<double>(s.d);
  row.alpha = s.alpha;
  row.beta = s.beta;
  row.rho = s.rho;
  row.gamma = s.gamma;
  set_ci(row, flip(rep.approx_far));
  out.rows.push_back(row);
  out.checks.push_back(check_le("error boosting on ERM: distance-exceeds-gamma rate <= rho + 3SE", rep.approx_far.p(),
                                s.rho + three_se(rep.approx_far)));
  out.checks.push_back(check_le("error boosting on ERM: excess-error rate <= beta + 3SE", rep.excess_over.p(),
                                s.beta + three_se(rep.excess_over)));
  return out;
}

// A sampler on a one-point domain: +1 with probability q gives h0 = (+1),
// otherwise h1 = (-1); the two are at classification distance 1.
Learner coin_sampler() {
  Learner L;
  L.name = "coin_sampler";
  L.sample_need = 1;
  L.fit = [](const Dataset& S, const SharedRandomness&) {
    return Hypothesis::labeling({static_cast<std::int8_t>(S.examples().front().y)});
  };
  return L;
}

ExperimentResult approx_tester(const Config& cfg, const RunOptions& o) {
  const ClusterParams p{cfg.num("v", 0.8), cfg.num("gamma", 0.1), cfg.num("eps", 0.05), cfg.num("beta", 0.05)};
  const double rho = cfg.num("rho", 0.3);
  const auto c = constants_from(cfg);
  const auto N = trials(cfg, o, 500, 40);
  const auto need = tester_sample_need(coin_sampler(), p, rho, c);
  struct Inst {
    std::string id;
    double q;
  };
  // q^2 + (1-q)^2 is the close-pair probability.
  const double q_boundary = (1 + std::sqrt(2 * p.v - 1)) / 2;
  std::vector<Inst> inst{{"tester_complete", cfg.num("q_complete", 0.95)},
                         {"tester_boundary", cfg.num("q_boundary", q_boundary)},
                         {"tester_sound", cfg.num("q_sound", 0.5)}};
  ExperimentResult out;
  for (const auto& in : inst) {
    auto task = finite_task({2 * in.q - 1});
    const SharedRandomness root(sub_seed(o, "approx-" + in.id));
    struct Rec {
      bool a1, a2;
    };
    auto recs = run_trials<Rec>(N, o.workers, [&](std::uint64_t t) {
      // The sampler's string is fixed; only the data and v' matter.
      const HypothesisSampler P{coin_sampler(), root.child("string")};
      const auto r = root.child("r", t);
      auto S1 = Dataset::sample(task, need, root.child("data", t, 1));
      auto S2 = Dataset::sample(task, need, root.child("data", t, 2));
      return Rec{replicable_stable_tester(P, S1, p, rho, r, c).accept, replicable_stable_tester(P, S2, p, rho, r, c).accept};
    });
    Estimate acc{0, N}, agree{0, N};
    for (const auto& r : recs) {
      acc.k += r.a1;
      agree.k += r.a1 == r.a2;
    }
    auto row = base_row(in.id, "approx", N, o);
    row.d = 1;
    row.beta = p.beta;
    row.rho = rho;
    row.gamma = p.gamma;
    row.samples_labeled = checked_mul(2 * N, need);
    row.est_exact_repl = agree.p();
    set_ci(row, agree);
    out.rows.push_back(row);
    if (in.id == "tester_complete")
      out.checks.push_back(check_ge("tester completeness: accept rate >= 1 - beta - 3SE", acc.p(), 1 - p.beta - three_se(acc)));
    if (in.id == "tester_sound")
      out.checks.push_back(check_ge("tester soundness: reject rate >= 1 - beta - 3SE", 1 - acc.p(), 1 - p.beta - three_se(acc)));
    if (in.id != "tester_sound")
      out.checks.push_back(check_ge(in.id + " replicability: paired agreement >= 1 - rho - 3SE", agree.p(),
                                    1 - rho - three_se(agree), "q = " + fmt(in.q)));
  }
  return out;
}

ExperimentResult approx_cost(const Config& cfg, const RunOptions& o) {
  ExperimentResult out;
  const auto c = constants_from(cfg);
  for (auto mode : {ApproxMode::ConstAlpha, ApproxMode::ConstGamma}) {
    const auto s = approx_setup(cfg, mode);
    const auto k = approx_pipeline_cost(mode, erm_finite_learner(s.d, c), s.alpha, s.beta, s.rho, s.gamma, c);
    std::ostringstream line;
    line << mode_name(mode) << ": T = " << fmt(k.T) << ", pointwise level " << fmt(k.pointwise_rho) << ", base need "
         << fmt(k.base_need) << ", A-runs " << fmt(k.a_runs) << ", base calls " << fmt(k.base_calls) << ", samples "
         << fmt(k.samples);
    out.notes.push_back(line.str());
    auto row = base_row(std::string("approx_cost_") + mode_name(mode), "approx", 0, o);
    row.d = static_cast<double>(s.d);
    row.alpha = s.alpha;
    row.beta = s.beta;
    row.rho = s.rho;
    row.gamma = s.gamma;
    if (k.samples < 0x1.0p63) row.samples_labeled = static_cast<std::uint64_t>(k.samples);
    out.rows.push_back(row);
  }
  return out;
}

// ---- thresholds -----------------------------------------------------------------

ExperimentResult threshold_learner_exp(const Config& cfg, const RunOptions& o) {
  const double t_star = cfg.num("t_star", 0.37), eta = cfg.num("noise", 0.1);
  const double alpha = cfg.num("alpha", 0.1), gamma = cfg.num("gamma", 0.15), rho = cfg.num("rho", 0.3),
               beta = cfg.num("beta", 0.05);
  const auto c = constants_from(cfg);
  PairedTrialConfig pc;
  pc.task = threshold_task(t_star, eta);
  pc.learner = threshold_learner(alpha, beta, rho, gamma, c);
  pc.n_trials = trials(cfg, o, 1000, 100);
  pc.seed = sub_seed(o, "threshold-learner");
  pc.gamma = gamma;
  pc.alpha = alpha;
  pc.workers = o.workers;
  auto rep = run_paired(pc);
  Estimate proper{0, rep.n_trials};
  for (const auto& t : rep.trials) proper.k += t.proper;
  ExperimentResult out;
  auto row = report_row("threshold_learner", "threshold", rep, o);
  row.d = 1;
  row.alpha = alpha;
  row.beta = beta;
  row.rho = rho;
  row.gamma = gamma;
  set_ci(row, flip(rep.approx_far));
  out.rows.push_back(row);
  const auto accurate = flip(rep.excess_over), close = flip(rep.approx_far);
  out.checks.push_back(check_ge("threshold accuracy >= 1 - beta - 3SE", accurate.p(), 1 - beta - three_se(accurate)));
  out.checks.push_back(check_ge("threshold gamma-closeness >= 1 - rho - 3SE", close.p(), 1 - rho - three_se(close)));
  out.checks.push_back(check_ge("threshold properness rate", proper.p(), 1.0));
  return out;
}

ExperimentResult threshold_dkw(const Config& cfg, const RunOptions& o) {
  const double beta = cfg.num("dkw_beta", 0.05), tau = cfg.num("dkw_tau", 0.02);
  const auto m = ceil_count(16 * std::log(1 / beta) / (tau * tau));
  const auto N = trials(cfg, o, 2000, 100);
  auto task = threshold_task(0.5, 0.0);
  const SharedRandomness root(sub_seed(o, "threshold-dkw"));
  auto gaps = run_trials<double>(N, o.workers, [&](std::uint64_t t) {
    auto ex = Dataset::sample(task, m, root.child("data", t, 1)).examples();
    std::vector<double> xs(ex.size());
    for (std::size_t i = 0; i < ex.size(); ++i) xs[i] = ex[i].x;
    std::sort(xs.begin(), xs.end());
    double gap = 0;
    const double mm = static_cast<double>(m);
    for (std::size_t i = 0; i < xs.size(); ++i)
      gap = std::max({gap, static_cast<double>(i + 1) / mm - xs[i], xs[i] - static_cast<double>(i) / mm});
    return gap;
  });
  Estimate viol{0, N};
  for (double g : gaps) viol.k += g > tau;
  const double bound = 2 * std::exp(-static_cast<double>(m) * tau * tau);
  ExperimentResult out;
  auto row = base_row("dkw_tau" + fmt(tau), "threshold", N, o);
  row.d = 1;
  row.beta = beta;
  row.gamma = tau;
  row.samples_labeled = checked_mul(N, m);
  set_ci(row, viol);
  out.rows.push_back(row);
  out.checks.push_back(check_le("DKW sup-gap violation rate <= 2 exp(-m tau^2) + 3SE", viol.p(), bound + three_se(viol),
                                "m = " + std::to_string(m) + ", largest gap " + fmt(*std::max_element(gaps.begin(), gaps.end()))));
  return out;
}

// ---- realizable gate ------------------------------------------------------------

ExperimentResult realizable_exp(const Config& cfg, const RunOptions& o) {
  const double alpha = cfg.num("alpha", 0.1), beta = cfg.num("beta", 0.05), rho = cfg.num("rho", 0.1),
               gamma = cfg.num("gamma", 0.1), t_star = cfg.num("t_star", 0.37);
  const double eta_boundary = cfg.num("boundary_noise", 0.15 * alpha);
  const auto c = constants_from(cfg);
  const auto N = trials(cfg, o, 1000, 60);
  const auto cls = HypothesisClass::thresholds();
  const auto m1 = gate_sample_need(cls, alpha, beta, rho, gamma, c);
  ExperimentResult out;
  struct Rec {
    bool acc1, acc2;
    double ex1, ex2, dist;
  };
  for (double eta : {0.0, eta_boundary}) {
    auto task = threshold_task(t_star, eta);
    const bool realizable = eta == 0.0;
    const std::string id = realizable ? "gate_realizable" : "gate_boundary";
    const SharedRandomness root(sub_seed(o, "realizable-" + id));
    auto recs = run_trials<Rec>(N, o.workers, [&](std::uint64_t t) {
      const auto r = root.child("r", t);
      auto g1 = realizable_gate(cls, alpha, beta, rho, gamma, Dataset::sample(task, m1, root.child("data", t, 1)), r, c);
      auto g2 = realizable_gate(cls, alpha, beta, rho, gamma, Dataset::sample(task, m1, root.child("data", t, 2)), r, c);
      return Rec{g1.accepted, g2.accepted, excess_error(*task, g1.h), excess_error(*task, g2.h),
                 classification_distance(*task, g1.h, g2.h)};
    });
    Estimate good{0, N}, disagree{0, N}, far{0, N};
    std::vector<double> ex;
    for (const auto& r : recs) {
      good.k += r.acc1 && r.ex1 <= alpha;
      disagree.k += r.acc1 != r.acc2;
      far.k += r.dist > std::max(gamma, 4 * alpha);
      ex.push_back(r.ex1);
      ex.push_back(r.ex2);
    }
    auto row = base_row(id, "realizable", N, o);
    row.d = 1;
    row.alpha = alpha;
    row.beta = beta;
    row.rho = rho;
    row.gamma = gamma;
    row.samples_labeled = checked_mul(2 * N, m1);
    row.est_exact_repl = 1 - disagree.p();
    row.est_approx_repl = 1 - far.p();
    row.excess_err_p90 = quantile(ex, 0.9);
    row.opt = eta;
    if (realizable) {
      set_ci(row, good);
      out.checks.push_back(check_ge("realizable accept-and-accurate rate >= 1 - beta - 3SE", good.p(), 1 - beta - three_se(good)));
    } else {
      set_ci(row, flip(disagree));
      out.checks.push_back(check_le("boundary-OPT paired decision disagreement <= 11 rho + 3SE", disagree.p(),
                                    11 * rho + three_se(disagree), "OPT = " + fmt(eta)));
    }
    out.rows.push_back(row);
  }
  return out;
}

// ---- semi-replicable ---------------------------------------------------------------

ExperimentResult semi_exp(const Config& cfg, const RunOptions& o) {
  const double alpha = cfg.num("alpha", 0.1), beta = cfg.num("beta", 0.05), rho = cfg.num("rho", 0.2),
               t_star = cfg.num("t_star", 0.37), eta = cfg.num("noise", 0.0);
  const auto c = constants_from(cfg);
  const auto N = trials(cfg, o, 1000, 60);
  const auto cls = HypothesisClass::thresholds();
  auto task = threshold_task(t_star, eta);
  auto L = semi_replicable_learn(cls, alpha, beta, rho, c);
  const SharedRandomness root(sub_seed(o, "semi"));
  struct Rec {
    bool equal, identity;
    double ex1, ex2, dist;
  };
  auto recs = run_trials<Rec>(N, o.workers, [&](std::uint64_t t) {
    const auto r = root.child("r", t);
    auto a = semi_replicable_run(cls, Dataset::sample(task, L.sample_need, root.child("data", t, 1)), alpha, beta, rho, r, c);
    auto b = semi_replicable_run(cls, Dataset::sample(task, L.sample_need, root.child("data", t, 2)), alpha, beta, rho, r, c);
    const bool id = a.cover_size == a.distinct_pool + 1 && b.cover_size == b.distinct_pool + 1;
    return Rec{a.h == b.h, id, excess_error(*task, a.h), excess_error(*task, b.h), classification_distance(*task, a.h, b.h)};
  });
  Estimate eq{0, N}, acc{0, N};
  bool identity = true;
  std::vector<double> ex;
  for (const auto& r : recs) {
    eq.k += r.equal;
    acc.k += r.ex1 <= alpha;
    identity = identity && r.identity;
    ex.push_back(r.ex1);
    ex.push_back(r.ex2);
  }
  ExperimentResult out;
  auto row = base_row("semi_thresholds", "semi", N, o);
  row.d = 1;
  row.alpha = alpha;
  row.beta = beta;
  row.rho = rho;
  row.samples_labeled = checked_mul(2 * N, L.sample_need);
  row.samples_shared = checked_mul(N, L.shared_need);
  row.est_exact_repl = eq.p();
  row.excess_err_p90 = quantile(ex, 0.9);
  row.opt = eta;
  set_ci(row, eq);
  out.rows.push_back(row);
  out.checks.push_back(check_ge("semi exact output equality >= 1 - rho - 3SE", eq.p(), 1 - rho - three_se(eq)));
  out.checks.push_back(check_ge("semi accuracy >= 1 - beta - 3SE", acc.p(), 1 - beta - three_se(acc)));
  out.checks.push_back(check_true("cover size == distinct pool values + 1 on every trial", identity));
  return out;
}

// ---- reductions ---------------------------------------------------------------------

ExperimentResult reduce_bias_exp(const Config& cfg, const RunOptions& o) {
  const std::size_t d = cfg.count("d", 4);
  const double alpha = cfg.num("alpha", 0.1), rho = cfg.num("rho", 0.2);
  const auto c = constants_from(cfg);
  const auto N = trials(cfg, o, 1000, 60);
  auto A = basic_pointwise(erm_finite_learner(2 * d + 1, c), {cfg.num("inner_alpha", 0.1), cfg.num("inner_beta", 0.1), rho, c.c_T});
  ExperimentResult out;
  for (double p : {alpha, -alpha}) {
    const std::string id = p > 0 ? "bias_plus" : "bias_minus";
    const SharedRandomness root(sub_seed(o, "reduce-" + id));
    struct Rec {
      int a1, a2;
      bool capped;
    };
    auto recs = run_trials<Rec>(N, o.workers, [&](std::uint64_t t) {
      const auto r = root.child("r", t);
      auto b1 = bias_estimator_pointwise(A, d, alpha, rho, p, root.child("data", t, 1), r, c);
      auto b2 = bias_estimator_pointwise(A, d, alpha, rho, p, root.child("data", t, 2), r, c);
      return Rec{b1.answer, b2.answer, b1.capped || b2.capped};
    });
    Estimate wrong{0, N}, agree{0, N}, capped{0, N};
    for (const auto& r : recs) {
      wrong.k += r.a1 != (p > 0 ? 1 : -1);
      agree.k += r.a1 == r.a2;
      capped.k += r.capped;
    }
    auto row = base_row(id, "reduce-bias", N, o);
    row.d = static_cast<double>(d);
    row.alpha = alpha;
    row.rho = rho;
    row.samples_labeled = checked_mul(2 * N, A.sample_need);
    row.est_exact_repl = agree.p();
    set_ci(row, wrong);
    out.rows.push_back(row);
    out.checks.push_back(check_le(id + ": wrong-sign rate <= 0.03 + 3SE", wrong.p(), 0.03 + three_se(wrong)));
    out.checks.push_back(check_ge(id + ": paired agreement >= 1 - 2 rho - 3SE", agree.p(), 1 - 2 * rho - three_se(agree),
                                  "cap hit in " + fmt(capped.p()) + " of trials"));
  }
  return out;
}

ExperimentResult reduce_amplify_exp(const Config& cfg, const RunOptions& o) {
  const std::size_t d = cfg.count("d", 8);
  const double alpha = cfg.num("alpha", 0.2), rho = cfg.num("rho", 0.2), gamma = cfg.num("gamma", 0.2);
  const auto c = constants_from(cfg);
  const auto N = trials(cfg, o, 800, 40);
  // Pointwise level rho*gamma gives (rho, gamma)-approximate replicability.
  auto A0 = basic_pointwise(erm_finite_learner(d, c), {alpha, cfg.num("inner_beta", 0.1), rho * gamma, c.c_T});
  const SharedRandomness root(sub_seed(o, "reduce-amplify"));
  struct Rec {
    int a1, a2;
    double p;
    bool capped;
  };
  auto recs = run_trials<Rec>(N, o.workers, [&](std::uint64_t t) {
    const double p = root.child("meta", t).stream().uniform(-alpha, alpha);
    const auto r = root.child("r", t);
    auto x = apx_repl_hardness_amplification(A0, d, alpha, rho, p, root.child("data", t, 1), r, c);
    auto y = apx_repl_hardness_amplification(A0, d, alpha, rho, p, root.child("data", t, 2), r, c);
    return Rec{x.answer, y.answer, p, x.capped || y.capped};
  });
  Estimate agree{0, N}, err{0, N}, wrong{0, N};
  for (const auto& r : recs) {
    agree.k += r.a1 == r.a2;
    err.k += planted_error(r.a1, r.p) > 100 * alpha;
    wrong.k += planted_error(r.a1, r.p) > 0;
  }
  ExperimentResult out;
  auto row = base_row("amplify", "reduce-amplify", N, o);
  row.d = static_cast<double>(d);
  row.alpha = alpha;
  row.rho = rho;
  row.gamma = gamma;
  row.samples_labeled = checked_mul(2 * N, A0.sample_need);
  row.est_exact_repl = agree.p();
  set_ci(row, agree);
  out.rows.push_back(row);
  out.notes.push_back("amplify: wrong-sign rate " + fmt(wrong.p()) + " over the meta-distribution");
  out.checks.push_back(check_ge("hardness amplification paired agreement >= 1 - (2 rho + gamma) - 3SE", agree.p(),
                                1 - (2 * rho + gamma) - three_se(agree)));
  out.checks.push_back(check_le("hardness amplification rate of err_r > 100 alpha <= 0.1 + 3SE", err.p(), 0.1 + three_se(err)));
  return out;
}

ExperimentResult sign_oneway_exp(const Config& cfg, const RunOptions& o) {
  const std::size_t d = cfg.count("d", 6);
  const double alpha = cfg.num("alpha", 0.2), beta = cfg.num("beta", 0.05), rho = cfg.num("rho", 0.2);
  const auto c = constants_from(cfg);
  const auto N = trials(cfg, o, 500, 40);
  const SharedRandomness root(sub_seed(o, "sign-oneway"));
  ExperimentResult out;

  // Identity on random instances: excess error = (1/d) sum_{h(x_i) != sign p_i} |p_i|.
  double worst = 0;
  {
    Rng g = root.child("identity").stream();
    for (int k = 0; k < 500; ++k) {
      const std::size_t dd = 1 + g.below(10);
      std::vector<double> p(dd);
      std::vector<std::int8_t> v(dd);
      for (std::size_t i = 0; i < dd; ++i) {
        p[i] = g.uniform(-1, 1);
        v[i] = g.bernoulli(0.5) ? 1 : -1;
      }
      const double lhs = excess_error(Task(FiniteLabeledDistribution(p)), Hypothesis::labeling(v));
      const double rhs = sign_oneway_error(v, p);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  out.checks.push_back(check_le("sign-one-way identity |excess - (1/d) sum_wrong |p_i|| (500 instances)", worst, 1e-12));

  std::vector<double> p(d);
  {
    Rng g = root.child("instance").stream();
    for (auto& x : p) x = g.uniform(-1, 1);
  }
  auto A = semi_replicable_learn(HypothesisClass::points(d), alpha, beta, rho, c);
  struct Rec {
    bool ok, equal;
    double err;
  };
  auto recs = run_trials<Rec>(N, o.workers, [&](std::uint64_t t) {
    const auto r = root.child("r", t);
    auto a = sign_one_way_from_learner(A, p, root.child("data", t, 1), r, c);
    auto b = sign_one_way_from_learner(A, p, root.child("data", t, 2), r, c);
    if (!a.v || !b.v) return Rec{false, false, 0};
    return Rec{true, *a.v == *b.v, sign_oneway_error(*a.v, p)};
  });
  Estimate kept{0, N}, small{0, 0}, eq{0, 0};
  for (const auto& r : recs) {
    if (!r.ok) continue;
    ++kept.k;
    ++small.n;
    ++eq.n;
    small.k += r.err <= 2 * alpha;
    eq.k += r.equal;
  }
  auto row = base_row("sign_oneway_semi", "sign-oneway", N, o);
  row.d = static_cast<double>(d);
  row.alpha = alpha;
  row.beta = beta;
  row.rho = rho;
  row.samples_labeled = checked_mul(2 * N, A.sample_need);
  row.samples_shared = checked_mul(N, A.shared_need);
  row.est_exact_repl = eq.p();
  set_ci(row, eq);
  out.rows.push_back(row);
  out.notes.push_back("sign-oneway: " + std::to_string(N - kept.k) + " trials discarded at the per-point cap");
  out.checks.push_back(check_ge("sign-one-way error <= 2 alpha in >= 0.95 of trials", small.p(), 0.95));
  out.checks.push_back(check_ge("sign-one-way exact v-replication >= 1 - rho - 3SE", eq.p(), 1 - rho - three_se(eq)));
  return out;
}

}  // namespace

// ---- dispatch -----------------------------------------------------------------------

ExperimentResult exp_pointwise(const Config& cfg, const RunOptions& o) {
  const auto mode = cfg.str("mode", "basic");
  if (mode == "basic") return pointwise_basic(cfg, o);
  if (mode == "boosted") return pointwise_boosted(cfg, o);
  if (mode == "unbiased") return pointwise_unbiased(cfg, o);
  if (mode == "scaling") return pointwise_scaling(cfg, o);
  throw ConfigError("pointwise: unknown mode '" + mode + "'");
}

ExperimentResult exp_select(const Config& cfg, const RunOptions& o) {
  const auto mode = cfg.str("mode", "hypsel");
  if (mode == "hypsel") return select_hypsel(cfg, o);
  if (mode == "corrsamp") return select_corrsamp(cfg, o);
  throw ConfigError("select: unknown mode '" + mode + "'");
}

ExperimentResult exp_approx(const Config& cfg, const RunOptions& o) {
  const auto mode = cfg.str("mode", "const_alpha");
  if (mode == "const_alpha") return approx_pipeline(cfg, o, ApproxMode::ConstAlpha);
  if (mode == "const_gamma") return approx_pipeline(cfg, o, ApproxMode::ConstGamma);
  if (mode == "tester") return approx_tester(cfg, o);
  if (mode == "erm_boost") return approx_erm_boost(cfg, o);
  if (mode == "cost") return approx_cost(cfg, o);
  throw ConfigError("approx: unknown mode '" + mode + "'");
}

ExperimentResult exp_threshold(const Config& cfg, const RunOptions& o) {
  const auto mode = cfg.str("mode", "learner");
  if (mode == "learner") return threshold_learner_exp(cfg, o);
  if (mode == "dkw") return threshold_dkw(cfg, o);
  throw ConfigError("threshold: unknown mode '" + mode + "'");
}

ExperimentResult exp_realizable(const Config& cfg, const RunOptions& o) { return realizable_exp(cfg, o); }
ExperimentResult exp_semi(const Config& cfg, const RunOptions& o) { return semi_exp(cfg, o); }
ExperimentResult exp_reduce_bias(const Config& cfg, const RunOptions& o) { return reduce_bias_exp(cfg, o); }
ExperimentResult exp_reduce_amplify(const Config& cfg, const RunOptions& o) { return reduce_amplify_exp(cfg, o); }
ExperimentResult exp_sign_oneway(const Config& cfg, const RunOptions& o) { return sign_oneway_exp(cfg, o); }

// Grid over (rho, T-scale) of basic_pointwise on the finite task. Axes "rho", "alpha", "d", "p".
ExperimentResult exp_grid(const Config& cfg, const RunOptions& o) {
  std::vector<GridAxis> axes;
  for (const char* name : {"d", "p", "alpha", "beta", "rho"})
    if (cfg.has(std::string("axis.") + name)) axes.push_back({name, cfg.list(std::string("axis.") + name, {})});
  if (axes.empty()) axes.push_back({"rho", {0.4, 0.2, 0.1}});
  const auto c = constants_from(cfg);
  const auto N = trials(cfg, o, 1000, 100);
  auto cells = run_grid(axes, sub_seed(o, "grid"), [&](const std::vector<double>& v) {
    Config cell = cfg;
    for (std::size_t a = 0; a < axes.size(); ++a) cell.set(axes[a].name, format_number(v[a]));
    const std::size_t d = cell.count("d", 4);
    const double p = cell.num("p", 0.4), alpha = cell.num("alpha", 0.1), beta = cell.num("beta", 0.1),
                 rho = cell.num("rho", 0.2);
    PairedTrialConfig pc;
    pc.task = finite_task(alternating(d, p));
    pc.learner = cell.has("block")
                     ? basic_pointwise_blocks(erm_finite_learner(d, c), cell.count("block", 1),
                                              PointwiseParams{alpha, beta, rho, c.c_T}.T())
                     : basic_pointwise(erm_finite_learner(d, c), {alpha, beta, rho, c.c_T});
    pc.n_trials = N;
    pc.points = indices(d);
    pc.gamma = rho;
    pc.alpha = alpha;
    pc.workers = o.workers;
    return pc;
  });
  ExperimentResult out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& rep = cells[i].report;
    Config cell = cfg;
    for (std::size_t a = 0; a < axes.size(); ++a) cell.set(axes[a].name, format_number(cells[i].values[a]));
    auto row = report_row("grid_cell" + std::to_string(i), "grid", rep, o);
    row.d = static_cast<double>(cell.count("d", 4));
    row.alpha = cell.num("alpha", 0.1);
    row.beta = cell.num("beta", 0.1);
    row.rho = cell.num("rho", 0.2);
    set_ci(row, rep.pointwise[*rep.worst_point()]);
    out.rows.push_back(row);
  }
  return out;
}

ExperimentResult exp_wilson_coverage(const Config& cfg, const RunOptions& o) {
  const auto meta = cfg.count("meta_trials", o.quick ? 1000 : 5000);
  const auto n = cfg.count("stream_length", 200);
  const SharedRandomness root(sub_seed(o, "wilson"));
  ExperimentResult out;
  for (double p : cfg.list("p", {0.01, 0.2, 0.5})) {
    Rng g = root.child("p", static_cast<std::uint64_t>(std::llround(p * 1e6))).stream();
    std::uint64_t covered = 0;
    for (std::uint64_t k = 0; k < meta; ++k) {
      std::uint64_t s = 0;
      for (std::uint64_t i = 0; i < n; ++i) s += g.bernoulli(p);
      auto ci = wilson(s, n);
      covered += ci.lo <= p && p <= ci.hi;
    }
    const double cov = static_cast<double>(covered) / static_cast<double>(meta);
    auto row = base_row("wilson_p" + fmt(p), "selftest", meta, o);
    row.est_exact_repl = cov;
    out.rows.push_back(row);
    out.checks.push_back(check_ge("Wilson coverage >= 0.93 at p = " + fmt(p), cov, 0.93));
    out.checks.push_back(check_le("Wilson coverage <= 0.97 at p = " + fmt(p), cov, 0.97));
  }
  return out;
}

ExperimentResult exp_budgets(const Config& cfg, const RunOptions& o) {
  (void)o;
  const auto c = constants_from(cfg);
  ExperimentResult out;
  bool quad = true;
  for (double rho : {0.4, 0.2, 0.1, 0.05}) {
    const auto T = PointwiseParams{0.1, 0.1, rho, c.c_T}.T();
    const auto T2 = PointwiseParams{0.1, 0.1, rho / 2, c.c_T}.T();
    quad = quad && T == ceil_count(c.c_T / (rho * rho)) && T2 == 4 * T;
  }
  out.checks.push_back(check_true("basic_pointwise T = ceil(c_T / rho^2), and halving rho quadruples T", quad,
                                  "T(0.2) = " + std::to_string(PointwiseParams{0.1, 0.1, 0.2, c.c_T}.T())));
  const double n = max_cover_size(HypothesisClass::thresholds(), pool_size(HypothesisClass::thresholds(), 0.1, 0.05, c));
  const double ratio = semi_labeled_budget_raw(n, 0.1, 0.05, 0.05, c) / semi_labeled_budget_raw(n, 0.1, 0.05, 0.2, c);
  out.checks.push_back(check_le("semi labeled budget ratio under rho/4 is 16 (|ratio - 16|)", std::abs(ratio - 16.0), 1e-9));
  const auto b1 = semi_labeled_budget(HypothesisClass::thresholds(), 0.1, 0.05, 0.2, c);
  const auto b4 = semi_labeled_budget(HypothesisClass::thresholds(), 0.1, 0.05, 0.05, c);
  out.checks.push_back(check_true("semi rounded budgets satisfy 16 (m - 1) < m' <= 16 m", b4 <= 16 * b1 && b4 > 16 * (b1 - 1),
                                  std::to_string(b1) + " -> " + std::to_string(b4)));
  return out;
}

ExperimentResult exp_selftest(const Config& cfg, const RunOptions& o) {
  RunOptions q = o;
  q.quick = true;
  Config small;  // reference configurations at quick trial counts
  (void)cfg;
  ExperimentResult out;
  auto with = [&](std::initializer_list<std::pair<const char*, const char*>> kv) {
    Config c = small;
    for (const auto& [k, v] : kv) c.set(k, v);
    return c;
  };
  out.append(exp_pointwise(with({{"mode", "basic"}, {"n_trials", "200"}}), q));
  out.append(exp_pointwise(with({{"mode", "scaling"}, {"n_trials", "2000"}, {"T", "16,64,256"}}), q));
  out.append(exp_select(with({{"mode", "hypsel"}, {"n_trials", "200"}}), q));
  out.append(exp_select(with({{"mode", "corrsamp"}, {"pairs", "5000"}, {"chi_draws", "5000"}, {"chi_vectors", "5"},
                              {"determinism_calls", "500"}}),
                        q));
  out.append(exp_approx(with({{"mode", "tester"}, {"n_trials", "20"}}), q));
  out.append(exp_threshold(with({{"mode", "learner"}, {"n_trials", "50"}}), q));
  out.append(exp_realizable(with({{"n_trials", "40"}}), q));
  out.append(exp_semi(with({{"n_trials", "40"}}), q));
  out.append(exp_reduce_bias(with({{"n_trials", "40"}}), q));
  out.append(exp_sign_oneway(with({{"n_trials", "30"}}), q));
  out.append(exp_budgets(small, q));
  out.append(exp_wilson_coverage(with({{"meta_trials", "2000"}}), q));
  return out;
}

}  // namespace replilearn
