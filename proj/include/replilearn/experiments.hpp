#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "replilearn/config.hpp"
#include "replilearn/constants.hpp"

namespace replilearn {

struct RunOptions {
  std::uint64_t seed = 0;
  unsigned workers = 0;
  bool quick = false;
};

// One CSV line; unset fields print as empty.
struct CsvRow {
  std::string experiment_id, subcommand;
  std::optional<double> d, alpha, beta, rho, gamma;
  std::uint64_t n_trials = 0, seed = 0;
  std::optional<std::uint64_t> samples_labeled, samples_shared;
  std::optional<double> est_exact_repl, est_approx_repl, est_pointwise_max, excess_err_p90, opt, ci_lo, ci_hi;
};
std::string csv_header();
std::string csv_line(const CsvRow& row);
std::string format_number(double x);  // %.17g

// A pinned pass/fail comparison: value <op> bound.
struct Check {
  std::string name;
  double value;
  std::string op;  // "<=", ">=", "=="
  double bound;
  bool pass;
  std::string detail;
};
Check check_le(std::string name, double value, double bound, std::string detail = "");
Check check_ge(std::string name, double value, double bound, std::string detail = "");
Check check_true(std::string name, bool ok, std::string detail = "");

struct ExperimentResult {
  std::vector<CsvRow> rows;
  std::vector<Check> checks;
  std::vector<std::string> notes;

  bool pass() const;
  void append(ExperimentResult other);
};

// Constants table with "const.<field>" overrides from the config.
Constants constants_from(const Config& cfg);

// Each experiment reads its parameters from cfg (defaults: the reference
// configurations) and runs through the harness.
ExperimentResult exp_pointwise(const Config& cfg, const RunOptions& o);       // mode = basic|boosted|unbiased|scaling
ExperimentResult exp_select(const Config& cfg, const RunOptions& o);          // mode = hypsel|corrsamp
ExperimentResult exp_approx(const Config& cfg, const RunOptions& o);          // mode = cost|tester|const_alpha|const_gamma|erm_boost
ExperimentResult exp_threshold(const Config& cfg, const RunOptions& o);       // mode = learner|dkw
ExperimentResult exp_realizable(const Config& cfg, const RunOptions& o);
ExperimentResult exp_semi(const Config& cfg, const RunOptions& o);
ExperimentResult exp_reduce_bias(const Config& cfg, const RunOptions& o);
ExperimentResult exp_reduce_amplify(const Config& cfg, const RunOptions& o);
ExperimentResult exp_sign_oneway(const Config& cfg, const RunOptions& o);
ExperimentResult exp_grid(const Config& cfg, const RunOptions& o);
ExperimentResult exp_wilson_coverage(const Config& cfg, const RunOptions& o);
ExperimentResult exp_budgets(const Config& cfg, const RunOptions& o);
// Quick end-to-end pass over every module.
ExperimentResult exp_selftest(const Config& cfg, const RunOptions& o);

// Probability that per-point ERM on n uniform draws over d points labels a
// point of bias p as +1 (ties and unseen -> +1).
double erm_plus_probability(std::uint64_t n, std::size_t d, double p);

}  // namespace replilearn
