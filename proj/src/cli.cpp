#include "replilearn/cli.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>

#include <CLI11.hpp>

#include "replilearn/experiments.hpp"
#include "replilearn/harness.hpp"

namespace replilearn {

namespace {

using ExpFn = std::function<ExperimentResult(const Config&, const RunOptions&)>;

const std::map<std::string, std::pair<ExpFn, std::string>>& subcommands() {
  static const std::map<std::string, std::pair<ExpFn, std::string>> m{
      {"pointwise", {exp_pointwise, "pointwise replicability (mode = basic|boosted|unbiased|scaling)"}},
      {"approx", {exp_approx, "approximate replicability (mode = const_alpha|const_gamma|tester|erm_boost|cost)"}},
      {"threshold", {exp_threshold, "proper threshold learner (mode = learner|dkw)"}},
      {"realizable", {exp_realizable, "realizable OPT gate"}},
      {"semi", {exp_semi, "semi-replicable learner with a shared unlabeled pool"}},
      {"select", {exp_select, "replicable hypothesis selection (mode = hypsel|corrsamp)"}},
      {"reduce-bias", {exp_reduce_bias, "bias estimation from a pointwise-replicable learner"}},
      {"reduce-amplify", {exp_reduce_amplify, "hardness amplification reduction"}},
      {"sign-oneway", {exp_sign_oneway, "sign-one-way marginals from a learner"}},
      {"grid", {exp_grid, "parameter grid of paired runs (axis.<name> = v1,v2,...)"}},
      {"selftest", {exp_selftest, "quick pass over every module; exit 3 on a failed check"}},
  };
  return m;
}

std::uint64_t parse_seed(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw ConfigError("seed must be an unsigned 64-bit integer: '" + s + "'");
  errno = 0;
  const auto v = std::strtoull(s.c_str(), nullptr, 10);
  if (errno == ERANGE) throw ConfigError("seed out of range: '" + s + "'");
  return v;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Paired-run replicability experiments", "replilearn"};
  std::string config_path, out_path, seed_text = "0";
  std::vector<std::string> sets;
  unsigned workers = 0;
  bool quick = false;
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.add_option("--config", config_path, "key=value config file");
  app.add_option("--out", out_path, "write CSV here instead of stdout");
  app.add_option("--seed", seed_text, "root seed (REPLILEARN_SEED overrides)");
  app.add_option("--workers", workers, "worker threads (0 = machine parallelism)");
  app.add_flag("--quick", quick, "reduced trial counts");
  app.add_option("--set", sets, "override a config key (key=value), repeatable");
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, entry] : subcommands()) subs[name] = app.add_subcommand(name, entry.second)->fallthrough();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitConfig;
  }

  std::string which;
  for (const auto& [name, sub] : subs)
    if (sub->parsed()) which = name;

  try {
    Config cfg = config_path.empty() ? Config() : Config::load(config_path);
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value: '" + kv + "'");
      cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    RunOptions o;
    o.seed = parse_seed(seed_text);
    if (const char* env = std::getenv("REPLILEARN_SEED"); env && *env) o.seed = parse_seed(env);
    o.workers = workers == 0 ? default_workers() : workers;
    o.quick = quick;

    const auto result = subcommands().at(which).first(cfg, o);

    std::ofstream file;
    if (!out_path.empty()) {
      file.open(out_path, std::ios::binary);
      if (!file) throw ConfigError("cannot write " + out_path);
    }
    std::ostream& csv = out_path.empty() ? out : file;
    csv << csv_header() << '\n';
    for (const auto& row : result.rows) csv << csv_line(row) << '\n';
    csv.flush();

    for (const auto& n : result.notes) err << "note: " << n << '\n';
    for (const auto& c : result.checks)
      err << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << format_number(c.value) << ' ' << c.op << ' '
          << format_number(c.bound) << (c.detail.empty() ? "" : " (" + c.detail + ")") << '\n';
    if (which == "selftest" && !result.pass()) return kExitSelftestFailed;
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "error: invalid parameters: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace replilearn
