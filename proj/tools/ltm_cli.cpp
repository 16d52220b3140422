// Command-line front end for the experiment harness. Three subcommands:
//
//   run        one config, N seeded replicas, CSV work products
//   sweep      re-run a base config across a list of values for one key
//   summarize  recompute aggregates from a results directory's CSVs
//
// Exit codes: 0 success, 2 validation/usage error, 3 numerical breakdown,
// 1 anything else.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "ltm/harness.hpp"

namespace fs = std::filesystem;

namespace {

// Raw option storage for run/sweep. Values only land in the ExperimentConfig
// when the flag was actually given, so a --config file keeps everything the
// command line does not override.
struct RawOptions {
  std::string config_path;
  std::string algo;
  std::string env;
  int num_actions = 0;
  long long horizon = 0;
  int switches = 0;
  int distinct = 0;
  int sparsity = 0;
  std::string gaps;
  double growth = 0.0;
  std::string style;
  std::string seeds;
  std::string out;
  double eta = 0.0;
  double delta = 0.0;
  double gamma = 0.0;
  double share = 0.0;
  bool biased = true;
};

void attach_config_options(CLI::App* cmd, RawOptions& raw) {
  cmd->add_option("--config", raw.config_path,
                  "key=value file loaded first; flags below override it");
  cmd->add_option("--algo", raw.algo, "alg1 | alg2 | alg3 | mpp");
  cmd->add_option("--env", raw.env, "piecewise | stochastic | sparse | lb-adversary");
  cmd->add_option("--K", raw.num_actions, "number of actions");
  cmd->add_option("--T", raw.horizon, "horizon (rounds)");
  cmd->add_option("--S", raw.switches, "comparator switches / adversary budget");
  cmd->add_option("--n", raw.distinct, "distinct comparator actions");
  cmd->add_option("--rho", raw.sparsity, "nonzero losses per round (sparse env)");
  cmd->add_option("--gap", raw.gaps, "comma-separated stochastic gaps, cycled per segment");
  cmd->add_option("--growth", raw.growth, "segment-length growth factor (1 = equal)");
  cmd->add_option("--style", raw.style, "piecewise flavor: best-action-favoring | random-walk");
  cmd->add_option("--seeds", raw.seeds, "comma-separated replica seeds");
  cmd->add_option("--out", raw.out, "output directory for CSV work products");
  cmd->add_option("--eta", raw.eta, "learning-rate override");
  cmd->add_option("--delta", raw.delta, "confidence-floor override (alg3)");
  cmd->add_option("--gamma", raw.gamma, "barrier-weight override (alg3)");
  cmd->add_option("--share", raw.share, "share/mixing override");
  cmd->add_flag("--biased,!--no-biased", raw.biased, "bias alg1's sub-routine losses");
}

ltm::ExperimentConfig merge_options(const CLI::App* cmd, const RawOptions& raw) {
  ltm::ExperimentConfig cfg;
  if (cmd->count("--config")) ltm::load_config_file(raw.config_path, cfg);
  if (cmd->count("--algo")) cfg.algo = raw.algo;
  if (cmd->count("--env")) cfg.env = raw.env;
  if (cmd->count("--K")) cfg.num_actions = raw.num_actions;
  if (cmd->count("--T")) cfg.horizon = raw.horizon;
  if (cmd->count("--S")) cfg.switches = raw.switches;
  if (cmd->count("--n")) cfg.distinct = raw.distinct;
  if (cmd->count("--rho")) cfg.sparsity = raw.sparsity;
  if (cmd->count("--gap")) cfg.gaps = ltm::parse_double_list(raw.gaps);
  if (cmd->count("--growth")) cfg.growth = raw.growth;
  if (cmd->count("--style")) cfg.style = raw.style;
  if (cmd->count("--seeds")) cfg.seeds = ltm::parse_seed_list(raw.seeds);
  if (cmd->count("--out")) cfg.out_dir = raw.out;
  if (cmd->count("--eta")) cfg.eta = raw.eta;
  if (cmd->count("--delta")) cfg.delta = raw.delta;
  if (cmd->count("--gamma")) cfg.gamma = raw.gamma;
  if (cmd->count("--share")) cfg.share = raw.share;
  if (cmd->count("--biased")) cfg.biased = raw.biased;
  return cfg;
}

void require_runnable(const ltm::ExperimentConfig& cfg) {
  const std::vector<std::string> problems = cfg.problems();
  if (problems.empty()) return;
  std::string msg = "invalid experiment config:";
  for (const std::string& p : problems) msg += "\n  - " + p;
  throw std::invalid_argument(msg);
}

std::string summary_line(const ltm::ExperimentConfig& cfg, const ltm::Summary& s) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "%s %s K=%d T=%lld S=%d n=%d runs=%d mean_pseudo_regret=%.6g stddev=%.6g "
                "bound=%.6g ratio=%.4g tail_slope=%.3g",
                cfg.algo.c_str(), cfg.env.c_str(), cfg.num_actions, cfg.horizon, cfg.switches,
                cfg.distinct, s.runs, s.mean_final_pseudo, s.stddev_final_pseudo, s.bound, s.ratio,
                s.mean_tail_slope);
  return buf;
}

// Rebuild a ledger from its CSV so summaries provably need nothing beyond the
// emitted files. The cumulative columns are cross-checked against the
// re-derived sums.
ltm::RegretLedger load_ledger_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || ltm::trim_copy(line) != ltm::RegretLedger::kCsvHeader)
    throw std::invalid_argument(path.string() + ": not a ledger CSV");
  ltm::RegretLedger ledger;
  while (std::getline(in, line)) {
    const std::string row = ltm::trim_copy(line);
    if (row.empty()) continue;
    const std::vector<std::string> cells = ltm::split(row, ',');
    if (cells.size() != 6)
      throw std::invalid_argument(path.string() + ": malformed row '" + row + "'");
    ledger.append_row(ltm::parse_ll(cells[0]), ltm::parse_double(cells[1]),
                      ltm::parse_double(cells[2]), ltm::parse_double(cells[3]));
    if (std::abs(ltm::parse_double(cells[4]) - ledger.final_pseudo_regret()) > 1e-9 ||
        std::abs(ltm::parse_double(cells[5]) - ledger.final_sampled_regret()) > 1e-9)
      throw ltm::numerical_error(path.string() + ": cumulative columns disagree with the rows");
  }
  if (ledger.empty()) throw std::invalid_argument(path.string() + ": no rows");
  return ledger;
}

int run_main(const CLI::App* cmd, const RawOptions& raw, const std::string& dump_path) {
  const ltm::ExperimentConfig cfg = merge_options(cmd, raw);
  if (!dump_path.empty()) {
    // Audit mode: write the first seed's loss realization and stop; no
    // learner runs.
    require_runnable(cfg);
    std::unique_ptr<ltm::LossStream> stream = ltm::make_stream(cfg, cfg.seeds.front());
    std::ofstream os(dump_path);
    if (!os) throw std::invalid_argument("cannot write to '" + dump_path + "'");
    ltm::dump_stream_csv(*stream, os);
    std::cout << "stream for seed " << cfg.seeds.front() << " -> " << dump_path << '\n';
    return 0;
  }
  const ltm::ExperimentResult res = ltm::run_experiment(cfg);
  std::cout << summary_line(cfg, res.summary) << '\n';
  if (!cfg.out_dir.empty()) std::cout << "work products -> " << cfg.out_dir << '\n';
  return 0;
}

int sweep_main(const CLI::App* cmd, const RawOptions& raw, const std::string& param,
               const std::string& values) {
  const ltm::ExperimentConfig base = merge_options(cmd, raw);
  std::vector<std::string> points;
  for (const std::string& part : ltm::split(values, ','))
    if (!ltm::trim_copy(part).empty()) points.push_back(ltm::trim_copy(part));
  if (points.empty()) throw std::invalid_argument("empty --values list");
  for (const std::string& value : points) {
    ltm::ExperimentConfig cfg = base;
    ltm::apply_key_value(cfg, param, value);
    if (!base.out_dir.empty())
      cfg.out_dir = (fs::path(base.out_dir) / (param + "=" + value)).string();
    const ltm::ExperimentResult res = ltm::run_experiment(cfg);
    std::cout << param << '=' << value << ": " << summary_line(cfg, res.summary) << '\n';
  }
  return 0;
}

int summarize_main(const std::string& in_dir, int theorem) {
  const fs::path dir(in_dir);
  ltm::ExperimentConfig cfg;
  ltm::load_config_file((dir / "config.txt").string(), cfg);

  // Ledger files are the ground truth; everything below is recomputed from
  // them. seeds.csv is only consulted for the quantities a ledger cannot
  // carry (the second-order total, restart counts).
  std::vector<std::pair<std::uint64_t, fs::path>> ledger_files;
  for (const fs::directory_entry& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("ledger_", 0) != 0 || name.size() < 12) continue;
    if (name.substr(name.size() - 4) != ".csv") continue;
    ledger_files.emplace_back(ltm::parse_u64(name.substr(7, name.size() - 11)), entry.path());
  }
  if (ledger_files.empty())
    throw std::invalid_argument("no ledger_<seed>.csv files in '" + in_dir + "'");
  std::sort(ledger_files.begin(), ledger_files.end());

  std::vector<ltm::SeedResult> runs;
  runs.reserve(ledger_files.size());
  for (const auto& [seed, path] : ledger_files) {
    ltm::SeedResult r;
    r.seed = seed;
    r.ledger = load_ledger_csv(path);
    try {
      r.tail_slope = ltm::loglog_tail_slope(r.ledger.cum_pseudo_series());
    } catch (const std::exception&) {
      // short run or non-positive tail; slope stays NaN
    }
    runs.push_back(std::move(r));
  }
  ltm::Summary s = ltm::summarize_runs(cfg, runs);

  double mean_v_total = std::numeric_limits<double>::quiet_NaN();
  {
    std::ifstream in(dir / "seeds.csv");
    if (in) {
      std::string line;
      std::getline(in, line);  // header
      double sum = 0.0;
      int count = 0;
      while (std::getline(in, line)) {
        const std::string row = ltm::trim_copy(line);
        if (row.empty()) continue;
        const std::vector<std::string> cells = ltm::split(row, ',');
        if (cells.size() < 5) continue;
        sum += ltm::parse_double(cells[4]);
        ++count;
      }
      if (count > 0) mean_v_total = sum / count;
    }
  }

  double bound = 0.0;
  if (theorem == 4)
    bound = ltm::bound_value(4, cfg.horizon, cfg.switches, cfg.distinct, cfg.num_actions,
                             cfg.sparsity);
  else if (theorem == 5) {
    if (std::isnan(mean_v_total))
      throw std::invalid_argument("theorem 5 needs the v_total column of seeds.csv");
    bound = ltm::bound_value(5, cfg.horizon, cfg.switches, cfg.distinct, cfg.num_actions, 0,
                             mean_v_total);
  } else
    bound = ltm::bound_value(theorem, cfg.horizon, cfg.switches, cfg.distinct, cfg.num_actions);

  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "%s %s K=%d T=%lld S=%d n=%d rho=%d\n"
                "runs=%d mean_pseudo_regret=%.6g stddev=%.6g mean_sampled_regret=%.6g "
                "tail_slope=%.3g",
                cfg.algo.c_str(), cfg.env.c_str(), cfg.num_actions, cfg.horizon, cfg.switches,
                cfg.distinct, cfg.sparsity, s.runs, s.mean_final_pseudo, s.stddev_final_pseudo,
                s.mean_final_sampled, s.mean_tail_slope);
  std::cout << buf << '\n';
  if (theorem == 5)
    std::snprintf(buf, sizeof(buf), "theorem=5 mean_v_total=%.6g bound=%.6g ratio=%.4g",
                  mean_v_total, bound, s.mean_final_pseudo / bound);
  else
    std::snprintf(buf, sizeof(buf), "theorem=%d bound=%.6g ratio=%.4g", theorem, bound,
                  bound > 0.0 ? s.mean_final_pseudo / bound
                              : std::numeric_limits<double>::quiet_NaN());
  std::cout << buf << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"long-term-memory online-learning experiments"};
  app.require_subcommand(1);

  RawOptions raw;
  std::string dump_path;
  CLI::App* run_cmd = app.add_subcommand("run", "run one config across its seeds");
  attach_config_options(run_cmd, raw);
  run_cmd->add_option("--dump-stream", dump_path,
                      "write the first seed's loss stream to this CSV and exit");

  RawOptions sweep_raw;
  std::string param, values;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "re-run a config for each value of one key");
  attach_config_options(sweep_cmd, sweep_raw);
  sweep_cmd->add_option("--param", param, "config key to vary")->required();
  sweep_cmd->add_option("--values", values, "comma-separated values for --param")->required();

  std::string in_dir;
  int theorem = 1;
  CLI::App* summ_cmd = app.add_subcommand("summarize", "recompute aggregates from a results dir");
  summ_cmd->add_option("--in", in_dir, "directory holding config.txt and ledger CSVs")
      ->required();
  summ_cmd->add_option("--theorem", theorem, "bound to report the ratio against (1|2|4|5)")
      ->check(CLI::IsMember({1, 2, 4, 5}));

  try {
    app.parse(argc, argv);
    if (run_cmd->parsed()) return run_main(run_cmd, raw, dump_path);
    if (sweep_cmd->parsed()) return sweep_main(sweep_cmd, sweep_raw, param, values);
    return summarize_main(in_dir, theorem);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ltm::numerical_error& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
