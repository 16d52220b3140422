#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ltm/bandit.hpp"
#include "ltm/benchmark.hpp"
#include "ltm/environments.hpp"
#include "ltm/errors.hpp"
#include "ltm/learner.hpp"
#include "ltm/ledger.hpp"
#include "ltm/mpp.hpp"
#include "ltm/reduction.hpp"
#include "ltm/rng.hpp"
#include "ltm/simplex.hpp"

namespace ltm {

// Experiment runner: wires a learner to a loss stream, runs seeded replicas,
// and aggregates the ledgers. Everything is deterministic from (config, seed):
// the comparator schedule comes from a fixed internal seed so replicas differ
// only in stream noise and sampling, the stream owns its own generator, and
// the sampler is seeded separately so learner randomness never perturbs the
// environment.

struct ExperimentConfig {
  std::string algo = "alg1";  // alg1 | alg2 | alg3 | mpp
  std::string env = "piecewise";  // piecewise | stochastic | sparse | lb-adversary
  int num_actions = 16;       // K
  long long horizon = 10000;  // T
  int switches = 20;          // S: schedule segments, or the adversary's budget
  int distinct = 3;           // n: distinct comparator actions
  int sparsity = 2;           // rho: nonzeros per round in the sparse stream
  std::vector<double> gaps = {0.2};  // stochastic gaps, cycled per segment
  double growth = 1.4;               // geometric segment-length growth
  std::string style = "best-action-favoring";  // piecewise flavor
  std::vector<std::uint64_t> seeds = {1};
  std::string out_dir;  // empty: keep results in memory only

  // Learner overrides; non-positive leaves each module's own default in charge.
  double eta = -1.0;
  double delta = -1.0;
  double gamma = -1.0;
  double share = -1.0;
  bool biased = true;  // alg1's sub-routine hurdle

  // Every violated precondition, empty when the config is runnable. Collected
  // rather than thrown one at a time so a bad config reports everything wrong
  // with it at once.
  std::vector<std::string> problems() const {
    std::vector<std::string> out;
    if (algo != "alg1" && algo != "alg2" && algo != "alg3" && algo != "mpp")
      out.push_back("algo must be one of alg1, alg2, alg3, mpp (got '" + algo + "')");
    if (env != "piecewise" && env != "stochastic" && env != "sparse" && env != "lb-adversary")
      out.push_back("env must be one of piecewise, stochastic, sparse, lb-adversary (got '" +
                    env + "')");
    if (num_actions < 1) out.push_back("K must be at least 1");
    if (horizon < 1) out.push_back("T must be at least 1");
    if (algo == "alg2" && horizon < 26) out.push_back("alg2 needs T >= 26 for a nonempty rate grid");
    if (seeds.empty()) out.push_back("need at least one seed");
    if (switches < 1) out.push_back("S must be at least 1");
    if (env == "lb-adversary") {
      if (num_actions < 2) out.push_back("lb-adversary needs K >= 2");
      if (horizon > 0 && std::max(1, switches / 2) > horizon)
        out.push_back("lb-adversary: more intervals than rounds");
    } else {
      if (static_cast<long long>(switches) > horizon) out.push_back("S cannot exceed T");
      if (distinct < 1 || distinct > std::min(switches, num_actions))
        out.push_back("n must lie in [1, min(S, K)]");
      if (switches > 1 && distinct < 2)
        out.push_back("multiple segments need at least two distinct actions");
      if (growth < 1.0) out.push_back("growth must be at least 1");
    }
    if (env == "piecewise" && style != "best-action-favoring" && style != "random-walk")
      out.push_back("style must be best-action-favoring or random-walk (got '" + style + "')");
    if (env == "stochastic") {
      if (gaps.empty()) out.push_back("stochastic env needs at least one gap");
      for (double a : gaps)
        if (!(a > 0.0) || a > 2.0) {
          out.push_back("gaps must lie in (0, 2]");
          break;
        }
    }
    if (env == "sparse" && sparsity < 1) out.push_back("rho must be at least 1");
    if (eta > 0.0) {
      if (algo == "alg3" && eta > 1.0 / 500.0) out.push_back("alg3 eta must not exceed 1/500");
      if (algo != "alg3" && eta > 0.2) out.push_back("eta must not exceed 1/5");
    }
    if (delta > 1.0) out.push_back("delta must lie in (0, 1]");
    if (share >= 0.0 && share > 0.5) out.push_back("share must lie in [0, 1/2]");
    return out;
  }
};

// Regret-bound formulas evaluated with constant 1; ratios are reported against
// these. Ids follow the summarize CLI: 1 and 2 are the full-information rates
// (the latter with the grid's extra ln ln T inside the log), 4 is the sparse
// bandit rate (needs rho), 5 the adaptive second-order rate (needs the run's
// accumulated V).
inline double bound_value(int theorem, long long horizon, double switches, double distinct,
                          int num_actions, int sparsity = 0, double second_order = 0.0) {
  if (horizon < 1 || !(switches > 0.0) || !(distinct > 0.0) || num_actions < 1)
    throw std::invalid_argument("bound_value: parameters must be positive");
  const double T = static_cast<double>(horizon);
  const double S = switches;
  const double n = distinct;
  const double K = static_cast<double>(num_actions);
  switch (theorem) {
    case 1:
      return std::sqrt(T * (S * std::log(T) + n * std::log(K)));
    case 2:
      return std::sqrt(T * (S * std::log(T) + n * std::log(K * std::log(T))));
    case 4: {
      if (sparsity < 1) throw std::invalid_argument("bound_value: theorem 4 needs rho >= 1");
      const double rho = static_cast<double>(sparsity);
      return std::cbrt(rho * S) * std::cbrt(n * T) * std::cbrt(n * T) +
             n * std::sqrt(T * rho * std::log(K)) + n * K * K * K * std::log(T);
    }
    case 5:
      if (!(second_order >= 0.0))
        throw std::invalid_argument("bound_value: theorem 5 needs the accumulated V");
      return std::sqrt((S * std::log(T) + n * std::log(K)) * second_order);
    default:
      throw std::invalid_argument("bound_value: theorem must be 1, 2, 4, or 5");
  }
}

// What restart-per-switch machinery pays on the same instance:
// sqrt(T*K*S*ln(TK)). The sparse learner's reason to exist is beating this
// when n and rho are small while S and K are not.
inline double restart_baseline_bound(long long horizon, int num_actions, double switches) {
  const double T = static_cast<double>(horizon);
  const double K = static_cast<double>(num_actions);
  return std::sqrt(T * K * switches * std::log(T * K));
}

// Least-squares slope of ln(cumulative regret) against ln(t) over the last
// half of the run; rounds with non-positive cumulative regret are skipped.
// Distinguishes sqrt-growth (~0.5) from logarithmic growth (~1/ln t) at desk
// scale without fitting constants.
inline double loglog_tail_slope(const std::vector<double>& cum_regret) {
  if (cum_regret.size() < 100)
    throw std::invalid_argument("loglog_tail_slope: need at least 100 rounds");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  long long m = 0;
  for (std::size_t idx = cum_regret.size() / 2; idx < cum_regret.size(); ++idx) {
    if (!(cum_regret[idx] > 0.0)) continue;
    const double x = std::log(static_cast<double>(idx + 1));
    const double y = std::log(cum_regret[idx]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 10) throw numerical_error("loglog_tail_slope: fewer than 10 usable points");
  const double denom = static_cast<double>(m) * sxx - sx * sx;
  if (!(denom > 0.0)) throw numerical_error("loglog_tail_slope: degenerate abscissa");
  return (static_cast<double>(m) * sxy - sx * sy) / denom;
}

struct SeedResult {
  std::uint64_t seed = 0;
  RegretLedger ledger;
  double tail_slope = std::numeric_limits<double>::quiet_NaN();  // NaN: not enough usable points
  double v_total = 0.0;  // mpp only: lifetime sum of p.r^2
  int restarts = 0;      // mpp only
};

struct Summary {
  int runs = 0;
  double mean_final_pseudo = 0.0;
  double stddev_final_pseudo = 0.0;  // population
  double mean_final_sampled = 0.0;
  double stddev_final_sampled = 0.0;
  double mean_tail_slope = std::numeric_limits<double>::quiet_NaN();
  double bound = 0.0;  // sqrt(T(S ln T + n ln K)) at the config's parameters
  double ratio = std::numeric_limits<double>::quiet_NaN();
};

struct ExperimentResult {
  std::vector<SeedResult> per_seed;
  Summary summary;
};

inline std::unique_ptr<Learner> make_learner(const ExperimentConfig& cfg) {
  if (cfg.algo == "alg1") {
    SimpleReductionConfig c;
    c.num_actions = cfg.num_actions;
    c.horizon = cfg.horizon;
    c.switch_guess = static_cast<double>(cfg.switches);
    c.distinct_guess = static_cast<double>(cfg.distinct);
    c.eta = cfg.eta;
    c.biased = cfg.biased;
    c.share = cfg.share;
    return std::make_unique<SimpleReduction>(c);
  }
  if (cfg.algo == "alg2") {
    GridReductionConfig c;
    c.num_actions = cfg.num_actions;
    c.horizon = cfg.horizon;
    c.share = cfg.share;
    return std::make_unique<GridReduction>(c);
  }
  if (cfg.algo == "alg3") {
    BanditConfig c;
    c.num_actions = cfg.num_actions;
    c.horizon = cfg.horizon;
    c.switches = static_cast<double>(cfg.switches);
    c.distinct = static_cast<double>(cfg.distinct);
    c.sparsity = cfg.sparsity;
    c.eta = cfg.eta;
    c.delta = cfg.delta;
    c.gamma = cfg.gamma;
    return std::make_unique<SparseBandit>(c);
  }
  if (cfg.algo == "mpp") {
    MppConfig c;
    c.num_actions = cfg.num_actions;
    c.horizon = cfg.horizon;
    c.switches = static_cast<double>(cfg.switches);
    c.distinct = static_cast<double>(cfg.distinct);
    c.share = cfg.share;
    return std::make_unique<MppLearner>(c);
  }
  throw std::invalid_argument("unknown algo '" + cfg.algo + "'");
}

// The comparator schedule is shared by every replica of a config (fixed
// internal seed); only stream noise and sampling vary with the replica seed.
inline constexpr std::uint64_t kScheduleSeed = 1729;
inline constexpr std::uint64_t kSamplerSalt = 0x9e3779b97f4a7c15ull;

inline std::unique_ptr<LossStream> make_stream(const ExperimentConfig& cfg, std::uint64_t seed) {
  if (cfg.env == "lb-adversary")
    return std::make_unique<LowerBoundAdversary>(cfg.num_actions, cfg.horizon, cfg.switches);
  Rng schedule_rng(kScheduleSeed);
  PiecewiseSchedule sched = PiecewiseSchedule::make(cfg.num_actions, cfg.horizon, cfg.switches,
                                                    cfg.distinct, cfg.growth, schedule_rng);
  if (cfg.env == "piecewise")
    return std::make_unique<PiecewiseAdversarial>(std::move(sched), parse_style(cfg.style), seed);
  if (cfg.env == "stochastic")
    return std::make_unique<StochasticStream>(std::move(sched), cfg.gaps, seed);
  if (cfg.env == "sparse")
    return std::make_unique<SparseStream>(std::move(sched), cfg.sparsity, seed);
  throw std::invalid_argument("unknown env '" + cfg.env + "'");
}

inline SeedResult run_one(const ExperimentConfig& cfg, std::uint64_t seed) {
  SeedResult out;
  out.seed = seed;
  std::unique_ptr<LossStream> stream = make_stream(cfg, seed);
  std::unique_ptr<Learner> learner = make_learner(cfg);
  Rng sampler(seed ^ kSamplerSalt);
  const long long T = cfg.horizon;

  if (stream->benchmark_known()) {
    const BenchmarkSequence& bench = stream->benchmark();
    for (long long t = 0; t < T; ++t) {
      const std::vector<double>& p = learner->distribution();
      const std::vector<double> loss = stream->next();
      const int drawn = sampler.sample(p);
      stream->observe(drawn);
      out.ledger.append(t + 1, p, loss, bench.actions[static_cast<std::size_t>(t)], drawn);
      learner->update(loss, drawn);
    }
  } else {
    // Adaptive stream: the comparator is only known afterwards, so buffer the
    // round data and settle the ledger at the end.
    std::vector<std::vector<double>> losses;
    losses.reserve(static_cast<std::size_t>(T));
    std::vector<double> expected(static_cast<std::size_t>(T));
    std::vector<int> drawn_at(static_cast<std::size_t>(T));
    for (long long t = 0; t < T; ++t) {
      const std::vector<double>& p = learner->distribution();
      std::vector<double> loss = stream->next();
      const int drawn = sampler.sample(p);
      stream->observe(drawn);
      expected[static_cast<std::size_t>(t)] = dot(p, loss);
      drawn_at[static_cast<std::size_t>(t)] = drawn;
      learner->update(loss, drawn);
      losses.push_back(std::move(loss));
    }
    const BenchmarkSequence& bench = stream->benchmark();
    for (long long t = 0; t < T; ++t) {
      const std::size_t u = static_cast<std::size_t>(t);
      out.ledger.append_row(t + 1, expected[u], losses[u][static_cast<std::size_t>(drawn_at[u])],
                            losses[u][static_cast<std::size_t>(bench.actions[u])]);
    }
  }

  try {
    out.tail_slope = loglog_tail_slope(out.ledger.cum_pseudo_series());
  } catch (const std::exception&) {
    // short run or regret never positive on the tail; slope stays NaN
  }
  if (const auto* mpp = dynamic_cast<const MppLearner*>(learner.get())) {
    out.v_total = mpp->v_total();
    out.restarts = mpp->restarts();
  }
  return out;
}

inline Summary summarize_runs(const ExperimentConfig& cfg, const std::vector<SeedResult>& runs) {
  Summary s;
  s.runs = static_cast<int>(runs.size());
  if (runs.empty()) return s;
  double sp = 0.0, ss = 0.0;
  for (const SeedResult& r : runs) {
    sp += r.ledger.final_pseudo_regret();
    ss += r.ledger.final_sampled_regret();
  }
  s.mean_final_pseudo = sp / s.runs;
  s.mean_final_sampled = ss / s.runs;
  double vp = 0.0, vs = 0.0;
  for (const SeedResult& r : runs) {
    const double dp = r.ledger.final_pseudo_regret() - s.mean_final_pseudo;
    const double ds = r.ledger.final_sampled_regret() - s.mean_final_sampled;
    vp += dp * dp;
    vs += ds * ds;
  }
  s.stddev_final_pseudo = std::sqrt(vp / s.runs);
  s.stddev_final_sampled = std::sqrt(vs / s.runs);
  double slope_sum = 0.0;
  int slope_count = 0;
  for (const SeedResult& r : runs) {
    if (std::isnan(r.tail_slope)) continue;
    slope_sum += r.tail_slope;
    ++slope_count;
  }
  if (slope_count > 0) s.mean_tail_slope = slope_sum / slope_count;
  s.bound = bound_value(1, cfg.horizon, cfg.switches, cfg.distinct, cfg.num_actions);
  if (s.bound > 0.0) s.ratio = s.mean_final_pseudo / s.bound;
  return s;
}

// ---- config/work-product text formats -------------------------------------
//
// config.txt is plain key=value, one per line, in a fixed order; the same
// format is accepted back through --config, so any run can be replayed from
// its own output directory. Numbers print with %.17g so they round-trip.

inline std::string format_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string join_doubles(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += format_g(xs[i]);
  }
  return out;
}

inline std::string join_seeds(const std::vector<std::uint64_t>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(xs[i]);
  }
  return out;
}

inline void write_config_text(const ExperimentConfig& cfg, std::ostream& os) {
  os << "algo=" << cfg.algo << '\n';
  os << "env=" << cfg.env << '\n';
  os << "K=" << cfg.num_actions << '\n';
  os << "T=" << cfg.horizon << '\n';
  os << "S=" << cfg.switches << '\n';
  os << "n=" << cfg.distinct << '\n';
  os << "rho=" << cfg.sparsity << '\n';
  os << "gap=" << join_doubles(cfg.gaps) << '\n';
  os << "growth=" << format_g(cfg.growth) << '\n';
  os << "style=" << cfg.style << '\n';
  os << "seeds=" << join_seeds(cfg.seeds) << '\n';
  os << "eta=" << format_g(cfg.eta) << '\n';
  os << "delta=" << format_g(cfg.delta) << '\n';
  os << "gamma=" << format_g(cfg.gamma) << '\n';
  os << "share=" << format_g(cfg.share) << '\n';
  os << "biased=" << (cfg.biased ? 1 : 0) << '\n';
  os << "out=" << cfg.out_dir << '\n';
}

inline std::string trim_copy(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

inline double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  if (used != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

inline long long parse_ll(const std::string& s) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not an integer: '" + s + "'");
  }
  if (used != s.size()) throw std::invalid_argument("not an integer: '" + s + "'");
  return v;
}

inline int parse_int(const std::string& s) {
  const long long v = parse_ll(s);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw std::invalid_argument("integer out of range: '" + s + "'");
  return static_cast<int>(v);
}

inline std::uint64_t parse_u64(const std::string& s) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a seed: '" + s + "'");
  }
  if (used != s.size()) throw std::invalid_argument("not a seed: '" + s + "'");
  return v;
}

inline std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  for (const std::string& part : split(s, ','))
    if (!trim_copy(part).empty()) out.push_back(parse_double(trim_copy(part)));
  if (out.empty()) throw std::invalid_argument("empty list: '" + s + "'");
  return out;
}

inline std::vector<std::uint64_t> parse_seed_list(const std::string& s) {
  std::vector<std::uint64_t> out;
  for (const std::string& part : split(s, ','))
    if (!trim_copy(part).empty()) out.push_back(parse_u64(trim_copy(part)));
  if (out.empty()) throw std::invalid_argument("empty list: '" + s + "'");
  return out;
}

inline bool parse_bool(const std::string& s) {
  if (s == "1" || s == "true" || s == "yes") return true;
  if (s == "0" || s == "false" || s == "no") return false;
  throw std::invalid_argument("not a boolean: '" + s + "'");
}

inline void apply_key_value(ExperimentConfig& cfg, const std::string& key,
                            const std::string& value) {
  if (key == "algo")
    cfg.algo = value;
  else if (key == "env")
    cfg.env = value;
  else if (key == "K")
    cfg.num_actions = parse_int(value);
  else if (key == "T")
    cfg.horizon = parse_ll(value);
  else if (key == "S")
    cfg.switches = parse_int(value);
  else if (key == "n")
    cfg.distinct = parse_int(value);
  else if (key == "rho")
    cfg.sparsity = parse_int(value);
  else if (key == "gap")
    cfg.gaps = parse_double_list(value);
  else if (key == "growth")
    cfg.growth = parse_double(value);
  else if (key == "style")
    cfg.style = value;
  else if (key == "seeds")
    cfg.seeds = parse_seed_list(value);
  else if (key == "eta")
    cfg.eta = parse_double(value);
  else if (key == "delta")
    cfg.delta = parse_double(value);
  else if (key == "gamma")
    cfg.gamma = parse_double(value);
  else if (key == "share")
    cfg.share = parse_double(value);
  else if (key == "biased")
    cfg.biased = parse_bool(value);
  else if (key == "out")
    cfg.out_dir = value;
  else
    throw std::invalid_argument("unknown config key '" + key + "'");
}

inline void load_config_file(const std::string& path, ExperimentConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim_copy(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected key=value");
    apply_key_value(cfg, trim_copy(stripped.substr(0, eq)), trim_copy(stripped.substr(eq + 1)));
  }
}

inline constexpr const char* kSeedsCsvHeader =
    "seed,final_pseudo_regret,final_sampled_regret,tail_slope,v_total,restarts";
inline constexpr const char* kSummaryCsvHeader =
    "runs,mean_final_pseudo_regret,stddev_final_pseudo_regret,mean_final_sampled_regret,"
    "stddev_final_sampled_regret,mean_tail_slope,bound_value,ratio";

inline void write_outputs(const ExperimentConfig& cfg, const ExperimentResult& res) {
  namespace fs = std::filesystem;
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);

  {
    std::ofstream os(dir / "config.txt");
    if (!os) throw std::invalid_argument("cannot write to '" + cfg.out_dir + "'");
    write_config_text(cfg, os);
  }
  for (const SeedResult& r : res.per_seed) {
    std::ofstream os(dir / ("ledger_" + std::to_string(r.seed) + ".csv"));
    r.ledger.write_csv(os);
  }
  {
    std::ofstream os(dir / "seeds.csv");
    os << kSeedsCsvHeader << '\n';
    for (const SeedResult& r : res.per_seed) {
      os << r.seed << ',' << format_g(r.ledger.final_pseudo_regret()) << ','
         << format_g(r.ledger.final_sampled_regret()) << ',' << format_g(r.tail_slope) << ','
         << format_g(r.v_total) << ',' << r.restarts << '\n';
    }
  }
  {
    std::ofstream os(dir / "summary.csv");
    const Summary& s = res.summary;
    os << kSummaryCsvHeader << '\n';
    os << s.runs << ',' << format_g(s.mean_final_pseudo) << ',' << format_g(s.stddev_final_pseudo)
       << ',' << format_g(s.mean_final_sampled) << ',' << format_g(s.stddev_final_sampled) << ','
       << format_g(s.mean_tail_slope) << ',' << format_g(s.bound) << ',' << format_g(s.ratio)
       << '\n';
  }
}

// Audit dump of one stream realization: a "t,i,loss" row per nonzero entry,
// rounds 1-based. Consumes the stream, so hand it a fresh instance. The
// adaptive adversary sees no plays during a dump and emits its unprovoked
// trajectory.
inline void dump_stream_csv(LossStream& stream, std::ostream& os) {
  os << "t,i,loss\n";
  for (long long t = 0; t < stream.horizon(); ++t) {
    const std::vector<double> loss = stream.next();
    for (std::size_t i = 0; i < loss.size(); ++i)
      if (loss[i] != 0.0) os << (t + 1) << ',' << i << ',' << format_g(loss[i]) << '\n';
  }
}

inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  const std::vector<std::string> problems = cfg.problems();
  if (!problems.empty()) {
    std::string msg = "invalid experiment config:";
    for (const std::string& p : problems) msg += "\n  - " + p;
    throw std::invalid_argument(msg);
  }
  ExperimentResult res;
  // Replicas share nothing, so fork one per seed and collect in seed order;
  // slot i always holds seed i, keeping the output independent of scheduling.
  std::vector<std::future<SeedResult>> pending;
  pending.reserve(cfg.seeds.size());
  for (std::uint64_t seed : cfg.seeds)
    pending.push_back(
        std::async(std::launch::async, [&cfg, seed] { return run_one(cfg, seed); }));
  res.per_seed.reserve(cfg.seeds.size());
  for (std::future<SeedResult>& f : pending) res.per_seed.push_back(f.get());
  res.summary = summarize_runs(cfg, res.per_seed);
  if (!cfg.out_dir.empty()) write_outputs(cfg, res);
  return res;
}

}  // namespace ltm
