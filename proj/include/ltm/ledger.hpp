#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ltm/simplex.hpp"

namespace ltm {

// Round-by-round regret accounting. Two parallel tallies are kept: pseudo
// (expected loss of the played distribution, low variance, what the growth
// checks use) and sampled (the realized draw). Rows serialize to CSV with
// %.17g so files round-trip bit-exactly and summaries can be recomputed from
// the emitted files alone.
class RegretLedger {
 public:
  struct Row {
    long long t;
    double expected_loss;
    double sampled_loss;
    double comparator_loss;
    double cum_pseudo;
    double cum_sampled;
  };

  static constexpr const char* kCsvHeader =
      "t,expected_loss,sampled_loss,comparator_loss,cum_pseudo_regret,cum_sampled_regret";

  void append_row(long long t, double expected_loss, double sampled_loss,
                  double comparator_loss) {
    if (!rows_.empty() && t <= rows_.back().t)
      throw std::invalid_argument("RegretLedger: rounds must be strictly increasing");
    if (!std::isfinite(expected_loss) || !std::isfinite(sampled_loss) ||
        !std::isfinite(comparator_loss))
      throw std::invalid_argument("RegretLedger: non-finite loss");
    cum_pseudo_ += expected_loss - comparator_loss;
    cum_sampled_ += sampled_loss - comparator_loss;
    rows_.push_back({t, expected_loss, sampled_loss, comparator_loss, cum_pseudo_, cum_sampled_});
  }

  // Full-information append: expected loss is p.loss; when no action was
  // sampled the sampled column mirrors the expectation.
  void append(long long t, const std::vector<double>& p, const std::vector<double>& loss,
              int comparator_action, int sampled_action = -1) {
    if (comparator_action < 0 || comparator_action >= static_cast<int>(loss.size()))
      throw std::invalid_argument("RegretLedger: comparator action out of range");
    if (sampled_action >= static_cast<int>(loss.size()))
      throw std::invalid_argument("RegretLedger: sampled action out of range");
    const double expected = dot(p, loss);
    const double sampled =
        sampled_action < 0 ? expected : loss[static_cast<std::size_t>(sampled_action)];
    append_row(t, expected, sampled, loss[static_cast<std::size_t>(comparator_action)]);
  }

  const std::vector<Row>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

  double final_pseudo_regret() const { return cum_pseudo_; }
  double final_sampled_regret() const { return cum_sampled_; }

  std::vector<double> cum_pseudo_series() const {
    std::vector<double> out;
    out.reserve(rows_.size());
    for (const Row& r : rows_) out.push_back(r.cum_pseudo);
    return out;
  }

  void write_csv(std::ostream& os) const {
    os << kCsvHeader << '\n';
    char buf[256];
    for (const Row& r : rows_) {
      std::snprintf(buf, sizeof(buf), "%lld,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t,
                    r.expected_loss, r.sampled_loss, r.comparator_loss, r.cum_pseudo,
                    r.cum_sampled);
      os << buf;
    }
  }

  // Re-derive the running sums from the per-round columns; any drift beyond
  // accumulated rounding means the ledger was tampered with or mis-written.
  bool recompute_consistent(double tol = 1e-9) const {
    double cp = 0.0, cs = 0.0;
    for (const Row& r : rows_) {
      cp += r.expected_loss - r.comparator_loss;
      cs += r.sampled_loss - r.comparator_loss;
      if (std::abs(cp - r.cum_pseudo) > tol || std::abs(cs - r.cum_sampled) > tol) return false;
    }
    return true;
  }

 private:
  std::vector<Row> rows_;
  double cum_pseudo_ = 0.0;
  double cum_sampled_ = 0.0;
};

}  // namespace ltm
