#pragma once

#include <iosfwd>
#include <vector>

#include <nlohmann/json.hpp>

#include "mvbd/chain.hpp"
#include "mvbd/data.hpp"
#include "mvbd/prior.hpp"

namespace mvbd {

// Savage-Dickey evidence for the no-change-point model: the posterior
// frequency of K = 0 over its analytic prior probability.
struct SavageDickey {
  double bayes_factor = 0.0;
  double posterior_freq = 0.0;
  double prior_p_k0 = 1.0;
  double mc_se = 0.0;  // batch-means standard error of the Bayes factor
  long count_k0 = 0;
  long total = 0;
};

SavageDickey savage_dickey_K0(const std::vector<PosteriorSample>& samples,
                              const Hyperparameters& hyper,
                              const AllowedSet& allowed);

// One per-time evidence entry; bf is +infinity when the sample frequency is
// exactly 1 (serialized as "inf" with the raw count attached).
struct BayesFactorEntry {
  double bf = 0.0;
  double freq = 0.0;
  long count = 0;
};

struct BayesFactorReport {
  SavageDickey k0;
  PriorMarginals prior;
  std::vector<int> times;  // allowed change-point times, ascending
  std::vector<BayesFactorEntry> bf_gamma;            // per entry of `times`
  std::vector<std::vector<BayesFactorEntry>> bf_z;   // [risk][time index]
};

// Posterior-odds over prior-odds per allowed time, overall and per risk.
BayesFactorReport per_time_bayes_factors(
    const std::vector<PosteriorSample>& samples, const Hyperparameters& hyper,
    const AllowedSet& allowed);

struct IntervalSummary {
  double mean = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

struct BetaSummary {
  double inclusion_prob = 0.0;
  IntervalSummary unconditional;
  IntervalSummary conditional;  // over draws with the coefficient included
  long included_count = 0;
};

struct SummaryTables {
  std::vector<std::vector<IntervalSummary>> alpha;   // [risk][t-1]
  std::vector<std::vector<BetaSummary>> beta;        // [risk][j]
  std::vector<std::vector<IntervalSummary>> cumhaz;  // [risk][t-1]
  std::vector<double> profile;
};

// Posterior means and equal-tailed 95% intervals. Intervals use the
// inclusive order-statistic rule: with n sorted draws the bounds are the
// ceil(0.025 n)-th and ceil(0.975 n)-th values (1-based, clamped to [1, n]).
SummaryTables summarize(const std::vector<PosteriorSample>& samples,
                        const std::vector<double>& profile);

// Equal-tailed interval of one draw vector under the same rule.
IntervalSummary equal_tailed_summary(std::vector<double> values);

void write_bf_csv(std::ostream& out, const BayesFactorReport& report);
void write_alpha_summary_csv(std::ostream& out, const SummaryTables& tables);
void write_beta_summary_csv(std::ostream& out, const SummaryTables& tables);
void write_cumhaz_csv(std::ostream& out, const SummaryTables& tables);
nlohmann::json report_envelope(const BayesFactorReport& report);

}  // namespace mvbd
