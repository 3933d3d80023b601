#include "mvbd/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "mvbd/errors.hpp"
#include "mvbd/likelihood.hpp"

namespace mvbd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Batch-means standard error of the mean of a binary/real series; the chain
// is autocorrelated, so plain iid errors would be too small. Uses
// min(100, n/10) batches.
double batch_means_se(const std::vector<double>& x) {
  const long n = static_cast<long>(x.size());
  if (n < 20) return 0.0;
  const long nb = std::min<long>(100, n / 10);
  const long bs = n / nb;
  std::vector<double> bm(nb, 0.0);
  for (long b = 0; b < nb; ++b) {
    double s = 0.0;
    for (long i = b * bs; i < (b + 1) * bs; ++i) s += x[i];
    bm[b] = s / bs;
  }
  double mean = 0.0;
  for (double v : bm) mean += v;
  mean /= nb;
  double var = 0.0;
  for (double v : bm) var += (v - mean) * (v - mean);
  var /= (nb - 1);
  return std::sqrt(var / nb);
}

double odds(double p) { return p / (1.0 - p); }

BayesFactorEntry make_entry(long count, long total, double prior_p) {
  BayesFactorEntry e;
  e.count = count;
  e.freq = static_cast<double>(count) / total;
  if (count == 0) {
    e.bf = 0.0;
  } else if (count == total) {
    e.bf = kInf;
  } else {
    e.bf = odds(e.freq) / odds(prior_p);
  }
  return e;
}

void print_double(std::ostream& out, double v) {
  if (std::isinf(v)) {
    out << (v > 0 ? "inf" : "-inf");
    return;
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out << buf;
}

}  // namespace

SavageDickey savage_dickey_K0(const std::vector<PosteriorSample>& samples,
                              const Hyperparameters& hyper,
                              const AllowedSet& allowed) {
  if (samples.empty()) throw data_error("savage_dickey_K0: no samples");
  SavageDickey out;
  out.total = static_cast<long>(samples.size());
  std::vector<double> indicator(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    indicator[i] = samples[i].k == 0 ? 1.0 : 0.0;
    out.count_k0 += samples[i].k == 0;
  }
  out.posterior_freq = static_cast<double>(out.count_k0) / out.total;
  out.prior_p_k0 = prior_marginals(hyper, allowed).p_k0;
  out.bayes_factor = out.posterior_freq / out.prior_p_k0;
  out.mc_se = batch_means_se(indicator) / out.prior_p_k0;
  return out;
}

BayesFactorReport per_time_bayes_factors(
    const std::vector<PosteriorSample>& samples, const Hyperparameters& hyper,
    const AllowedSet& allowed) {
  if (samples.empty()) throw data_error("per_time_bayes_factors: no samples");
  BayesFactorReport report;
  report.k0 = savage_dickey_K0(samples, hyper, allowed);
  report.prior = prior_marginals(hyper, allowed);
  report.times = allowed.times;

  const long total = static_cast<long>(samples.size());
  const int m = samples.front().num_risks();
  report.bf_z.resize(m);
  for (std::size_t ti = 0; ti < report.times.size(); ++ti) {
    const int t = report.times[ti];
    long count_gamma = 0;
    std::vector<long> count_z(m, 0);
    for (const auto& s : samples) {
      count_gamma += s.gamma[t] != 0;
      for (int r = 0; r < m; ++r) count_z[r] += s.z(r, t) != 0;
    }
    report.bf_gamma.push_back(make_entry(count_gamma, total, report.prior.p_gamma1));
    for (int r = 0; r < m; ++r)
      report.bf_z[r].push_back(make_entry(count_z[r], total, report.prior.p_z1[r]));
  }
  return report;
}

IntervalSummary equal_tailed_summary(std::vector<double> values) {
  IntervalSummary s;
  const long n = static_cast<long>(values.size());
  if (n == 0) {
    s.mean = s.lo = s.hi = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / n;
  std::sort(values.begin(), values.end());
  const auto rank = [n](double q) {
    long r = static_cast<long>(std::ceil(q * n));
    return std::clamp<long>(r, 1, n);
  };
  s.lo = values[rank(0.025) - 1];
  s.hi = values[rank(0.975) - 1];
  return s;
}

SummaryTables summarize(const std::vector<PosteriorSample>& samples,
                        const std::vector<double>& profile) {
  if (samples.empty()) throw data_error("summarize: no samples");
  const int m = samples.front().num_risks();
  const int p = samples.front().num_covariates();
  const int t_max = samples.front().t_max();
  if (static_cast<int>(profile.size()) != p)
    throw data_error("summarize: profile dimension mismatch");

  SummaryTables tables;
  tables.profile = profile;
  tables.alpha.resize(m);
  tables.cumhaz.resize(m);
  tables.beta.resize(m);

  std::vector<double> draws(samples.size());
  for (int r = 0; r < m; ++r) {
    tables.alpha[r].resize(t_max);
    for (int t = 1; t <= t_max; ++t) {
      for (std::size_t i = 0; i < samples.size(); ++i)
        draws[i] = samples[i].alpha(r, t);
      tables.alpha[r][t - 1] = equal_tailed_summary(draws);
    }
  }

  // Pointwise summaries of the per-draw cumulative hazard at the profile.
  for (int r = 0; r < m; ++r) {
    std::vector<std::vector<double>> per_time(t_max,
                                              std::vector<double>(samples.size()));
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const auto ch =
          cumulative_hazard(samples[i].alpha, samples[i].beta, profile, r + 1);
      for (int t = 0; t < t_max; ++t) per_time[t][i] = ch[t];
    }
    tables.cumhaz[r].resize(t_max);
    for (int t = 0; t < t_max; ++t)
      tables.cumhaz[r][t] = equal_tailed_summary(per_time[t]);
  }

  for (int r = 0; r < m; ++r) {
    tables.beta[r].resize(p);
    for (int j = 0; j < p; ++j) {
      BetaSummary bs;
      std::vector<double> all(samples.size());
      std::vector<double> included;
      for (std::size_t i = 0; i < samples.size(); ++i) {
        all[i] = samples[i].beta(r, j);
        if (samples[i].inclusion(r, j)) included.push_back(all[i]);
      }
      bs.included_count = static_cast<long>(included.size());
      bs.inclusion_prob = static_cast<double>(bs.included_count) / samples.size();
      bs.unconditional = equal_tailed_summary(std::move(all));
      bs.conditional = equal_tailed_summary(std::move(included));
      tables.beta[r][j] = bs;
    }
  }
  return tables;
}

void write_bf_csv(std::ostream& out, const BayesFactorReport& report) {
  const int m = static_cast<int>(report.bf_z.size());
  out << "t,bf_gamma,freq_gamma,count_gamma";
  for (int r = 1; r <= m; ++r)
    out << ",bf_z_" << r << ",freq_z_" << r << ",count_z_" << r;
  out << "\n";
  for (std::size_t ti = 0; ti < report.times.size(); ++ti) {
    out << report.times[ti] << ',';
    print_double(out, report.bf_gamma[ti].bf);
    out << ',';
    print_double(out, report.bf_gamma[ti].freq);
    out << ',' << report.bf_gamma[ti].count;
    for (int r = 0; r < m; ++r) {
      out << ',';
      print_double(out, report.bf_z[r][ti].bf);
      out << ',';
      print_double(out, report.bf_z[r][ti].freq);
      out << ',' << report.bf_z[r][ti].count;
    }
    out << "\n";
  }
}

void write_alpha_summary_csv(std::ostream& out, const SummaryTables& tables) {
  out << "risk,t,mean,lo95,hi95\n";
  for (std::size_t r = 0; r < tables.alpha.size(); ++r)
    for (std::size_t t = 0; t < tables.alpha[r].size(); ++t) {
      out << (r + 1) << ',' << (t + 1) << ',';
      print_double(out, tables.alpha[r][t].mean);
      out << ',';
      print_double(out, tables.alpha[r][t].lo);
      out << ',';
      print_double(out, tables.alpha[r][t].hi);
      out << "\n";
    }
}

void write_beta_summary_csv(std::ostream& out, const SummaryTables& tables) {
  out << "risk,covariate,inclusion_prob,mean,lo95,hi95,"
         "cond_mean,cond_lo95,cond_hi95,included_count\n";
  for (std::size_t r = 0; r < tables.beta.size(); ++r)
    for (std::size_t j = 0; j < tables.beta[r].size(); ++j) {
      const BetaSummary& b = tables.beta[r][j];
      out << (r + 1) << ',' << (j + 1) << ',';
      print_double(out, b.inclusion_prob);
      for (double v : {b.unconditional.mean, b.unconditional.lo,
                       b.unconditional.hi, b.conditional.mean,
                       b.conditional.lo, b.conditional.hi}) {
        out << ',';
        print_double(out, v);
      }
      out << ',' << b.included_count << "\n";
    }
}

void write_cumhaz_csv(std::ostream& out, const SummaryTables& tables) {
  out << "risk,t,mean,lo95,hi95\n";
  for (std::size_t r = 0; r < tables.cumhaz.size(); ++r)
    for (std::size_t t = 0; t < tables.cumhaz[r].size(); ++t) {
      out << (r + 1) << ',' << (t + 1) << ',';
      print_double(out, tables.cumhaz[r][t].mean);
      out << ',';
      print_double(out, tables.cumhaz[r][t].lo);
      out << ',';
      print_double(out, tables.cumhaz[r][t].hi);
      out << "\n";
    }
}

nlohmann::json report_envelope(const BayesFactorReport& report) {
  nlohmann::json j;
  j["savage_dickey"] = {
      {"bayes_factor", report.k0.bayes_factor},
      {"posterior_freq_k0", report.k0.posterior_freq},
      {"prior_p_k0", report.k0.prior_p_k0},
      {"mc_se", report.k0.mc_se},
      {"count_k0", report.k0.count_k0},
      {"samples", report.k0.total},
  };
  j["prior_marginals"] = {
      {"p_k0", report.prior.p_k0},
      {"p_gamma1", report.prior.p_gamma1},
      {"p_z1", report.prior.p_z1},
  };
  nlohmann::json times = nlohmann::json::array();
  for (std::size_t ti = 0; ti < report.times.size(); ++ti) {
    nlohmann::json e;
    e["t"] = report.times[ti];
    const auto dump = [](const BayesFactorEntry& b) {
      nlohmann::json x;
      if (std::isinf(b.bf))
        x["bf"] = "inf";
      else
        x["bf"] = b.bf;
      x["freq"] = b.freq;
      x["count"] = b.count;
      return x;
    };
    e["gamma"] = dump(report.bf_gamma[ti]);
    nlohmann::json zs = nlohmann::json::array();
    for (const auto& risk : report.bf_z) zs.push_back(dump(risk[ti]));
    e["z"] = zs;
    times.push_back(e);
  }
  j["per_time"] = times;
  return j;
}

}  // namespace mvbd
