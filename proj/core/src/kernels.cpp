#include "mvbd/kernels.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "mvbd/errors.hpp"
#include "mvbd/gumbel_mixture.hpp"
#include "mvbd/likelihood.hpp"
#include "mvbd/stats.hpp"

namespace mvbd {

void KernelConfig::validate() const {
  if (iterations < 0) throw config_error("iterations must be >= 0");
  if (burn_in < 0 || burn_in > iterations)
    throw config_error("burn_in must lie in [0, iterations]");
  if (thin < 1) throw config_error("thin must be >= 1");
  if (!(temperature >= 0.0 && temperature <= 1.0))
    throw config_error("temperature must lie in [0,1]");
  if (!(rw_sd > 0.0)) throw config_error("rw_sd must be positive");
  if (threads < 1) throw config_error("threads must be >= 1");
}

const char* move_name(MoveType t) {
  switch (t) {
    case MoveType::kSplitLocal: return "split_local";
    case MoveType::kMergeLocal: return "merge_local";
    case MoveType::kShuffleLocal: return "shuffle_local";
    case MoveType::kZLocal: return "z_local";
    case MoveType::kSplitGlobal: return "split_global";
    case MoveType::kMergeGlobal: return "merge_global";
    case MoveType::kShuffleGlobal: return "shuffle_global";
    case MoveType::kZGlobal: return "z_global";
  }
  return "?";
}

McmcKernel::McmcKernel(const Dataset& data, const AllowedSet& allowed,
                       const Hyperparameters& hyper, const KernelConfig& cfg)
    : data_(data), allowed_(allowed), hyper_(hyper), cfg_(cfg) {
  cfg_.validate();
  hyper_.validate();
  count_pmf_ = prior_count_pmf(hyper_, allowed_);
}

void McmcKernel::refresh_augmentation(const ModelState& state,
                                      std::uint64_t iteration) {
  const StreamKey key{cfg_.seed, iteration};
  aug_ = sample_augmented(data_, state, key, cfg_.threads);
  stats_ = accumulate_cell_stats(aug_, data_, state.reg);
  have_aug_ = true;
}

std::vector<McmcKernel::Interval> McmcKernel::overall_intervals(
    const ModelState& state) const {
  std::vector<Interval> out;
  int start = 1;
  for (int t = 2; t <= state.t_max(); ++t) {
    if (state.cp.gamma[t]) {
      out.push_back({start, t - 1});
      start = t;
    }
  }
  out.push_back({start, state.t_max()});
  return out;
}

int McmcKernel::interior_allowed_count(const Interval& iv) const {
  int c = 0;
  for (int t = iv.start + 1; t <= iv.end; ++t) c += allowed_.contains(t);
  return c;
}

int McmcKernel::interior_allowed_at(const Interval& iv, int index) const {
  for (int t = iv.start + 1; t <= iv.end; ++t) {
    if (allowed_.contains(t)) {
      if (index == 0) return t;
      --index;
    }
  }
  throw std::logic_error("interior_allowed_at: index out of range");
}

bool McmcKernel::accept(double log_ratio, Rng& rng, MoveType type) {
  const int k = static_cast<int>(type);
  ++counters_.attempts[k];
  MoveDiag diag{type, true, false, log_ratio};
  if (std::isnan(log_ratio)) {
    ++counters_.nan_log_ratios;
    last_[k] = diag;
    return false;
  }
  bool ok = log_ratio >= 0.0 || std::log(rng.uniform()) < log_ratio;
  diag.accepted = ok;
  if (ok) ++counters_.accepts[k];
  last_[k] = diag;
  return ok;
}

double McmcKernel::changepoint_count_log_prior_delta(int k_from,
                                                     int k_to) const {
  const int n = allowed_.size();
  return std::log(count_pmf_[k_to]) - std::log(count_pmf_[k_from]) -
         (log_choose(n, k_to) - log_choose(n, k_from));
}

double McmcKernel::structural_term(const ChangePointState& cp) const {
  return structural_marginal(stats_, cp, hyper_, cfg_.temperature);
}

double McmcKernel::observed_loglik(const ModelState& state) const {
  return log_likelihood(data_, state);
}

double McmcKernel::current_loglik(const ModelState& state) {
  if (!have_loglik_) {
    cached_loglik_ = log_likelihood(data_, state);
    have_loglik_ = true;
  }
  return cached_loglik_;
}

// ---------------------------------------------------------------------------
// Local moves (marginalized augmented target). The activation-pattern draw
// in split and z moves comes from the prior, so its probability cancels
// against the prior ratio and is omitted from both sides below.
// ---------------------------------------------------------------------------

MoveDiag McmcKernel::local_split_merge(ModelState& state, Rng& rng) {
  if (!have_aug_) throw std::logic_error("local move without augmentation");
  const int k = state.cp.count();
  const int k_max = allowed_.size();
  if (k_max == 0) return MoveDiag{MoveType::kSplitLocal, false, false, 0.0};

  bool do_split;
  if (k == 0) {
    do_split = true;
  } else if (k == k_max) {
    do_split = false;
  } else {
    do_split = rng.uniform() < 0.5;
  }
  const double cur_term = structural_term(state.cp);

  if (do_split) {
    const auto intervals = overall_intervals(state);
    std::vector<int> splittable;
    for (std::size_t j = 0; j < intervals.size(); ++j)
      if (interior_allowed_count(intervals[j]) > 0)
        splittable.push_back(static_cast<int>(j));
    if (splittable.empty())
      return MoveDiag{MoveType::kSplitLocal, false, false, 0.0};

    const Interval iv =
        intervals[splittable[rng.below(splittable.size())]];
    const int npos = interior_allowed_count(iv);
    const int t_new = interior_allowed_at(iv, static_cast<int>(rng.below(npos)));
    const int config = sample_activation_config(hyper_, rng);

    ModelState proposed = state;
    proposed.add_changepoint(t_new, config);

    const double log_fwd =
        (k == 0 ? 0.0 : std::log(0.5)) -
        std::log(static_cast<double>(splittable.size())) -
        std::log(static_cast<double>(npos));
    const double log_rev =
        (k + 1 == k_max ? 0.0 : std::log(0.5)) - std::log(k + 1.0);
    const double log_ratio = changepoint_count_log_prior_delta(k, k + 1) +
                             (structural_term(proposed.cp) - cur_term) +
                             log_rev - log_fwd + cfg_.debug_logratio_bias;
    if (accept(log_ratio, rng, MoveType::kSplitLocal)) state = std::move(proposed);
    return last(MoveType::kSplitLocal);
  }

  // merge
  const auto cps = state.cp.changepoint_times();
  const int t_del = cps[rng.below(cps.size())];
  ModelState proposed = state;
  proposed.remove_changepoint(t_del);

  const auto merged_intervals = overall_intervals(proposed);
  int splittable_after = 0;
  int npos_merged = 0;
  for (const auto& iv : merged_intervals) {
    const int c = interior_allowed_count(iv);
    if (c > 0) ++splittable_after;
    if (iv.start <= t_del && t_del <= iv.end) npos_merged = c;
  }

  const double log_fwd = (k == k_max ? 0.0 : std::log(0.5)) -
                         std::log(static_cast<double>(k));
  const double log_rev = (k - 1 == 0 ? 0.0 : std::log(0.5)) -
                         std::log(static_cast<double>(splittable_after)) -
                         std::log(static_cast<double>(npos_merged));
  const double log_ratio = changepoint_count_log_prior_delta(k, k - 1) +
                           (structural_term(proposed.cp) - cur_term) +
                           log_rev - log_fwd + cfg_.debug_logratio_bias;
  if (accept(log_ratio, rng, MoveType::kMergeLocal)) state = std::move(proposed);
  return last(MoveType::kMergeLocal);
}

MoveDiag McmcKernel::local_shuffle(ModelState& state, Rng& rng) {
  if (!have_aug_) throw std::logic_error("local move without augmentation");
  const int k = state.cp.count();
  if (k == 0) return MoveDiag{MoveType::kShuffleLocal, false, false, 0.0};

  const auto cps = state.cp.changepoint_times();
  const int j = static_cast<int>(rng.below(cps.size()));
  const int t_old = cps[j];
  const int lo = j > 0 ? cps[j - 1] : 1;
  const int hi = j + 1 < k ? cps[j + 1] : state.t_max() + 1;
  std::vector<int> range;  // allowed positions strictly between neighbours
  for (int t = lo + 1; t < hi; ++t)
    if (allowed_.contains(t)) range.push_back(t);
  const int t_new = range[rng.below(range.size())];

  ModelState proposed = state;
  proposed.move_changepoint(t_old, t_new);
  const double log_ratio =
      structural_term(proposed.cp) - structural_term(state.cp);
  if (accept(log_ratio, rng, MoveType::kShuffleLocal)) state = std::move(proposed);
  return last(MoveType::kShuffleLocal);
}

void McmcKernel::local_split_merge_shuffle(ModelState& state, Rng& rng) {
  local_split_merge(state, rng);
  local_shuffle(state, rng);
}

MoveDiag McmcKernel::local_update_z(ModelState& state, Rng& rng) {
  if (!have_aug_) throw std::logic_error("local move without augmentation");
  const int k = state.cp.count();
  if (k == 0) return MoveDiag{MoveType::kZLocal, false, false, 0.0};

  const auto cps = state.cp.changepoint_times();
  const int t = cps[rng.below(cps.size())];
  const int config = sample_activation_config(hyper_, rng);

  ModelState proposed = state;
  proposed.set_config(t, config);
  const double log_ratio =
      structural_term(proposed.cp) - structural_term(state.cp);
  if (accept(log_ratio, rng, MoveType::kZLocal)) state = std::move(proposed);
  return last(MoveType::kZLocal);
}

std::pair<double, double> McmcKernel::alpha_conditional_moments(
    double s0, double s1, const Hyperparameters& hyper, double temperature) {
  const double prec = 1.0 / hyper.sigma2_alpha + temperature * s0;
  const double var = 1.0 / prec;
  const double mean =
      var * (hyper.mu_alpha / hyper.sigma2_alpha + temperature * s1);
  return {mean, var};
}

void McmcKernel::gibbs_alpha(ModelState& state, Rng& rng) {
  if (!have_aug_) throw std::logic_error("gibbs_alpha without augmentation");
  const int t_max = state.t_max();
  for (int r = 0; r < state.num_risks(); ++r) {
    int start = 1;
    for (int t = 2; t <= t_max + 1; ++t) {
      if (t <= t_max && !state.cp.z(r, t)) continue;
      double s0 = 0.0, s1 = 0.0;
      for (int l = start; l < t; ++l) {
        s0 += stats_.tau_sum(r, l);
        s1 += stats_.tau_d_sum(r, l);
      }
      const auto [mean, var] =
          alpha_conditional_moments(s0, s1, hyper_, cfg_.temperature);
      const double level = rng.normal(mean, std::sqrt(var));
      for (int l = start; l < t; ++l) state.alpha(r, l) = level;
      start = t;
    }
  }
}

void McmcKernel::update_beta(ModelState& state, Rng& rng) {
  if (!have_aug_) throw std::logic_error("update_beta without augmentation");
  const int p = hyper_.num_covariates;
  const int m = hyper_.num_risks;

  int included = 0;
  for (int r = 0; r < m; ++r) included += state.reg.included_count(r);
  state.reg.pi_beta =
      rng.beta(1.0 + included, 1.0 + static_cast<double>(m) * p - included);
  if (p == 0) return;

  const auto& means = GumbelMixture::means();
  const auto& vars = GumbelMixture::variances();
  const double temp = cfg_.temperature;
  const double log_odds =
      std::log(state.reg.pi_beta) - std::log(1.0 - state.reg.pi_beta);
  const double log_sd_beta = 0.5 * std::log(hyper_.sigma2_beta);

  for (int r = 0; r < m; ++r) {
    Eigen::MatrixXd moment = Eigen::MatrixXd::Zero(p, p);
    Eigen::VectorXd proj = Eigen::VectorXd::Zero(p);
    for (int i = 0; i < data_.n(); ++i) {
      const auto& x = data_.obs(i).covariates;
      for (int l = 1; l <= data_.periods(i); ++l) {
        const std::size_t idx = aug_.cell(i, l, r);
        const int c = aug_.comp[idx];
        const double tau = 1.0 / vars[c];
        const double resid = aug_.u[idx] - means[c] - state.alpha(r, l);
        for (int j = 0; j < p; ++j) {
          proj(j) += x[j] * resid * tau;
          for (int k = 0; k <= j; ++k) moment(j, k) += x[j] * x[k] * tau;
        }
      }
    }
    moment *= temp;
    proj *= temp;
    moment = moment.selfadjointView<Eigen::Lower>();

    // log of the beta-marginal for an inclusion set, up to B-independent
    // constants: quad/2 - logdet/2 - |B| log sigma_beta.
    const auto log_marginal =
        [&](const std::vector<int>& set) -> double {
      const int b = static_cast<int>(set.size());
      if (b == 0) return 0.0;
      Eigen::MatrixXd prec(b, b);
      Eigen::VectorXd hb(b);
      for (int a = 0; a < b; ++a) {
        hb(a) = proj(set[a]);
        for (int bb = 0; bb < b; ++bb) prec(a, bb) = moment(set[a], set[bb]);
        prec(a, a) += 1.0 / hyper_.sigma2_beta;
      }
      Eigen::LLT<Eigen::MatrixXd> llt(prec);
      if (llt.info() != Eigen::Success)
        throw std::runtime_error("update_beta: non-invertible precision");
      double logdet = 0.0;
      for (int a = 0; a < b; ++a) logdet += std::log(llt.matrixL()(a, a));
      const Eigen::VectorXd y = llt.solve(hb);
      return 0.5 * hb.dot(y) - logdet - b * log_sd_beta;
    };

    std::vector<int> set;
    for (int j = 0; j < p; ++j)
      if (state.reg.inclusion(r, j)) set.push_back(j);
    double cur_marginal = log_marginal(set);

    for (int j = 0; j < p; ++j) {
      std::vector<int> toggled;
      bool removing = false;
      for (int v : set) {
        if (v == j) {
          removing = true;
          continue;
        }
        toggled.push_back(v);
      }
      if (!removing) {
        toggled.insert(std::lower_bound(toggled.begin(), toggled.end(), j), j);
      }
      const double prop_marginal = log_marginal(toggled);
      const double delta_b = removing ? -1.0 : 1.0;
      const double log_ratio =
          prop_marginal - cur_marginal + delta_b * log_odds;
      if (log_ratio >= 0.0 || std::log(rng.uniform()) < log_ratio) {
        set = std::move(toggled);
        cur_marginal = prop_marginal;
      }
    }

    for (int j = 0; j < p; ++j) {
      state.reg.inclusion(r, j) = 0;
      state.reg.beta(r, j) = 0.0;
    }
    const int b = static_cast<int>(set.size());
    if (b > 0) {
      Eigen::MatrixXd prec(b, b);
      Eigen::VectorXd hb(b);
      for (int a = 0; a < b; ++a) {
        hb(a) = proj(set[a]);
        for (int bb = 0; bb < b; ++bb) prec(a, bb) = moment(set[a], set[bb]);
        prec(a, a) += 1.0 / hyper_.sigma2_beta;
      }
      Eigen::LLT<Eigen::MatrixXd> llt(prec);
      if (llt.info() != Eigen::Success)
        throw std::runtime_error("update_beta: non-invertible precision");
      const Eigen::VectorXd mu = llt.solve(hb);
      Eigen::VectorXd zdraw(b);
      for (int a = 0; a < b; ++a) zdraw(a) = rng.normal();
      const Eigen::VectorXd draw =
          mu + llt.matrixU().solve(zdraw);  // cov = prec^{-1}
      for (int a = 0; a < b; ++a) {
        state.reg.inclusion(r, set[a]) = 1;
        state.reg.beta(r, set[a]) = draw(a);
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Global moves (observed-data target; levels proposed explicitly).
// ---------------------------------------------------------------------------

MoveDiag McmcKernel::global_split_merge(ModelState& state, Rng& rng) {
  const int k = state.cp.count();
  const int k_max = allowed_.size();
  if (k_max == 0) return MoveDiag{MoveType::kSplitGlobal, false, false, 0.0};

  bool do_split;
  if (k == 0) {
    do_split = true;
  } else if (k == k_max) {
    do_split = false;
  } else {
    do_split = rng.uniform() < 0.5;
  }
  const double temp = cfg_.temperature;
  const double rw_var = cfg_.rw_sd * cfg_.rw_sd;

  if (do_split) {
    const auto intervals = overall_intervals(state);
    std::vector<int> splittable;
    for (std::size_t j = 0; j < intervals.size(); ++j)
      if (interior_allowed_count(intervals[j]) > 0)
        splittable.push_back(static_cast<int>(j));
    if (splittable.empty())
      return MoveDiag{MoveType::kSplitGlobal, false, false, 0.0};

    const Interval iv = intervals[splittable[rng.below(splittable.size())]];
    const int npos = interior_allowed_count(iv);
    const int t_new = interior_allowed_at(iv, static_cast<int>(rng.below(npos)));
    const int config = sample_activation_config(hyper_, rng);

    ModelState proposed = state;
    proposed.add_changepoint(t_new, config);
    double log_prior_levels = 0.0;
    double log_fwd_levels = 0.0;
    for (int r = 0; r < state.num_risks(); ++r) {
      if (!((config >> r) & 1)) continue;
      const double center = state.alpha(r, t_new);
      const double level = rng.normal(center, cfg_.rw_sd);
      proposed.set_level_from(r, t_new, level);
      log_prior_levels +=
          log_normal_pdf(level, hyper_.mu_alpha, hyper_.sigma2_alpha);
      log_fwd_levels += log_normal_pdf(level, center, rw_var);
    }

    double dlik = 0.0;
    double prop_loglik = 0.0;
    if (temp > 0.0) {
      prop_loglik = log_likelihood(data_, proposed);
      dlik = temp * (prop_loglik - current_loglik(state));
    }
    const double log_fwd = (k == 0 ? 0.0 : std::log(0.5)) -
                           std::log(static_cast<double>(splittable.size())) -
                           std::log(static_cast<double>(npos)) + log_fwd_levels;
    const double log_rev =
        (k + 1 == k_max ? 0.0 : std::log(0.5)) - std::log(k + 1.0);
    const double log_ratio = changepoint_count_log_prior_delta(k, k + 1) +
                             log_prior_levels + dlik + log_rev - log_fwd +
                             cfg_.debug_logratio_bias;
    if (accept(log_ratio, rng, MoveType::kSplitGlobal)) {
      state = std::move(proposed);
      if (temp > 0.0) cached_loglik_ = prop_loglik;
    }
    return last(MoveType::kSplitGlobal);
  }

  // merge
  const auto cps = state.cp.changepoint_times();
  const int t_del = cps[rng.below(cps.size())];
  ModelState proposed = state;
  double log_prior_levels = 0.0;
  double log_rev_levels = 0.0;
  for (int r = 0; r < state.num_risks(); ++r) {
    if (!state.cp.z(r, t_del)) continue;
    const double discarded = state.alpha(r, t_del);
    const double kept = state.alpha(r, t_del - 1);
    log_prior_levels -=
        log_normal_pdf(discarded, hyper_.mu_alpha, hyper_.sigma2_alpha);
    log_rev_levels += log_normal_pdf(discarded, kept, rw_var);
  }
  proposed.remove_changepoint(t_del);

  const auto merged_intervals = overall_intervals(proposed);
  int splittable_after = 0;
  int npos_merged = 0;
  for (const auto& iv : merged_intervals) {
    const int c = interior_allowed_count(iv);
    if (c > 0) ++splittable_after;
    if (iv.start <= t_del && t_del <= iv.end) npos_merged = c;
  }

  double dlik = 0.0;
  double prop_loglik = 0.0;
  if (temp > 0.0) {
    prop_loglik = log_likelihood(data_, proposed);
    dlik = temp * (prop_loglik - current_loglik(state));
  }
  const double log_fwd =
      (k == k_max ? 0.0 : std::log(0.5)) - std::log(static_cast<double>(k));
  const double log_rev = (k - 1 == 0 ? 0.0 : std::log(0.5)) -
                         std::log(static_cast<double>(splittable_after)) -
                         std::log(static_cast<double>(npos_merged)) +
                         log_rev_levels;
  const double log_ratio = changepoint_count_log_prior_delta(k, k - 1) +
                           log_prior_levels + dlik + log_rev - log_fwd +
                           cfg_.debug_logratio_bias;
  if (accept(log_ratio, rng, MoveType::kMergeGlobal)) {
    state = std::move(proposed);
    if (temp > 0.0) cached_loglik_ = prop_loglik;
  }
  return last(MoveType::kMergeGlobal);
}

MoveDiag McmcKernel::global_shuffle(ModelState& state, Rng& rng) {
  const int k = state.cp.count();
  if (k == 0) return MoveDiag{MoveType::kShuffleGlobal, false, false, 0.0};

  const auto cps = state.cp.changepoint_times();
  const int j = static_cast<int>(rng.below(cps.size()));
  const int t_old = cps[j];
  const int lo = j > 0 ? cps[j - 1] : 1;
  const int hi = j + 1 < k ? cps[j + 1] : state.t_max() + 1;
  std::vector<int> range;
  for (int t = lo + 1; t < hi; ++t)
    if (allowed_.contains(t)) range.push_back(t);
  const int t_new = range[rng.below(range.size())];

  ModelState proposed = state;
  proposed.move_changepoint(t_old, t_new);
  double dlik = 0.0;
  double prop_loglik = 0.0;
  if (cfg_.temperature > 0.0) {
    prop_loglik = log_likelihood(data_, proposed);
    dlik = cfg_.temperature * (prop_loglik - current_loglik(state));
  }
  if (accept(dlik, rng, MoveType::kShuffleGlobal)) {
    state = std::move(proposed);
    if (cfg_.temperature > 0.0) cached_loglik_ = prop_loglik;
  }
  return last(MoveType::kShuffleGlobal);
}

void McmcKernel::global_split_merge_shuffle(ModelState& state, Rng& rng) {
  global_split_merge(state, rng);
  global_shuffle(state, rng);
}

MoveDiag McmcKernel::global_update_z(ModelState& state, Rng& rng) {
  const int k = state.cp.count();
  if (k == 0) return MoveDiag{MoveType::kZGlobal, false, false, 0.0};

  const auto cps = state.cp.changepoint_times();
  const int t = cps[rng.below(cps.size())];
  const int config = sample_activation_config(hyper_, rng);
  const double rw_var = cfg_.rw_sd * cfg_.rw_sd;

  ModelState proposed = state;
  proposed.set_config(t, config);  // deactivations carry the left level

  double log_prior_levels = 0.0;
  double log_fwd_levels = 0.0;
  double log_rev_levels = 0.0;
  for (int r = 0; r < state.num_risks(); ++r) {
    const bool was = state.cp.z(r, t);
    const bool now = (config >> r) & 1;
    if (!was && now) {
      const double center = state.alpha(r, t - 1);
      const double level = rng.normal(center, cfg_.rw_sd);
      proposed.set_level_from(r, t, level);
      log_prior_levels +=
          log_normal_pdf(level, hyper_.mu_alpha, hyper_.sigma2_alpha);
      log_fwd_levels += log_normal_pdf(level, center, rw_var);
    } else if (was && !now) {
      const double discarded = state.alpha(r, t);
      const double kept = state.alpha(r, t - 1);
      log_prior_levels -=
          log_normal_pdf(discarded, hyper_.mu_alpha, hyper_.sigma2_alpha);
      log_rev_levels += log_normal_pdf(discarded, kept, rw_var);
    }
  }

  double dlik = 0.0;
  double prop_loglik = 0.0;
  if (cfg_.temperature > 0.0) {
    prop_loglik = log_likelihood(data_, proposed);
    dlik = cfg_.temperature * (prop_loglik - current_loglik(state));
  }
  const double log_ratio =
      log_prior_levels + dlik + log_rev_levels - log_fwd_levels;
  if (accept(log_ratio, rng, MoveType::kZGlobal)) {
    state = std::move(proposed);
    if (cfg_.temperature > 0.0) cached_loglik_ = prop_loglik;
  }
  return last(MoveType::kZGlobal);
}

void McmcKernel::step(ModelState& state, Rng& rng, std::uint64_t iteration) {
  const auto audit = [&] {
    if (cfg_.audit_invariants) state.validate(hyper_, allowed_);
  };
  refresh_augmentation(state, iteration);
  local_split_merge(state, rng);
  audit();
  local_shuffle(state, rng);
  audit();
  local_update_z(state, rng);
  audit();
  gibbs_alpha(state, rng);
  audit();
  update_beta(state, rng);
  audit();
  if (cfg_.global_moves) {
    invalidate_loglik();
    global_split_merge(state, rng);
    audit();
    global_shuffle(state, rng);
    audit();
    global_update_z(state, rng);
    audit();
  }
}

}  // namespace mvbd
