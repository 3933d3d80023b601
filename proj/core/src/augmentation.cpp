#include "mvbd/augmentation.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

#include "mvbd/gumbel_mixture.hpp"
#include "mvbd/likelihood.hpp"
#include "mvbd/stats.hpp"

namespace mvbd {

namespace {

// Per covariate pattern: eta, exp(-eta) and 1/(1 + sum_rho exp(eta_rho)).
struct PatternTables {
  GridD eta;
  GridD exp_neg_eta;
  std::vector<double> inv_one_plus_sumexp;  // index 1..t_max
};

PatternTables build_pattern_tables(const GridD& alpha, const GridD& beta,
                                   const std::vector<double>& x) {
  PatternTables tab;
  const LogHazardTable lh = build_log_hazard_table(alpha, beta, x);
  const int m = static_cast<int>(alpha.rows());
  const int t_max = static_cast<int>(alpha.cols()) - 1;
  tab.eta = lh.eta;
  tab.exp_neg_eta = GridD(m, t_max + 1, 0.0);
  tab.inv_one_plus_sumexp.assign(t_max + 1, 0.0);
  for (int t = 1; t <= t_max; ++t) {
    double sumexp = 0.0;
    for (int r = 0; r < m; ++r) {
      tab.exp_neg_eta(r, t) = std::exp(-lh.eta(r, t));
      sumexp += std::exp(lh.eta(r, t));
    }
    tab.inv_one_plus_sumexp[t] = 1.0 / (1.0 + sumexp);
  }
  return tab;
}

void augment_range(const Dataset& data, const std::vector<PatternTables>& tabs,
                   const StreamKey& key, int begin, int end,
                   AugmentedData& aug) {
  const int m = data.num_risks();
  const auto& wts = GumbelMixture::weights();
  const auto& means = GumbelMixture::means();
  const auto& vars = GumbelMixture::variances();
  double inv_sd[GumbelMixture::kComponents];
  double inv_2var[GumbelMixture::kComponents];
  for (int c = 0; c < GumbelMixture::kComponents; ++c) {
    inv_sd[c] = 1.0 / std::sqrt(vars[c]);
    inv_2var[c] = 0.5 / vars[c];
  }

  for (int i = begin; i < end; ++i) {
    const Observation& o = data.obs(i);
    const PatternTables& tab = tabs[data.pattern_of(i)];
    const bool event_in_range = o.status >= 1 && o.time <= data.t_max();
    for (int l = 1; l <= data.periods(i); ++l) {
      // One shared draw per (i, l): the winning utility of the race.
      const double bigu = key.stream(i, l, m).uniform();
      const double max_term = -std::log(bigu) * tab.inv_one_plus_sumexp[l];
      for (int r = 0; r < m; ++r) {
        Rng cell_rng = key.stream(i, l, r);
        const double v = cell_rng.uniform();
        const bool winner = event_in_range && l == o.time && o.status - 1 == r;
        const double u_val =
            winner ? -std::log(max_term)
                   : -std::log(max_term - std::log(v) * tab.exp_neg_eta(r, l));

        // Component indicator given the residual u - eta.
        const double e = u_val - tab.eta(r, l);
        double probs[GumbelMixture::kComponents];
        double total = 0.0;
        for (int c = 0; c < GumbelMixture::kComponents; ++c) {
          const double d = e - means[c];
          probs[c] = wts[c] * inv_sd[c] * std::exp(-d * d * inv_2var[c]);
          total += probs[c];
        }
        const double pick = cell_rng.uniform() * total;
        double acc = 0.0;
        int comp = GumbelMixture::kComponents - 1;
        for (int c = 0; c < GumbelMixture::kComponents; ++c) {
          acc += probs[c];
          if (pick < acc) {
            comp = c;
            break;
          }
        }
        const std::size_t idx = aug.cell(i, l, r);
        aug.u[idx] = u_val;
        aug.comp[idx] = static_cast<std::uint8_t>(comp);
      }
    }
  }
}

}  // namespace

AugmentedData sample_augmented(const Dataset& data, const ModelState& state,
                               const StreamKey& key, int threads) {
  AugmentedData aug;
  aug.num_risks = data.num_risks();
  aug.offset.resize(data.n() + 1);
  std::size_t total = 0;
  for (int i = 0; i < data.n(); ++i) {
    aug.offset[i] = total;
    total += static_cast<std::size_t>(data.periods(i)) * data.num_risks();
  }
  aug.offset[data.n()] = total;
  aug.u.resize(total);
  aug.comp.resize(total);

  std::vector<PatternTables> tabs;
  tabs.reserve(data.num_patterns());
  for (int k = 0; k < data.num_patterns(); ++k)
    tabs.push_back(
        build_pattern_tables(state.alpha, state.reg.beta, data.pattern(k)));

  if (threads <= 1 || data.n() < 2 * threads) {
    augment_range(data, tabs, key, 0, data.n(), aug);
    return aug;
  }

  std::vector<std::thread> workers;
  const int chunk = (data.n() + threads - 1) / threads;
  for (int w = 0; w < threads; ++w) {
    const int begin = w * chunk;
    const int end = std::min(data.n(), begin + chunk);
    if (begin >= end) break;
    workers.emplace_back([&, begin, end] {
      augment_range(data, tabs, key, begin, end, aug);
    });
  }
  for (auto& t : workers) t.join();
  return aug;
}

double augmented_loglik(const AugmentedData& aug, const Dataset& data,
                        const ModelState& state) {
  if (aug.num_risks != data.num_risks() ||
      aug.offset.size() != static_cast<std::size_t>(data.n()) + 1 ||
      aug.offset.back() != aug.u.size() || aug.u.size() != aug.comp.size())
    throw std::invalid_argument("augmented_loglik: shape mismatch");
  for (int i = 0; i < data.n(); ++i)
    if (aug.offset[i + 1] - aug.offset[i] !=
        static_cast<std::size_t>(data.periods(i)) * aug.num_risks)
      throw std::invalid_argument("augmented_loglik: shape mismatch");

  std::vector<GridD> etas;
  etas.reserve(data.num_patterns());
  for (int k = 0; k < data.num_patterns(); ++k)
    etas.push_back(
        build_log_hazard_table(state.alpha, state.reg.beta, data.pattern(k)).eta);

  const auto& means = GumbelMixture::means();
  const auto& vars = GumbelMixture::variances();
  double total = 0.0;
  for (int i = 0; i < data.n(); ++i) {
    const GridD& eta = etas[data.pattern_of(i)];
    for (int l = 1; l <= data.periods(i); ++l) {
      for (int r = 0; r < aug.num_risks; ++r) {
        const std::size_t idx = aug.cell(i, l, r);
        const int c = aug.comp[idx];
        total += log_normal_pdf(aug.u[idx], eta(r, l) + means[c], vars[c]);
      }
    }
  }
  return total;
}

CellStats accumulate_cell_stats(const AugmentedData& aug, const Dataset& data,
                                const RegressionState& reg) {
  const int m = aug.num_risks;
  const int t_max = data.t_max();
  CellStats out;
  out.tau_sum = GridD(m, t_max + 1, 0.0);
  out.tau_d_sum = GridD(m, t_max + 1, 0.0);

  const auto& means = GumbelMixture::means();
  const auto& vars = GumbelMixture::variances();
  const int p = data.num_covariates();

  std::vector<double> xb(static_cast<std::size_t>(data.num_patterns()) * m, 0.0);
  for (int k = 0; k < data.num_patterns(); ++k)
    for (int r = 0; r < m; ++r) {
      double s = 0.0;
      for (int j = 0; j < p; ++j) s += data.pattern(k)[j] * reg.beta(r, j);
      xb[static_cast<std::size_t>(k) * m + r] = s;
    }

  for (int i = 0; i < data.n(); ++i) {
    const double* xbi = &xb[static_cast<std::size_t>(data.pattern_of(i)) * m];
    for (int l = 1; l <= data.periods(i); ++l) {
      for (int r = 0; r < m; ++r) {
        const std::size_t idx = aug.cell(i, l, r);
        const int c = aug.comp[idx];
        const double tau = 1.0 / vars[c];
        const double d = aug.u[idx] - means[c] - xbi[r];
        out.tau_sum(r, l) += tau;
        out.tau_d_sum(r, l) += tau * d;
        out.cell_terms += -0.5 * (kLogTwoPi - std::log(tau) + tau * d * d);
      }
    }
  }
  return out;
}

namespace {

// Closed-form log integral over one cause-specific interval:
// -log(sigma2_alpha * P)/2 + (num^2 / P - mu^2 / sigma2_alpha)/2 with
// P = 1/sigma2_alpha + S0 and num = mu/sigma2_alpha + S1.
inline double interval_term(double s0, double s1, const Hyperparameters& h) {
  const double prior_prec = 1.0 / h.sigma2_alpha;
  const double p = prior_prec + s0;
  const double num = h.mu_alpha * prior_prec + s1;
  return -0.5 * std::log(h.sigma2_alpha * p) +
         0.5 * (num * num / p - h.mu_alpha * h.mu_alpha * prior_prec);
}

}  // namespace

double structural_marginal(const CellStats& stats, const ChangePointState& cp,
                           const Hyperparameters& hyper, double temperature) {
  double total = 0.0;
  const int t_max = cp.t_max();
  for (int r = 0; r < cp.num_risks(); ++r) {
    double s0 = 0.0, s1 = 0.0;
    for (int t = 1; t <= t_max; ++t) {
      if (t > 1 && cp.z(r, t)) {
        total += interval_term(temperature * s0, temperature * s1, hyper);
        s0 = 0.0;
        s1 = 0.0;
      }
      s0 += stats.tau_sum(r, t);
      s1 += stats.tau_d_sum(r, t);
    }
    total += interval_term(temperature * s0, temperature * s1, hyper);
  }
  return total;
}

double marginal_augmented_loglik(const AugmentedData& aug, const Dataset& data,
                                 const ChangePointState& cp,
                                 const RegressionState& reg,
                                 const Hyperparameters& hyper) {
  const CellStats stats = accumulate_cell_stats(aug, data, reg);
  return stats.cell_terms + structural_marginal(stats, cp, hyper, 1.0);
}

}  // namespace mvbd
