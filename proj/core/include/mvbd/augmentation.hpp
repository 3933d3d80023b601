#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "mvbd/data.hpp"
#include "mvbd/grid.hpp"
#include "mvbd/model_state.hpp"
#include "mvbd/rng.hpp"

namespace mvbd {

// Inverse-CDF draw of one latent utility in the category race. The shared
// maximum is -log(-log(U) / (1 + sum_rho exp(eta_rho))); the winning cell
// takes it, losing cells are additionally pushed below it by an Exponential
// kick scaled by exp(-eta).
inline double race_utility(double big_u, double v, double inv_one_plus_sumexp,
                           double exp_neg_eta, bool winner) {
  double arg = -std::log(big_u) * inv_one_plus_sumexp;
  if (!winner) arg -= std::log(v) * exp_neg_eta;
  return -std::log(arg);
}

// Latent utilities and mixture-component indicators, ragged over
// (individual, period) and dense over risks: cell (i, l, r) lives at
// offset[i] + (l-1)*m + r, l = 1..periods(i).
struct AugmentedData {
  int num_risks = 0;
  std::vector<std::size_t> offset;  // n+1 entries
  std::vector<double> u;
  std::vector<std::uint8_t> comp;   // component index 0..9

  std::size_t cell(int i, int l, int r) const {
    return offset[i] + static_cast<std::size_t>(l - 1) * num_risks + r;
  }
  std::size_t cells() const { return u.size(); }
};

// One utility-race augmentation sweep. Every cell's randomness comes from a
// counter stream keyed by (seed, iteration, i, l, r), so the result is
// identical for any thread count and any evaluation order.
AugmentedData sample_augmented(const Dataset& data, const ModelState& state,
                               const StreamKey& key, int threads = 1);

// Gaussian augmented log-likelihood: sum over cells of
// log N(u | eta + xi_c, s2_c).
double augmented_loglik(const AugmentedData& aug, const Dataset& data,
                        const ModelState& state);

// Per-(risk, time) sufficient statistics of the augmented residuals
// d = u - xi_c - x.beta_r with precisions tau = 1/s2_c, plus the
// structure-independent per-cell terms. Accumulated serially in (i, l, r)
// order so acceptance ratios are reproducible.
struct CellStats {
  GridD tau_sum;    // num_risks x (t_max+1): sum of tau over cells at (r, t)
  GridD tau_d_sum;  // num_risks x (t_max+1): sum of tau * d
  double cell_terms = 0.0;  // sum over cells of -(log(2 pi / tau) + tau d^2)/2
};

CellStats accumulate_cell_stats(const AugmentedData& aug, const Dataset& data,
                                const RegressionState& reg);

// Sum over cause-specific intervals of the Gaussian-marginal term with the
// baseline level integrated out. `temperature` scales the data precision;
// 0 removes the data entirely (every interval contributes 0).
double structural_marginal(const CellStats& stats, const ChangePointState& cp,
                           const Hyperparameters& hyper, double temperature);

// Exact marginalized augmented log-likelihood (temperature 1): the augmented
// likelihood with every unique baseline level integrated against its
// Gaussian prior in closed form.
double marginal_augmented_loglik(const AugmentedData& aug, const Dataset& data,
                                 const ChangePointState& cp,
                                 const RegressionState& reg,
                                 const Hyperparameters& hyper);

}  // namespace mvbd
