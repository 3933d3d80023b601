#pragma once

#include <span>
#include <vector>

#include "mvbd/data.hpp"
#include "mvbd/grid.hpp"
#include "mvbd/model_state.hpp"

namespace mvbd {

struct HazardResult {
  std::vector<double> lambda;  // cause-specific hazards, one per risk
  double overall = 0.0;        // sum over risks, < 1
};

// Multinomial-logit hazards for one time point: lambda_r =
// exp(eta_r) / (1 + sum_rho exp(eta_rho)). Evaluated with log-sum-exp
// shifting so eta in [-50, 50] is safe. Throws on non-finite input.
HazardResult hazards(std::span<const double> eta);

// Per-period success-probability law on {1, ..., T+1}: out[j] = P(T = j+1),
// the probability of first success at period j+1; out[T] collects the
// no-success-by-horizon mass. phi entries must lie in [0,1].
std::vector<double> tvgeom_pmf(std::span<const double> phi);

// log lambda_r(t) and log{1 - lambda(t)} for every (r, t) under one
// covariate row; the building block shared by the likelihood, the
// augmentation step and the simulator.
struct LogHazardTable {
  GridD log_lambda;            // num_risks x (t_max+1)
  std::vector<double> log_surv;  // index 1..t_max
  GridD eta;                   // num_risks x (t_max+1)
};

LogHazardTable build_log_hazard_table(const GridD& alpha, const GridD& beta,
                                      std::span<const double> x);

// Observed-data log-likelihood: sum over individuals of
// delta * log lambda_r(t) + sum_{l=1}^{t-delta} log{1 - lambda(l)}.
// Beyond-horizon records (t = t_max+1) contribute survival terms only.
// Hazard tables are cached per unique covariate row, and contributions are
// accumulated in individual order (bit-identical to the naive evaluation).
double log_likelihood(const Dataset& data, const ModelState& state);

// Discrete cumulative hazard: running sum of per-period cause-specific
// hazards at the given covariate profile. Entry j holds the value at
// time j+1, j = 0..t_max-1.
std::vector<double> cumulative_hazard(const GridD& alpha, const GridD& beta,
                                      std::span<const double> x, int risk);
std::vector<double> cumulative_hazard(const ModelState& state,
                                      std::span<const double> x, int risk);

}  // namespace mvbd
