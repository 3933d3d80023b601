#pragma once

#include <string>
#include <vector>

#include "mvbd/data.hpp"
#include "mvbd/model_state.hpp"

namespace mvbd {

// Log prior mass of a change-point configuration: truncated-geometric law on
// the count K, uniform over location subsets of the allowed set, and the
// nonzero-activation law over each column of z. Returns -infinity for states
// outside the support; when `diagnostic` is non-null it receives the reason.
double log_prior_changepoints(const ChangePointState& cp,
                              const Hyperparameters& hyper,
                              const AllowedSet& allowed,
                              std::string* diagnostic = nullptr);

// Normalized truncated-geometric pmf over K = 0..|allowed|.
std::vector<double> prior_count_pmf(const Hyperparameters& hyper,
                                    const AllowedSet& allowed);

// Analytic prior marginals used by the Bayes-factor reports: P(K=0), the
// common per-time P(gamma_t = 1) (exchangeable over the allowed set), and
// per-risk P(z_rt = 1). With an empty allowed set the gamma/z marginals are 0
// and P(K=0) is 1.
struct PriorMarginals {
  double p_k0 = 1.0;
  double p_gamma1 = 0.0;
  std::vector<double> p_z1;          // per risk
  std::vector<double> p_z1_given_cp; // per risk, P(z_r=1 | gamma_t=1)
};

PriorMarginals prior_marginals(const Hyperparameters& hyper,
                               const AllowedSet& allowed);

// Log prior density of the continuous parameters: Gaussian on each unique
// baseline level, Gaussian slab on included coefficients, Bernoulli(pi_beta)
// inclusion mass. The uniform hyperprior on pi_beta contributes zero.
double log_prior_continuous(const ModelState& state,
                            const Hyperparameters& hyper);

// Draws an activation pattern c in {1, ..., 2^m - 1} from psi (bitmask,
// risk r -> bit r).
int sample_activation_config(const Hyperparameters& hyper, class Rng& rng);

}  // namespace mvbd
