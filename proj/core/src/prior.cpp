#include "mvbd/prior.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mvbd/rng.hpp"
#include "mvbd/stats.hpp"

namespace mvbd {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

std::vector<double> prior_count_pmf(const Hyperparameters& hyper,
                                    const AllowedSet& allowed) {
  const int n = allowed.size();
  std::vector<double> pmf(n + 1);
  double z = 0.0, w = 1.0;
  for (int k = 0; k <= n; ++k) {
    pmf[k] = w;
    z += w;
    w *= 1.0 - hyper.pi_k;
  }
  for (double& v : pmf) v /= z;
  return pmf;
}

double log_prior_changepoints(const ChangePointState& cp,
                              const Hyperparameters& hyper,
                              const AllowedSet& allowed,
                              std::string* diagnostic) {
  const auto reject = [&](const std::string& why) {
    if (diagnostic) *diagnostic = why;
    return kNegInf;
  };

  const int t_max = cp.t_max();
  int k = 0;
  double log_psi = 0.0;
  for (int t = 1; t <= t_max; ++t) {
    const int mask = cp.config_at(t);
    if (!cp.gamma[t]) {
      if (mask != 0) return reject("z nonzero with gamma=0 at t=" + std::to_string(t));
      continue;
    }
    if (!allowed.contains(t))
      return reject("gamma=1 outside allowed set at t=" + std::to_string(t));
    if (mask == 0) return reject("gamma=1 with empty z at t=" + std::to_string(t));
    const double psi = hyper.psi[mask - 1];
    if (!(psi > 0.0)) return reject("zero-probability z configuration");
    log_psi += std::log(psi);
    ++k;
  }

  const int n = allowed.size();
  if (k > n) return reject("more change points than allowed locations");

  const auto pmf = prior_count_pmf(hyper, allowed);
  return std::log(pmf[k]) - log_choose(n, k) + log_psi;
}

PriorMarginals prior_marginals(const Hyperparameters& hyper,
                               const AllowedSet& allowed) {
  PriorMarginals out;
  const int m = hyper.num_risks;
  out.p_z1.assign(m, 0.0);
  out.p_z1_given_cp.assign(m, 0.0);
  for (int r = 0; r < m; ++r)
    for (int c = 1; c <= hyper.num_configs(); ++c)
      if ((c >> r) & 1) out.p_z1_given_cp[r] += hyper.psi[c - 1];

  const int n = allowed.size();
  if (n == 0) return out;

  const auto pmf = prior_count_pmf(hyper, allowed);
  out.p_k0 = pmf[0];
  double mean_k = 0.0;
  for (int k = 1; k <= n; ++k) mean_k += k * pmf[k];
  out.p_gamma1 = mean_k / n;
  for (int r = 0; r < m; ++r) out.p_z1[r] = out.p_gamma1 * out.p_z1_given_cp[r];
  return out;
}

double log_prior_continuous(const ModelState& state,
                            const Hyperparameters& hyper) {
  if (!(state.reg.pi_beta >= 0.0 && state.reg.pi_beta <= 1.0))
    throw std::invalid_argument("log_prior_continuous: pi_beta outside [0,1]");

  double total = 0.0;
  for (int r = 0; r < state.num_risks(); ++r) {
    total += log_normal_pdf(state.alpha(r, 1), hyper.mu_alpha, hyper.sigma2_alpha);
    for (int t : state.cp.cause_boundaries(r))
      total += log_normal_pdf(state.alpha(r, t), hyper.mu_alpha, hyper.sigma2_alpha);
  }

  const int p = hyper.num_covariates;
  for (int r = 0; r < state.num_risks(); ++r) {
    int included = 0;
    for (int j = 0; j < p; ++j) {
      if (state.reg.inclusion(r, j)) {
        total += log_normal_pdf(state.reg.beta(r, j), 0.0, hyper.sigma2_beta);
        ++included;
      }
    }
    if (included > 0) total += included * std::log(state.reg.pi_beta);
    if (p - included > 0) total += (p - included) * std::log(1.0 - state.reg.pi_beta);
  }
  return total;
}

int sample_activation_config(const Hyperparameters& hyper, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  const int n = hyper.num_configs();
  int last_positive = n;
  for (int c = 1; c <= n; ++c) {
    if (hyper.psi[c - 1] <= 0.0) continue;
    last_positive = c;
    acc += hyper.psi[c - 1];
    if (u < acc) return c;
  }
  return last_positive;  // guards cumulative rounding at u near 1
}

}  // namespace mvbd
