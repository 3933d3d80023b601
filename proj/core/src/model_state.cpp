#include "mvbd/model_state.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "mvbd/errors.hpp"

namespace mvbd {

Hyperparameters Hyperparameters::defaults(int num_risks, int num_covariates,
                                          int t_max) {
  Hyperparameters h;
  h.num_risks = num_risks;
  h.num_covariates = num_covariates;
  h.t_max = t_max;
  h.psi.assign(h.num_configs(), 1.0 / h.num_configs());
  return h;
}

void Hyperparameters::validate() const {
  if (num_risks < 1) throw config_error("num_risks must be >= 1");
  if (num_covariates < 0) throw config_error("num_covariates must be >= 0");
  if (t_max < 1) throw config_error("t_max must be >= 1");
  if (!(sigma2_alpha > 0.0) || !(sigma2_beta > 0.0))
    throw config_error("prior variances must be positive");
  if (!(pi_k > 0.0) || !(pi_k < 1.0)) throw config_error("pi_k must be in (0,1)");
  if (static_cast<int>(psi.size()) != num_configs())
    throw config_error("psi must have length 2^m - 1");
  double sum = 0.0;
  for (double v : psi) {
    if (!(v >= 0.0)) throw config_error("psi entries must be nonnegative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw config_error("psi must sum to 1 (got " + std::to_string(sum) + ")");
}

int ChangePointState::count() const {
  int k = 0;
  for (int t = 2; t <= t_max(); ++t) k += gamma[t] != 0;
  return k;
}

std::vector<int> ChangePointState::changepoint_times() const {
  std::vector<int> out;
  for (int t = 2; t <= t_max(); ++t)
    if (gamma[t]) out.push_back(t);
  return out;
}

std::vector<int> ChangePointState::interval_lengths() const {
  std::vector<int> out;
  int start = 1;
  for (int t = 2; t <= t_max(); ++t) {
    if (gamma[t]) {
      out.push_back(t - start);
      start = t;
    }
  }
  out.push_back(t_max() + 1 - start);
  return out;
}

int ChangePointState::config_at(int t) const {
  int mask = 0;
  for (int r = 0; r < num_risks(); ++r)
    if (z(r, t)) mask |= 1 << r;
  return mask;
}

std::vector<int> ChangePointState::cause_boundaries(int r) const {
  std::vector<int> out;
  for (int t = 2; t <= t_max(); ++t)
    if (z(r, t)) out.push_back(t);
  return out;
}

int RegressionState::included_count(int r) const {
  int b = 0;
  for (std::size_t j = 0; j < inclusion.cols(); ++j) b += inclusion(r, j) != 0;
  return b;
}

ModelState ModelState::initial(const Hyperparameters& hyper) {
  ModelState s;
  s.cp = ChangePointState(hyper.num_risks, hyper.t_max);
  s.alpha = GridD(hyper.num_risks, hyper.t_max + 1, hyper.mu_alpha);
  s.reg = RegressionState(hyper.num_risks, hyper.num_covariates);
  return s;
}

int ModelState::cause_interval_start(int r, int t) const {
  int s = t;
  while (s > 1 && !cp.z(r, s)) --s;
  return s;
}

int ModelState::cause_interval_end(int r, int t) const {
  int e = t + 1;
  while (e <= t_max() && !cp.z(r, e)) ++e;
  return e;
}

void ModelState::add_changepoint(int t, int config_mask) {
  cp.gamma[t] = 1;
  for (int r = 0; r < num_risks(); ++r)
    cp.z(r, t) = (config_mask >> r) & 1;
}

void ModelState::remove_changepoint(int t) {
  for (int r = 0; r < num_risks(); ++r) {
    if (cp.z(r, t)) {
      cp.z(r, t) = 0;
      const int end = cause_interval_end(r, t);
      for (int u = t; u < end; ++u) alpha(r, u) = alpha(r, t - 1);
    }
  }
  cp.gamma[t] = 0;
}

void ModelState::move_changepoint(int t_old, int t_new) {
  if (t_new == t_old) return;
  for (int r = 0; r < num_risks(); ++r) {
    if (!cp.z(r, t_old)) continue;
    cp.z(r, t_old) = 0;
    cp.z(r, t_new) = 1;
    if (t_new < t_old) {
      const double right = alpha(r, t_old);
      for (int u = t_new; u < t_old; ++u) alpha(r, u) = right;
    } else {
      const double left = alpha(r, t_old - 1);
      for (int u = t_old; u < t_new; ++u) alpha(r, u) = left;
    }
  }
  cp.gamma[t_old] = 0;
  cp.gamma[t_new] = 1;
}

void ModelState::set_config(int t, int new_mask) {
  for (int r = 0; r < num_risks(); ++r) {
    const bool now = (new_mask >> r) & 1;
    if (cp.z(r, t) && !now) {
      cp.z(r, t) = 0;
      const int end = cause_interval_end(r, t);
      for (int u = t; u < end; ++u) alpha(r, u) = alpha(r, t - 1);
    } else if (!cp.z(r, t) && now) {
      cp.z(r, t) = 1;
    }
  }
  cp.gamma[t] = new_mask != 0;
}

void ModelState::set_level_from(int r, int t, double value) {
  const int end = cause_interval_end(r, t);
  for (int u = t; u < end; ++u) alpha(r, u) = value;
}

void ModelState::validate(const Hyperparameters& hyper,
                          const AllowedSet& allowed) const {
  const int T = t_max();
  const int m = num_risks();
  auto fail = [](const std::string& msg) { throw std::logic_error("model state: " + msg); };

  if (m != hyper.num_risks || T != hyper.t_max) fail("dimension mismatch");
  if (cp.gamma[1]) fail("gamma[1] must be 0");
  for (int t = 1; t <= T; ++t) {
    int mask = cp.config_at(t);
    if (cp.gamma[t] && !allowed.contains(t))
      fail("gamma set outside allowed set at t=" + std::to_string(t));
    if (cp.gamma[t] && mask == 0)
      fail("gamma=1 with all-zero z at t=" + std::to_string(t));
    if (!cp.gamma[t] && mask != 0)
      fail("z nonzero with gamma=0 at t=" + std::to_string(t));
  }
  for (int r = 0; r < m; ++r) {
    if (cp.z(r, 1)) fail("z at t=1 must be 0");
    for (int t = 2; t <= T; ++t)
      if (!cp.z(r, t) && alpha(r, t) != alpha(r, t - 1))
        fail("alpha jumps without z at r=" + std::to_string(r + 1) +
             ", t=" + std::to_string(t));
    for (int t = 1; t <= T; ++t)
      if (!std::isfinite(alpha(r, t))) fail("non-finite alpha");
  }
  if (static_cast<int>(reg.beta.cols()) != hyper.num_covariates)
    fail("regression dimension mismatch");
  for (int r = 0; r < m; ++r)
    for (int j = 0; j < hyper.num_covariates; ++j)
      if (!reg.inclusion(r, j) && reg.beta(r, j) != 0.0)
        fail("nonzero beta outside inclusion set");
  if (!(reg.pi_beta >= 0.0 && reg.pi_beta <= 1.0)) fail("pi_beta out of [0,1]");

  int total = 0;
  for (int len : cp.interval_lengths()) total += len;
  if (total != T) fail("interval lengths do not sum to t_max");
}

}  // namespace mvbd
