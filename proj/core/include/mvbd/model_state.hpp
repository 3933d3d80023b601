#pragma once

#include <cstdint>
#include <vector>

#include "mvbd/data.hpp"
#include "mvbd/grid.hpp"

namespace mvbd {

// Fixed model hyperparameters. Defaults follow the reference configuration:
// strong shrinkage of baseline hazards towards zero event probability
// (mu_alpha = -9), unit-variance slab, fair-coin geometric on the number of
// change points, and a uniform law over nonzero cause-activation patterns.
struct Hyperparameters {
  int num_risks = 1;
  int num_covariates = 0;
  int t_max = 1;
  double mu_alpha = -9.0;
  double sigma2_alpha = 3.0;
  double sigma2_beta = 1.0;
  double pi_k = 0.5;
  std::vector<double> psi;  // size 2^m - 1; index c-1 holds P(config c)

  static Hyperparameters defaults(int num_risks, int num_covariates, int t_max);

  int num_configs() const { return (1 << num_risks) - 1; }
  void validate() const;
};

// Overall and cause-specific change-point indicators. gamma[t] = 1 marks a
// time where at least one risk's baseline level jumps; row r of z marks which
// risks jump. Times are 1-based; gamma[1] is always 0.
struct ChangePointState {
  std::vector<std::uint8_t> gamma;  // size t_max+1
  GridB z;                          // num_risks x (t_max+1)

  ChangePointState() = default;
  ChangePointState(int num_risks, int t_max)
      : gamma(t_max + 1, 0), z(num_risks, t_max + 1, 0) {}

  int t_max() const { return static_cast<int>(gamma.size()) - 1; }
  int num_risks() const { return static_cast<int>(z.rows()); }

  int count() const;                          // K
  std::vector<int> changepoint_times() const; // sorted, subset of {2..t_max}
  std::vector<int> interval_lengths() const;  // K+1 entries summing to t_max

  // Bitmask of the activation column at t (risk r -> bit r).
  int config_at(int t) const;

  // Cause-specific jump times of risk r (t >= 2 with z[r][t] = 1).
  std::vector<int> cause_boundaries(int r) const;
};

// Regression coefficients under the spike-and-slab prior. beta(r,j) is zero
// exactly where inclusion(r,j) is zero.
struct RegressionState {
  GridD beta;       // num_risks x p
  GridB inclusion;  // num_risks x p
  double pi_beta = 0.5;

  RegressionState() = default;
  RegressionState(int num_risks, int p)
      : beta(num_risks, p, 0.0), inclusion(num_risks, p, 0) {}

  int included_count(int r) const;
};

// Full sampler state. The baseline levels are stored expanded as
// alpha(r, t), t = 1..t_max, constant on the intervals induced by z.
struct ModelState {
  ChangePointState cp;
  GridD alpha;  // num_risks x (t_max+1)
  RegressionState reg;

  static ModelState initial(const Hyperparameters& hyper);

  int t_max() const { return cp.t_max(); }
  int num_risks() const { return cp.num_risks(); }

  // First time of the cause-specific interval of risk r that contains t.
  int cause_interval_start(int r, int t) const;
  // One past the last time of that interval (next boundary or t_max+1).
  int cause_interval_end(int r, int t) const;

  // Structural edits used by the samplers. They keep the expanded alpha
  // consistent: removing a boundary carries the left level forward; adding
  // one leaves values equal across it until a new level is assigned.
  void add_changepoint(int t, int config_mask);
  void remove_changepoint(int t);
  void move_changepoint(int t_old, int t_new);
  void set_config(int t, int new_mask);

  // Overwrites alpha(r, t..end-1) where end is the cause-specific interval
  // end at t; used when a move proposes a fresh level.
  void set_level_from(int r, int t, double value);

  // Throws std::logic_error when any structural invariant is violated
  // (gamma outside the allowed set, z rows inconsistent with gamma, alpha
  // jumping where z is zero, inclusion/beta mismatch).
  void validate(const Hyperparameters& hyper, const AllowedSet& allowed) const;
};

}  // namespace mvbd
