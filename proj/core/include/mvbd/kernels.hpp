#pragma once

#include <array>
#include <cstdint>
#include <utility>

#include "mvbd/augmentation.hpp"
#include "mvbd/data.hpp"
#include "mvbd/model_state.hpp"
#include "mvbd/prior.hpp"
#include "mvbd/rng.hpp"

namespace mvbd {

struct KernelConfig {
  long iterations = 100000;
  long burn_in = 10000;
  int thin = 1;
  std::uint64_t seed = 0;
  bool global_moves = true;
  // Scales every data term in acceptance ratios and full conditionals;
  // 0 turns the sampler into a prior sampler (the recovery oracle).
  double temperature = 1.0;
  // Standard deviation of the level proposals in the unaugmented moves.
  double rw_sd = 1.0;
  // Thread count for the augmentation sweep; results are identical for any
  // value.
  int threads = 1;
  // Validation hook: added to every split/merge log acceptance ratio so the
  // prior-recovery check can be shown to catch a broken kernel.
  double debug_logratio_bias = 0.0;
  // Re-validate all structural invariants after every sub-step.
  bool audit_invariants = false;

  void validate() const;
};

enum class MoveType {
  kSplitLocal,
  kMergeLocal,
  kShuffleLocal,
  kZLocal,
  kSplitGlobal,
  kMergeGlobal,
  kShuffleGlobal,
  kZGlobal,
};
inline constexpr int kNumMoveTypes = 8;
const char* move_name(MoveType t);

struct MoveCounters {
  std::array<long, kNumMoveTypes> attempts{};
  std::array<long, kNumMoveTypes> accepts{};
  long nan_log_ratios = 0;
};

// Outcome of one attempted move; log_ratio is the full Metropolis-Hastings
// log ratio before clamping.
struct MoveDiag {
  MoveType type = MoveType::kSplitLocal;
  bool proposed = false;
  bool accepted = false;
  double log_ratio = 0.0;
};

// Local-global sweep over one model state. The local block updates the
// change-point structure against the augmented likelihood with the baseline
// levels integrated out; the global block re-proposes structure and levels
// against the observed-data likelihood.
class McmcKernel {
 public:
  McmcKernel(const Dataset& data, const AllowedSet& allowed,
             const Hyperparameters& hyper, const KernelConfig& cfg);

  // One full sweep: augmentation, local split/merge + shuffle, local z,
  // Gibbs levels, regression update, then (unless disabled) global
  // split/merge + shuffle and global z.
  void step(ModelState& state, Rng& rng, std::uint64_t iteration);

  // Sub-steps, exposed for testing. The local moves and the Gibbs updates
  // require a prior refresh_augmentation() call for the current state.
  void refresh_augmentation(const ModelState& state, std::uint64_t iteration);
  MoveDiag local_split_merge(ModelState& state, Rng& rng);
  MoveDiag local_shuffle(ModelState& state, Rng& rng);
  void local_split_merge_shuffle(ModelState& state, Rng& rng);
  MoveDiag local_update_z(ModelState& state, Rng& rng);
  void gibbs_alpha(ModelState& state, Rng& rng);
  void update_beta(ModelState& state, Rng& rng);
  MoveDiag global_split_merge(ModelState& state, Rng& rng);
  MoveDiag global_shuffle(ModelState& state, Rng& rng);
  void global_split_merge_shuffle(ModelState& state, Rng& rng);
  MoveDiag global_update_z(ModelState& state, Rng& rng);

  const MoveCounters& counters() const { return counters_; }
  const AugmentedData& augmented() const { return aug_; }
  const CellStats& cell_stats() const { return stats_; }
  const MoveDiag& last(MoveType t) const {
    return last_[static_cast<int>(t)];
  }

  // Posterior mean and variance of one baseline level given residual
  // sufficient statistics (s0 = sum tau, s1 = sum tau*d), at the given
  // temperature.
  static std::pair<double, double> alpha_conditional_moments(
      double s0, double s1, const Hyperparameters& hyper, double temperature);

  // Current-state log target pieces (testing / reporting).
  double structural_term(const ChangePointState& cp) const;
  double observed_loglik(const ModelState& state) const;

 private:
  struct Interval {
    int start;
    int end;  // inclusive
  };
  std::vector<Interval> overall_intervals(const ModelState& state) const;
  int interior_allowed_count(const Interval& iv) const;
  int interior_allowed_at(const Interval& iv, int index) const;
  bool accept(double log_ratio, Rng& rng, MoveType type);
  double changepoint_count_log_prior_delta(int k_from, int k_to) const;
  void invalidate_loglik() { have_loglik_ = false; }
  double current_loglik(const ModelState& state);

  const Dataset& data_;
  const AllowedSet& allowed_;
  const Hyperparameters& hyper_;
  KernelConfig cfg_;
  std::vector<double> count_pmf_;

  AugmentedData aug_;
  CellStats stats_;
  bool have_aug_ = false;
  double cached_loglik_ = 0.0;
  bool have_loglik_ = false;

  MoveCounters counters_;
  std::array<MoveDiag, kNumMoveTypes> last_{};
};

}  // namespace mvbd
