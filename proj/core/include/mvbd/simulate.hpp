#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mvbd/data.hpp"
#include "mvbd/grid.hpp"
#include "mvbd/rng.hpp"

namespace mvbd {

// Piecewise-constant truth for the synthetic-data generator: per-risk levels
// per segment, segments delimited by their first time.
struct ScenarioSegment {
  int start_t = 1;
  std::vector<double> alpha;  // one level per risk
};

enum class CovariateGenerator { kNone, kStandardNormal, kFile };

struct ScenarioSpec {
  int t_max = 1;
  int num_risks = 1;
  int num_covariates = 0;
  long n = 1;
  std::vector<ScenarioSegment> segments;  // first starts at 1, ascending
  GridD beta;                             // num_risks x num_covariates
  CovariateGenerator covariates = CovariateGenerator::kNone;
  std::string covariate_file;
  double censor_fraction = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
  GridD expand_alpha() const;               // num_risks x (t_max+1)
  std::vector<int> changepoint_times() const;
  int config_at(int t) const;               // risks whose level jumps at t
};

// Sequential race over periods 1..t_max: each period the outcome is
// {no event, cause 1..m} with probabilities {1 - lambda, lambda_1, ...}.
// Survival past the horizon yields time t_max+1 with the status drawn from
// the final period's cause mix (the likelihood ignores it).
Observation sample_individual(const GridD& alpha, const GridD& beta,
                              std::span<const double> x, int t_max, Rng& rng);

struct SimulationResult {
  std::vector<Observation> observations;
  nlohmann::json truth;

  Dataset dataset(int num_risks, int t_max) const;
};

// Draws n individuals on counter-based per-individual streams, then censors
// floor(censor_fraction * n) of the eligible ones (those with T >= 2)
// uniformly at random, rewriting each as (C, 0) with C uniform on
// {1, ..., T-1}. Bit-reproducible for a fixed seed.
SimulationResult generate_scenario(const ScenarioSpec& spec);

// Null scenario: three risks, constant levels (-2, -3, -4), no covariates,
// no censoring, horizon long enough that every event is realized.
ScenarioSpec preset_appendix_b(std::uint64_t seed);

// Change-point scenario: 300 individuals, horizon 20, level schedule
// (-9,-9,-9) -> (-4,-3,-3) at t=6 -> (-2,-2,-3) at t=13.
ScenarioSpec preset_sim3(double censor_fraction, std::uint64_t seed);

}  // namespace mvbd
