#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include <nlohmann/json.hpp>

#include "mvbd/data.hpp"
#include "mvbd/kernels.hpp"
#include "mvbd/model_state.hpp"

namespace mvbd {

// One recorded posterior draw.
struct PosteriorSample {
  long iteration = 0;
  int k = 0;
  std::vector<std::uint8_t> gamma;  // index 1..t_max
  GridB z;                          // m x (t_max+1)
  GridD alpha;                      // m x (t_max+1)
  GridD beta;                       // m x p
  GridB inclusion;                  // m x p
  double pi_beta = 0.5;

  static PosteriorSample from_state(long iteration, const ModelState& state);
  int t_max() const { return static_cast<int>(gamma.size()) - 1; }
  int num_risks() const { return static_cast<int>(z.rows()); }
  int num_covariates() const { return static_cast<int>(beta.cols()); }
};

struct RunManifest {
  KernelConfig config;
  Hyperparameters hyper;
  MoveCounters counters;
  long recorded_samples = 0;
  double wall_seconds = 0.0;
  bool complete = false;
  int n = 0;
  std::vector<int> allowed_times;

  nlohmann::json to_json() const;
};

using SampleSink = std::function<void(const PosteriorSample&)>;

// Runs one chain from the empty-model initial state: K = 0, all baseline
// levels at mu_alpha, no included covariates. Iterations are numbered from 1;
// iteration i is recorded when i > burn_in and (i - burn_in) is a multiple
// of thin.
RunManifest run_chain(const Dataset& data, const Hyperparameters& hyper,
                      const KernelConfig& cfg, const SampleSink& sink);

struct ChainResult {
  std::vector<PosteriorSample> samples;
  RunManifest manifest;
};

ChainResult run_chain_collect(const Dataset& data, const Hyperparameters& hyper,
                              const KernelConfig& cfg);

// Sample-stream CSV: one row per recorded draw with columns
// iteration, K, gamma_t, z_r_t, alpha_r_t, beta_r_j, incl_r_j, pi_beta
// (risk-major flattening, 1-based risk and time labels). Doubles use %.17g.
void write_sample_header(std::ostream& out, int num_risks, int num_covariates,
                         int t_max);
void write_sample_row(std::ostream& out, const PosteriorSample& s);
std::vector<PosteriorSample> read_samples_csv(std::istream& in);
std::vector<PosteriorSample> read_samples_csv_file(const std::string& path);

}  // namespace mvbd
