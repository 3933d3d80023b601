#include "mvbd/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mvbd/errors.hpp"
#include "mvbd/likelihood.hpp"

namespace mvbd {

namespace {
constexpr std::uint64_t kSimTag = 0x73696d756c617465ULL;
constexpr std::uint64_t kCensorTag = 0x63656e736f720000ULL;

// lambda[t][r] per period; consumes one uniform per survived period.
Observation race(const std::vector<std::vector<double>>& lambda, int t_max,
                 Rng& rng) {
  const int m = static_cast<int>(lambda[1].size());
  for (int t = 1; t <= t_max; ++t) {
    const double u = rng.uniform();
    double acc = 0.0;
    for (int r = 0; r < m; ++r) {
      acc += lambda[t][r];
      if (u < acc) return Observation{t, r + 1, {}};
    }
  }
  // Survived the horizon: event beyond t_max; draw the eventual cause from
  // the final period's cause mix.
  double total = 0.0;
  for (double l : lambda[t_max]) total += l;
  const double u = rng.uniform() * total;
  double acc = 0.0;
  for (int r = 0; r < m; ++r) {
    acc += lambda[t_max][r];
    if (u < acc) return Observation{t_max + 1, r + 1, {}};
  }
  return Observation{t_max + 1, m, {}};
}

std::vector<std::vector<double>> lambda_table(const GridD& alpha,
                                              const GridD& beta,
                                              std::span<const double> x) {
  const LogHazardTable tab = build_log_hazard_table(alpha, beta, x);
  const int m = static_cast<int>(alpha.rows());
  const int t_max = static_cast<int>(alpha.cols()) - 1;
  std::vector<std::vector<double>> lam(t_max + 1, std::vector<double>(m));
  for (int t = 1; t <= t_max; ++t)
    for (int r = 0; r < m; ++r) lam[t][r] = std::exp(tab.log_lambda(r, t));
  return lam;
}

}  // namespace

void ScenarioSpec::validate() const {
  if (t_max < 1) throw data_error("scenario: t_max must be >= 1");
  if (num_risks < 1) throw data_error("scenario: need at least one risk");
  if (n < 1) throw data_error("scenario: need at least one individual");
  if (!(censor_fraction >= 0.0 && censor_fraction <= 1.0))
    throw data_error("scenario: censor_fraction must lie in [0,1]");
  if (segments.empty() || segments.front().start_t != 1)
    throw data_error("scenario: alpha schedule must start at t=1");
  int prev = 0;
  for (const auto& seg : segments) {
    if (seg.start_t <= prev || seg.start_t > t_max)
      throw data_error("scenario: segment starts must be ascending in 1..t_max");
    if (static_cast<int>(seg.alpha.size()) != num_risks)
      throw data_error("scenario: segment level count must equal num_risks");
    prev = seg.start_t;
  }
  if (num_covariates > 0 &&
      (static_cast<int>(beta.rows()) != num_risks ||
       static_cast<int>(beta.cols()) != num_covariates))
    throw data_error("scenario: beta dimensions mismatch");
}

GridD ScenarioSpec::expand_alpha() const {
  GridD alpha(num_risks, t_max + 1, 0.0);
  std::size_t seg = 0;
  for (int t = 1; t <= t_max; ++t) {
    if (seg + 1 < segments.size() && segments[seg + 1].start_t == t) ++seg;
    for (int r = 0; r < num_risks; ++r) alpha(r, t) = segments[seg].alpha[r];
  }
  return alpha;
}

std::vector<int> ScenarioSpec::changepoint_times() const {
  std::vector<int> out;
  for (std::size_t s = 1; s < segments.size(); ++s)
    if (config_at(segments[s].start_t) != 0) out.push_back(segments[s].start_t);
  return out;
}

int ScenarioSpec::config_at(int t) const {
  for (std::size_t s = 1; s < segments.size(); ++s) {
    if (segments[s].start_t != t) continue;
    int mask = 0;
    for (int r = 0; r < num_risks; ++r)
      if (segments[s].alpha[r] != segments[s - 1].alpha[r]) mask |= 1 << r;
    return mask;
  }
  return 0;
}

Observation sample_individual(const GridD& alpha, const GridD& beta,
                              std::span<const double> x, int t_max, Rng& rng) {
  Observation o = race(lambda_table(alpha, beta, x), t_max, rng);
  o.covariates.assign(x.begin(), x.end());
  return o;
}

Dataset SimulationResult::dataset(int num_risks, int t_max) const {
  return Dataset(observations, num_risks, t_max);
}

SimulationResult generate_scenario(const ScenarioSpec& spec) {
  spec.validate();
  const GridD alpha = spec.expand_alpha();
  const int p = spec.num_covariates;

  std::vector<std::vector<double>> covariates(spec.n);
  if (p > 0 && spec.covariates == CovariateGenerator::kFile) {
    std::ifstream in(spec.covariate_file);
    if (!in) throw io_error("cannot open covariate file '" + spec.covariate_file + "'");
    std::string line;
    for (long i = 0; i < spec.n; ++i) {
      if (!std::getline(in, line))
        throw data_error("covariate file has fewer than n rows");
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) covariates[i].push_back(std::stod(cell));
      if (static_cast<int>(covariates[i].size()) != p)
        throw data_error("covariate file row has wrong width");
    }
  }

  SimulationResult result;
  result.observations.resize(spec.n);
  const std::uint64_t base = hash_combine(kSimTag, spec.seed);

  // Shared hazard table when every individual has the same covariate row.
  std::vector<std::vector<double>> shared_lambda;
  if (p == 0) shared_lambda = lambda_table(alpha, spec.beta, {});

  for (long i = 0; i < spec.n; ++i) {
    Rng rng(hash_combine(base, static_cast<std::uint64_t>(i)));
    std::vector<double> x;
    if (p > 0) {
      if (spec.covariates == CovariateGenerator::kStandardNormal) {
        x.resize(p);
        for (int j = 0; j < p; ++j) x[j] = rng.normal();
      } else {
        x = covariates[i];
      }
      result.observations[i] = race(lambda_table(alpha, spec.beta, x), spec.t_max, rng);
      result.observations[i].covariates = std::move(x);
    } else {
      result.observations[i] = race(shared_lambda, spec.t_max, rng);
    }
  }

  // Censoring pass: choose floor(f*n) individuals among those with T >= 2,
  // then draw each censoring time uniformly below the event time.
  std::vector<long> censored_ids;
  const long want = static_cast<long>(spec.censor_fraction * spec.n);
  if (want > 0) {
    std::vector<long> eligible;
    for (long i = 0; i < spec.n; ++i)
      if (result.observations[i].time >= 2) eligible.push_back(i);
    if (static_cast<long>(eligible.size()) < want)
      throw data_error("censor_fraction requires more eligible individuals (T >= 2) than available");
    Rng crng(hash_combine(hash_combine(kCensorTag, spec.seed), 0));
    for (long j = 0; j < want; ++j) {
      const std::size_t pick =
          j + static_cast<std::size_t>(crng.below(eligible.size() - j));
      std::swap(eligible[j], eligible[pick]);
      const long i = eligible[j];
      Observation& o = result.observations[i];
      o.time = 1 + static_cast<int>(crng.below(o.time - 1));
      o.status = 0;
      censored_ids.push_back(i);
    }
    std::sort(censored_ids.begin(), censored_ids.end());
  }

  nlohmann::json truth;
  truth["t_max"] = spec.t_max;
  truth["num_risks"] = spec.num_risks;
  truth["num_covariates"] = p;
  truth["n"] = spec.n;
  truth["seed"] = spec.seed;
  truth["censor_fraction"] = spec.censor_fraction;
  truth["censored_ids"] = censored_ids;
  nlohmann::json segs = nlohmann::json::array();
  for (const auto& s : spec.segments)
    segs.push_back({{"start_t", s.start_t}, {"alpha", s.alpha}});
  truth["alpha_schedule"] = segs;
  nlohmann::json cps = nlohmann::json::array();
  for (int t : spec.changepoint_times()) {
    const int mask = spec.config_at(t);
    std::vector<int> risks;
    for (int r = 0; r < spec.num_risks; ++r)
      if ((mask >> r) & 1) risks.push_back(r + 1);
    cps.push_back({{"t", t}, {"risks", risks}});
  }
  truth["changepoints"] = cps;
  if (p > 0) {
    nlohmann::json b = nlohmann::json::array();
    for (int r = 0; r < spec.num_risks; ++r) {
      std::vector<double> row(p);
      for (int j = 0; j < p; ++j) row[j] = spec.beta(r, j);
      b.push_back(row);
    }
    truth["beta"] = b;
  }
  result.truth = std::move(truth);
  return result;
}

ScenarioSpec preset_appendix_b(std::uint64_t seed) {
  ScenarioSpec spec;
  spec.num_risks = 3;
  spec.num_covariates = 0;
  spec.n = 100;
  // Horizon long enough that survival past it has negligible probability:
  // every individual realizes an event, matching an uncensored constant-
  // hazard draw. Fits use t_max = max observed time.
  spec.t_max = 500;
  spec.segments = {{1, {-2.0, -3.0, -4.0}}};
  spec.censor_fraction = 0.0;
  spec.seed = seed;
  return spec;
}

ScenarioSpec preset_sim3(double censor_fraction, std::uint64_t seed) {
  ScenarioSpec spec;
  spec.num_risks = 3;
  spec.num_covariates = 0;
  spec.n = 300;
  spec.t_max = 20;
  spec.segments = {
      {1, {-9.0, -9.0, -9.0}},
      {6, {-4.0, -3.0, -3.0}},
      {13, {-2.0, -2.0, -3.0}},
  };
  spec.censor_fraction = censor_fraction;
  spec.seed = seed;
  return spec;
}

}  // namespace mvbd
