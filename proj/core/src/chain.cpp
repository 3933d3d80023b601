#include "mvbd/chain.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "mvbd/errors.hpp"

namespace mvbd {

PosteriorSample PosteriorSample::from_state(long iteration,
                                            const ModelState& state) {
  PosteriorSample s;
  s.iteration = iteration;
  s.k = state.cp.count();
  s.gamma = state.cp.gamma;
  s.z = state.cp.z;
  s.alpha = state.alpha;
  for (int r = 0; r < state.num_risks(); ++r) s.alpha(r, 0) = 0.0;  // unused slot
  s.beta = state.reg.beta;
  s.inclusion = state.reg.inclusion;
  s.pi_beta = state.reg.pi_beta;
  return s;
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["config"] = {
      {"iterations", config.iterations},
      {"burn_in", config.burn_in},
      {"thin", config.thin},
      {"seed", config.seed},
      {"global_moves", config.global_moves},
      {"temperature", config.temperature},
      {"rw_sd", config.rw_sd},
      {"threads", config.threads},
      {"debug_logratio_bias", config.debug_logratio_bias},
  };
  j["hyperparameters"] = {
      {"num_risks", hyper.num_risks},
      {"num_covariates", hyper.num_covariates},
      {"t_max", hyper.t_max},
      {"mu_alpha", hyper.mu_alpha},
      {"sigma2_alpha", hyper.sigma2_alpha},
      {"sigma2_beta", hyper.sigma2_beta},
      {"pi_k", hyper.pi_k},
      {"psi", hyper.psi},
  };
  nlohmann::json moves;
  for (int t = 0; t < kNumMoveTypes; ++t) {
    moves[move_name(static_cast<MoveType>(t))] = {
        {"attempts", counters.attempts[t]},
        {"accepts", counters.accepts[t]},
    };
  }
  j["moves"] = moves;
  j["nan_log_ratios"] = counters.nan_log_ratios;
  j["recorded_samples"] = recorded_samples;
  j["wall_seconds"] = wall_seconds;
  j["complete"] = complete;
  j["data"] = {{"n", n}, {"allowed_times", allowed_times}};
  return j;
}

RunManifest run_chain(const Dataset& data, const Hyperparameters& hyper,
                      const KernelConfig& cfg, const SampleSink& sink) {
  cfg.validate();
  const AllowedSet allowed = compute_allowed_set(data);
  McmcKernel kernel(data, allowed, hyper, cfg);
  ModelState state = ModelState::initial(hyper);
  Rng rng(hash_combine(0x636861696e724e47ULL, cfg.seed));

  RunManifest manifest;
  manifest.config = cfg;
  manifest.hyper = hyper;
  manifest.n = data.n();
  manifest.allowed_times = allowed.times;

  const auto t0 = std::chrono::steady_clock::now();
  for (long it = 1; it <= cfg.iterations; ++it) {
    kernel.step(state, rng, static_cast<std::uint64_t>(it));
    if (it > cfg.burn_in && (it - cfg.burn_in) % cfg.thin == 0) {
      if (sink) sink(PosteriorSample::from_state(it, state));
      ++manifest.recorded_samples;
    }
  }
  const auto t1 = std::chrono::steady_clock::now();
  manifest.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
  manifest.counters = kernel.counters();
  manifest.complete = true;
  return manifest;
}

ChainResult run_chain_collect(const Dataset& data, const Hyperparameters& hyper,
                              const KernelConfig& cfg) {
  ChainResult out;
  out.manifest = run_chain(data, hyper, cfg, [&](const PosteriorSample& s) {
    out.samples.push_back(s);
  });
  return out;
}

void write_sample_header(std::ostream& out, int num_risks, int num_covariates,
                         int t_max) {
  out << "iteration,K";
  for (int t = 1; t <= t_max; ++t) out << ",gamma_" << t;
  for (int r = 1; r <= num_risks; ++r)
    for (int t = 1; t <= t_max; ++t) out << ",z_" << r << '_' << t;
  for (int r = 1; r <= num_risks; ++r)
    for (int t = 1; t <= t_max; ++t) out << ",alpha_" << r << '_' << t;
  for (int r = 1; r <= num_risks; ++r)
    for (int j = 1; j <= num_covariates; ++j) out << ",beta_" << r << '_' << j;
  for (int r = 1; r <= num_risks; ++r)
    for (int j = 1; j <= num_covariates; ++j) out << ",incl_" << r << '_' << j;
  out << ",pi_beta\n";
}

void write_sample_row(std::ostream& out, const PosteriorSample& s) {
  char buf[64];
  out << s.iteration << ',' << s.k;
  const int t_max = s.t_max();
  const int m = s.num_risks();
  const int p = s.num_covariates();
  for (int t = 1; t <= t_max; ++t) out << ',' << int(s.gamma[t]);
  for (int r = 0; r < m; ++r)
    for (int t = 1; t <= t_max; ++t) out << ',' << int(s.z(r, t));
  for (int r = 0; r < m; ++r)
    for (int t = 1; t <= t_max; ++t) {
      std::snprintf(buf, sizeof(buf), "%.17g", s.alpha(r, t));
      out << ',' << buf;
    }
  for (int r = 0; r < m; ++r)
    for (int j = 0; j < p; ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", s.beta(r, j));
      out << ',' << buf;
    }
  for (int r = 0; r < m; ++r)
    for (int j = 0; j < p; ++j) out << ',' << int(s.inclusion(r, j));
  std::snprintf(buf, sizeof(buf), "%.17g", s.pi_beta);
  out << ',' << buf << '\n';
}

std::vector<PosteriorSample> read_samples_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw data_error("empty sample file");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) header.push_back(f);
  }
  if (header.size() < 3 || header[0] != "iteration" || header[1] != "K" ||
      header.back() != "pi_beta")
    throw data_error("unrecognized sample file header");

  int t_max = 0, m = 0, p = 0;
  for (const auto& h : header) {
    if (h.rfind("gamma_", 0) == 0) t_max = std::max(t_max, std::stoi(h.substr(6)));
    if (h.rfind("z_", 0) == 0) {
      const auto us = h.find('_', 2);
      m = std::max(m, std::stoi(h.substr(2, us - 2)));
    }
    if (h.rfind("beta_", 0) == 0) {
      const auto us = h.find('_', 5);
      p = std::max(p, std::stoi(h.substr(us + 1)));
    }
  }
  const std::size_t expected = 2 + static_cast<std::size_t>(t_max) +
                               2u * m * t_max + 2u * m * p + 1;
  if (header.size() != expected) throw data_error("truncated sample file header");

  std::vector<PosteriorSample> out;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string f;
    std::vector<std::string> cells;
    while (std::getline(ss, f, ',')) cells.push_back(f);
    if (cells.size() != expected)
      throw data_error("sample file row " + std::to_string(row) +
                       ": wrong cell count");
    PosteriorSample s;
    s.gamma.assign(t_max + 1, 0);
    s.z = GridB(m, t_max + 1, 0);
    s.alpha = GridD(m, t_max + 1, 0.0);
    s.beta = GridD(m, p, 0.0);
    s.inclusion = GridB(m, p, 0);
    std::size_t c = 0;
    s.iteration = std::stol(cells[c++]);
    s.k = std::stoi(cells[c++]);
    for (int t = 1; t <= t_max; ++t) s.gamma[t] = cells[c++] == "1";
    for (int r = 0; r < m; ++r)
      for (int t = 1; t <= t_max; ++t) s.z(r, t) = cells[c++] == "1";
    for (int r = 0; r < m; ++r)
      for (int t = 1; t <= t_max; ++t) s.alpha(r, t) = std::stod(cells[c++]);
    for (int r = 0; r < m; ++r)
      for (int j = 0; j < p; ++j) s.beta(r, j) = std::stod(cells[c++]);
    for (int r = 0; r < m; ++r)
      for (int j = 0; j < p; ++j) s.inclusion(r, j) = cells[c++] == "1";
    s.pi_beta = std::stod(cells[c++]);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<PosteriorSample> read_samples_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path + "'");
  return read_samples_csv(in);
}

}  // namespace mvbd
