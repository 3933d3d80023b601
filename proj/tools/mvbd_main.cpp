// Batch front door for the multivariate-Bernoulli change-point sampler:
// scenario simulation, model fitting, posterior summaries, Bayes-factor
// reports and the prior-recovery validation run.
//
// Exit codes: 0 success, 1 failed validation check, 2 usage error,
// 3 data error, 4 runtime/I/O failure.

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mvbd/chain.hpp"
#include "mvbd/data.hpp"
#include "mvbd/errors.hpp"
#include "mvbd/kernels.hpp"
#include "mvbd/prior.hpp"
#include "mvbd/report.hpp"
#include "mvbd/simulate.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct HyperFlags {
  double mu_alpha = -9.0;
  double sigma2_alpha = 3.0;
  double sigma2_beta = 1.0;
  double pi_k = 0.5;
  std::vector<double> psi;  // empty -> uniform
};

mvbd::Hyperparameters resolve_hyper(const HyperFlags& f, int m, int p, int t_max) {
  mvbd::Hyperparameters h = mvbd::Hyperparameters::defaults(m, p, t_max);
  h.mu_alpha = f.mu_alpha;
  h.sigma2_alpha = f.sigma2_alpha;
  h.sigma2_beta = f.sigma2_beta;
  h.pi_k = f.pi_k;
  if (!f.psi.empty()) h.psi = f.psi;
  h.validate();
  return h;
}

// Flat key=value run configuration; keys mirror the long option names
// without the leading dashes, values on the command line win, and unknown
// keys are an error.
class ConfigFile {
 public:
  ConfigFile() = default;

  static ConfigFile load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw mvbd::io_error("cannot open config '" + path + "'");
    ConfigFile out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return std::string();
        const auto b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
      };
      if (trim(line).empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw mvbd::config_error("config line " + std::to_string(lineno) +
                                 ": expected key=value");
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty())
        throw mvbd::config_error("config line " + std::to_string(lineno) +
                                 ": empty key");
      out.kv_[key] = value;
    }
    return out;
  }

  template <typename T>
  void apply(const CLI::App* sub, const std::string& key, T& target) {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return;
    used_.insert(key);
    if (sub->count("--" + key) > 0) return;  // command line wins
    parse_value(key, it->second, target);
  }

  void ensure_consumed() const {
    for (const auto& [key, value] : kv_)
      if (!used_.count(key))
        throw mvbd::config_error("unknown config key '" + key + "'");
  }

 private:
  static void parse_value(const std::string& key, const std::string& v,
                          double& out) {
    out = std::stod(v);
  }
  static void parse_value(const std::string& key, const std::string& v,
                          long& out) {
    out = std::stol(v);
  }
  static void parse_value(const std::string& key, const std::string& v,
                          int& out) {
    out = std::stoi(v);
  }
  static void parse_value(const std::string& key, const std::string& v,
                          std::uint64_t& out) {
    out = std::stoull(v);
  }
  static void parse_value(const std::string& key, const std::string& v,
                          bool& out) {
    if (v == "true" || v == "1")
      out = true;
    else if (v == "false" || v == "0")
      out = false;
    else
      throw mvbd::config_error("config key '" + key + "': expected a boolean");
  }
  static void parse_value(const std::string&, const std::string& v,
                          std::string& out) {
    out = v;
  }
  static void parse_value(const std::string& key, const std::string& v,
                          std::vector<double>& out) {
    out.clear();
    std::stringstream ss(v);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
  }
  static void parse_value(const std::string& key, const std::string& v,
                          std::vector<std::string>& out) {
    out.clear();
    std::stringstream ss(v);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
  }

  std::map<std::string, std::string> kv_;
  std::set<std::string> used_;
};

std::string default_out_dir() {
  if (const char* env = std::getenv("MVBD_OUT")) return env;
  return ".";
}

void require_out_dir(const std::string& dir) {
  if (!fs::is_directory(dir))
    throw mvbd::io_error("output directory '" + dir + "' does not exist");
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw mvbd::io_error("cannot write '" + path.string() + "'");
  return out;
}

void write_json(const fs::path& path, const json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
  if (!out) throw mvbd::io_error("write failed for '" + path.string() + "'");
}

mvbd::Dataset load_dataset(const std::string& path, int m, int t_max_flag) {
  std::optional<int> t_max;
  if (t_max_flag > 0) t_max = t_max_flag;
  return mvbd::Dataset::parse_csv_file(path, m, t_max);
}

std::vector<mvbd::PosteriorSample> load_samples(
    const std::vector<std::string>& paths) {
  std::vector<mvbd::PosteriorSample> all;
  for (const auto& p : paths) {
    auto part = mvbd::read_samples_csv_file(p);
    all.insert(all.end(), std::make_move_iterator(part.begin()),
               std::make_move_iterator(part.end()));
  }
  if (all.empty()) throw mvbd::data_error("no samples in input");
  return all;
}

void print_acceptance(const mvbd::MoveCounters& c) {
  std::cout << "move            attempts   accepts   rate\n";
  for (int t = 0; t < mvbd::kNumMoveTypes; ++t) {
    const double rate =
        c.attempts[t] > 0 ? double(c.accepts[t]) / c.attempts[t] : 0.0;
    std::printf("%-15s %8ld  %8ld   %.3f\n",
                mvbd::move_name(static_cast<mvbd::MoveType>(t)), c.attempts[t],
                c.accepts[t], rate);
  }
  std::cout << "nan log ratios: " << c.nan_log_ratios << "\n";
}

// --- simulate ---------------------------------------------------------------

int cmd_simulate(const std::string& preset, double censor, long n_override,
                 std::uint64_t seed, const std::string& out_dir) {
  require_out_dir(out_dir);
  mvbd::ScenarioSpec spec;
  if (preset == "appendix-b") {
    spec = mvbd::preset_appendix_b(seed);
  } else if (preset == "sim3") {
    spec = mvbd::preset_sim3(censor, seed);
  } else {
    throw mvbd::config_error("unknown preset '" + preset + "'");
  }
  if (preset == "appendix-b" && censor != 0.0)
    spec.censor_fraction = censor;
  if (n_override > 0) spec.n = n_override;

  const auto result = mvbd::generate_scenario(spec);
  const auto data = result.dataset(spec.num_risks, spec.t_max);

  auto csv = open_out(fs::path(out_dir) / "dataset.csv");
  data.write_csv(csv);
  if (!csv) throw mvbd::io_error("write failed for dataset.csv");
  write_json(fs::path(out_dir) / "truth.json", result.truth);
  std::cout << "wrote " << data.n() << " rows to " << out_dir << "/dataset.csv\n";
  return 0;
}

// --- fit --------------------------------------------------------------------

int cmd_fit(const std::string& data_path, int m, int t_max_flag,
            const HyperFlags& hyper_flags, mvbd::KernelConfig cfg, int chains,
            const std::string& out_dir) {
  require_out_dir(out_dir);
  const auto data = load_dataset(data_path, m, t_max_flag);
  const auto hyper =
      resolve_hyper(hyper_flags, m, data.num_covariates(), data.t_max());
  cfg.validate();

  const auto sample_file = [&](int chain) {
    return chains == 1 ? std::string("samples.csv")
                       : "samples_chain" + std::to_string(chain + 1) + ".csv";
  };

  // Manifest goes down before any sample row; an interrupted run leaves it
  // marked incomplete.
  json manifest;
  manifest["complete"] = false;
  manifest["chains"] = json::array();
  for (int c = 0; c < chains; ++c) {
    mvbd::KernelConfig ccfg = cfg;
    if (c > 0) ccfg.seed = mvbd::hash_combine(cfg.seed, c);
    json stub;
    stub["seed"] = ccfg.seed;
    stub["samples_file"] = sample_file(c);
    stub["complete"] = false;
    manifest["chains"].push_back(stub);
  }
  const fs::path manifest_path = fs::path(out_dir) / "manifest.json";
  write_json(manifest_path, manifest);

  mvbd::MoveCounters merged{};
  for (int c = 0; c < chains; ++c) {
    mvbd::KernelConfig ccfg = cfg;
    if (c > 0) ccfg.seed = mvbd::hash_combine(cfg.seed, c);
    auto out = open_out(fs::path(out_dir) / sample_file(c));
    mvbd::write_sample_header(out, hyper.num_risks, hyper.num_covariates,
                              hyper.t_max);
    const auto chain_manifest = mvbd::run_chain(
        data, hyper, ccfg,
        [&](const mvbd::PosteriorSample& s) { mvbd::write_sample_row(out, s); });
    if (!out) throw mvbd::io_error("write failed for " + sample_file(c));

    json cj = chain_manifest.to_json();
    cj["samples_file"] = sample_file(c);
    manifest["chains"][c] = cj;
    for (int t = 0; t < mvbd::kNumMoveTypes; ++t) {
      merged.attempts[t] += chain_manifest.counters.attempts[t];
      merged.accepts[t] += chain_manifest.counters.accepts[t];
    }
    merged.nan_log_ratios += chain_manifest.counters.nan_log_ratios;
    if (chains > 1)
      std::cout << "chain " << (c + 1) << ": " << chain_manifest.recorded_samples
                << " samples, " << chain_manifest.wall_seconds << " s\n";
  }
  manifest["complete"] = true;
  write_json(manifest_path, manifest);
  print_acceptance(merged);
  return 0;
}

// --- bf / summarize ----------------------------------------------------------

int cmd_bf(const std::vector<std::string>& sample_paths,
           const std::string& data_path, int m, int t_max_flag,
           const HyperFlags& hyper_flags, const std::string& out_dir) {
  require_out_dir(out_dir);
  const auto data = load_dataset(data_path, m, t_max_flag);
  const auto samples = load_samples(sample_paths);
  if (samples.front().num_risks() != m)
    throw mvbd::data_error("sample file risk count does not match --m");
  const auto hyper =
      resolve_hyper(hyper_flags, m, data.num_covariates(), data.t_max());
  const auto allowed = mvbd::compute_allowed_set(data);
  const auto report = mvbd::per_time_bayes_factors(samples, hyper, allowed);

  auto csv = open_out(fs::path(out_dir) / "bf.csv");
  mvbd::write_bf_csv(csv, report);
  write_json(fs::path(out_dir) / "bf.json", mvbd::report_envelope(report));
  std::printf("savage-dickey B = %.6g (freq K=0: %.4f, prior p(K=0): %.4f)\n",
              report.k0.bayes_factor, report.k0.posterior_freq,
              report.k0.prior_p_k0);
  return 0;
}

int cmd_summarize(const std::vector<std::string>& sample_paths,
                  std::vector<double> profile, const std::string& out_dir) {
  require_out_dir(out_dir);
  const auto samples = load_samples(sample_paths);
  const int p = samples.front().num_covariates();
  if (profile.empty()) profile.assign(p, 0.0);
  const auto tables = mvbd::summarize(samples, profile);

  {
    auto out = open_out(fs::path(out_dir) / "alpha_summary.csv");
    mvbd::write_alpha_summary_csv(out, tables);
  }
  {
    auto out = open_out(fs::path(out_dir) / "cumhaz.csv");
    mvbd::write_cumhaz_csv(out, tables);
  }
  if (p > 0) {
    auto out = open_out(fs::path(out_dir) / "beta_summary.csv");
    mvbd::write_beta_summary_csv(out, tables);
  }
  std::cout << "summarized " << samples.size() << " draws\n";
  return 0;
}

// --- prior-check -------------------------------------------------------------

mvbd::Dataset synthetic_shape_dataset(int n, int m, int t_max) {
  std::vector<mvbd::Observation> obs(n);
  for (int i = 0; i < n; ++i) {
    obs[i].time = 1 + i % t_max;
    obs[i].status = 1 + i % m;
  }
  return mvbd::Dataset(std::move(obs), m, t_max);
}

int cmd_prior_check(const std::string& data_path, int m, int t_max, int n,
                    long steps, const HyperFlags& hyper_flags,
                    mvbd::KernelConfig cfg, const std::string& out_dir) {
  require_out_dir(out_dir);
  const mvbd::Dataset data = data_path.empty()
                                 ? synthetic_shape_dataset(n, m, t_max)
                                 : load_dataset(data_path, m, 0);
  const auto hyper =
      resolve_hyper(hyper_flags, data.num_risks(), data.num_covariates(),
                    data.t_max());
  cfg.temperature = 0.0;
  cfg.iterations = steps;
  cfg.burn_in = 0;
  cfg.thin = 1;
  cfg.validate();

  const auto allowed = mvbd::compute_allowed_set(data);
  const auto marg = mvbd::prior_marginals(hyper, allowed);
  const auto pmf = mvbd::prior_count_pmf(hyper, allowed);
  const int tsize = allowed.size();

  std::vector<long> k_counts(tsize + 1, 0);
  std::vector<long> gamma_counts(data.t_max() + 1, 0);
  mvbd::GridD z_counts(hyper.num_risks, data.t_max() + 1, 0.0);
  std::vector<std::vector<double>> gamma_series(
      data.t_max() + 1, std::vector<double>());
  for (auto& g : gamma_series) g.reserve(steps);

  const auto manifest = mvbd::run_chain(
      data, hyper, cfg, [&](const mvbd::PosteriorSample& s) {
        ++k_counts[std::min(s.k, tsize)];
        for (int t : allowed.times) {
          gamma_counts[t] += s.gamma[t] != 0;
          gamma_series[t].push_back(s.gamma[t] ? 1.0 : 0.0);
          for (int r = 0; r < hyper.num_risks; ++r)
            z_counts(r, t) += s.z(r, t) != 0;
        }
      });
  const long total = manifest.recorded_samples;

  double tv_k = 0.0;
  for (int k = 0; k <= tsize; ++k)
    tv_k += std::abs(double(k_counts[k]) / total - pmf[k]);
  tv_k *= 0.5;
  const bool pass_k = tsize == 0 || tv_k <= 0.05;

  // Batch-means error for each per-time frequency.
  bool pass_gamma = true;
  double worst_gamma_dev = 0.0;
  for (int t : allowed.times) {
    const double freq = double(gamma_counts[t]) / total;
    const double dev = std::abs(freq - marg.p_gamma1);
    double se = 0.0;
    {
      const auto& x = gamma_series[t];
      const long nb = std::min<long>(100, long(x.size()) / 10);
      if (nb >= 2) {
        const long bs = long(x.size()) / nb;
        std::vector<double> bm(nb, 0.0);
        for (long b = 0; b < nb; ++b) {
          double s = 0.0;
          for (long i = b * bs; i < (b + 1) * bs; ++i) s += x[i];
          bm[b] = s / bs;
        }
        double mean = 0.0;
        for (double v : bm) mean += v;
        mean /= nb;
        double var = 0.0;
        for (double v : bm) var += (v - mean) * (v - mean);
        se = std::sqrt(var / (nb - 1) / nb);
      }
    }
    worst_gamma_dev = std::max(worst_gamma_dev, dev);
    if (dev > 3.0 * se && dev > 1e-12) pass_gamma = false;
  }

  bool pass_z = true;
  double worst_z_dev = 0.0;
  for (int t : allowed.times) {
    if (gamma_counts[t] == 0) {
      pass_z = false;
      continue;
    }
    for (int r = 0; r < hyper.num_risks; ++r) {
      const double cond = z_counts(r, t) / double(gamma_counts[t]);
      const double dev = std::abs(cond - marg.p_z1_given_cp[r]);
      worst_z_dev = std::max(worst_z_dev, dev);
      if (dev > 0.02) pass_z = false;
    }
  }
  if (tsize == 0) pass_z = pass_gamma = true;

  const bool pass = pass_k && pass_gamma && pass_z;
  json out;
  out["steps"] = steps;
  out["allowed_count"] = tsize;
  out["tv_k"] = tv_k;
  out["worst_gamma_deviation"] = worst_gamma_dev;
  out["worst_z_conditional_deviation"] = worst_z_dev;
  out["pass_k"] = pass_k;
  out["pass_gamma"] = pass_gamma;
  out["pass_z"] = pass_z;
  out["pass"] = pass;
  write_json(fs::path(out_dir) / "prior_check.json", out);

  std::printf("%s TV(K)=%.4f  worst gamma dev=%.4f  worst z dev=%.4f\n",
              pass ? "PASS" : "FAIL", tv_k, worst_gamma_dev, worst_z_dev);
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian change-point inference for discrete-time competing-risks survival data"};
  app.require_subcommand(1);

  std::string out_dir = default_out_dir();
  std::string config_path;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", out_dir,
                    "Output directory (default: $MVBD_OUT or .)")
        ->capture_default_str();
    sub->add_option("--config", config_path,
                    "Flat key=value config file; flags override its values");
  };

  // simulate
  auto* sim = app.add_subcommand("simulate", "Generate a synthetic dataset");
  add_common(sim);
  std::string preset = "sim3";
  double censor = 0.0;
  long n_override = 0;
  std::uint64_t sim_seed = 1;
  sim->add_option("--preset", preset, "appendix-b or sim3");
  preset.clear();
  sim->add_option("--censor", censor, "Censoring fraction in [0,1]");
  sim->add_option("--n", n_override, "Override the preset sample size");
  sim->add_option("--seed", sim_seed, "Generator seed");

  // shared fit-ish flags
  HyperFlags hyper_flags;
  mvbd::KernelConfig cfg;
  bool no_global_moves = false;
  int chains = 1;

  auto add_hyper = [&](CLI::App* sub) {
    sub->add_option("--mu-alpha", hyper_flags.mu_alpha, "Baseline level prior mean");
    sub->add_option("--sigma2-alpha", hyper_flags.sigma2_alpha,
                    "Baseline level prior variance");
    sub->add_option("--sigma2-beta", hyper_flags.sigma2_beta, "Slab variance");
    sub->add_option("--pi-k", hyper_flags.pi_k,
                    "Success probability of the change-point count prior");
    sub->add_option("--psi", hyper_flags.psi,
                    "Activation-pattern probabilities (2^m-1 values, risk 1 = lowest bit)");
  };
  auto add_kernel = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "Chain seed");
    sub->add_option("--iterations", cfg.iterations, "Total MCMC iterations");
    sub->add_option("--burnin", cfg.burn_in, "Burn-in iterations");
    sub->add_option("--thin", cfg.thin, "Record every thin-th draw");
    sub->add_option("--temperature", cfg.temperature,
                    "Likelihood temperature (0 targets the prior)");
    sub->add_flag("--no-global-moves", no_global_moves,
                  "Disable the unaugmented global moves");
    sub->add_option("--rw-sd", cfg.rw_sd, "Global-move level proposal sd");
    sub->add_option("--threads", cfg.threads, "Augmentation threads");
    sub->add_option("--debug-logratio-bias", cfg.debug_logratio_bias,
                    "Validation hook: bias added to split/merge log ratios")
        ->group("");
  };

  // fit
  auto* fit = app.add_subcommand("fit", "Run the MCMC sampler on a dataset");
  add_common(fit);
  std::string data_path;
  int m = 0;
  int t_max_flag = 0;
  fit->add_option("--data", data_path, "Dataset CSV (time,status,x1,...)");
  fit->add_option("--m", m, "Number of competing risks");
  fit->add_option("--tmax", t_max_flag, "Horizon (0 = max observed time)");
  fit->add_option("--chains", chains, "Independent chains with derived seeds");
  add_hyper(fit);
  add_kernel(fit);

  // bf
  auto* bf = app.add_subcommand("bf", "Bayes-factor report from a sample stream");
  add_common(bf);
  std::vector<std::string> sample_paths;
  bf->add_option("--samples", sample_paths, "Sample CSV file(s)");
  bf->add_option("--data", data_path, "Dataset CSV used for the fit");
  bf->add_option("--m", m, "Number of competing risks");
  bf->add_option("--tmax", t_max_flag, "Horizon (0 = max observed time)");
  add_hyper(bf);

  // summarize
  auto* summ = app.add_subcommand("summarize", "Posterior summary tables");
  add_common(summ);
  std::vector<double> profile;
  summ->add_option("--samples", sample_paths, "Sample CSV file(s)");
  summ->add_option("--profile", profile, "Covariate profile (default zeros)");

  // prior-check
  auto* pc = app.add_subcommand("prior-check",
                                "Temperature-0 run compared against the analytic prior");
  add_common(pc);
  int pc_m = 3, pc_tmax = 12, pc_n = 60;
  long pc_steps = 100000;
  pc->add_option("--data", data_path, "Optional dataset providing the shape");
  pc->add_option("--m", pc_m, "Risks for the synthetic shape");
  pc->add_option("--tmax", pc_tmax, "Horizon for the synthetic shape");
  pc->add_option("--n", pc_n, "Individuals for the synthetic shape");
  pc->add_option("--steps", pc_steps, "Kernel steps");
  add_hyper(pc);
  add_kernel(pc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    CLI::App* active = app.get_subcommands().front();
    ConfigFile file;
    if (!config_path.empty()) file = ConfigFile::load(config_path);
    const auto apply_common = [&](CLI::App* sub) {
      file.apply(sub, "out", out_dir);
    };
    const auto apply_hyper = [&](CLI::App* sub) {
      file.apply(sub, "mu-alpha", hyper_flags.mu_alpha);
      file.apply(sub, "sigma2-alpha", hyper_flags.sigma2_alpha);
      file.apply(sub, "sigma2-beta", hyper_flags.sigma2_beta);
      file.apply(sub, "pi-k", hyper_flags.pi_k);
      file.apply(sub, "psi", hyper_flags.psi);
    };
    const auto apply_kernel = [&](CLI::App* sub) {
      file.apply(sub, "seed", cfg.seed);
      file.apply(sub, "iterations", cfg.iterations);
      file.apply(sub, "burnin", cfg.burn_in);
      file.apply(sub, "thin", cfg.thin);
      file.apply(sub, "temperature", cfg.temperature);
      file.apply(sub, "no-global-moves", no_global_moves);
      file.apply(sub, "rw-sd", cfg.rw_sd);
      file.apply(sub, "threads", cfg.threads);
      file.apply(sub, "debug-logratio-bias", cfg.debug_logratio_bias);
    };

    if (sim->parsed()) {
      apply_common(sim);
      file.apply(sim, "preset", preset);
      file.apply(sim, "censor", censor);
      file.apply(sim, "n", n_override);
      file.apply(sim, "seed", sim_seed);
      file.ensure_consumed();
      if (preset.empty()) throw mvbd::config_error("--preset is required");
      return cmd_simulate(preset, censor, n_override, sim_seed, out_dir);
    }
    if (fit->parsed()) {
      apply_common(fit);
      file.apply(fit, "data", data_path);
      file.apply(fit, "m", m);
      file.apply(fit, "tmax", t_max_flag);
      file.apply(fit, "chains", chains);
      apply_hyper(fit);
      apply_kernel(fit);
      file.ensure_consumed();
      cfg.global_moves = !no_global_moves;
      if (data_path.empty()) throw mvbd::config_error("--data is required");
      if (m < 1) throw mvbd::config_error("--m is required");
      return cmd_fit(data_path, m, t_max_flag, hyper_flags, cfg, chains, out_dir);
    }
    if (bf->parsed()) {
      apply_common(bf);
      file.apply(bf, "samples", sample_paths);
      file.apply(bf, "data", data_path);
      file.apply(bf, "m", m);
      file.apply(bf, "tmax", t_max_flag);
      apply_hyper(bf);
      file.ensure_consumed();
      if (sample_paths.empty()) throw mvbd::config_error("--samples is required");
      if (data_path.empty()) throw mvbd::config_error("--data is required");
      if (m < 1) throw mvbd::config_error("--m is required");
      return cmd_bf(sample_paths, data_path, m, t_max_flag, hyper_flags, out_dir);
    }
    if (summ->parsed()) {
      apply_common(summ);
      file.apply(summ, "samples", sample_paths);
      file.apply(summ, "profile", profile);
      file.ensure_consumed();
      if (sample_paths.empty()) throw mvbd::config_error("--samples is required");
      return cmd_summarize(sample_paths, profile, out_dir);
    }
    if (pc->parsed()) {
      apply_common(pc);
      file.apply(pc, "data", data_path);
      file.apply(pc, "m", pc_m);
      file.apply(pc, "tmax", pc_tmax);
      file.apply(pc, "n", pc_n);
      file.apply(pc, "steps", pc_steps);
      apply_hyper(pc);
      apply_kernel(pc);
      file.ensure_consumed();
      cfg.global_moves = !no_global_moves;
      const bool have_data = pc->count("--data") > 0 || !data_path.empty();
      return cmd_prior_check(have_data ? data_path : "", pc_m, pc_tmax,
                             pc_n, pc_steps, hyper_flags, cfg, out_dir);
    }
    (void)active;
  } catch (const mvbd::config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const mvbd::data_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 2;
}
