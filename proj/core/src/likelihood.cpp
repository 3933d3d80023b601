#include "mvbd/likelihood.hpp"

#include <cmath>
#include <stdexcept>

namespace mvbd {

HazardResult hazards(std::span<const double> eta) {
  for (double e : eta)
    if (!std::isfinite(e)) throw std::invalid_argument("hazards: non-finite eta");
  double shift = 0.0;  // reference category has eta = 0
  for (double e : eta) shift = std::max(shift, e);
  double denom = std::exp(-shift);
  HazardResult out;
  out.lambda.resize(eta.size());
  for (std::size_t r = 0; r < eta.size(); ++r) {
    out.lambda[r] = std::exp(eta[r] - shift);
    denom += out.lambda[r];
  }
  double total = 0.0;
  for (double& l : out.lambda) {
    l /= denom;
    total += l;
  }
  out.overall = total;
  return out;
}

std::vector<double> tvgeom_pmf(std::span<const double> phi) {
  for (double p : phi)
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("tvgeom_pmf: phi outside [0,1]");
  std::vector<double> out(phi.size() + 1);
  double surv = 1.0;
  for (std::size_t t = 0; t < phi.size(); ++t) {
    out[t] = phi[t] * surv;
    surv *= 1.0 - phi[t];
  }
  out[phi.size()] = surv;
  return out;
}

LogHazardTable build_log_hazard_table(const GridD& alpha, const GridD& beta,
                                      std::span<const double> x) {
  const int m = static_cast<int>(alpha.rows());
  const int t_max = static_cast<int>(alpha.cols()) - 1;
  LogHazardTable tab;
  tab.log_lambda = GridD(m, t_max + 1, 0.0);
  tab.eta = GridD(m, t_max + 1, 0.0);
  tab.log_surv.assign(t_max + 1, 0.0);

  std::vector<double> xb(m, 0.0);
  for (int r = 0; r < m; ++r)
    for (std::size_t j = 0; j < x.size(); ++j) xb[r] += x[j] * beta(r, j);

  for (int t = 1; t <= t_max; ++t) {
    double shift = 0.0;
    for (int r = 0; r < m; ++r) {
      tab.eta(r, t) = alpha(r, t) + xb[r];
      shift = std::max(shift, tab.eta(r, t));
    }
    double sum = std::exp(-shift);
    for (int r = 0; r < m; ++r) sum += std::exp(tab.eta(r, t) - shift);
    const double lse = shift + std::log(sum);  // log(1 + sum_r exp(eta_r))
    for (int r = 0; r < m; ++r) tab.log_lambda(r, t) = tab.eta(r, t) - lse;
    tab.log_surv[t] = -lse;
  }
  return tab;
}

double log_likelihood(const Dataset& data, const ModelState& state) {
  if (state.num_risks() != data.num_risks() || state.t_max() != data.t_max() ||
      static_cast<int>(state.reg.beta.cols()) != data.num_covariates())
    throw std::invalid_argument("log_likelihood: dimension mismatch");

  std::vector<LogHazardTable> tables;
  tables.reserve(data.num_patterns());
  for (int k = 0; k < data.num_patterns(); ++k)
    tables.push_back(
        build_log_hazard_table(state.alpha, state.reg.beta, data.pattern(k)));

  double total = 0.0;
  for (int i = 0; i < data.n(); ++i) {
    const Observation& o = data.obs(i);
    const LogHazardTable& tab = tables[data.pattern_of(i)];
    const bool event_in_range = o.status >= 1 && o.time <= data.t_max();
    const int surv_upto = event_in_range ? o.time - 1 : data.periods(i);
    for (int l = 1; l <= surv_upto; ++l) total += tab.log_surv[l];
    if (event_in_range) total += tab.log_lambda(o.status - 1, o.time);
  }
  return total;
}

std::vector<double> cumulative_hazard(const GridD& alpha, const GridD& beta,
                                      std::span<const double> x, int risk) {
  const int m = static_cast<int>(alpha.rows());
  if (risk < 1 || risk > m)
    throw std::invalid_argument("cumulative_hazard: risk out of range");
  const LogHazardTable tab = build_log_hazard_table(alpha, beta, x);
  const int t_max = static_cast<int>(alpha.cols()) - 1;
  std::vector<double> out(t_max);
  double acc = 0.0;
  for (int t = 1; t <= t_max; ++t) {
    acc += std::exp(tab.log_lambda(risk - 1, t));
    out[t - 1] = acc;
  }
  return out;
}

std::vector<double> cumulative_hazard(const ModelState& state,
                                      std::span<const double> x, int risk) {
  return cumulative_hazard(state.alpha, state.reg.beta, x, risk);
}

}  // namespace mvbd
