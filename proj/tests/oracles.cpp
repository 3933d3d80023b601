#include "oracles.hpp"

#include <algorithm>
#include <cmath>

namespace oracle {

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa,
               double b, double fb, double m, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a,
                     double fa, double b, double fb, double m, double fm,
                     double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(f, a, fa, m, fm, lm, flm);
  const double right = simpson(f, m, fm, b, fb, rm, frm);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_step(f, a, fa, m, fm, lm, flm, left, tol * 0.5, depth - 1) +
         adaptive_step(f, m, fm, b, fb, rm, frm, right, tol * 0.5, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = simpson(f, a, fa, b, fb, m, fm);
  return adaptive_step(f, a, fa, b, fb, m, fm, whole, tol, 48);
}

double log_gauss_product_density(double alpha, const std::vector<double>& d,
                                 const std::vector<double>& s2, double mu,
                                 double sigma2) {
  const double log_two_pi = 1.8378770664093454836;
  double lp = -0.5 * (log_two_pi + std::log(sigma2) +
                      (alpha - mu) * (alpha - mu) / sigma2);
  for (std::size_t k = 0; k < d.size(); ++k)
    lp += -0.5 * (log_two_pi + std::log(s2[k]) +
                  (d[k] - alpha) * (d[k] - alpha) / s2[k]);
  return lp;
}

double log_gauss_product_integral(const std::vector<double>& d,
                                  const std::vector<double>& s2, double mu,
                                  double sigma2) {
  // Posterior mode and spread to bracket and scale the integrand.
  double prec = 1.0 / sigma2;
  double num = mu / sigma2;
  for (std::size_t k = 0; k < d.size(); ++k) {
    prec += 1.0 / s2[k];
    num += d[k] / s2[k];
  }
  const double center = num / prec;
  const double spread = std::sqrt(1.0 / prec);
  const double lo = center - 14.0 * spread;
  const double hi = center + 14.0 * spread;
  const double scale = log_gauss_product_density(center, d, s2, mu, sigma2);
  const auto f = [&](double a) {
    return std::exp(log_gauss_product_density(a, d, s2, mu, sigma2) - scale);
  };
  const double integral = adaptive_simpson(f, lo, hi, 1e-13);
  return scale + std::log(integral);
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    const double fa = static_cast<double>(i) / a.size();
    const double fb = static_cast<double>(j) / b.size();
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

double ks_critical_d_01(std::size_t n_a, std::size_t n_b) {
  const double c = 1.628;  // c(alpha) at alpha = 0.01
  return c * std::sqrt((static_cast<double>(n_a) + n_b) /
                       (static_cast<double>(n_a) * n_b));
}

double chi_square_stat(const std::vector<long>& counts,
                       const std::vector<double>& probs) {
  long total = 0;
  for (long c : counts) total += c;
  double stat = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    const double expected = total * probs[k];
    const double diff = counts[k] - expected;
    stat += diff * diff / expected;
  }
  return stat;
}

}  // namespace oracle
