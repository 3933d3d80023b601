#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "mvbd/prior.hpp"
#include "mvbd/rng.hpp"
#include "mvbd/stats.hpp"

using namespace mvbd;

namespace {

AllowedSet allowed_all_interior(int t_max) {
  std::vector<int> counts(t_max + 1, 1);
  return compute_allowed_set(counts, t_max);
}

}  // namespace

TEST_CASE("change-point prior at K=0 and K=1") {
  const auto allowed = allowed_all_interior(5);  // {2,3,4}
  REQUIRE(allowed.size() == 3);

  {
    auto hyper = Hyperparameters::defaults(1, 0, 5);
    ChangePointState cp(1, 5);
    CHECK(log_prior_changepoints(cp, hyper, allowed) ==
          doctest::Approx(std::log(8.0 / 15)).epsilon(1e-14));
  }
  {
    auto hyper = Hyperparameters::defaults(2, 0, 5);
    ChangePointState cp(2, 5);
    cp.gamma[3] = 1;
    cp.z(0, 3) = 1;
    CHECK(log_prior_changepoints(cp, hyper, allowed) ==
          doctest::Approx(std::log((4.0 / 15) * (1.0 / 3) * (1.0 / 3)))
              .epsilon(1e-14));
  }
}

TEST_CASE("change-point prior rejects states outside the support") {
  const auto allowed = allowed_all_interior(5);
  auto hyper = Hyperparameters::defaults(2, 0, 5);

  ChangePointState outside(2, 5);
  outside.gamma[5] = 1;  // boundary, not in the allowed set
  outside.z(0, 5) = 1;
  std::string why;
  CHECK(log_prior_changepoints(outside, hyper, allowed, &why) ==
        -std::numeric_limits<double>::infinity());
  CHECK(!why.empty());

  ChangePointState empty_z(2, 5);
  empty_z.gamma[3] = 1;
  CHECK(std::isinf(log_prior_changepoints(empty_z, hyper, allowed)));

  ChangePointState orphan_z(2, 5);
  orphan_z.z(1, 3) = 1;
  CHECK(std::isinf(log_prior_changepoints(orphan_z, hyper, allowed)));
}

TEST_CASE("change-point prior sums to one by enumeration") {
  // |allowed| = 3 and m = 2: 64 states in the support.
  const auto allowed = allowed_all_interior(5);
  auto hyper = Hyperparameters::defaults(2, 0, 5);
  double total = 0.0;
  const auto& times = allowed.times;
  for (int mask = 0; mask < 8; ++mask) {
    std::vector<int> active;
    for (int j = 0; j < 3; ++j)
      if ((mask >> j) & 1) active.push_back(times[j]);
    std::vector<int> configs(active.size(), 1);
    for (;;) {
      ChangePointState cp(2, 5);
      for (std::size_t a = 0; a < active.size(); ++a) {
        cp.gamma[active[a]] = 1;
        cp.z(0, active[a]) = configs[a] & 1;
        cp.z(1, active[a]) = (configs[a] >> 1) & 1;
      }
      total += std::exp(log_prior_changepoints(cp, hyper, allowed));
      std::size_t idx = 0;
      while (idx < configs.size() && configs[idx] == 3) configs[idx++] = 1;
      if (idx == configs.size()) break;
      ++configs[idx];
    }
    if (active.empty()) continue;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("prior marginals against hand enumeration") {
  const auto allowed = allowed_all_interior(5);
  {
    auto hyper = Hyperparameters::defaults(2, 0, 5);
    const auto m = prior_marginals(hyper, allowed);
    CHECK(m.p_k0 == doctest::Approx(8.0 / 15).epsilon(1e-14));
    CHECK(m.p_gamma1 == doctest::Approx(11.0 / 45).epsilon(1e-14));
    CHECK(m.p_z1_given_cp[0] == doctest::Approx(2.0 / 3).epsilon(1e-14));
    CHECK(m.p_z1[0] ==
          doctest::Approx((11.0 / 45) * (2.0 / 3)).epsilon(1e-14));
  }
  {
    auto hyper = Hyperparameters::defaults(3, 0, 5);
    const auto m = prior_marginals(hyper, allowed);
    CHECK(m.p_z1_given_cp[0] == doctest::Approx(4.0 / 7).epsilon(1e-14));
    CHECK(m.p_z1_given_cp[2] == doctest::Approx(4.0 / 7).epsilon(1e-14));
  }
}

TEST_CASE("prior p(K=0) approaches pi_k from above as the set grows") {
  auto hyper = Hyperparameters::defaults(1, 0, 22);
  const auto big = allowed_all_interior(22);  // |allowed| = 20
  const auto m = prior_marginals(hyper, big);
  CHECK(m.p_k0 > 0.5);
  CHECK(m.p_k0 == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("prior marginals with empty allowed set") {
  const auto empty = compute_allowed_set(std::vector<int>(3, 0), 2);
  REQUIRE(empty.size() == 0);
  auto hyper = Hyperparameters::defaults(2, 0, 2);
  const auto m = prior_marginals(hyper, empty);
  CHECK(m.p_k0 == 1.0);
  CHECK(m.p_gamma1 == 0.0);
  CHECK(m.p_z1[0] == 0.0);
  CHECK(m.p_z1[1] == 0.0);
}

TEST_CASE("prior marginals agree with direct Monte Carlo") {
  const auto allowed = allowed_all_interior(9);  // {2..8}
  auto hyper = Hyperparameters::defaults(2, 0, 9);
  const auto marg = prior_marginals(hyper, allowed);
  const auto pmf = prior_count_pmf(hyper, allowed);

  const long draws = 100000;
  Rng rng(1234);
  long k0 = 0;
  std::vector<long> gamma_counts(10, 0);
  std::vector<long> z_counts(10, 0);
  for (long it = 0; it < draws; ++it) {
    // K from the truncated count prior
    const double u = rng.uniform();
    int k = 0;
    double acc = 0.0;
    for (std::size_t j = 0; j < pmf.size(); ++j) {
      acc += pmf[j];
      if (u < acc) {
        k = static_cast<int>(j);
        break;
      }
    }
    if (k == 0) ++k0;
    // uniform subset of size k (partial shuffle)
    std::vector<int> pool = allowed.times;
    for (int j = 0; j < k; ++j) {
      const std::size_t pick = j + rng.below(pool.size() - j);
      std::swap(pool[j], pool[pick]);
      gamma_counts[pool[j]] += 1;
      const int config = sample_activation_config(hyper, rng);
      if (config & 1) z_counts[pool[j]] += 1;
    }
  }

  const double se_k0 = std::sqrt(marg.p_k0 * (1 - marg.p_k0) / draws);
  CHECK(std::abs(double(k0) / draws - marg.p_k0) <= 3 * se_k0);
  const double se_g =
      std::sqrt(marg.p_gamma1 * (1 - marg.p_gamma1) / draws);
  for (int t : allowed.times) {
    CHECK(std::abs(double(gamma_counts[t]) / draws - marg.p_gamma1) <=
          3 * se_g);
    const double se_z = std::sqrt(marg.p_z1[0] * (1 - marg.p_z1[0]) / draws);
    CHECK(std::abs(double(z_counts[t]) / draws - marg.p_z1[0]) <= 3 * se_z);
  }
}

TEST_CASE("continuous prior closed forms") {
  const auto allowed = allowed_all_interior(4);
  {
    auto hyper = Hyperparameters::defaults(1, 0, 4);
    ModelState s = ModelState::initial(hyper);  // single level at mu_alpha
    CHECK(log_prior_continuous(s, hyper) ==
          doctest::Approx(-0.5 * std::log(6 * M_PI)).epsilon(1e-14));
  }
  {
    auto hyper = Hyperparameters::defaults(2, 3, 4);
    ModelState s = ModelState::initial(hyper);
    s.reg.pi_beta = 0.5;
    for (int r = 0; r < 2; ++r)
      for (int j = 0; j < 3; ++j) s.reg.inclusion(r, j) = 1;
    const double alpha_part =
        2 * log_normal_pdf(hyper.mu_alpha, hyper.mu_alpha, hyper.sigma2_alpha);
    const double per_risk = 3 * (log_normal_pdf(0, 0, 1) + std::log(0.5));
    CHECK(log_prior_continuous(s, hyper) ==
          doctest::Approx(alpha_part + 2 * per_risk).epsilon(1e-13));
  }
  {
    auto hyper = Hyperparameters::defaults(1, 1, 4);
    ModelState s = ModelState::initial(hyper);
    s.reg.pi_beta = 1.5;
    CHECK_THROWS_AS(log_prior_continuous(s, hyper), std::invalid_argument);
  }
}

TEST_CASE("continuous prior counts one level per cause boundary") {
  auto hyper = Hyperparameters::defaults(2, 0, 6);
  const auto allowed = allowed_all_interior(6);
  ModelState s = ModelState::initial(hyper);
  s.add_changepoint(3, 0b01);  // risk 1 jumps, risk 2 does not
  s.set_level_from(0, 3, -7.0);
  // risk 1 has levels (-9, -7); risk 2 keeps its single -9 level
  const double expected =
      2 * log_normal_pdf(-9, -9, 3) + log_normal_pdf(-7, -9, 3);
  CHECK(log_prior_continuous(s, hyper) ==
        doctest::Approx(expected).epsilon(1e-13));
}
