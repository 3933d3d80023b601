#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mvbd/errors.hpp"
#include "mvbd/report.hpp"
#include "mvbd/rng.hpp"

using namespace mvbd;

namespace {

AllowedSet allowed_of_size(int size) {
  const int t_max = size + 2;
  std::vector<int> counts(t_max + 1, 1);
  return compute_allowed_set(counts, t_max);
}

PosteriorSample blank_sample(int m, int p, int t_max) {
  PosteriorSample s;
  s.gamma.assign(t_max + 1, 0);
  s.z = GridB(m, t_max + 1, 0);
  s.alpha = GridD(m, t_max + 1, -9.0);
  s.beta = GridD(m, p, 0.0);
  s.inclusion = GridB(m, p, 0);
  return s;
}

std::vector<PosteriorSample> samples_with_k0_fraction(int n, int k0_count,
                                                      int m, int t_max,
                                                      int cp_time) {
  std::vector<PosteriorSample> out;
  for (int i = 0; i < n; ++i) {
    auto s = blank_sample(m, 0, t_max);
    if (i >= k0_count) {
      s.k = 1;
      s.gamma[cp_time] = 1;
      s.z(0, cp_time) = 1;
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

TEST_CASE("savage-dickey worked examples") {
  const auto allowed = allowed_of_size(3);
  auto hyper = Hyperparameters::defaults(1, 0, 5);

  {
    const auto samples = samples_with_k0_fraction(10, 8, 1, 5, 3);
    const auto sd = savage_dickey_K0(samples, hyper, allowed);
    CHECK(sd.bayes_factor == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(sd.posterior_freq == 0.8);
    CHECK(sd.count_k0 == 8);
  }
  {
    const auto samples = samples_with_k0_fraction(10, 0, 1, 5, 3);
    const auto sd = savage_dickey_K0(samples, hyper, allowed);
    CHECK(sd.bayes_factor == 0.0);
  }
  {
    const auto big = allowed_of_size(60);
    auto h = Hyperparameters::defaults(1, 0, 62);
    const auto samples = samples_with_k0_fraction(10, 10, 1, 62, 3);
    const auto sd = savage_dickey_K0(samples, h, big);
    CHECK(sd.bayes_factor > 1.9999);
    CHECK(sd.bayes_factor <= 2.0 + 1e-9);
  }
  CHECK_THROWS_AS(savage_dickey_K0({}, hyper, allowed), data_error);
}

TEST_CASE("savage-dickey never exceeds the prior bound") {
  const auto allowed = allowed_of_size(5);
  auto hyper = Hyperparameters::defaults(2, 0, 7);
  const auto marg = prior_marginals(hyper, allowed);
  Rng rng(5);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 5 + static_cast<int>(rng.below(40));
    const int k0 = static_cast<int>(rng.below(n + 1));
    const auto samples = samples_with_k0_fraction(n, k0, 2, 7, 3);
    const auto sd = savage_dickey_K0(samples, hyper, allowed);
    CHECK(sd.bayes_factor <= 1.0 / marg.p_k0 + 1e-12);
  }
}

TEST_CASE("per-time Bayes factors follow the odds formula") {
  const auto allowed = allowed_of_size(3);  // times {2,3,4}
  auto hyper = Hyperparameters::defaults(1, 0, 5);

  // 9 of 10 samples flag a change point at t = 3.
  const auto samples = samples_with_k0_fraction(10, 1, 1, 5, 3);
  const auto report = per_time_bayes_factors(samples, hyper, allowed);
  REQUIRE(report.times == std::vector<int>{2, 3, 4});

  const double p = report.prior.p_gamma1;  // 11/45
  CHECK(p == doctest::Approx(11.0 / 45).epsilon(1e-14));
  const double expected = (0.9 / 0.1) / (p / (1 - p));
  CHECK(report.bf_gamma[1].bf == doctest::Approx(expected).epsilon(1e-12));
  CHECK(report.bf_gamma[1].bf == doctest::Approx(306.0 / 11).epsilon(1e-12));
  CHECK(report.bf_gamma[1].freq == 0.9);

  // no mass at t = 2 -> BF 0; z mirrors gamma for the single risk
  CHECK(report.bf_gamma[0].bf == 0.0);
  CHECK(report.bf_z[0][1].bf ==
        doctest::Approx((0.9 / 0.1) / (report.prior.p_z1[0] /
                                       (1 - report.prior.p_z1[0])))
            .epsilon(1e-12));
}

TEST_CASE("frequency at the prior gives a unit Bayes factor") {
  const auto allowed = allowed_of_size(3);
  auto hyper = Hyperparameters::defaults(1, 0, 5);
  const auto marg = prior_marginals(hyper, allowed);
  // construct a frequency numerically equal to the prior marginal: 11/45
  const auto samples = samples_with_k0_fraction(45, 45 - 11, 1, 5, 3);
  const auto report = per_time_bayes_factors(samples, hyper, allowed);
  CHECK(report.bf_gamma[1].freq == doctest::Approx(marg.p_gamma1).epsilon(1e-15));
  CHECK(report.bf_gamma[1].bf == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("certain frequencies serialize as infinity sentinels") {
  const auto allowed = allowed_of_size(3);
  auto hyper = Hyperparameters::defaults(1, 0, 5);
  const auto samples = samples_with_k0_fraction(10, 0, 1, 5, 3);
  const auto report = per_time_bayes_factors(samples, hyper, allowed);
  CHECK(std::isinf(report.bf_gamma[1].bf));
  CHECK(report.bf_gamma[1].count == 10);

  std::ostringstream csv;
  write_bf_csv(csv, report);
  CHECK(csv.str().find("inf") != std::string::npos);
  const auto j = report_envelope(report);
  CHECK(j["per_time"][1]["gamma"]["bf"] == "inf");
}

TEST_CASE("equal-tailed interval follows the order-statistic rule") {
  std::vector<double> draws(1000);
  for (int i = 0; i < 1000; ++i) draws[i] = i + 1;
  // shuffle to prove order independence
  Rng rng(3);
  for (int i = 999; i > 0; --i)
    std::swap(draws[i], draws[rng.below(i + 1)]);
  const auto s = equal_tailed_summary(draws);
  CHECK(s.lo == 25.0);   // ceil(0.025 * 1000) = 25th order statistic
  CHECK(s.hi == 975.0);  // ceil(0.975 * 1000) = 975th
  CHECK(s.mean == doctest::Approx(500.5).epsilon(1e-12));

  const auto single = equal_tailed_summary({7.0});
  CHECK(single.lo == 7.0);
  CHECK(single.hi == 7.0);
}

TEST_CASE("summaries collapse for identical draws and respect inclusion") {
  auto s1 = blank_sample(1, 1, 3);
  s1.alpha = GridD(1, 4, -2.0);
  auto s2 = s1;
  std::vector<PosteriorSample> samples{s1, s2};
  const auto tables = summarize(samples, {0.0});
  CHECK(tables.alpha[0][1].lo == tables.alpha[0][1].hi);
  CHECK(tables.alpha[0][1].mean == -2.0);
  CHECK(tables.cumhaz[0][2].lo == tables.cumhaz[0][2].hi);

  // inclusion-conditional means
  auto a = blank_sample(1, 1, 3);
  a.inclusion(0, 0) = 1;
  a.beta(0, 0) = 2.0;
  auto b = blank_sample(1, 1, 3);
  std::vector<PosteriorSample> mix{a, b};
  const auto t2 = summarize(mix, {0.0});
  CHECK(t2.beta[0][0].inclusion_prob == 0.5);
  CHECK(t2.beta[0][0].unconditional.mean == 1.0);
  CHECK(t2.beta[0][0].conditional.mean == 2.0);
  CHECK(t2.beta[0][0].included_count == 1);

  CHECK_THROWS_AS(summarize(mix, {0.0, 1.0}), data_error);
  CHECK_THROWS_AS(summarize({}, {}), data_error);
}

TEST_CASE("summaries are invariant to sample order") {
  Rng rng(8);
  std::vector<PosteriorSample> samples;
  for (int i = 0; i < 50; ++i) {
    auto s = blank_sample(2, 0, 4);
    for (int r = 0; r < 2; ++r)
      for (int t = 1; t <= 4; ++t) s.alpha(r, t) = rng.normal(-3.0, 1.0);
    samples.push_back(std::move(s));
  }
  auto shuffled = samples;
  std::reverse(shuffled.begin(), shuffled.end());
  const auto a = summarize(samples, {});
  const auto b = summarize(shuffled, {});
  for (int r = 0; r < 2; ++r)
    for (int t = 0; t < 4; ++t) {
      CHECK(a.alpha[r][t].mean == doctest::Approx(b.alpha[r][t].mean).epsilon(1e-15));
      CHECK(a.alpha[r][t].lo == b.alpha[r][t].lo);
      CHECK(a.alpha[r][t].hi == b.alpha[r][t].hi);
    }
}
