#include <doctest.h>

#include <sstream>

#include "mvbd/data.hpp"
#include "mvbd/errors.hpp"

using namespace mvbd;

namespace {

Dataset from_string(const std::string& csv, int m,
                    std::optional<int> t_max = std::nullopt) {
  std::istringstream in(csv);
  return Dataset::parse_csv(in, m, t_max);
}

std::vector<int> counts_for(std::vector<int> event_times, int t_max) {
  std::vector<int> counts(t_max + 1, 0);
  for (int t : event_times) ++counts[t];
  return counts;
}

}  // namespace

TEST_CASE("parse_csv basic auto horizon") {
  const auto data = from_string("time,status\n3,1\n5,0\n", 1);
  CHECK(data.n() == 2);
  CHECK(data.t_max() == 5);
  CHECK(data.num_covariates() == 0);
  CHECK(data.obs(0).time == 3);
  CHECK(data.obs(1).status == 0);
}

TEST_CASE("parse_csv rejects bad rows") {
  CHECK_THROWS_WITH_AS(from_string("time,status\n0,1\n", 1),
                       doctest::Contains("time out of range"), data_error);
  CHECK_THROWS_AS(from_string("time,status\n2,3\n", 2), data_error);
  CHECK_THROWS_AS(from_string("time,status\n2,x\n", 1), data_error);
  CHECK_THROWS_AS(from_string("", 1), data_error);
  CHECK_THROWS_AS(from_string("time,status\n", 1), data_error);
  CHECK_THROWS_AS(from_string("time,status,age\n1,1,3\n", 1), data_error);
  CHECK_THROWS_AS(from_string("status,time\n1,1\n", 1), data_error);
  // censoring time beyond the declared horizon
  CHECK_THROWS_AS(from_string("time,status\n5,0\n", 1, 4), data_error);
  // event one past the horizon is the beyond-horizon record
  CHECK_NOTHROW(from_string("time,status\n5,1\n", 1, 4));
  CHECK_THROWS_AS(from_string("time,status\n6,1\n", 1, 4), data_error);
}

TEST_CASE("parse_csv covariates and CRLF") {
  const auto data = from_string("time,status,x1,x2\r\n2,1,0.5,-1\r\n1,0,2,3\r\n", 1);
  CHECK(data.num_covariates() == 2);
  CHECK(data.obs(0).covariates[1] == -1.0);
  CHECK(data.num_patterns() == 2);
}

TEST_CASE("covariate pattern indexing shares identical rows") {
  const auto data =
      from_string("time,status,x1\n1,1,2.0\n2,1,2.0\n3,1,1.0\n", 1);
  CHECK(data.num_patterns() == 2);
  CHECK(data.pattern_of(0) == data.pattern_of(1));
  CHECK(data.pattern_of(0) != data.pattern_of(2));
}

TEST_CASE("allowed set keeps interior event-bearing times") {
  const auto a = compute_allowed_set(counts_for({1, 2, 3, 4, 5}, 5), 5);
  CHECK(a.times == std::vector<int>{2, 3, 4});
}

TEST_CASE("allowed set removes gap with event-bearing neighbours") {
  const auto a = compute_allowed_set(counts_for({1, 2, 3, 5}, 6), 6);
  CHECK(a.times == std::vector<int>{2, 3, 5});
}

TEST_CASE("allowed set removes double event-free stretch") {
  const auto a = compute_allowed_set(counts_for({1, 4}, 4), 4);
  CHECK(a.times == std::vector<int>{2});
}

TEST_CASE("allowed set empty for tiny horizons") {
  CHECK(compute_allowed_set(counts_for({1}, 1), 1).times.empty());
  CHECK(compute_allowed_set(counts_for({1, 2}, 2), 2).times.empty());
}

TEST_CASE("allowed set ignores censored and beyond-horizon records") {
  // events at 1..4; censored records at 5 must not open up t=5
  const auto with_censored = from_string(
      "time,status\n1,1\n2,1\n3,1\n4,1\n5,0\n6,0\n", 1, 6);
  const auto base = from_string("time,status\n1,1\n2,1\n3,1\n4,1\n", 1, 6);
  CHECK(compute_allowed_set(with_censored).times ==
        compute_allowed_set(base).times);

  // beyond-horizon event records contribute to no event count
  const auto beyond = from_string("time,status\n1,1\n2,1\n3,1\n4,1\n7,1\n", 1, 6);
  CHECK(compute_allowed_set(beyond).times == compute_allowed_set(base).times);
}

TEST_CASE("allowed set depends only on the event-time multiset") {
  const auto direct = compute_allowed_set(counts_for({1, 2, 2, 5, 6}, 7), 7);
  const auto data = from_string(
      "time,status\n2,1\n1,1\n5,1\n2,1\n6,1\n3,0\n4,0\n", 1, 7);
  CHECK(compute_allowed_set(data).times == direct.times);
  CHECK(compute_allowed_set(data).times ==
        compute_allowed_set(data).times);  // idempotent
}

TEST_CASE("gap-with-neighbours exclusion blocks the spurious dip pair") {
  // Events at every t in 1..14 except 7: the gap rule removes t=7, so the
  // dip-and-recover artifact cannot be proposed there.
  std::vector<int> events;
  for (int t = 1; t <= 14; ++t)
    if (t != 7) events.push_back(t);
  const auto a = compute_allowed_set(counts_for(events, 14), 14);
  CHECK(!a.contains(7));
  std::vector<int> expected;
  for (int t = 2; t <= 13; ++t)
    if (t != 7) expected.push_back(t);
  CHECK(a.times == expected);
}
