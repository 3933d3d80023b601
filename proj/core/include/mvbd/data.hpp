#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mvbd {

// One individual: observed period, censoring/cause status, covariate row.
// status 0 means censored at `time`; status r in {1..m} means an event of
// cause r. time == t_max + 1 records an individual known to be event-free
// through t_max (the event itself falls beyond the horizon).
struct Observation {
  int time = 0;
  int status = 0;
  std::vector<double> covariates;
};

class Dataset {
 public:
  Dataset(std::vector<Observation> observations, int num_risks, int t_max);

  // Reads the `time,status,x1,...,xp` CSV schema. Unknown or reordered
  // columns are an error. When t_max is not given it is set to max_i t_i.
  static Dataset parse_csv(std::istream& in, int num_risks,
                           std::optional<int> t_max = std::nullopt);
  static Dataset parse_csv_file(const std::string& path, int num_risks,
                                std::optional<int> t_max = std::nullopt);

  int n() const { return static_cast<int>(obs_.size()); }
  int num_risks() const { return num_risks_; }
  int num_covariates() const { return num_covariates_; }
  int t_max() const { return t_max_; }
  const Observation& obs(int i) const { return obs_[i]; }
  const std::vector<Observation>& observations() const { return obs_; }

  // Number of augmentation/likelihood periods for individual i:
  // min(t_i, t_max). Only differs from t_i for beyond-horizon records.
  int periods(int i) const;

  // Individuals with identical covariate rows share a pattern id, so hazard
  // tables are computed once per pattern. Values must still be accumulated in
  // the per-individual order to stay bit-identical with the naive evaluation.
  int pattern_of(int i) const { return pattern_of_[i]; }
  int num_patterns() const { return static_cast<int>(patterns_.size()); }
  const std::vector<double>& pattern(int k) const { return patterns_[k]; }

  void write_csv(std::ostream& out) const;

 private:
  Dataset() = default;
  void index_patterns();
  void validate() const;

  std::vector<Observation> obs_;
  int num_risks_ = 0;
  int num_covariates_ = 0;
  int t_max_ = 0;
  std::vector<int> pattern_of_;
  std::vector<std::vector<double>> patterns_;
};

// Admissible change-point locations: the subset of {2,...,t_max-1} that
// survives the event-gap exclusion rules. event_counts[t] counts uncensored
// events recorded at t <= t_max (beyond-horizon records never count).
struct AllowedSet {
  std::vector<int> times;        // sorted
  std::vector<int> event_counts; // index 1..t_max, slot 0 unused
  std::vector<char> member;      // index 1..t_max

  int size() const { return static_cast<int>(times.size()); }
  bool contains(int t) const {
    return t >= 0 && t < static_cast<int>(member.size()) && member[t];
  }
};

AllowedSet compute_allowed_set(const Dataset& data);

// Same rules applied to a raw event-count vector (index 1..t_max); the
// dataset overload delegates here.
AllowedSet compute_allowed_set(const std::vector<int>& event_counts, int t_max);

}  // namespace mvbd
