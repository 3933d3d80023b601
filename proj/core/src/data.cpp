#include "mvbd/data.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "mvbd/errors.hpp"

namespace mvbd {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

long parse_int_cell(const std::string& raw, const char* what, int row) {
  const std::string s = trim(raw);
  long v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw data_error("row " + std::to_string(row) + ": malformed " + what +
                     " cell '" + s + "'");
  return v;
}

double parse_double_cell(const std::string& raw, const char* what, int row) {
  const std::string s = trim(raw);
  if (s.empty())
    throw data_error("row " + std::to_string(row) + ": empty " + what + " cell");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size())
    throw data_error("row " + std::to_string(row) + ": malformed " + what +
                     " cell '" + s + "'");
  return v;
}

}  // namespace

Dataset::Dataset(std::vector<Observation> observations, int num_risks, int t_max)
    : obs_(std::move(observations)), num_risks_(num_risks), t_max_(t_max) {
  if (obs_.empty()) throw data_error("dataset must contain at least one observation");
  num_covariates_ = static_cast<int>(obs_.front().covariates.size());
  validate();
  index_patterns();
}

void Dataset::validate() const {
  if (num_risks_ < 1) throw data_error("number of risks must be >= 1");
  if (t_max_ < 1) throw data_error("t_max must be >= 1");
  for (int i = 0; i < n(); ++i) {
    const Observation& o = obs_[i];
    const std::string at = "observation " + std::to_string(i + 1) + ": ";
    if (static_cast<int>(o.covariates.size()) != num_covariates_)
      throw data_error(at + "inconsistent covariate dimension");
    if (o.status < 0 || o.status > num_risks_)
      throw data_error(at + "status " + std::to_string(o.status) +
                       " out of range for m=" + std::to_string(num_risks_));
    if (o.time < 1) throw data_error(at + "time out of range");
    if (o.status == 0 && o.time > t_max_)
      throw data_error(at + "time out of range (censoring time must be <= t_max)");
    if (o.status >= 1 && o.time > t_max_ + 1)
      throw data_error(at + "time out of range (event time must be <= t_max+1)");
  }
}

void Dataset::index_patterns() {
  pattern_of_.resize(obs_.size());
  std::map<std::vector<double>, int> seen;
  for (std::size_t i = 0; i < obs_.size(); ++i) {
    auto [it, inserted] =
        seen.emplace(obs_[i].covariates, static_cast<int>(patterns_.size()));
    if (inserted) patterns_.push_back(obs_[i].covariates);
    pattern_of_[i] = it->second;
  }
}

int Dataset::periods(int i) const { return std::min(obs_[i].time, t_max_); }

Dataset Dataset::parse_csv(std::istream& in, int num_risks,
                           std::optional<int> t_max) {
  std::string line;
  if (!std::getline(in, line)) throw data_error("empty file");
  auto header = split_csv_line(line);
  for (auto& h : header) h = trim(h);
  if (header.size() < 2 || header[0] != "time" || header[1] != "status")
    throw data_error("header must start with 'time,status'");
  const int p = static_cast<int>(header.size()) - 2;
  for (int j = 0; j < p; ++j) {
    if (header[2 + j] != "x" + std::to_string(j + 1))
      throw data_error("unknown column '" + header[2 + j] +
                       "' (expected x" + std::to_string(j + 1) + ")");
  }

  std::vector<Observation> obs;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw data_error("row " + std::to_string(row) + ": expected " +
                       std::to_string(header.size()) + " cells, got " +
                       std::to_string(cells.size()));
    Observation o;
    o.time = static_cast<int>(parse_int_cell(cells[0], "time", row));
    o.status = static_cast<int>(parse_int_cell(cells[1], "status", row));
    o.covariates.reserve(p);
    for (int j = 0; j < p; ++j)
      o.covariates.push_back(parse_double_cell(cells[2 + j], "covariate", row));
    if (o.time < 1)
      throw data_error("row " + std::to_string(row) + ": time out of range");
    if (o.status < 0 || o.status > num_risks)
      throw data_error("row " + std::to_string(row) + ": status " +
                       std::to_string(o.status) + " exceeds m=" +
                       std::to_string(num_risks));
    obs.push_back(std::move(o));
  }
  if (obs.empty()) throw data_error("empty file (no data rows)");

  int horizon;
  if (t_max.has_value()) {
    horizon = *t_max;
  } else {
    horizon = 0;
    for (const auto& o : obs) horizon = std::max(horizon, o.time);
  }
  return Dataset(std::move(obs), num_risks, horizon);
}

Dataset Dataset::parse_csv_file(const std::string& path, int num_risks,
                                std::optional<int> t_max) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path + "'");
  return parse_csv(in, num_risks, t_max);
}

void Dataset::write_csv(std::ostream& out) const {
  out << "time,status";
  for (int j = 1; j <= num_covariates_; ++j) out << ",x" << j;
  out << "\n";
  char buf[64];
  for (const auto& o : obs_) {
    out << o.time << ',' << o.status;
    for (double x : o.covariates) {
      std::snprintf(buf, sizeof(buf), "%.17g", x);
      out << ',' << buf;
    }
    out << "\n";
  }
}

AllowedSet compute_allowed_set(const std::vector<int>& event_counts, int t_max) {
  AllowedSet a;
  a.event_counts = event_counts;
  a.member.assign(t_max + 1, 0);
  const auto events = [&](int t) { return event_counts[t] > 0; };
  // Boundaries t=1 and t=t_max are never admissible. A time t is excluded
  // when t and t-1 are both event-free (the jump cannot be located), or when
  // t is event-free between two event-bearing neighbours (a gap that would
  // otherwise invite a spurious dip).
  for (int t = 2; t <= t_max - 1; ++t) {
    if (!events(t) && !events(t - 1)) continue;
    if (!events(t) && events(t - 1) && events(t + 1)) continue;
    a.member[t] = 1;
    a.times.push_back(t);
  }
  return a;
}

AllowedSet compute_allowed_set(const Dataset& data) {
  std::vector<int> counts(data.t_max() + 1, 0);
  for (const auto& o : data.observations())
    if (o.status >= 1 && o.time <= data.t_max()) ++counts[o.time];
  return compute_allowed_set(counts, data.t_max());
}

}  // namespace mvbd
