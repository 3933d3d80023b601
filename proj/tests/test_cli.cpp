#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string cli = MVBD_CLI_PATH;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("mvbd_cli_" + std::to_string(std::rand()) +
            std::to_string(std::chrono::steady_clock::now().time_since_epoch().count() % 100000));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
};

int run(const std::string& args) {
  const std::string cmd = cli + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

long line_count(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  long n = 0;
  while (std::getline(in, line)) ++n;
  return n;
}

}  // namespace

TEST_CASE("simulate presets write the documented row counts") {
  TempDir dir;
  CHECK(run("simulate --out " + dir.str() + " --preset appendix-b --seed 1") == 0);
  CHECK(line_count(dir.path / "dataset.csv") == 101);  // header + 100 rows
  const auto truth = json::parse(slurp(dir.path / "truth.json"));
  CHECK(truth["changepoints"].empty());

  TempDir dir2;
  CHECK(run("simulate --out " + dir2.str() + " --preset sim3 --censor 0 --seed 1") == 0);
  CHECK(line_count(dir2.path / "dataset.csv") == 301);
  const auto truth2 = json::parse(slurp(dir2.path / "truth.json"));
  CHECK(truth2["changepoints"].size() == 2);
}

TEST_CASE("missing output directory fails without partial files") {
  TempDir dir;
  const std::string missing = dir.str() + "/nope";
  CHECK(run("simulate --out " + missing + " --preset sim3 --seed 1") != 0);
  CHECK(!fs::exists(missing));
}

TEST_CASE("unknown flags and presets are usage errors") {
  TempDir dir;
  CHECK(run("simulate --out " + dir.str() + " --preset sim3 --bogus 1") == 2);
  CHECK(run("simulate --out " + dir.str() + " --preset wat") == 2);
  CHECK(run("frobnicate") == 2);
}

TEST_CASE("fit writes manifest before samples and echoes hyperparameters") {
  TempDir dir;
  REQUIRE(run("simulate --out " + dir.str() + " --preset sim3 --seed 3") == 0);
  const std::string data = (dir.path / "dataset.csv").string();
  REQUIRE(run("fit --out " + dir.str() + " --data " + data +
              " --m 3 --tmax 20 --seed 11 --iterations 400 --burnin 100") == 0);

  const auto manifest = json::parse(slurp(dir.path / "manifest.json"));
  CHECK(manifest["complete"] == true);
  const auto& chain = manifest["chains"][0];
  CHECK(chain["hyperparameters"]["mu_alpha"] == -9.0);
  CHECK(chain["hyperparameters"]["sigma2_alpha"] == 3.0);
  CHECK(chain["hyperparameters"]["pi_k"] == 0.5);
  CHECK(chain["recorded_samples"] == 300);
  CHECK(line_count(dir.path / "samples.csv") == 301);
}

TEST_CASE("same seed reproduces the sample file byte for byte") {
  TempDir dir;
  REQUIRE(run("simulate --out " + dir.str() + " --preset sim3 --seed 3") == 0);
  const std::string data = (dir.path / "dataset.csv").string();
  const std::string fit_args = "fit --data " + data +
                               " --m 3 --tmax 20 --seed 5 --iterations 300 "
                               "--burnin 50";

  TempDir run1, run2, run3;
  REQUIRE(run(fit_args + " --out " + run1.str()) == 0);
  REQUIRE(run(fit_args + " --out " + run2.str()) == 0);
  REQUIRE(run(fit_args + " --threads 2 --out " + run3.str()) == 0);
  const auto bytes1 = slurp(run1.path / "samples.csv");
  CHECK(bytes1 == slurp(run2.path / "samples.csv"));
  CHECK(bytes1 == slurp(run3.path / "samples.csv"));
  CHECK(!bytes1.empty());
}

TEST_CASE("config file supplies values and flags override it") {
  TempDir dir;
  REQUIRE(run("simulate --out " + dir.str() + " --preset sim3 --seed 3") == 0);
  const std::string data = (dir.path / "dataset.csv").string();
  {
    std::ofstream cfg(dir.path / "run.cfg");
    cfg << "iterations=300\nburnin=100\nseed=21\ntemperature=0.0\n";
  }
  REQUIRE(run("fit --out " + dir.str() + " --config " +
              (dir.path / "run.cfg").string() + " --data " + data +
              " --m 3 --tmax 20") == 0);
  auto manifest = json::parse(slurp(dir.path / "manifest.json"));
  CHECK(manifest["chains"][0]["config"]["iterations"] == 300);
  CHECK(manifest["chains"][0]["config"]["temperature"] == 0.0);

  REQUIRE(run("fit --out " + dir.str() + " --config " +
              (dir.path / "run.cfg").string() + " --data " + data +
              " --m 3 --tmax 20 --iterations 200") == 0);
  manifest = json::parse(slurp(dir.path / "manifest.json"));
  CHECK(manifest["chains"][0]["config"]["iterations"] == 200);
}

TEST_CASE("multiple chains derive seeds and merge the manifest") {
  TempDir dir;
  REQUIRE(run("simulate --out " + dir.str() + " --preset sim3 --seed 3") == 0);
  const std::string data = (dir.path / "dataset.csv").string();
  REQUIRE(run("fit --out " + dir.str() + " --data " + data +
              " --m 3 --tmax 20 --seed 9 --iterations 120 --burnin 20 "
              "--chains 2") == 0);
  const auto manifest = json::parse(slurp(dir.path / "manifest.json"));
  REQUIRE(manifest["chains"].size() == 2);
  CHECK(manifest["chains"][0]["config"]["seed"] != manifest["chains"][1]["config"]["seed"]);
  CHECK(fs::exists(dir.path / "samples_chain1.csv"));
  CHECK(fs::exists(dir.path / "samples_chain2.csv"));
}

TEST_CASE("bf and summarize round-trip through files") {
  TempDir dir;
  REQUIRE(run("simulate --out " + dir.str() + " --preset sim3 --seed 3") == 0);
  const std::string data = (dir.path / "dataset.csv").string();
  REQUIRE(run("fit --out " + dir.str() + " --data " + data +
              " --m 3 --tmax 20 --seed 5 --iterations 500 --burnin 100") == 0);

  CHECK(run("bf --out " + dir.str() + " --samples " +
            (dir.path / "samples.csv").string() + " --data " + data +
            " --m 3 --tmax 20") == 0);
  const auto bf = json::parse(slurp(dir.path / "bf.json"));
  CHECK(bf.contains("savage_dickey"));
  CHECK(bf["per_time"].size() > 0);

  CHECK(run("summarize --out " + dir.str() + " --samples " +
            (dir.path / "samples.csv").string()) == 0);
  CHECK(fs::exists(dir.path / "alpha_summary.csv"));
  CHECK(fs::exists(dir.path / "cumhaz.csv"));
  CHECK(line_count(dir.path / "alpha_summary.csv") == 61);  // header + 3*20
}

TEST_CASE("bf rejects empty or missing inputs with a data error") {
  TempDir dir;
  {
    std::ofstream empty(dir.path / "empty.csv");
  }
  REQUIRE(run("simulate --out " + dir.str() + " --preset sim3 --seed 3") == 0);
  const std::string data = (dir.path / "dataset.csv").string();
  CHECK(run("bf --out " + dir.str() + " --samples " +
            (dir.path / "empty.csv").string() + " --data " + data +
            " --m 3") == 3);
  CHECK(run("bf --out " + dir.str() + " --samples /does/not/exist.csv --data " +
            data + " --m 3") == 4);
  CHECK(run("fit --out " + dir.str() + " --data /does/not/exist.csv --m 3") == 4);
}

TEST_CASE("malformed dataset rows exit with the data code") {
  TempDir dir;
  {
    std::ofstream bad(dir.path / "bad.csv");
    bad << "time,status\n0,1\n";
  }
  CHECK(run("fit --out " + dir.str() + " --data " +
            (dir.path / "bad.csv").string() + " --m 1 --iterations 10") == 3);
}

TEST_CASE("prior-check passes honestly and fails when corrupted") {
  TempDir dir;
  // |allowed| = 0 shape: trivially passes
  CHECK(run("prior-check --out " + dir.str() +
            " --m 2 --tmax 2 --n 8 --steps 200 --seed 1") == 0);

  // real shape at moderate length
  CHECK(run("prior-check --out " + dir.str() +
            " --m 2 --tmax 8 --n 24 --steps 60000 --seed 2") == 0);
  const auto report = json::parse(slurp(dir.path / "prior_check.json"));
  CHECK(report["pass"] == true);
  CHECK(report["tv_k"].get<double>() <= 0.05);

  // negative control: biased acceptance ratio must fail
  CHECK(run("prior-check --out " + dir.str() +
            " --m 2 --tmax 8 --n 24 --steps 20000 --seed 2 "
            "--debug-logratio-bias 2.5") == 1);
}
