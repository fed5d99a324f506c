#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bridgelab/cli.hpp"

using namespace bridgelab;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("bridgelab_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Every line has as many fields as the header.
bool rectangular_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.empty()) return false;
  const auto fields = std::count(line.begin(), line.end(), ',');
  int rows = 0;
  while (std::getline(in, line)) {
    if (std::count(line.begin(), line.end(), ',') != fields) return false;
    if (line.find(' ') != std::string::npos) return false;
    ++rows;
  }
  return rows > 0;
}

int run_quiet(const cli::Options& o, std::string* err_text = nullptr) {
  std::ostringstream out, err;
  const int code = cli::run(o, out, err);
  if (err_text) *err_text = err.str();
  return code;
}

}  // namespace

TEST_CASE("branch lists") {
  CHECK(cli::parse_branch_list("1,3,5-7") == std::vector<int>{1, 3, 5, 6, 7});
  CHECK(cli::parse_branch_list("4,2,2") == std::vector<int>{2, 4});
  CHECK_THROWS_AS(cli::parse_branch_list("0"), cli::UsageError);
  CHECK_THROWS_AS(cli::parse_branch_list("3-1"), cli::UsageError);
  CHECK_THROWS_AS(cli::parse_branch_list("a"), cli::UsageError);
  CHECK_THROWS_AS(cli::parse_branch_list(""), cli::UsageError);
}

TEST_CASE("spectrum writes a table and a manifest, reproducibly") {
  cli::Options o;
  o.command = "spectrum";
  o.out = scratch_dir("spectrum");
  CHECK(run_quiet(o) == cli::kPass);
  const std::string first = slurp(o.out / "spectrum.csv");
  CHECK(rectangular_csv(first));
  const std::string manifest = slurp(o.out / "manifest_spectrum.json");
  CHECK(manifest.find("\"spectrum.csv\"") != std::string::npos);
  CHECK(manifest.find("\"params_fingerprint\"") != std::string::npos);
  CHECK(run_quiet(o) == cli::kPass);
  CHECK(slurp(o.out / "spectrum.csv") == first);
}

TEST_CASE("flat-cable fixture checks the closed form") {
  cli::Options o;
  o.command = "spectrum";
  o.flat_cable = true;
  o.out = scratch_dir("flat");
  CHECK(run_quiet(o) == cli::kPass);
  CHECK(slurp(o.out / "spectrum.csv").find("closed_form_rel") != std::string::npos);
}

TEST_CASE("usage and configuration errors exit with 2") {
  cli::Options o;
  o.command = "spectrum";
  o.out = scratch_dir("errors");
  o.n = 4;
  std::string err;
  CHECK(run_quiet(o, &err) == cli::kUsage);
  CHECK(err.find("truncation too small") != std::string::npos);

  o.n = 0;
  fs::create_directories(o.out);
  std::ofstream(o.out / "bad.json") << R"({"H0": -5})";
  o.config_path = (o.out / "bad.json").string();
  CHECK(run_quiet(o, &err) == cli::kUsage);
  CHECK(err.find("H0") != std::string::npos);

  o.config_path = (o.out / "missing.json").string();
  CHECK(run_quiet(o) == cli::kUsage);

  o.config_path.clear();
  o.command = "stability";
  o.ks = {3};
  CHECK(run_quiet(o, &err) == cli::kUsage);
  CHECK(err.find("branch") != std::string::npos);

  o.command = "frobnicate";
  CHECK(run_quiet(o) == cli::kUsage);
}

TEST_CASE("branch cache: corrupted files are recomputed, foreign ones rejected") {
  cli::Options o;
  o.command = "branch";
  o.ks = {6};
  o.n = 6;
  o.out = scratch_dir("cache");
  fs::create_directories(o.out);
  std::ofstream(o.out / "branch_6.json") << "{ truncated";
  {
    cli::Session s(o);
    std::ostringstream log;
    s.set_log(log);
    const Branch b = s.branch(6);
    CHECK(b.modes.size() > 2);
    CHECK(log.str().find("recomputing") != std::string::npos);
    CHECK(s.manifest().warnings.size() == 1);
    const Branch again = s.branch(6);
    CHECK(branch_to_json(again) == branch_to_json(b));
    CHECK(s.manifest().warnings.size() == 1);
  }
  std::ofstream(o.out / "other.json") << R"({"H0": 2.0e7})";
  o.config_path = (o.out / "other.json").string();
  o.command = "stability";
  std::string err;
  CHECK(run_quiet(o, &err) == cli::kUsage);
  CHECK(err.find("different parameters") != std::string::npos);
}

TEST_CASE("stability outputs for a stored branch") {
  cli::Options o;
  o.command = "branch";
  o.ks = {6};
  o.n = 6;
  o.out = scratch_dir("stability");
  REQUIRE(run_quiet(o) == cli::kPass);
  CHECK(rectangular_csv(slurp(o.out / "branch_6.csv")));
  CHECK(rectangular_csv(slurp(o.out / "snapshot_6_low.csv")));
  CHECK(rectangular_csv(slurp(o.out / "components_6_ref.csv")));
  o.command = "stability";
  o.nu = 4;
  REQUIRE(run_quiet(o) == cli::kPass);
  for (const char* f : {"stability_6.csv", "er_vs_energy_6.csv", "er_grid_6.csv"}) {
    CHECK_MESSAGE(rectangular_csv(slurp(o.out / f)), f);
  }
  const std::string th = slurp(o.out / "threshold_6.json");
  CHECK(th.find("\"found\"") != std::string::npos);
  const std::string manifest = slurp(o.out / "manifest_stability.json");
  CHECK(manifest.find("threshold_6.json") != std::string::npos);
  CHECK(manifest.find("\"nu\": 4") != std::string::npos);
  o.nu = 7;
  CHECK(run_quiet(o) == cli::kUsage);
}
