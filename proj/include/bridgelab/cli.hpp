#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bridgelab/cable.hpp"
#include "bridgelab/floquet.hpp"
#include "bridgelab/galerkin.hpp"
#include "bridgelab/modes.hpp"
#include "bridgelab/params.hpp"

namespace bridgelab::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kPass = 0, kDeviation = 1, kUsage = 2 };

/// Raised for invalid invocations; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string command;      // spectrum | branch | stability | thresholds | report
  std::string config_path;  // empty: built-in defaults
  std::vector<int> ks;      // empty: 1..10
  int n = 0;                // 0: per-branch default truncation
  int nu = 0;               // 0: the branch truncation
  double tol = kDefaultTol;
  std::filesystem::path out = "out";
  bool flat_cable = false;
  std::filesystem::path branch_file;  // stability: explicit branch file
  double grid_unit_MJ = 1.0;          // scale of the expansion-rate grid energies
};

struct RunManifest {
  std::string command;
  std::string params_fingerprint;
  double tol = 0;
  int nu = 0;
  std::vector<std::pair<int, int>> truncations;  // (k, n)
  std::vector<std::string> outputs;
  std::vector<std::string> warnings;
  double wall_seconds = 0;
  std::string version = kVersion;

  std::string to_json() const;
};

struct SpectrumRow {
  int k = 0;
  double lambda = 0;
  double period = 0;
  double reference = 0;  // NaN when k > 10
  double deviation = 0;  // relative, NaN without reference
  double closed_form = 0;      // flat-cable fixture only
  double closed_form_rel = 0;  // |lambda - closed_form| / closed_form
};

struct StabilityScan {
  int k = 0;
  std::vector<StabilityPoint> points;
  Threshold threshold;
  std::vector<double> grid_energies_MJ;
  std::vector<std::optional<double>> grid_rates;
  std::vector<std::optional<PeriodicMode>> grid_modes;
};

/// Loaded configuration with lazily assembled Galerkin systems.
class Session {
 public:
  explicit Session(Options opts);

  const Options& options() const { return opts_; }
  const BridgeParams& params() const { return params_; }
  const CableProfile& profile() const { return *profile_; }
  const GalerkinSystem& system(int n);
  int truncation(int k) const;
  std::vector<int> branches() const;

  std::vector<SpectrumRow> spectrum(int k_max);

  /// Branch from the cache file when valid, recomputed otherwise.
  /// Corrupted or mismatching caches add a warning.
  Branch branch(int k, bool use_cache = true);
  StabilityScan stability(const Branch& branch);

  std::filesystem::path branch_path(int k) const;
  void write(const std::filesystem::path& rel, const std::string& content);
  void warn(const std::string& message);

  RunManifest& manifest() { return manifest_; }
  std::ostream& log() const { return *log_; }
  void set_log(std::ostream& os) { log_ = &os; }

 private:
  Options opts_;
  BridgeParams params_;
  std::unique_ptr<CableProfile> profile_;
  std::map<int, GalerkinSystem> systems_;
  RunManifest manifest_;
  std::ostream* log_;
};

/// Runs one command; returns the exit code. Human-readable progress goes
/// to `out`, warnings and errors to `err`.
int run(const Options& opts, std::ostream& out, std::ostream& err);

/// Parses "1,3,5-7" into {1, 3, 5, 6, 7}; throws UsageError.
std::vector<int> parse_branch_list(const std::string& text);

}  // namespace bridgelab::cli
