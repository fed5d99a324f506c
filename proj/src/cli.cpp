#include "bridgelab/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "bridgelab/reference.hpp"

namespace bridgelab::cli {

namespace fs = std::filesystem;
namespace ref = reference;

namespace {

constexpr int kSnapshotPoints = 513;
constexpr int kComponentSamples = 256;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string num(double v, int digits = 10) {
  if (!std::isfinite(v)) return "nan";
  std::ostringstream ss;
  ss << std::setprecision(digits) << v;
  return ss.str();
}

double rel_dev(double value, double reference) { return (value - reference) / reference; }

const char* verdict(bool ok) { return ok ? "pass" : "fail"; }

/// Mode whose reported period is closest to the tabulated threshold period.
const PeriodicMode& nearest_reference_mode(const Branch& b) {
  const double target = ref::kThresholds[b.k - 1].period / ref::windings(b.k);
  return *std::min_element(b.modes.begin(), b.modes.end(), [&](const auto& x, const auto& y) {
    return std::abs(x.T - target) < std::abs(y.T - target);
  });
}

std::string branch_table_csv(const Branch& b) {
  std::ostringstream os;
  os << "T,T_reported,energy_MJ,delta_m,residual\n";
  for (const auto& m : b.modes) {
    os << num(m.T, 12) << ',' << num(m.T * b.windings, 12) << ',' << num(m.energy * 1e-6, 12)
       << ',' << num(m.delta, 12) << ',' << num(m.residual, 4) << '\n';
  }
  return os.str();
}

std::string threshold_json(const Threshold& th, int windings) {
  nlohmann::ordered_json j;
  j["k"] = th.k;
  j["found"] = th.found;
  j["message"] = th.message;
  if (th.found) {
    j["energy_MJ"] = th.energy * 1e-6;
    j["T"] = th.T;
    j["T_reported"] = th.T * windings;
    j["delta_m"] = th.delta;
    j["bracket"] = {{{"T", th.below.T}, {"energy_MJ", th.below.energy * 1e-6}, {"ER", th.er_below}},
                    {{"T", th.above.T}, {"energy_MJ", th.above.energy * 1e-6}, {"ER", th.er_above}}};
  }
  return j.dump(2) + "\n";
}

struct ThresholdCheck {
  bool evaluated = false;
  bool energy_ok = false, period_ok = false, delta_ok = false;
  double dev_energy = NAN, dev_period = NAN, dev_delta = NAN;
  bool ok() const { return evaluated && energy_ok && period_ok && delta_ok; }
};

ThresholdCheck check_threshold(const Threshold& th, int windings) {
  ThresholdCheck c;
  if (!th.found || th.k < 1 || th.k > ref::kBranches) return c;
  const auto& row = ref::kThresholds[th.k - 1];
  c.evaluated = true;
  c.dev_energy = rel_dev(th.energy * 1e-6, row.energy_MJ);
  c.dev_period = rel_dev(th.T * windings, row.period);
  c.dev_delta = rel_dev(th.delta, row.delta);
  c.energy_ok = std::abs(c.dev_energy) <= ref::kThresholdEnergyTol;
  c.period_ok = std::abs(c.dev_period) <= ref::kThresholdPeriodTol;
  c.delta_ok = std::abs(c.dev_delta) <= ref::kThresholdDeltaTol;
  return c;
}

// ---------------------------------------------------------------------------
// commands

int cmd_spectrum(Session& s, std::ostream& out) {
  const auto& ks = s.branches();
  const int k_max = *std::max_element(ks.begin(), ks.end());
  const auto rows = s.spectrum(k_max);
  const bool flat = s.options().flat_cable;

  std::ostringstream csv;
  csv << "k,lambda,period,period_reported,reference,deviation";
  if (flat) csv << ",closed_form,closed_form_rel";
  csv << '\n';
  bool ok = true;
  out << (flat ? "  k      lambda (1/s^2)   period (s)   closed form      rel. error\n"
               : "  k      lambda (1/s^2)   period (s)   reported   reference  deviation\n");
  for (const auto& r : rows) {
    const double reported = r.period * ref::windings(r.k);
    csv << r.k << ',' << num(r.lambda, 15) << ',' << num(r.period, 12) << ',' << num(reported, 12)
        << ',' << num(r.reference, 6) << ',' << num(r.deviation, 6);
    if (flat) {
      csv << ',' << num(r.closed_form, 15) << ',' << num(r.closed_form_rel, 4);
      ok = ok && r.closed_form_rel <= 1e-10;
      out << std::setw(3) << r.k << "  " << std::setw(16) << num(r.lambda, 10) << "  "
          << std::setw(11) << num(r.period, 6) << "  " << std::setw(16) << num(r.closed_form, 10)
          << "  " << num(r.closed_form_rel, 3) << '\n';
    } else {
      if (std::isfinite(r.reference)) ok = ok && std::abs(r.deviation) <= ref::kPeriodTol;
      out << std::setw(3) << r.k << "  " << std::setw(16) << num(r.lambda, 10) << "  "
          << std::setw(11) << num(r.period, 6) << "  " << std::setw(9) << num(reported, 5)
          << "  " << std::setw(9) << num(r.reference, 4) << "  "
          << (std::isfinite(r.deviation) ? num(100 * r.deviation, 3) + "%" : "-") << '\n';
    }
    csv << '\n';
  }
  s.write("spectrum.csv", csv.str());
  return ok ? kPass : kDeviation;
}

int cmd_branch(Session& s, std::ostream& out) {
  bool ok = true;
  for (int k : s.branches()) {
    const Branch b = s.branch(k, false);
    const std::string stem = "branch_" + std::to_string(k);
    s.write(stem + ".csv", branch_table_csv(b));
    out << "branch " << k << " (n=" << b.n << "): " << b.modes.size() << " modes, T in ["
        << num(b.modes.empty() ? 0 : b.modes.front().T, 6) << ", "
        << num(b.modes.empty() ? 0 : b.modes.back().T, 6) << "] s, stop: " << b.stop_reason;
    if (!b.gaps.empty()) out << ", " << b.gaps.size() << " resonance gap(s)";
    out << '\n';
    if (b.modes.size() < 2) {
      ok = false;
      continue;
    }
    const GalerkinSystem& sys = s.system(b.n);
    std::ostringstream low, near, comps;
    write_snapshot_csv(sys, b.modes.front(), kSnapshotPoints, low);
    s.write("snapshot_" + std::to_string(k) + "_low.csv", low.str());
    if (k <= ref::kBranches) {
      const PeriodicMode& m = nearest_reference_mode(b);
      write_snapshot_csv(sys, m, kSnapshotPoints, near);
      s.write("snapshot_" + std::to_string(k) + "_ref.csv", near.str());
      write_components_csv(sys, m, kComponentSamples, comps, s.options().tol);
      s.write("components_" + std::to_string(k) + "_ref.csv", comps.str());
    }
  }
  return ok ? kPass : kDeviation;
}

void write_stability_outputs(Session& s, const Branch& b, const StabilityScan& scan) {
  const std::string k = std::to_string(b.k);
  std::ostringstream table, series, grid;
  std::size_t width = 0;
  for (const auto& p : scan.points) width = std::max(width, p.moduli.size());
  table << "T,T_reported,energy_MJ,delta_m,ER,determinant,reciprocal_error";
  for (std::size_t j = 1; j <= width; ++j) table << ",modulus_" << j;
  table << '\n';
  series << "energy_MJ,ER\n";
  for (const auto& p : scan.points) {
    table << num(p.T, 12) << ',' << num(p.T * b.windings, 12) << ',' << num(p.energy * 1e-6, 12)
          << ',' << num(p.delta, 10) << ',' << num(p.expansion_rate, 12) << ','
          << num(p.determinant, 12) << ',' << num(p.reciprocal_error, 4);
    for (std::size_t j = 0; j < width; ++j) {
      table << ',' << (j < p.moduli.size() ? num(p.moduli[j], 12) : "");
    }
    table << '\n';
    series << num(p.energy * 1e-6, 12) << ',' << num(p.expansion_rate, 12) << '\n';
  }
  grid << "energy_MJ,ER,T,reference_ER\n";
  for (std::size_t i = 0; i < scan.grid_energies_MJ.size(); ++i) {
    const double reference =
        b.k <= ref::kBranches && s.options().grid_unit_MJ == 1.0 ? ref::kExpansionRates[b.k - 1][i]
                                                                 : NAN;
    grid << num(scan.grid_energies_MJ[i], 8) << ','
         << (scan.grid_rates[i] ? num(*scan.grid_rates[i], 10) : "nan") << ','
         << (scan.grid_modes[i] ? num(scan.grid_modes[i]->T * b.windings, 10) : "nan") << ','
         << num(reference, 8) << '\n';
  }
  s.write("stability_" + k + ".csv", table.str());
  s.write("er_vs_energy_" + k + ".csv", series.str());
  s.write("er_grid_" + k + ".csv", grid.str());
  s.write("threshold_" + k + ".json", threshold_json(scan.threshold, b.windings));
}

void print_threshold(std::ostream& out, const Branch& b, const Threshold& th) {
  out << "branch " << b.k << ": ";
  if (!th.found) {
    out << "no threshold (" << th.message << ")\n";
    return;
  }
  out << "threshold " << num(th.energy * 1e-6, 5) << " MJ, T = " << num(th.T * b.windings, 5)
      << " s, delta = " << num(th.delta, 4) << " m\n";
}

int cmd_stability(Session& s, std::ostream& out) {
  const auto ks = s.branches();
  if (!s.options().branch_file.empty() && ks.size() != 1) {
    throw UsageError("--branch-file needs exactly one branch in --k");
  }
  for (int k : ks) {
    const fs::path path = s.options().branch_file.empty() ? s.branch_path(k) : s.options().branch_file;
    if (!fs::exists(path)) {
      throw UsageError("no branch file " + path.string() + "; run the branch command first");
    }
    Branch b;
    try {
      b = branch_from_json(read_file(path), s.manifest().params_fingerprint);
    } catch (const UsageError&) {
      throw;
    } catch (const std::exception& e) {
      throw UsageError(path.string() + ": " + e.what());
    }
    if (b.modes.size() < 2) {
      throw UsageError(path.string() + ": branch has fewer than two modes");
    }
    const StabilityScan scan = s.stability(b);
    write_stability_outputs(s, b, scan);
    print_threshold(out, b, scan.threshold);
  }
  return kPass;
}

int cmd_thresholds(Session& s, std::ostream& out) {
  std::ostringstream csv;
  csv << "k,n,energy_MJ,T_reported,delta_m,ref_energy_MJ,ref_T,ref_delta_m,dev_energy,dev_T,"
         "dev_delta,status\n";
  bool ok = true;
  for (int k : s.branches()) {
    const Branch b = s.branch(k);
    if (b.modes.size() < 2) {
      csv << k << ',' << b.n << ",nan,nan,nan,,,,,,,fail\n";
      ok = false;
      continue;
    }
    const StabilityScan scan = s.stability(b);
    write_stability_outputs(s, b, scan);
    print_threshold(out, b, scan.threshold);
    const Threshold& th = scan.threshold;
    const ThresholdCheck c = check_threshold(th, b.windings);
    csv << k << ',' << b.n << ',' << num(th.found ? th.energy * 1e-6 : NAN, 8) << ','
        << num(th.found ? th.T * b.windings : NAN, 8) << ',' << num(th.found ? th.delta : NAN, 8);
    if (k <= ref::kBranches) {
      const auto& row = ref::kThresholds[k - 1];
      csv << ',' << row.energy_MJ << ',' << row.period << ',' << row.delta << ','
          << num(c.dev_energy, 4) << ',' << num(c.dev_period, 4) << ',' << num(c.dev_delta, 4) << ','
          << verdict(c.ok()) << '\n';
      ok = ok && c.ok();
    } else {
      csv << ",,,,,,," << (th.found ? "info" : "fail") << '\n';
    }
  }
  s.write("thresholds.csv", csv.str());
  return ok ? kPass : kDeviation;
}

int cmd_report(Session& s, std::ostream& out) {
  std::ostringstream csv, txt;
  csv << "section,k,quantity,computed,reference,deviation,tolerance,status\n";
  bool ok = true;
  auto row = [&](const std::string& section, int k, const std::string& q, double computed,
                 double reference, double deviation, double tolerance, const std::string& status) {
    csv << section << ',' << k << ',' << q << ',' << num(computed, 8) << ',' << num(reference, 8)
        << ',' << num(deviation, 4) << ',' << num(tolerance, 4) << ',' << status << '\n';
    if (status == "fail") ok = false;
  };

  const auto spectrum = s.spectrum(ref::kBranches);
  txt << "Small-energy periods (reported = fundamental x windings)\n";
  for (const auto& r : spectrum) {
    const double reported = r.period * ref::windings(r.k);
    const bool pass = std::abs(r.deviation) <= ref::kPeriodTol;
    row("period", r.k, "T_s", reported, r.reference, r.deviation, ref::kPeriodTol, verdict(pass));
    txt << "  k=" << std::setw(2) << r.k << "  " << std::setw(8) << num(reported, 5) << " s  ref "
        << std::setw(6) << num(r.reference, 4) << "  " << verdict(pass) << '\n';
  }

  const auto requested = s.branches();
  txt << "\nThresholds of instability\n";
  std::vector<std::optional<StabilityScan>> scans(ref::kBranches + 1);
  std::vector<int> windings(ref::kBranches + 1, 1);
  for (int k = 1; k <= ref::kBranches; ++k) {
    const auto& refrow = ref::kThresholds[k - 1];
    if (std::find(requested.begin(), requested.end(), k) == requested.end()) {
      row("threshold", k, "energy_MJ", NAN, refrow.energy_MJ, NAN, ref::kThresholdEnergyTol, "skipped");
      row("threshold", k, "T_s", NAN, refrow.period, NAN, ref::kThresholdPeriodTol, "skipped");
      row("threshold", k, "delta_m", NAN, refrow.delta, NAN, ref::kThresholdDeltaTol, "skipped");
      txt << "  k=" << std::setw(2) << k << "  skipped\n";
      continue;
    }
    const Branch b = s.branch(k);
    windings[k] = b.windings;
    if (b.modes.size() < 2) {
      row("threshold", k, "energy_MJ", NAN, refrow.energy_MJ, NAN, ref::kThresholdEnergyTol, "fail");
      txt << "  k=" << std::setw(2) << k << "  branch failed: " << b.stop_reason << '\n';
      continue;
    }
    scans[k] = s.stability(b);
    write_stability_outputs(s, b, *scans[k]);
    const Threshold& th = scans[k]->threshold;
    const ThresholdCheck c = check_threshold(th, b.windings);
    row("threshold", k, "energy_MJ", th.found ? th.energy * 1e-6 : NAN, refrow.energy_MJ,
        c.dev_energy, ref::kThresholdEnergyTol, verdict(c.evaluated && c.energy_ok));
    row("threshold", k, "T_s", th.found ? th.T * b.windings : NAN, refrow.period, c.dev_period,
        ref::kThresholdPeriodTol, verdict(c.evaluated && c.period_ok));
    row("threshold", k, "delta_m", th.found ? th.delta : NAN, refrow.delta, c.dev_delta,
        ref::kThresholdDeltaTol, verdict(c.evaluated && c.delta_ok));
    txt << "  k=" << std::setw(2) << k << "  ";
    if (th.found) {
      txt << std::setw(7) << num(th.energy * 1e-6, 4) << " MJ (ref " << refrow.energy_MJ << ")  "
          << std::setw(6) << num(th.T * b.windings, 4) << " s (ref " << refrow.period << ")  "
          << std::setw(5) << num(th.delta, 3) << " m (ref " << refrow.delta << ")  "
          << verdict(c.ok()) << '\n';
    } else {
      txt << th.message << "  fail\n";
    }
  }

  txt << "\nExpansion rates on the energy grid (unit " << s.options().grid_unit_MJ << " MJ)\n";
  for (int k = 1; k <= ref::kBranches; ++k) {
    if (!scans[k]) continue;
    txt << "  k=" << std::setw(2) << k << ' ';
    for (std::size_t i = 0; i < ref::kGridEnergies.size(); ++i) {
      const auto& rate = scans[k]->grid_rates[i];
      const double reference = ref::kExpansionRates[k - 1][i];
      const double computed = rate ? *rate : NAN;
      std::string status = "info";
      double tolerance = NAN, deviation = NAN;
      for (const auto& spot : ref::kRateSpots) {
        if (spot.k == k && spot.energy_MJ == ref::kGridEnergies[i] && s.options().grid_unit_MJ == 1.0) {
          tolerance = ref::kRateTol;
          deviation = (computed - spot.rate) / (spot.rate - 1.0);
          status = verdict(std::abs(deviation) <= tolerance);
        }
      }
      row("rate", k, "ER@" + num(scans[k]->grid_energies_MJ[i], 6) + "MJ", computed,
          s.options().grid_unit_MJ == 1.0 ? reference : NAN, deviation, tolerance, status);
      txt << ' ' << std::setw(8) << (rate ? num(*rate, 5) : "--");
    }
    txt << '\n';
  }

  s.write("summary.csv", csv.str());
  s.write("summary.txt", txt.str());
  out << txt.str();
  return ok ? kPass : kDeviation;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["params_fingerprint"] = params_fingerprint;
  j["tol"] = tol;
  j["nu"] = nu;
  j["truncations"] = nlohmann::ordered_json::array();
  for (const auto& [k, n] : truncations) j["truncations"].push_back({{"k", k}, {"n", n}});
  j["outputs"] = outputs;
  j["warnings"] = warnings;
  j["wall_seconds"] = wall_seconds;
  j["version"] = version;
  return j.dump(2) + "\n";
}

Session::Session(Options opts) : opts_(std::move(opts)), log_(&std::cerr) {
  params_ = opts_.config_path.empty() ? load_config("") : load_config(read_file(opts_.config_path));
  if (!(opts_.tol >= 1e-13 && opts_.tol <= 1e-6)) throw UsageError("--tol must lie in [1e-13, 1e-6]");
  if (opts_.n < 0 || opts_.nu < 0) throw UsageError("--n and --nu must be positive");
  if (!(opts_.grid_unit_MJ > 0)) throw UsageError("grid unit must be positive");
  for (int k : branches()) {
    if (k < 1) throw UsageError("branch indices start at 1");
  }
  profile_ = std::make_unique<CableProfile>(opts_.flat_cable ? flat_cable_profile(params_)
                                                             : solve_cable_shape(params_));
  manifest_.command = opts_.command;
  manifest_.params_fingerprint = fingerprint(params_) + (opts_.flat_cable ? "-flat" : "");
  manifest_.tol = opts_.tol;
  manifest_.nu = opts_.nu;
}

const GalerkinSystem& Session::system(int n) {
  auto it = systems_.find(n);
  if (it == systems_.end()) it = systems_.emplace(n, assemble(params_, *profile_, n)).first;
  return it->second;
}

int Session::truncation(int k) const { return opts_.n > 0 ? opts_.n : ref::default_truncation(k); }

std::vector<int> Session::branches() const {
  if (!opts_.ks.empty()) return opts_.ks;
  std::vector<int> all(ref::kBranches);
  for (int k = 1; k <= ref::kBranches; ++k) all[k - 1] = k;
  return all;
}

std::vector<SpectrumRow> Session::spectrum(int k_max) {
  const int n = opts_.n > 0 ? opts_.n : 16;
  if (k_max > n) throw UsageError("truncation too small: k_max=" + std::to_string(k_max) +
                                  " exceeds n=" + std::to_string(n));
  const GalerkinSystem& sys = system(n);
  const Spectrum sp = linear_spectrum(sys, n);
  std::vector<SpectrumRow> rows;
  for (int k = 1; k <= k_max; ++k) {
    SpectrumRow r;
    r.k = k;
    const int c = sp.index_of_dominant(k);
    r.lambda = sp.eigenvalues[c];
    r.period = sp.period(c);
    r.reference = k <= ref::kBranches ? ref::kLinearPeriods[k - 1] : NAN;
    r.deviation = rel_dev(r.period * ref::windings(k), r.reference);
    if (opts_.flat_cable) {
      r.closed_form = flat_cable_eigenvalue(params_, k);
      r.closed_form_rel = std::abs(r.lambda - r.closed_form) / r.closed_form;
    }
    rows.push_back(r);
  }
  manifest_.truncations.emplace_back(0, n);
  return rows;
}

fs::path Session::branch_path(int k) const {
  return opts_.out / ("branch_" + std::to_string(k) + ".json");
}

Branch Session::branch(int k, bool use_cache) {
  const int n = truncation(k);
  const fs::path path = branch_path(k);
  manifest_.truncations.emplace_back(k, n);
  if (use_cache && fs::exists(path)) {
    try {
      Branch b = branch_from_json(read_file(path), manifest_.params_fingerprint);
      if (b.n != n) throw std::runtime_error("truncation " + std::to_string(b.n) + " != " + std::to_string(n));
      if (b.k != k) throw std::runtime_error("branch index mismatch");
      if (b.modes.size() < 2) throw std::runtime_error("fewer than two modes");
      return b;
    } catch (const std::exception& e) {
      warn("branch cache " + path.string() + " unusable (" + e.what() + "); recomputing");
    }
  }
  const GalerkinSystem& sys = system(n);
  ContinuationOptions co;
  co.energy_stop = ref::kBranchEnergyStop;
  co.newton.tol = opts_.tol;
  const double T_cap = 10.0 * linear_spectrum(sys, n).period(linear_spectrum(sys, n).index_of_dominant(k));
  Branch b = continue_branch(sys, k, T_cap, co);
  b.windings = k <= ref::kBranches ? ref::windings(k) : 1;
  b.params_fingerprint = manifest_.params_fingerprint;
  write(path.lexically_relative(opts_.out), branch_to_json(b));
  return b;
}

StabilityScan Session::stability(const Branch& b) {
  const GalerkinSystem& sys = system(b.n);
  const int nu = opts_.nu > 0 ? opts_.nu : b.n;
  if (nu > b.n) throw UsageError("--nu exceeds the branch truncation");
  StabilityScan scan;
  scan.k = b.k;
  std::vector<double> rates;
  for (const auto& m : b.modes) {
    scan.points.push_back(evaluate_stability(sys, m, nu, opts_.tol));
    rates.push_back(scan.points.back().expansion_rate);
  }
  scan.threshold = find_threshold(sys, b, nu, kInstabilityTol, rates);
  for (double e : ref::kGridEnergies) {
    const double energy = e * opts_.grid_unit_MJ;
    scan.grid_energies_MJ.push_back(energy);
    auto m = mode_at_energy(sys, b, energy * 1e6);
    scan.grid_modes.push_back(m);
    scan.grid_rates.push_back(m ? std::optional<double>(evaluate_stability(sys, *m, nu, opts_.tol).expansion_rate)
                                : std::nullopt);
  }
  return scan;
}

void Session::write(const fs::path& rel, const std::string& content) {
  const fs::path path = opts_.out / rel;
  fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
  const std::string name = rel.generic_string();
  if (std::find(manifest_.outputs.begin(), manifest_.outputs.end(), name) == manifest_.outputs.end()) {
    manifest_.outputs.push_back(name);
  }
}

void Session::warn(const std::string& message) {
  manifest_.warnings.push_back(message);
  *log_ << "warning: " << message << '\n';
}

std::vector<int> parse_branch_list(const std::string& text) {
  std::vector<int> ks;
  std::stringstream ss(text);
  std::string item;
  auto to_int = [&](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty() || v < 1) throw UsageError("bad branch list: '" + text + "'");
    return v;
  };
  while (std::getline(ss, item, ',')) {
    const auto dash = item.find('-');
    if (dash == std::string::npos) {
      ks.push_back(to_int(item));
    } else {
      const int a = to_int(item.substr(0, dash)), b = to_int(item.substr(dash + 1));
      if (b < a) throw UsageError("bad branch range: '" + item + "'");
      for (int k = a; k <= b; ++k) ks.push_back(k);
    }
  }
  if (ks.empty()) throw UsageError("empty branch list");
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  return ks;
}

int run(const Options& opts, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  try {
    Session s(opts);
    s.set_log(err);
    int code = kUsage;
    if (opts.command == "spectrum") {
      code = cmd_spectrum(s, out);
    } else if (opts.command == "branch") {
      code = cmd_branch(s, out);
    } else if (opts.command == "stability") {
      code = cmd_stability(s, out);
    } else if (opts.command == "thresholds") {
      code = cmd_thresholds(s, out);
    } else if (opts.command == "report") {
      code = cmd_report(s, out);
    } else {
      throw UsageError("unknown command '" + opts.command + "'");
    }
    s.manifest().wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const std::string manifest_name = "manifest_" + opts.command + ".json";
    s.manifest().outputs.push_back(manifest_name);
    s.write(manifest_name, s.manifest().to_json());
    return code;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ConfigError& e) {
    err << "config error" << (e.key().empty() ? "" : " (" + e.key() + ")") << ": " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDeviation;
  }
}

}  // namespace bridgelab::cli
