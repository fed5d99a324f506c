#include "bridgelab/modes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace bridgelab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMetricTimes = 256;
constexpr int kMetricAbscissae = 512;

bool finite(const Vec& v) { return v.allFinite(); }

double scaled_velocity(const Vec& V, double T, double norm) {
  return V.norm() * (T / (2.0 * kPi)) / norm;
}

/// Full-period closure at twice the Newton tolerance, relative to |Y0|.
double closure_error(const GalerkinSystem& sys, const Vec& Y0, double T, double tol) {
  const double tight = std::max(0.5 * tol, 1e-13);
  const auto [YT, VT] = transfer_map(sys, Y0, Vec::Zero(sys.n), T, tight);
  const double dy = (YT - Y0).norm();
  const double dv = VT.norm() * T / (2.0 * kPi);
  return std::hypot(dy, dv) / Y0.norm();
}

PeriodicMode finalize(const GalerkinSystem& sys, int k, double T, const Vec& Y0, int iterations,
                      const NewtonOptions& opts) {
  PeriodicMode mode;
  mode.k = k;
  mode.n = sys.n;
  mode.T = T;
  mode.Y0 = Y0;
  mode.iterations = iterations;
  mode.residual = closure_error(sys, Y0, T, opts.tol);
  if (!(mode.residual < opts.closure_tol)) {
    throw ConvergenceError("full-period closure failed: " + std::to_string(mode.residual));
  }
  mode.energy = potential_energy(sys, Y0);
  if (opts.compute_metrics) mode.delta = mode_metrics(sys, mode, opts.tol).delta;
  return mode;
}

Mat position_directions(int n) {
  Mat dirs = Mat::Zero(2 * n, n);
  dirs.topRows(n).setIdentity();
  return dirs;
}

/// Samples Y(t) at `count` uniform instants of [0, T) (plus T itself when
/// include_end).
std::vector<State> sample_period(const GalerkinSystem& sys, const PeriodicMode& mode, int count,
                                 double tol) {
  State s0;
  s0.Y = mode.Y0;
  s0.V = Vec::Zero(sys.n);
  if (mode.Y0.isZero(0.0)) return std::vector<State>(count, s0);
  return integrate(sys, s0, mode.T, tol, count + 1).states;
}

}  // namespace

Seed seed_linear(const GalerkinSystem& sys, int k, double alpha) {
  if (k < 1 || k > sys.n) throw std::out_of_range("branch index out of range: " + std::to_string(k));
  if (!(alpha > 0)) throw std::invalid_argument("seed amplitude must be positive");
  const Spectrum sp = linear_spectrum(sys, sys.n);
  const int c = sp.index_of_dominant(k);
  return Seed{alpha * sp.eigenvectors.col(c), sp.period(c)};
}

PeriodicMode newton_mode(const GalerkinSystem& sys, int k, double T, const Vec& guess,
                         const NewtonOptions& opts) {
  if (!(T > 0)) throw std::invalid_argument("period must be positive");
  const int n = sys.n;
  const double guess_norm = guess.norm();
  if (!(guess_norm > 0)) throw ConvergenceError("zero initial guess");
  const Mat dirs = position_directions(n);

  Vec Y = guess;
  for (int it = 0; it <= opts.max_iterations; ++it) {
    const FlowSensitivity fs = flow_with_sensitivity(sys, Y, Vec::Zero(n), 0.5 * T, dirs, opts.tol);
    const double res = scaled_velocity(fs.V, T, Y.norm());
    if (res < opts.residual_tol) return finalize(sys, k, T, Y, it, opts);
    if (it == opts.max_iterations) break;

    const auto qr = fs.dV.colPivHouseholderQr();
    if (qr.rank() < n) throw ConvergenceError("rank-deficient Newton Jacobian");
    Y += qr.solve(-fs.V);
    if (!finite(Y)) throw ConvergenceError("Newton produced non-finite iterate");
    if (Y.norm() < 1e-3 * guess_norm) throw ConvergenceError("Newton collapsed to the rest state");
    if (Y.norm() > 1e3 * guess_norm) throw ConvergenceError("Newton diverged");
  }
  throw ConvergenceError("Newton did not converge in " + std::to_string(opts.max_iterations) +
                         " iterations at T=" + std::to_string(T));
}

std::pair<Vec, Vec> newton_fixed_point(const GalerkinSystem& sys, double T, const Vec& Y0,
                                       const Vec& V0, const NewtonOptions& opts) {
  const int n = sys.n;
  const Mat dirs = Mat::Identity(2 * n, 2 * n);
  Vec Y = Y0, V = V0;
  const double scale = T / (2.0 * kPi);
  for (int it = 0; it <= opts.max_iterations; ++it) {
    const FlowSensitivity fs = flow_with_sensitivity(sys, Y, V, T, dirs, opts.tol);
    Vec R(2 * n);
    R << fs.Y - Y, scale * (fs.V - V);
    if (R.norm() / Y.norm() < opts.residual_tol) return {Y, V};
    if (it == opts.max_iterations) break;
    Mat J(2 * n, 2 * n);
    J << fs.dY, scale * fs.dV;
    J.topRows(n).leftCols(n) -= Mat::Identity(n, n);
    J.bottomRows(n).rightCols(n) -= scale * Mat::Identity(n, n);
    const Vec step = J.completeOrthogonalDecomposition().solve(-R);
    Y += step.head(n);
    V += step.tail(n);
    if (!finite(Y) || !finite(V)) throw ConvergenceError("fixed-point Newton produced non-finite iterate");
  }
  throw ConvergenceError("fixed-point Newton did not converge");
}

PeriodicMode amplitude_mode(const GalerkinSystem& sys, int k, double alpha,
                            const NewtonOptions& opts) {
  if (k < 1 || k > sys.n) throw std::out_of_range("branch index out of range: " + std::to_string(k));
  const int n = sys.n;
  const Spectrum sp = linear_spectrum(sys, n);
  const int c = sp.index_of_dominant(k);
  const Vec phi = sp.eigenvectors.col(c);
  Mat others(n, n - 1);
  for (int j = 0, col = 0; j < n; ++j)
    if (j != c) others.col(col++) = sp.eigenvectors.col(j);

  Mat dirs = Mat::Zero(2 * n, n - 1);
  dirs.topRows(n) = others;
  Vec coeff = Vec::Zero(n - 1);
  double T = sp.period(c);

  for (int it = 0; it <= opts.max_iterations; ++it) {
    const Vec Y = alpha * phi + others * coeff;
    const FlowSensitivity fs = flow_with_sensitivity(sys, Y, Vec::Zero(n), 0.5 * T, dirs, opts.tol);
    if (scaled_velocity(fs.V, T, Y.norm()) < opts.residual_tol) return finalize(sys, k, T, Y, it, opts);
    if (it == opts.max_iterations) break;
    Mat J(n, n);
    J.leftCols(n - 1) = fs.dV;
    J.col(n - 1) = 0.5 * acceleration(sys, fs.Y);
    const auto qr = J.colPivHouseholderQr();
    if (qr.rank() < n) throw ConvergenceError("rank-deficient seed Jacobian");
    const Vec step = qr.solve(-fs.V);
    coeff += step.head(n - 1);
    T += step[n - 1];
    if (!finite(coeff) || !(T > 0)) throw ConvergenceError("seed Newton diverged");
  }
  throw ConvergenceError("seed Newton did not converge for k=" + std::to_string(k));
}

namespace {

/// Component (0-based, != kidx) whose share of Y0 grew most between the
/// point at roughly half the final energy and the final point.
int resonant_component(const std::vector<PeriodicMode>& modes, int kidx) {
  const PeriodicMode& last = modes.back();
  std::size_t ref = 0;
  while (ref + 1 < modes.size() && modes[ref].energy < 0.5 * last.energy) ++ref;
  const Vec a = modes[ref].Y0.cwiseAbs() / std::abs(modes[ref].Y0[kidx]);
  const Vec b = last.Y0.cwiseAbs() / std::abs(last.Y0[kidx]);
  int best = -1;
  double growth = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < static_cast<int>(a.size()); ++j) {
    if (j == kidx) continue;
    if (b[j] - a[j] > growth) {
      growth = b[j] - a[j];
      best = j;
    }
  }
  return best;
}

}  // namespace

Branch continue_branch(const GalerkinSystem& sys, int k, double T_max,
                       const ContinuationOptions& opts) {
  Branch branch;
  branch.k = k;
  branch.n = sys.n;
  branch.params_fingerprint = fingerprint(sys.params);

  const Spectrum sp = linear_spectrum(sys, sys.n);
  const int c = sp.index_of_dominant(k);
  const double lambda = sp.eigenvalues[c];
  const double T_lin = sp.period(c);
  const double dT_max = opts.dT0 > 0 ? opts.dT0 : 0.01 * T_lin;
  const double alpha = std::sqrt(2.0 * opts.seed_energy / lambda);
  auto& modes = branch.modes;

  auto dominated = [&](const PeriodicMode& m) {
    if (m.k != k) return false;
    return mode_metrics(sys, m, opts.newton.tol).dominant == k;
  };
  auto follows = [&](const PeriodicMode& m, const PeriodicMode& last) {
    if (!(m.energy > last.energy && m.delta >= last.delta)) return false;
    if (opts.max_energy_step > 0 && m.energy - last.energy > 3.0 * opts.max_energy_step) return false;
    return dominated(m);
  };
  auto attempt = [&](double T, const Vec& guess) -> std::optional<PeriodicMode> {
    try {
      return newton_mode(sys, k, T, guess, opts.newton);
    } catch (const ConvergenceError&) {
    } catch (const IntegrationError&) {
    }
    return std::nullopt;
  };

  // Restart past an internal resonance; true if the branch was extended.
  auto jump = [&]() {
    if (modes.size() < 6) return false;
    const int r = resonant_component(modes, k - 1);
    const PeriodicMode end = modes.back();
    for (std::size_t back = 1; back <= 8 && back + 2 < modes.size(); ++back) {
      const std::size_t b = modes.size() - 1 - back;
      const PeriodicMode& base = modes[b];
      const PeriodicMode& before = modes[b - 1];
      const Vec dYdT = (base.Y0 - before.Y0) / (base.T - before.T);
      const double dEdT = (base.energy - before.energy) / (base.T - before.T);
      for (double off : {0.5, 1.0, 1.5, 2.0, 3.0}) {
        const double T = end.T + off * dT_max;
        if (T > T_max) break;
        Vec guess = base.Y0 + dYdT * (T - base.T);
        guess[r] = 0.0;
        auto m = attempt(T, guess);
        if (!m || !(m->energy > base.energy) || !dominated(*m)) continue;
        if (m->energy - base.energy > 1.5 * dEdT * (T - base.T)) continue;
        std::size_t keep = 1;
        while (keep < modes.size() && modes[keep].energy < m->energy &&
               modes[keep].delta < m->delta) {
          ++keep;
        }
        if (keep < 2) continue;
        modes.resize(keep);
        branch.gaps.emplace_back(modes.back().T, m->T);
        const double T2 = m->T + 0.1 * dT_max;
        auto m2 = attempt(T2, m->Y0);
        modes.push_back(std::move(*m));
        if (m2 && follows(*m2, modes.back())) modes.push_back(std::move(*m2));
        return true;
      }
    }
    return false;
  };

  try {
    modes.push_back(amplitude_mode(sys, k, alpha, opts.newton));
    modes.push_back(amplitude_mode(sys, k, std::sqrt(2.0) * alpha, opts.newton));
  } catch (const std::exception& e) {
    branch.stop_reason = std::string("seeding failed: ") + e.what();
    return branch;
  }
  if (!(modes[1].T > modes[0].T)) {
    branch.stop_reason = "period does not increase with energy near the linear limit";
    return branch;
  }

  double dT = dT_max;
  int jumps = 0;
  while (true) {
    const PeriodicMode& last = modes.back();
    const PeriodicMode& prev = modes[modes.size() - 2];
    if (static_cast<int>(modes.size()) >= opts.max_points) {
      branch.stop_reason = "point budget reached";
      break;
    }
    if (opts.energy_stop > 0 && last.energy >= opts.energy_stop) {
      branch.stop_reason = "energy target reached";
      break;
    }
    if (last.T >= T_max) {
      branch.stop_reason = "T_max reached";
      break;
    }
    const double slope_T = last.T - prev.T;
    const Vec dYdT = (last.Y0 - prev.Y0) / slope_T;
    const double dEdT = (last.energy - prev.energy) / slope_T;
    double step = dT;
    if (dEdT > 0) step = std::min(step, opts.max_energy_step / dEdT);
    const double T_new = std::min(last.T + step, T_max);
    step = T_new - last.T;

    auto m = attempt(T_new, last.Y0 + dYdT * step);
    if (m && follows(*m, last)) {
      const int iters = m->iterations;
      modes.push_back(std::move(*m));
      if (iters <= 3) dT = std::min(1.5 * dT, dT_max);
      continue;
    }
    dT = 0.5 * step;
    if (dT < opts.dT_min) {
      if (jumps < opts.max_resonance_jumps && jump()) {
        ++jumps;
        dT = 0.25 * dT_max;
        continue;
      }
      branch.stop_reason = "step underflow";
      break;
    }
  }
  return branch;
}

ModeMetrics mode_metrics(const GalerkinSystem& sys, const PeriodicMode& mode, double tol) {
  const int n = sys.n;
  ModeMetrics mm;
  mm.energy_MJ = potential_energy(sys, mode.Y0) * 1e-6;
  mm.amplitudes.assign(n, 0.0);

  const std::vector<State> states = sample_period(sys, mode, kMetricTimes, tol);
  Mat basis(kMetricAbscissae, n);
  const double L = sys.params.L;
  for (int i = 0; i < kMetricAbscissae; ++i) {
    const double x = L * i / (kMetricAbscissae - 1.0);
    for (int j = 0; j < n; ++j) basis(i, j) = std::sin(sys.wavenumbers[j] * x);
  }
  double ymax = -std::numeric_limits<double>::infinity();
  double ymin = std::numeric_limits<double>::infinity();
  mm.y1_max = -std::numeric_limits<double>::infinity();
  mm.y1_min = std::numeric_limits<double>::infinity();
  for (int s = 0; s < kMetricTimes; ++s) {
    const Vec& Y = states[s].Y;
    const Vec y = basis * Y;
    ymax = std::max(ymax, y.maxCoeff());
    ymin = std::min(ymin, y.minCoeff());
    mm.y1_max = std::max(mm.y1_max, Y[0]);
    mm.y1_min = std::min(mm.y1_min, Y[0]);
    for (int j = 0; j < n; ++j) mm.amplitudes[j] = std::max(mm.amplitudes[j], std::abs(Y[j]));
  }
  mm.delta = ymax - ymin;

  const auto top = std::max_element(mm.amplitudes.begin(), mm.amplitudes.end());
  if (*top > 0) {
    mm.dominant = static_cast<int>(top - mm.amplitudes.begin()) + 1;
    double second = 0;
    double even = 0;
    for (int j = 0; j < n; ++j) {
      if (j + 1 != mm.dominant) second = std::max(second, mm.amplitudes[j]);
      if ((j + 1) % 2 == 0) even = std::max(even, mm.amplitudes[j]);
    }
    mm.dominance_ratio = second > 0 ? *top / second : std::numeric_limits<double>::infinity();
    mm.symmetric = even < 1e-6 * (*top);
  }
  return mm;
}

void write_snapshot_csv(const GalerkinSystem& sys, const PeriodicMode& mode, int points,
                        std::ostream& out) {
  out << "x,y\n";
  out.precision(17);
  const double L = sys.params.L;
  for (int i = 0; i < points; ++i) {
    const double x = L * i / (points - 1.0);
    double y = 0;
    for (int j = 0; j < sys.n; ++j) y += mode.Y0[j] * std::sin(sys.wavenumbers[j] * x);
    out << x << ',' << y << '\n';
  }
}

void write_components_csv(const GalerkinSystem& sys, const PeriodicMode& mode, int samples,
                          std::ostream& out, double tol) {
  const auto states = sample_period(sys, mode, samples, tol);
  out << 't';
  for (int j = 1; j <= sys.n; ++j) out << ",y_" << j;
  out << '\n';
  out.precision(17);
  for (int s = 0; s < samples; ++s) {
    out << mode.T * s / samples;
    for (int j = 0; j < sys.n; ++j) out << ',' << states[s].Y[j];
    out << '\n';
  }
}

std::string branch_to_json(const Branch& branch) {
  nlohmann::ordered_json doc;
  doc["params_fingerprint"] = branch.params_fingerprint;
  doc["k"] = branch.k;
  doc["n"] = branch.n;
  doc["windings"] = branch.windings;
  doc["stop_reason"] = branch.stop_reason;
  doc["gaps"] = nlohmann::ordered_json::array();
  for (const auto& [a, b] : branch.gaps) doc["gaps"].push_back({a, b});
  doc["points"] = nlohmann::ordered_json::array();
  for (const auto& m : branch.modes) {
    nlohmann::ordered_json pt;
    pt["T"] = m.T;
    pt["Y0"] = std::vector<double>(m.Y0.data(), m.Y0.data() + m.Y0.size());
    pt["energy_J"] = m.energy;
    pt["delta_m"] = m.delta;
    pt["residual"] = m.residual;
    doc["points"].push_back(std::move(pt));
  }
  return doc.dump(1);
}

Branch branch_from_json(const std::string& text,
                        const std::optional<std::string>& expected_fingerprint) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("malformed branch file: ") + e.what());
  }
  Branch b;
  try {
    b.params_fingerprint = doc.at("params_fingerprint").get<std::string>();
    if (expected_fingerprint && *expected_fingerprint != b.params_fingerprint) {
      throw std::runtime_error("branch file was computed with different parameters (fingerprint " +
                               b.params_fingerprint + ", expected " + *expected_fingerprint + ")");
    }
    b.k = doc.at("k").get<int>();
    b.n = doc.at("n").get<int>();
    b.windings = doc.value("windings", 1);
    b.stop_reason = doc.value("stop_reason", std::string());
    if (doc.contains("gaps")) {
      for (const auto& g : doc.at("gaps")) {
        b.gaps.emplace_back(g.at(0).get<double>(), g.at(1).get<double>());
      }
    }
    for (const auto& pt : doc.at("points")) {
      PeriodicMode m;
      m.k = b.k;
      m.n = b.n;
      m.T = pt.at("T").get<double>();
      const auto y = pt.at("Y0").get<std::vector<double>>();
      if (static_cast<int>(y.size()) != b.n) throw std::runtime_error("Y0 length does not match n");
      m.Y0 = Eigen::Map<const Vec>(y.data(), b.n);
      m.energy = pt.at("energy_J").get<double>();
      m.delta = pt.at("delta_m").get<double>();
      m.residual = pt.value("residual", 0.0);
      b.modes.push_back(std::move(m));
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("malformed branch file: ") + e.what());
  }
  for (std::size_t i = 1; i < b.modes.size(); ++i) {
    if (!(b.modes[i].T > b.modes[i - 1].T)) throw std::runtime_error("branch periods not increasing");
  }
  return b;
}

}  // namespace bridgelab
