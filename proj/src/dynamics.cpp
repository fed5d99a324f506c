#include "bridgelab/dynamics.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace bridgelab {

namespace {

using Buffer = std::vector<double>;
using CMap = Eigen::Map<const Vec>;
using MapV = Eigen::Map<Vec>;

void check_tol(double tol) {
  if (!(tol >= 1e-13 && tol <= 1e-6)) {
    throw std::invalid_argument("tolerance must lie in [1e-13, 1e-6], got " + std::to_string(tol));
  }
}

Buffer pack(const Vec& Y, const Vec& V) {
  Buffer x(2 * Y.size());
  MapV(x.data(), Y.size()) = Y;
  MapV(x.data() + Y.size(), V.size()) = V;
  return x;
}

/// d/dt (Y, V) = (V, massY^-1 F(Y)).
struct FlowRhs {
  const GalerkinSystem& sys;
  void operator()(const Buffer& x, Buffer& dx, double) const {
    const int n = sys.n;
    CMap Y(x.data(), n);
    CMap V(x.data() + n, n);
    MapV(dx.data(), n) = V;
    MapV(dx.data() + n, n) = acceleration(sys, Y);
  }
};

/// Flow plus k variational columns (dY_j, dV_j).
struct VariationalRhs {
  const GalerkinSystem& sys;
  int k;
  void operator()(const Buffer& x, Buffer& dx, double) const {
    const int n = sys.n;
    CMap Y(x.data(), n);
    CMap V(x.data() + n, n);
    MapV(dx.data(), n) = V;
    MapV(dx.data() + n, n) = acceleration(sys, Y);
    const Mat A = sys.cholY.solve(force_jacobian(sys, Y));
    Eigen::Map<const Mat> dY(x.data() + 2 * n, n, k);
    Eigen::Map<const Mat> dV(x.data() + 2 * n + n * k, n, k);
    Eigen::Map<Mat>(dx.data() + 2 * n, n, k) = dV;
    Eigen::Map<Mat>(dx.data() + 2 * n + n * k, n, k).noalias() = A * dY;
  }
};

}  // namespace

double total_energy(const GalerkinSystem& sys, const State& state) {
  return 0.5 * state.V.dot(sys.massY * state.V) + potential_energy(sys, state.Y);
}

Trajectory integrate(const GalerkinSystem& sys, const State& state0, double t_end, double tol,
                     int samples) {
  check_tol(tol);
  if (!(t_end > state0.t)) throw std::invalid_argument("t_end must exceed the initial time");
  if (samples < 2) throw std::invalid_argument("need at least two samples");
  if (state0.Y.size() != sys.n || state0.V.size() != sys.n) {
    throw std::invalid_argument("state dimension does not match the system");
  }

  Trajectory traj;
  traj.states.push_back(state0);
  traj.energy.push_back(total_energy(sys, state0));

  std::vector<double> outputs;
  for (int i = 1; i < samples; ++i) {
    outputs.push_back(i + 1 == samples
                          ? t_end
                          : state0.t + (t_end - state0.t) * static_cast<double>(i) / (samples - 1));
  }
  Buffer x = pack(state0.Y, state0.V);
  AdaptiveRK8 rk(tol);
  const int n = sys.n;
  traj.stats = rk.run(FlowRhs{sys}, x, state0.t, outputs, [&](double t, const Buffer& s) {
    State st;
    st.t = t;
    st.Y = CMap(s.data(), n);
    st.V = CMap(s.data() + n, n);
    traj.energy.push_back(total_energy(sys, st));
    traj.states.push_back(std::move(st));
  });

  const double e0 = traj.energy.front();
  const double scale = std::max(std::abs(e0), std::numeric_limits<double>::min());
  for (double e : traj.energy) {
    traj.max_energy_drift = std::max(traj.max_energy_drift, std::abs(e - e0) / scale);
  }
  return traj;
}

std::pair<Vec, Vec> transfer_map(const GalerkinSystem& sys, const Vec& Y0, const Vec& V0,
                                 double T, double tol) {
  if (!(T > 0)) throw std::invalid_argument("transfer map needs T > 0");
  check_tol(tol);
  Buffer x = pack(Y0, V0);
  AdaptiveRK8 rk(tol);
  const double out[] = {T};
  rk.run(FlowRhs{sys}, x, 0.0, out, [](double, const Buffer&) {});
  const int n = sys.n;
  return {CMap(x.data(), n), CMap(x.data() + n, n)};
}

Vec half_period_velocity(const GalerkinSystem& sys, const Vec& Y0, double T, double tol) {
  return transfer_map(sys, Y0, Vec::Zero(sys.n), 0.5 * T, tol).second;
}

FlowSensitivity flow_with_sensitivity(const GalerkinSystem& sys, const Vec& Y0, const Vec& V0,
                                      double T, const Mat& directions, double tol) {
  if (!(T > 0)) throw std::invalid_argument("sensitivity flow needs T > 0");
  check_tol(tol);
  const int n = sys.n;
  const int k = static_cast<int>(directions.cols());
  if (directions.rows() != 2 * n) throw std::invalid_argument("directions must have 2n rows");

  Buffer x(2 * n + 2 * n * k);
  MapV(x.data(), n) = Y0;
  MapV(x.data() + n, n) = V0;
  Eigen::Map<Mat>(x.data() + 2 * n, n, k) = directions.topRows(n);
  Eigen::Map<Mat>(x.data() + 2 * n + n * k, n, k) = directions.bottomRows(n);

  AdaptiveRK8 rk(tol);
  const double out[] = {T};
  FlowSensitivity res;
  res.stats = rk.run(VariationalRhs{sys, k}, x, 0.0, out, [](double, const Buffer&) {});
  res.Y = CMap(x.data(), n);
  res.V = CMap(x.data() + n, n);
  res.dY = Eigen::Map<const Mat>(x.data() + 2 * n, n, k);
  res.dV = Eigen::Map<const Mat>(x.data() + 2 * n + n * k, n, k);
  return res;
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
  if (traj.states.empty()) return;
  const auto n = traj.states.front().Y.size();
  out << 't';
  for (Eigen::Index i = 1; i <= n; ++i) out << ",y_" << i;
  for (Eigen::Index i = 1; i <= n; ++i) out << ",v_" << i;
  out << ",energy\n";
  out.precision(17);
  for (std::size_t s = 0; s < traj.states.size(); ++s) {
    const auto& st = traj.states[s];
    out << st.t;
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << st.Y[i];
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << st.V[i];
    out << ',' << traj.energy[s] << '\n';
  }
}

}  // namespace bridgelab
