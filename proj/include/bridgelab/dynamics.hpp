#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include "bridgelab/galerkin.hpp"
#include "bridgelab/rk8.hpp"

namespace bridgelab {

inline constexpr double kDefaultTol = 1e-11;

/// Point of the longitudinal phase space.
struct State {
  double t = 0;
  Vec Y;  // position coefficients (m)
  Vec V;  // velocity coefficients (m/s)
};

struct Trajectory {
  std::vector<State> states;   // at the requested sample times, t0 first
  std::vector<double> energy;  // total energy per state (J)
  IntegratorStats stats;
  double max_energy_drift = 0;  // max |E(t) - E(t0)| / max(|E(t0)|, tiny)
};

/// Integrates massY Y'' = F(Y) from state0 to t_end and returns
/// `samples` uniformly spaced states (including both ends, samples >= 2).
/// tol must lie in [1e-13, 1e-6].
Trajectory integrate(const GalerkinSystem& sys, const State& state0, double t_end,
                     double tol = kDefaultTol, int samples = 2);

/// Phi_T(Y0, V0) = (Y(T), V(T)).
std::pair<Vec, Vec> transfer_map(const GalerkinSystem& sys, const Vec& Y0, const Vec& V0,
                                 double T, double tol = kDefaultTol);

/// V(T/2) of the orbit starting at rest from Y0. Zero exactly when the
/// orbit is time-symmetric with period T.
Vec half_period_velocity(const GalerkinSystem& sys, const Vec& Y0, double T,
                         double tol = kDefaultTol);

/// 1/2 V.massY.V + potential_energy(Y).
double total_energy(const GalerkinSystem& sys, const State& state);

/// Flow plus its derivative along chosen initial directions, obtained from
/// the variational equations integrated alongside the flow.
struct FlowSensitivity {
  Vec Y, V;
  Mat dY;  // n x k: d Y(T) / d (initial data) . directions
  Mat dV;  // n x k
  IntegratorStats stats;
};

/// `directions` is 2n x k; rows 0..n-1 perturb Y0, rows n..2n-1 perturb V0.
FlowSensitivity flow_with_sensitivity(const GalerkinSystem& sys, const Vec& Y0, const Vec& V0,
                                      double T, const Mat& directions, double tol = kDefaultTol);

/// CSV columns t, y_1..y_n, v_1..v_n, energy.
void write_trajectory_csv(const Trajectory& traj, std::ostream& out);

}  // namespace bridgelab
