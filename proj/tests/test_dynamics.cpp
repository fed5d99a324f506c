#include <doctest.h>

#include <cmath>
#include <sstream>

#include "bridgelab/dynamics.hpp"
#include "support.hpp"

using namespace bridgelab;

namespace {

State start(const Vec& Y) { return State{0.0, Y, Vec::Zero(Y.size())}; }

Vec sample_state(int n) {
  Vec Y = Vec::Zero(n);
  Y[0] = -0.6;
  Y[2] = 1.2;
  Y[4] = 0.3;
  return Y;
}

}  // namespace

TEST_CASE("RKF78 integrates the harmonic oscillator to tolerance") {
  AdaptiveRK8 rk(1e-12);
  std::vector<double> x{1.0, 0.0};
  auto rhs = [](const std::vector<double>& s, std::vector<double>& ds, double) {
    ds[0] = s[1];
    ds[1] = -s[0];
  };
  const double out[] = {1.0, 10.0};
  std::vector<double> seen;
  const IntegratorStats st = rk.run(rhs, x, 0.0, out, [&](double t, const auto&) { seen.push_back(t); });
  CHECK(seen == std::vector<double>{1.0, 10.0});
  CHECK(x[0] == doctest::Approx(std::cos(10.0)).epsilon(1e-10));
  CHECK(x[1] == doctest::Approx(-std::sin(10.0)).epsilon(1e-10));
  CHECK(st.steps > 0);
  CHECK_THROWS_AS(AdaptiveRK8(1.0), std::invalid_argument);
}

TEST_CASE("energy is conserved along a large-amplitude trajectory") {
  const GalerkinSystem& sys = testing::tnb_system(10);
  const Trajectory tr = integrate(sys, start(sample_state(10)), 6.0, kDefaultTol, 61);
  CHECK(tr.states.size() == 61);
  CHECK(tr.states.back().t == doctest::Approx(6.0));
  CHECK(tr.max_energy_drift < 1e-9);
}

TEST_CASE("reflecting the velocity runs the flow backwards") {
  const GalerkinSystem& sys = testing::tnb_system(10);
  Vec Y0 = sample_state(10), V0 = Vec::Zero(10);
  V0[1] = 0.5;
  const auto [Y1, V1] = transfer_map(sys, Y0, V0, 3.0);
  const auto [Y2, V2] = transfer_map(sys, Y1, -V1, 3.0);
  CHECK((Y2 - Y0).norm() < 1e-8 * Y0.norm());
  CHECK((V2 + V0).norm() < 1e-8 * V1.norm());
}

TEST_CASE("identical inputs give bit-identical trajectories") {
  const GalerkinSystem& sys = testing::tnb_system(10);
  const Trajectory a = integrate(sys, start(sample_state(10)), 2.5, kDefaultTol, 11);
  const Trajectory b = integrate(sys, start(sample_state(10)), 2.5, kDefaultTol, 11);
  std::ostringstream sa, sb;
  write_trajectory_csv(a, sa);
  write_trajectory_csv(b, sb);
  CHECK(sa.str() == sb.str());
  for (std::size_t i = 0; i < a.states.size(); ++i) CHECK((a.states[i].Y.array() == b.states[i].Y.array()).all());
}

TEST_CASE("variational sensitivities agree with finite differences of the flow") {
  const GalerkinSystem& sys = testing::tnb_system(6);
  const Vec Y0 = sample_state(6), V0 = Vec::Zero(6);
  const Mat dirs = Mat::Identity(12, 12);
  const FlowSensitivity fs = flow_with_sensitivity(sys, Y0, V0, 1.7, dirs);
  const auto [Y, V] = transfer_map(sys, Y0, V0, 1.7);
  CHECK((fs.Y - Y).norm() < 1e-10 * Y.norm());
  for (int j = 0; j < 12; ++j) {
    const double h = 1e-6;
    Vec yp = Y0, vp = V0, ym = Y0, vm = V0;
    if (j < 6) yp[j] += h, ym[j] -= h;
    else vp[j - 6] += h, vm[j - 6] -= h;
    const auto [Yp, Vp] = transfer_map(sys, yp, vp, 1.7, 1e-13);
    const auto [Ym, Vm] = transfer_map(sys, ym, vm, 1.7, 1e-13);
    CHECK(((Yp - Ym) / (2 * h) - fs.dY.col(j)).norm() <= 1e-5 * (1 + fs.dY.col(j).norm()));
    CHECK(((Vp - Vm) / (2 * h) - fs.dV.col(j)).norm() <= 1e-5 * (1 + fs.dV.col(j).norm()));
  }
}

TEST_CASE("half-period velocity vanishes on a converged mode") {
  const GalerkinSystem& sys = testing::tnb_system(10);
  const PeriodicMode m = testing::small_mode(3, 10);
  CHECK(half_period_velocity(sys, m.Y0, m.T).norm() * m.T < 1e-8 * m.Y0.norm());
  CHECK(total_energy(sys, State{0.0, m.Y0, Vec::Zero(10)}) == doctest::Approx(m.energy).epsilon(1e-12));
}

TEST_CASE("tolerance outside the supported range is rejected") {
  const GalerkinSystem& sys = testing::tnb_system(4);
  CHECK_THROWS_AS(integrate(sys, start(Vec::Zero(4)), 1.0, 1e-3), std::invalid_argument);
  CHECK_THROWS_AS(integrate(sys, start(Vec::Zero(4)), 1.0, 1e-14), std::invalid_argument);
}
