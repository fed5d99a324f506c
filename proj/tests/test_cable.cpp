#include <doctest.h>

#include <cmath>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "bridgelab/cable.hpp"
#include "bridgelab/params.hpp"
#include "support.hpp"

using namespace bridgelab;

namespace {

/// Midspan depth from an independent initial-value integration: by symmetry
/// s'(L/2) = 0, and the equation does not involve s itself, so the sag
/// s(L) - s(L/2) follows from one shot over the right half.
double shooting_midspan_depth(const BridgeParams& p) {
  namespace odeint = boost::numeric::odeint;
  using State = std::vector<double>;  // {s - s(L/2), s'}
  auto rhs = [&p](const State& u, State& du, double) {
    du[0] = u[1];
    du[1] = (p.M / 2 + p.m * std::sqrt(1 + u[1] * u[1])) * p.g / p.H0;
  };
  State u{0.0, 0.0};
  odeint::integrate_adaptive(
      odeint::make_controlled(1e-14, 1e-14, odeint::runge_kutta_cash_karp54<State>{}), rhs, u,
      p.L / 2, p.L, 1.0);
  return p.s0 - u[0];
}

}  // namespace

TEST_CASE("midspan depth agrees with a shooting solution") {
  const BridgeParams p = default_tnb();
  const CableProfile& prof = testing::tnb_profile();
  CHECK(std::abs(prof.eval(p.L / 2).s - shooting_midspan_depth(p)) < 1e-6);
  CHECK(std::abs(prof.eval(0).s - p.s0) < 1e-9);
  CHECK(std::abs(prof.eval(p.L).s - p.s0) < 1e-9);
}

TEST_CASE("massless cable reproduces the parabola and its arclength") {
  BridgeParams p = default_tnb();
  p.m = 0;
  const CableProfile prof = solve_cable_shape(p);
  const double c = p.M * p.g / (4 * p.H0);
  for (double x : {0.0, 100.0, 333.3, p.L / 2, 700.0, p.L}) {
    const CablePoint pt = prof.eval(x);
    CHECK(pt.s == doctest::Approx(p.s0 + c * (x * x - p.L * x)).epsilon(1e-11));
    CHECK(pt.sp == doctest::Approx(c * (2 * x - p.L)).epsilon(1e-10));
  }
  const double u = c * p.L;
  const double length = (u * std::sqrt(1 + u * u) + std::asinh(u)) / (2 * c);
  CHECK(prof.computed_length() == doctest::Approx(length).epsilon(1e-12));
}

TEST_CASE("profile invariants on the quadrature grid") {
  const BridgeParams p = default_tnb();
  const CableProfile& prof = testing::tnb_profile();
  for (std::size_t i = 0; i < prof.nodes().size(); ++i) {
    const double sp = prof.sp()[i], xi = prof.xi()[i];
    CHECK(std::abs(xi * xi - 1 - sp * sp) < 1e-12);
    CHECK(prof.spp()[i] == doctest::Approx((p.M / 2 + p.m * xi) * p.g / p.H0).epsilon(1e-12));
  }
  for (std::size_t i = 1; i + 1 < prof.s().size(); ++i) {
    const double h0 = prof.nodes()[i] - prof.nodes()[i - 1], h1 = prof.nodes()[i + 1] - prof.nodes()[i];
    const double d2 = (prof.s()[i + 1] - prof.s()[i]) / h1 - (prof.s()[i] - prof.s()[i - 1]) / h0;
    CHECK(d2 > 0);
  }
  CHECK(prof.max_residual() < 1e-9);
}

TEST_CASE("grid refinement leaves the midspan depth unchanged") {
  const BridgeParams p = default_tnb();
  const CableProfile coarse = solve_cable_shape(p, 1024), fine = solve_cable_shape(p, 2048);
  CHECK(std::abs(coarse.eval(p.L / 2).s - fine.eval(p.L / 2).s) < 1e-8);
}

TEST_CASE("flat fixture and argument checks") {
  const BridgeParams p = default_tnb();
  const CableProfile flat = flat_cable_profile(p);
  CHECK(flat.is_flat());
  CHECK(flat.eval(123.0).sp == 0.0);
  CHECK(flat.eval(123.0).xi == 1.0);
  CHECK_THROWS_AS(testing::tnb_profile().eval(-1.0), std::out_of_range);
  CHECK_THROWS_AS(testing::tnb_profile().eval(p.L + 1.0), std::out_of_range);
  CHECK_THROWS(solve_cable_shape(p, 100));
}
