#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "bridgelab/floquet.hpp"
#include "bridgelab/quadrature.hpp"
#include "support.hpp"

using namespace bridgelab;

namespace {

constexpr double kPi = std::numbers::pi;

const Branch& eighth_branch() {
  static const Branch b = [] {
    ContinuationOptions co;
    co.energy_stop = 110e6;
    return continue_branch(testing::tnb_system(16), 8, 20.0, co);
  }();
  return b;
}

const PeriodicMode& nearest(const Branch& b, double T) {
  return *std::min_element(b.modes.begin(), b.modes.end(), [T](const auto& x, const auto& y) {
    return std::abs(x.T - T) < std::abs(y.T - T);
  });
}

PeriodicMode rest_mode(int n, double T) {
  PeriodicMode m;
  m.n = n;
  m.T = T;
  m.Y0 = Vec::Zero(n);
  return m;
}

/// Torsional stiffness assembled pointwise from the continuous integrands
/// on a finer grid, with the cable taken from the profile interpolant.
Mat direct_stiffness(const GalerkinSystem& sys, const CableProfile& prof, const Vec& Y) {
  const BridgeParams& p = sys.params;
  const int n = sys.n;
  const QuadratureGrid g = composite_gauss_legendre(0.0, p.L, 4096);
  const double a = p.axial_coefficient();
  Mat K = Mat::Zero(n, n), D = Mat::Zero(n, n);
  Vec v = Vec::Zero(n), DY = Vec::Zero(n);
  double P = 0;
  for (std::size_t q = 0; q < g.size(); ++q) {
    const double x = g.nodes[q], w = g.weights[q];
    const CablePoint c = prof.eval(x);
    Vec e(n), de(n);
    for (int j = 0; j < n; ++j) {
      const double kap = (j + 1) * kPi / p.L;
      e[j] = std::sin(kap * x);
      de[j] = kap * std::cos(kap * x);
    }
    const double y = Y.dot(e), dy = Y.dot(de);
    const double x2 = c.xi * c.xi, x3 = x2 * c.xi, x4 = x3 * c.xi;
    K += w * (p.GK / (p.ell * p.ell) + 2 * p.H0 / x2 + 6 * p.H0 * c.sp * dy / x4) * de * de.transpose();
    D += w / x3 * de * de.transpose();
    v += w * c.spp / x3 * e;
    DY += w * dy / x3 * de;
    P += w * c.spp * y / x3;
  }
  K += 2 * a * (v * DY.transpose() + DY * v.transpose() + v * v.transpose() + P * D);
  return K;
}

Mat direct_mass(const GalerkinSystem& sys, const CableProfile& prof) {
  const BridgeParams& p = sys.params;
  const QuadratureGrid g = composite_gauss_legendre(0.0, p.L, 4096);
  Mat M = Mat::Zero(sys.n, sys.n);
  for (std::size_t q = 0; q < g.size(); ++q) {
    Vec e(sys.n);
    for (int j = 0; j < sys.n; ++j) e[j] = std::sin((j + 1) * kPi * g.nodes[q] / p.L);
    M += g.weights[q] * (p.M / 3 + 2 * p.m * prof.eval(g.nodes[q]).xi) * e * e.transpose();
  }
  return M;
}

}  // namespace

TEST_CASE("Zhukovskii bands") {
  const double T = 2.0, unit = kPi * kPi / (T * T);
  const std::vector<double> inside0{0.2 * unit, 0.9 * unit};
  const std::vector<double> inside2{4.1 * unit, 6.0 * unit, 8.9 * unit};
  const std::vector<double> straddle{0.5 * unit, 1.5 * unit};
  const std::vector<double> negative{-0.1 * unit, 0.5 * unit};
  CHECK(zhukovskii_test(inside0, T).verdict == Verdict::Stable);
  CHECK(zhukovskii_test(inside0, T).band == 0);
  CHECK(zhukovskii_test(inside2, T).band == 2);
  CHECK(zhukovskii_test(straddle, T).verdict == Verdict::Inconclusive);
  CHECK(zhukovskii_test(negative, T).verdict == Verdict::Inconclusive);
  const std::vector<double> bad{1.0, std::nan("")};
  CHECK_THROWS_AS(zhukovskii_test(bad, T), std::invalid_argument);
  CHECK_THROWS_AS(zhukovskii_test(inside0, 0.0), std::invalid_argument);
}

TEST_CASE("rest-state coefficients equal the closed-form gammas") {
  const GalerkinSystem& sys = testing::tnb_system(10);
  const GammaCoefficients g = gamma_coefficients(default_tnb(), testing::tnb_profile());
  const TorsionalSystem ts(sys, rest_mode(10, 2.0), 2);
  const Mat X = ts.xi(0.37);
  CHECK(std::abs(X(0, 0) - g.gamma1) <= 1e-9 * g.gamma1);
  CHECK(std::abs(X(1, 1) - g.gamma2) <= 1e-9 * g.gamma2);
  CHECK(std::abs(X(0, 1)) <= 1e-9 * g.gamma1);
  const double l2 = default_tnb().ell * default_tnb().ell;
  CHECK(g.norm1 == doctest::Approx(l2 * sys.massTheta(0, 0)).epsilon(1e-12));
}

TEST_CASE("rest state has multipliers exp(+-i sqrt(gamma) T)") {
  const GalerkinSystem& sys = testing::tnb_system(10);
  const double gamma1 = gamma_coefficients(default_tnb(), testing::tnb_profile()).gamma1;
  const double T = 1.3;
  const MonodromyResult r = monodromy(TorsionalSystem(sys, rest_mode(10, T), 1));
  REQUIRE(r.multipliers.size() == 2);
  const std::complex<double> expected = std::polar(1.0, std::sqrt(gamma1) * T);
  for (const auto& z : r.multipliers) {
    CHECK(std::min(std::abs(z - expected), std::abs(z - std::conj(expected))) < 1e-9);
  }
  CHECK(std::abs(r.expansion_rate - 1) < 1e-9);
  const MonodromyResult full = monodromy(TorsionalSystem(sys, rest_mode(10, T), 10));
  CHECK(std::abs(full.expansion_rate - 1) < 1e-9);
}

TEST_CASE("coefficient matrix is symmetric and periodic along a mode") {
  const PeriodicMode& m = nearest(eighth_branch(), 1.86);
  const TorsionalSystem ts(testing::tnb_system(16), m, 16);
  for (double t : {0.0, 0.11, 0.5, 0.93, 1.4}) {
    const Mat X = ts.xi(t);
    CHECK((X - X.transpose()).cwiseAbs().maxCoeff() <= 1e-10 * X.cwiseAbs().maxCoeff());
    CHECK((ts.xi(t + m.T) - X).cwiseAbs().maxCoeff() <= 1e-10 * X.cwiseAbs().maxCoeff());
  }
  CHECK((ts.mode_position(0.0) - m.Y0).norm() < 1e-12 * m.Y0.norm());
}

TEST_CASE("coefficient matrix agrees with direct quadrature") {
  const GalerkinSystem& sys = testing::tnb_system(16);
  const PeriodicMode& m = nearest(eighth_branch(), 1.86);
  const TorsionalSystem ts(sys, m, 16);
  const Vec Y = ts.mode_position(0.3 * m.T);
  const Eigen::LLT<Mat> llt(direct_mass(sys, testing::tnb_profile()));
  const Mat Linv = llt.matrixL().solve(Mat::Identity(16, 16));
  const Mat X = Linv * direct_stiffness(sys, testing::tnb_profile(), Y) * Linv.transpose();
  const Mat Xs = 0.5 * (X + X.transpose());
  CHECK((ts.xi_for(Y) - Xs).norm() <= 1e-8 * Xs.norm());
}

TEST_CASE("monodromy invariants and resolution independence of ER") {
  const GalerkinSystem& sys = testing::tnb_system(16);
  const PeriodicMode& m = eighth_branch().modes.back();
  const MonodromyResult base = monodromy(TorsionalSystem(sys, m, 16));
  CHECK(base.expansion_rate > 1.01);
  CHECK(std::abs(std::abs(base.determinant) - 1) < 1e-6);
  CHECK(base.reciprocal_error < 2e-4);
  for (const auto& z : base.multipliers) {
    double best = 1e300;
    for (const auto& w : base.multipliers) best = std::min(best, std::abs(std::conj(z) - w));
    CHECK(best < 1e-8 * std::abs(z));
  }
  const MonodromyResult dense = monodromy(TorsionalSystem(sys, m, 16, 1024));
  const MonodromyResult tight = monodromy(TorsionalSystem(sys, m, 16, 512, 1e-12), 1e-12);
  CHECK(std::abs(dense.expansion_rate - base.expansion_rate) < 1e-5);
  CHECK(std::abs(tight.expansion_rate - base.expansion_rate) < 1e-5);
}

TEST_CASE("two-family criterion in a common band is consistent with the monodromy") {
  const GalerkinSystem& sys = testing::tnb_system(16);
  ContinuationOptions co;
  co.energy_stop = 20e6;
  const Branch b = continue_branch(sys, 10, 10.0, co);
  int stable = 0;
  for (const auto& m : b.modes) {
    const TorsionalSystem ts(sys, m, 2);
    const Nu2Result r = nu2_sufficient_stability(ts);
    if (!r.common_zone) continue;
    ++stable;
    CHECK(monodromy(ts).expansion_rate - 1 < 1e-6);
  }
  CHECK(stable > 0);
  CHECK_THROWS_AS(nu2_sufficient_stability(TorsionalSystem(sys, b.modes[0], 3)),
                  std::invalid_argument);
}

TEST_CASE("families in different bands miss a combination resonance") {
  const GalerkinSystem& sys = testing::tnb_system(16);
  const GammaCoefficients g = gamma_coefficients(default_tnb(), testing::tnb_profile());
  bool found = false;
  for (const auto& m : eighth_branch().modes) {
    const TorsionalSystem ts(sys, m, 2);
    const Nu2Result r = nu2_sufficient_stability(ts);
    if (r.verdict != Verdict::Stable || monodromy(ts).expansion_rate - 1 < 1e-4) continue;
    found = true;
    CHECK_FALSE(r.common_zone);
    CHECK(r.first.band != r.second.band);
    const double sum = (std::sqrt(g.gamma1) + std::sqrt(g.gamma2)) * m.T / (2 * kPi);
    CHECK(std::abs(sum - std::round(sum)) < 0.05);
  }
  CHECK(found);
}

TEST_CASE("threshold along the eighth branch") {
  const GalerkinSystem& sys = testing::tnb_system(16);
  const Branch& b = eighth_branch();
  const StabilityPoint low = evaluate_stability(sys, b.modes.front());
  CHECK(low.expansion_rate - 1 < 1e-6);
  const Threshold th = find_threshold(sys, b);
  REQUIRE(th.found);
  CHECK(th.er_below <= 1 + kInstabilityTol);
  CHECK(th.er_above > 1 + kInstabilityTol);
  CHECK(th.above.energy - th.below.energy <= 0.01 * th.below.energy);
  CHECK(th.energy > 80e6);
  CHECK(th.energy < 110e6);
  const Threshold first = find_threshold(sys, b, 0, kInstabilityTol, std::nullopt, ThresholdRule::FirstCrossing);
  REQUIRE(first.found);
  CHECK(first.energy <= th.energy);
}

TEST_CASE("stable range reports no threshold") {
  const GalerkinSystem& sys = testing::tnb_system(10);
  ContinuationOptions co;
  co.energy_stop = 4e6;
  const Branch b = continue_branch(sys, 6, 10.0, co);
  const Threshold th = find_threshold(sys, b);
  CHECK_FALSE(th.found);
  CHECK(th.message == "no threshold in range");
}

TEST_CASE("modes located by energy") {
  const GalerkinSystem& sys = testing::tnb_system(16);
  const auto m = mode_at_energy(sys, eighth_branch(), 60e6);
  REQUIRE(m.has_value());
  CHECK(m->energy == doctest::Approx(60e6).epsilon(0.005));
  CHECK_FALSE(mode_at_energy(sys, eighth_branch(), 500e6).has_value());
}

TEST_CASE("torsional truncation is bounded by the mode system") {
  const GalerkinSystem& sys = testing::tnb_system(6);
  CHECK_THROWS_AS(TorsionalSystem(sys, rest_mode(6, 1.0), 7), std::invalid_argument);
  CHECK_THROWS_AS(TorsionalSystem(sys, rest_mode(6, 1.0), 0), std::invalid_argument);
  CHECK_THROWS_AS(TorsionalSystem(sys, rest_mode(5, 1.0), 2), std::invalid_argument);
}
