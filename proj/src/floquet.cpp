#include "bridgelab/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace bridgelab {

namespace {

constexpr double kPi = std::numbers::pi;

/// Quintic Hermite weights on s in [0, 1] for (y0, h v0, h^2 a0, y1, h v1, h^2 a1).
struct HermiteWeights {
  double w[6];
  explicit HermiteWeights(double s) {
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
    w[0] = 1 - 10 * s3 + 15 * s4 - 6 * s5;
    w[1] = s - 6 * s3 + 8 * s4 - 3 * s5;
    w[2] = 0.5 * s2 - 1.5 * s3 + 1.5 * s4 - 0.5 * s5;
    w[3] = 10 * s3 - 15 * s4 + 6 * s5;
    w[4] = -4 * s3 + 7 * s4 - 3 * s5;
    w[5] = 0.5 * s3 - s4 + 0.5 * s5;
  }
};

}  // namespace

TorsionalSystem::TorsionalSystem(const GalerkinSystem& sys, const PeriodicMode& mode, int nu,
                                 int cache_samples, double tol)
    : n_(sys.n), nu_(nu), T_(mode.T), H0_(sys.params.H0), axial_(sys.axial()) {
  if (nu < 1 || nu > sys.n) {
    throw std::invalid_argument("torsional truncation must lie in [1, n], got " +
                                std::to_string(nu));
  }
  if (mode.Y0.size() != sys.n) throw std::invalid_argument("mode does not match the system");
  if (!(mode.T > 0)) throw std::invalid_argument("mode period must be positive");
  if (cache_samples < 16) throw std::invalid_argument("trajectory cache needs >= 16 samples");

  K0_ = sys.stiffTorsion.head(nu).asDiagonal();
  K0_ += 2.0 * H0_ * sys.Q.topLeftCorner(nu, nu);
  D_ = sys.D.topLeftCorner(nu, nu);
  Dfull_ = sys.D.topRows(nu);
  v_ = sys.v;
  C_.reserve(n_);
  for (const Mat& c : sys.C) C_.push_back(c.topLeftCorner(nu, nu));

  const Mat mass = sys.massTheta.topLeftCorner(nu, nu);
  Eigen::LLT<Mat> llt(mass);
  if (llt.info() != Eigen::Success) throw std::runtime_error("torsional mass is not positive");
  const Mat Lf = llt.matrixL();
  Linv_ = Lf.triangularView<Eigen::Lower>().solve(Mat::Identity(nu, nu));

  if (mode.Y0.squaredNorm() == 0.0) {
    cacheY_.assign(cache_samples + 1, Vec::Zero(n_));
    cacheV_ = cacheY_;
    cacheA_ = cacheY_;
    return;
  }
  State s0{0.0, mode.Y0, Vec::Zero(n_)};
  const Trajectory traj = integrate(sys, s0, mode.T, tol, cache_samples + 1);
  cacheY_.reserve(traj.states.size());
  for (const State& st : traj.states) {
    cacheY_.push_back(st.Y);
    cacheV_.push_back(st.V);
    cacheA_.push_back(acceleration(sys, st.Y));
  }
}

Vec TorsionalSystem::mode_position(double t) const {
  const int N = static_cast<int>(cacheY_.size()) - 1;
  double tau = std::fmod(t, T_);
  if (tau < 0) tau += T_;
  const double h = T_ / N;
  int i = std::min(static_cast<int>(tau / h), N - 1);
  const double s = std::clamp((tau - i * h) / h, 0.0, 1.0);
  const HermiteWeights hw(s);
  return hw.w[0] * cacheY_[i] + (hw.w[1] * h) * cacheV_[i] + (hw.w[2] * h * h) * cacheA_[i] +
         hw.w[3] * cacheY_[i + 1] + (hw.w[4] * h) * cacheV_[i + 1] +
         (hw.w[5] * h * h) * cacheA_[i + 1];
}

Mat TorsionalSystem::stiffness(const Vec& Y) const {
  Mat K = K0_;
  for (int i = 0; i < n_; ++i) K.noalias() += (6.0 * H0_ * Y[i]) * C_[i];
  const double P = v_.dot(Y);
  const Vec DY = Dfull_ * Y;
  const Vec vn = v_.head(nu_);
  K.noalias() += 2.0 * axial_ * (vn * DY.transpose() + DY * vn.transpose() + vn * vn.transpose());
  K.noalias() += (2.0 * axial_ * P) * D_;
  return K;
}

Mat TorsionalSystem::xi_for(const Vec& Y) const {
  Mat X = Linv_ * stiffness(Y) * Linv_.transpose();
  return 0.5 * (X + X.transpose());
}

Mat TorsionalSystem::xi(double t) const { return xi_for(mode_position(t)); }

TorsionalSystem assemble_torsional(const GalerkinSystem& sys, const PeriodicMode& mode, int nu,
                                   int cache_samples, double tol) {
  return TorsionalSystem(sys, mode, nu, cache_samples, tol);
}

double expansion_rate(std::span<const std::complex<double>> multipliers, double T) {
  if (!(T > 0)) throw std::invalid_argument("expansion rate needs T > 0");
  double rmax = 0;
  for (const auto& z : multipliers) rmax = std::max(rmax, std::abs(z));
  return std::pow(rmax, 1.0 / T);
}

MonodromyResult monodromy(const TorsionalSystem& torsys, double tol) {
  const int nu = torsys.nu();
  const int m = 2 * nu;
  const double T = torsys.period();

  // Column-major blocks: W (nu x m) followed by W' (nu x m).
  std::vector<double> x(2 * nu * m, 0.0);
  Eigen::Map<Mat> W0(x.data(), nu, m), Wd0(x.data() + nu * m, nu, m);
  W0.leftCols(nu).setIdentity();
  Wd0.rightCols(nu).setIdentity();

  auto rhs = [&torsys, nu, m](const std::vector<double>& s, std::vector<double>& ds, double t) {
    Eigen::Map<const Mat> W(s.data(), nu, m), Wd(s.data() + nu * m, nu, m);
    Eigen::Map<Mat>(ds.data(), nu, m) = Wd;
    Eigen::Map<Mat>(ds.data() + nu * m, nu, m).noalias() = -torsys.xi(t) * W;
  };
  AdaptiveRK8 rk(tol);
  const double out[] = {T};
  rk.run(rhs, x, 0.0, out, [](double, const std::vector<double>&) {});

  MonodromyResult res;
  res.period = T;
  res.transition.resize(m, m);
  res.transition.topRows(nu) = Eigen::Map<const Mat>(x.data(), nu, m);
  res.transition.bottomRows(nu) = Eigen::Map<const Mat>(x.data() + nu * m, nu, m);
  res.determinant = res.transition.determinant();

  Eigen::EigenSolver<Mat> es(res.transition, false);
  if (es.info() != Eigen::Success) throw std::runtime_error("multiplier eigensolver failed");
  const auto ev = es.eigenvalues();
  res.multipliers.assign(ev.data(), ev.data() + ev.size());
  std::sort(res.multipliers.begin(), res.multipliers.end(), [](const auto& a, const auto& b) {
    const double ra = std::abs(a), rb = std::abs(b);
    if (ra != rb) return ra > rb;
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  res.expansion_rate = expansion_rate(res.multipliers, T);

  for (const auto& a : res.multipliers) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& b : res.multipliers) best = std::min(best, std::abs(a - 1.0 / b));
    res.reciprocal_error = std::max(res.reciprocal_error, best / std::abs(a));
  }
  return res;
}

GammaCoefficients gamma_coefficients(const BridgeParams& p, const CableProfile& profile) {
  const QuadratureGrid& grid = profile.grid();
  const auto& xi = profile.xi();
  const auto& spp = profile.spp();
  const double L = p.L, l2 = p.ell * p.ell;
  double norm1 = 0, norm2 = 0, q1 = 0, q2 = 0, proj = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.nodes[i], w = grid.weights[i];
    const double s1 = std::sin(kPi * x / L), s2 = std::sin(2 * kPi * x / L);
    const double c1 = std::cos(kPi * x / L), c2 = std::cos(2 * kPi * x / L);
    const double rho = p.M / 3.0 + 2.0 * p.m * xi[i];
    norm1 += w * rho * s1 * s1;
    norm2 += w * rho * s2 * s2;
    q1 += w * c1 * c1 / (xi[i] * xi[i]);
    q2 += w * c2 * c2 / (xi[i] * xi[i]);
    proj += w * spp[i] * s1 / (xi[i] * xi[i] * xi[i]);
  }
  GammaCoefficients g;
  g.norm1 = l2 * norm1;
  g.norm2 = l2 * norm2;
  const double pi2 = kPi * kPi;
  g.gamma1 = (p.GK * pi2 / (2 * L) + 2 * pi2 * l2 * p.H0 / (L * L) * q1 +
              2 * p.A * p.E * l2 / p.Lc * proj * proj) /
             g.norm1;
  g.gamma2 = (2 * p.GK * pi2 / L + 8 * pi2 * l2 * p.H0 / (L * L) * q2) / g.norm2;
  return g;
}

ZhukovskiiResult zhukovskii_test(std::span<const double> p, double T) {
  if (p.empty()) throw std::invalid_argument("no coefficient samples");
  if (!(T > 0)) throw std::invalid_argument("Zhukovskii test needs T > 0");
  double lo = p.front(), hi = p.front();
  for (double v : p) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite coefficient sample");
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  ZhukovskiiResult res;
  if (lo < 0) return res;
  const double unit = kPi * kPi / (T * T);
  const int band = static_cast<int>(std::floor(std::sqrt(lo / unit)));
  // floor(sqrt) may land one off near perfect squares
  for (int n = std::max(0, band - 1); n <= band + 1; ++n) {
    const double a = n * n * unit, b = (n + 1.0) * (n + 1.0) * unit;
    if (a <= lo && hi <= b) {
      res.verdict = Verdict::Stable;
      res.band = n;
      return res;
    }
  }
  return res;
}

Nu2Result nu2_sufficient_stability(const TorsionalSystem& torsys, int samples) {
  if (torsys.nu() != 2) throw std::invalid_argument("the two-family criterion needs nu = 2");
  if (samples < 8) throw std::invalid_argument("too few samples for the Hill families");
  const double T = torsys.period();
  std::vector<double> p1, p2;
  p1.reserve(3 * samples);
  p2.reserve(3 * samples);
  for (int i = 0; i < samples; ++i) {
    const Mat X = torsys.xi(T * i / samples);
    for (double alpha : {-1.0, 0.0, 1.0}) {
      p1.push_back(X(0, 0) + alpha * X(0, 1));
      p2.push_back(X(1, 1) + alpha * X(0, 1));
    }
  }
  Nu2Result res;
  res.first = zhukovskii_test(p1, T);
  res.second = zhukovskii_test(p2, T);
  res.verdict = res.first.verdict == Verdict::Stable && res.second.verdict == Verdict::Stable
                    ? Verdict::Stable
                    : Verdict::Inconclusive;
  res.common_zone = res.verdict == Verdict::Stable && res.first.band == res.second.band;
  return res;
}

StabilityPoint evaluate_stability(const GalerkinSystem& sys, const PeriodicMode& mode, int nu,
                                  double tol) {
  const TorsionalSystem torsys(sys, mode, nu <= 0 ? sys.n : nu, 512, tol);
  const MonodromyResult mono = monodromy(torsys, tol);
  StabilityPoint pt;
  pt.T = mode.T;
  pt.energy = mode.energy;
  pt.delta = mode.delta;
  pt.expansion_rate = mono.expansion_rate;
  pt.determinant = mono.determinant;
  pt.reciprocal_error = mono.reciprocal_error;
  for (const auto& z : mono.multipliers) pt.moduli.push_back(std::abs(z));
  return pt;
}

namespace {

Vec interpolate_guess(const PeriodicMode& a, const PeriodicMode& b, double T) {
  const double w = (T - a.T) / (b.T - a.T);
  return (1.0 - w) * a.Y0 + w * b.Y0;
}

}  // namespace

Threshold find_threshold(const GalerkinSystem& sys, const Branch& branch, int nu,
                         double tol_instab, std::optional<std::vector<double>> rates,
                         ThresholdRule rule) {
  Threshold th;
  th.k = branch.k;
  const auto& modes = branch.modes;
  std::vector<double> er;
  if (rates) {
    if (rates->size() != modes.size()) {
      throw std::invalid_argument("one expansion rate per branch point is required");
    }
    er = *rates;
  }
  const double limit = 1.0 + tol_instab;
  auto rate_at = [&](std::size_t i) {
    while (er.size() <= i) er.push_back(evaluate_stability(sys, modes[er.size()], nu).expansion_rate);
    return er[i];
  };

  std::size_t hi = modes.size();
  if (rule == ThresholdRule::FirstCrossing) {
    for (std::size_t i = 0; i < modes.size(); ++i) {
      if (rate_at(i) > limit) {
        hi = i;
        break;
      }
    }
  } else {
    for (std::size_t i = 0; i < modes.size(); ++i) rate_at(i);
    std::size_t i = modes.size();
    while (i > 0 && er[i - 1] > limit) --i;
    hi = i;
  }
  if (hi == modes.size() || hi == 0) {
    th.message = hi == 0 && !modes.empty() ? "branch starts above the instability limit"
                                           : "no threshold in range";
    return th;
  }

  NewtonOptions opts;
  PeriodicMode below = modes[hi - 1], above = modes[hi];
  double er_below = er[hi - 1], er_above = er[hi];
  for (int iter = 0; iter < 60; ++iter) {
    if ((above.energy - below.energy) < 0.01 * above.energy) break;
    const double Tm = 0.5 * (below.T + above.T);
    PeriodicMode mid;
    try {
      mid = newton_mode(sys, branch.k, Tm, interpolate_guess(below, above, Tm), opts);
    } catch (const ConvergenceError&) {
      th.message = "bisection lost the branch";
      break;
    }
    if (!(mid.energy > below.energy && mid.energy < above.energy)) {
      th.message = "bisection left the energy bracket";
      break;
    }
    const double r = evaluate_stability(sys, mid, nu).expansion_rate;
    if (r > limit) {
      above = mid;
      er_above = r;
    } else {
      below = mid;
      er_below = r;
    }
  }

  th.found = true;
  th.below = below;
  th.above = above;
  th.er_below = er_below;
  th.er_above = er_above;
  const double Tm = 0.5 * (below.T + above.T);
  try {
    const PeriodicMode mid = newton_mode(sys, branch.k, Tm, interpolate_guess(below, above, Tm), opts);
    th.energy = mid.energy;
    th.T = mid.T;
    th.delta = mid.delta;
  } catch (const ConvergenceError&) {
    th.energy = 0.5 * (below.energy + above.energy);
    th.T = Tm;
    th.delta = 0.5 * (below.delta + above.delta);
  }
  return th;
}

std::optional<PeriodicMode> mode_at_energy(const GalerkinSystem& sys, const Branch& branch,
                                           double energy, double rel_tol) {
  const auto& modes = branch.modes;
  std::size_t j = 0;
  while (j < modes.size() && modes[j].energy < energy) ++j;
  if (j == modes.size() || (j == 0 && modes[0].energy > energy * (1 + rel_tol))) {
    return std::nullopt;
  }
  if (std::abs(modes[j].energy - energy) <= rel_tol * energy) return modes[j];
  if (j > 0 && std::abs(modes[j - 1].energy - energy) <= rel_tol * energy) return modes[j - 1];
  if (j == 0) return std::nullopt;

  PeriodicMode lo = modes[j - 1], hi = modes[j];
  NewtonOptions opts;
  for (int iter = 0; iter < 60; ++iter) {
    // regula falsi with a bisection safeguard every third step
    double w = (energy - lo.energy) / (hi.energy - lo.energy);
    if (iter % 3 == 2) w = 0.5;
    w = std::clamp(w, 0.1, 0.9);
    const double Tm = lo.T + w * (hi.T - lo.T);
    PeriodicMode mid;
    try {
      mid = newton_mode(sys, branch.k, Tm, interpolate_guess(lo, hi, Tm), opts);
    } catch (const ConvergenceError&) {
      return std::nullopt;
    }
    if (std::abs(mid.energy - energy) <= rel_tol * energy) return mid;
    if (mid.energy < energy) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::nullopt;
}

}  // namespace bridgelab
