#include "bridgelab/cable.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace bridgelab {

namespace {

constexpr std::size_t kChebDegree = 64;
constexpr int kMaxNewton = 30;

struct Chebyshev {
  std::vector<double> x;  // ascending Chebyshev-Lobatto points on [0, L]
  std::vector<double> w;  // barycentric weights
  Eigen::MatrixXd D;      // first-derivative matrix
};

Chebyshev chebyshev_lobatto(double L, std::size_t N) {
  Chebyshev c;
  c.x.resize(N + 1);
  c.w.resize(N + 1);
  for (std::size_t j = 0; j <= N; ++j) {
    const double t = -std::cos(std::numbers::pi * static_cast<double>(j) / static_cast<double>(N));
    c.x[j] = 0.5 * L * (1.0 + t);
    c.w[j] = (j % 2 == 0 ? 1.0 : -1.0) * ((j == 0 || j == N) ? 0.5 : 1.0);
  }
  c.x.front() = 0.0;
  c.x.back() = L;
  c.D = Eigen::MatrixXd::Zero(N + 1, N + 1);
  for (std::size_t i = 0; i <= N; ++i) {
    double diag = 0.0;
    for (std::size_t j = 0; j <= N; ++j) {
      if (i == j) continue;
      const double d = (c.w[j] / c.w[i]) / (c.x[i] - c.x[j]);
      c.D(i, j) = d;
      diag -= d;
    }
    c.D(i, i) = diag;
  }
  return c;
}

double barycentric(const std::vector<double>& xs, const std::vector<double>& ws,
                   const std::vector<double>& fs, double x) {
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    const double dx = x - xs[j];
    if (dx == 0.0) return fs[j];
    const double t = ws[j] / dx;
    num += t * fs[j];
    den += t;
  }
  return num / den;
}

void check_node_count(std::size_t n_nodes) {
  if (n_nodes < 64) {
    throw std::invalid_argument("cable grid needs at least 64 nodes, got " + std::to_string(n_nodes));
  }
}

}  // namespace

CablePoint CableProfile::eval(double x) const {
  if (!(x >= 0.0 && x <= span_)) {
    throw std::out_of_range("cable abscissa " + std::to_string(x) + " outside [0, L]");
  }
  CablePoint pt{};
  if (flat_) {
    pt.s = cheb_s_.front();
    pt.sp = 0.0;
    pt.spp = 0.0;
    pt.xi = 1.0;
    return pt;
  }
  pt.s = barycentric(cheb_x_, cheb_w_, cheb_s_, x);
  pt.sp = barycentric(cheb_x_, cheb_w_, cheb_sp_, x);
  pt.xi = std::sqrt(1.0 + pt.sp * pt.sp);
  pt.spp = curv_a_ + curv_b_ * pt.xi;
  return pt;
}

void CableProfile::sample_grid(const BridgeParams& p) {
  const std::size_t nq = grid_.size();
  s_.resize(nq);
  sp_.resize(nq);
  spp_.resize(nq);
  xi_.resize(nq);
  H_.resize(nq);
  for (std::size_t q = 0; q < nq; ++q) {
    const CablePoint pt = eval(grid_.nodes[q]);
    s_[q] = pt.s;
    sp_[q] = pt.sp;
    spp_[q] = pt.spp;
    xi_[q] = pt.xi;
    H_[q] = p.H0 * pt.xi;
  }
  length_ = 0.0;
  for (std::size_t q = 0; q < nq; ++q) length_ += grid_.weights[q] * xi_[q];
}

CableProfile solve_cable_shape(const BridgeParams& params, std::size_t n_nodes) {
  check_node_count(n_nodes);
  validate(params);
  const double L = params.L;
  const double a = 0.5 * params.M * params.g / params.H0;
  const double b = params.m * params.g / params.H0;

  const std::size_t N = kChebDegree;
  const Chebyshev cheb = chebyshev_lobatto(L, N);
  const Eigen::MatrixXd D2 = cheb.D * cheb.D;

  Eigen::VectorXd s(N + 1);
  for (std::size_t j = 0; j <= N; ++j) {
    const double x = cheb.x[j];
    s[j] = params.s0 + 0.5 * a * x * (x - L);
  }

  auto residual = [&](const Eigen::VectorXd& sv, Eigen::VectorXd& F, Eigen::MatrixXd* J) {
    const Eigen::VectorXd p = cheb.D * sv;
    const Eigen::VectorXd q = D2 * sv;
    F.resize(N + 1);
    if (J) *J = D2;
    for (std::size_t i = 1; i < N; ++i) {
      const double xi = std::sqrt(1.0 + p[i] * p[i]);
      F[i] = q[i] - (a + b * xi);
      if (J) J->row(i) -= (b * p[i] / xi) * cheb.D.row(i);
    }
    F[0] = sv[0] - params.s0;
    F[N] = sv[N] - params.s0;
    if (J) {
      J->row(0).setZero();
      J->row(N).setZero();
      (*J)(0, 0) = 1.0;
      (*J)(N, N) = 1.0;
    }
  };

  Eigen::VectorXd F;
  Eigen::MatrixXd J;
  bool converged = false;
  double last_update = 0.0;
  for (int it = 0; it < kMaxNewton; ++it) {
    residual(s, F, &J);
    const Eigen::VectorXd ds = J.partialPivLu().solve(-F);
    s += ds;
    last_update = ds.cwiseAbs().maxCoeff();
    if (last_update <= 1e-13 * params.s0) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    residual(s, F, nullptr);
    throw std::runtime_error("cable BVP did not converge: last update " +
                             std::to_string(last_update) + " m, residual " +
                             std::to_string(F.cwiseAbs().maxCoeff()));
  }
  s[0] = params.s0;
  s[N] = params.s0;

  CableProfile prof;
  prof.span_ = L;
  prof.H0_ = params.H0;
  prof.curv_a_ = a;
  prof.curv_b_ = b;
  prof.cheb_x_ = cheb.x;
  prof.cheb_w_ = cheb.w;
  prof.cheb_s_.assign(s.data(), s.data() + s.size());
  const Eigen::VectorXd p = cheb.D * s;
  const Eigen::VectorXd q = D2 * s;
  prof.cheb_sp_.assign(p.data(), p.data() + p.size());
  prof.cheb_spp_.assign(q.data(), q.data() + q.size());
  prof.grid_ = composite_gauss_legendre(0.0, L, n_nodes);
  prof.sample_grid(params);

  // collocation residual measured off the collocation points, with the
  // interpolated spectral second derivative
  double worst = 0.0;
  for (std::size_t k = 0; k < prof.grid_.size(); ++k) {
    const double spp_num = barycentric(prof.cheb_x_, prof.cheb_w_, prof.cheb_spp_, prof.grid_.nodes[k]);
    const double rhs = a + b * prof.xi_[k];
    worst = std::max(worst, std::abs(spp_num - rhs) / rhs);
  }
  prof.residual_ = worst;
  return prof;
}

CableProfile flat_cable_profile(const BridgeParams& params, std::size_t n_nodes) {
  check_node_count(n_nodes);
  CableProfile prof;
  prof.span_ = params.L;
  prof.H0_ = params.H0;
  prof.flat_ = true;
  prof.cheb_x_ = {0.0, params.L};
  prof.cheb_s_ = {params.s0, params.s0};
  prof.cheb_sp_ = {0.0, 0.0};
  prof.cheb_spp_ = {0.0, 0.0};
  prof.grid_ = composite_gauss_legendre(0.0, params.L, n_nodes);
  prof.sample_grid(params);
  return prof;
}

CablePoint profile_eval(const CableProfile& profile, double x) { return profile.eval(x); }

double cable_length(const CableProfile& profile) { return profile.computed_length(); }

void write_profile_csv(const CableProfile& profile, std::ostream& out) {
  out << "x,s,sp,spp,xi\n";
  out.precision(17);
  for (std::size_t q = 0; q < profile.nodes().size(); ++q) {
    out << profile.nodes()[q] << ',' << profile.s()[q] << ',' << profile.sp()[q] << ','
        << profile.spp()[q] << ',' << profile.xi()[q] << '\n';
  }
}

}  // namespace bridgelab
