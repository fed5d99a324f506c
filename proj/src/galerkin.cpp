#include "bridgelab/galerkin.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

namespace bridgelab {

namespace {

constexpr double kPi = std::numbers::pi;

Mat linear_stiffness(const GalerkinSystem& sys) {
  Mat K = 2.0 * sys.params.H0 * sys.Q + 2.0 * sys.axial() * sys.v * sys.v.transpose();
  K.diagonal() += sys.bendY;
  return K;
}

}  // namespace

Mat GalerkinSystem::cubic_matrix(const Vec& Y) const {
  Mat out = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) out.noalias() += Y[i] * C[i];
  return out;
}

Vec GalerkinSystem::cubic_vector(const Vec& Y) const {
  Vec out(n);
  for (int i = 0; i < n; ++i) out[i] = Y.dot(C[i] * Y);
  return out;
}

GalerkinSystem assemble(const BridgeParams& params, const CableProfile& profile, int n) {
  if (n < 1) throw std::invalid_argument("truncation n must be >= 1");
  const auto& grid = profile.grid();
  const int nq = static_cast<int>(grid.size());
  if (nq < 16 * n) {
    throw std::invalid_argument("quadrature too coarse for n=" + std::to_string(n) + ": " +
                                std::to_string(nq) + " nodes, need " + std::to_string(16 * n));
  }

  GalerkinSystem sys;
  sys.n = n;
  sys.params = params;
  const double L = params.L;

  Mat e(n, nq), ep(n, nq);
  for (int k = 0; k < n; ++k) {
    const double kk = (k + 1) * kPi / L;
    sys.wavenumbers.push_back(kk);
    for (int q = 0; q < nq; ++q) {
      e(k, q) = std::sin(kk * grid.nodes[q]);
      ep(k, q) = kk * std::cos(kk * grid.nodes[q]);
    }
  }

  Vec wMassY(nq), wMassT(nq), wQ(nq), wD(nq), wC(nq), wv(nq);
  for (int q = 0; q < nq; ++q) {
    const double w = grid.weights[q];
    const double xi = profile.xi()[q];
    const double xi2 = xi * xi;
    wMassY[q] = w * (params.M + 2.0 * params.m * xi);
    wMassT[q] = w * (params.M / 3.0 + 2.0 * params.m * xi);
    wQ[q] = w / xi2;
    wD[q] = w / (xi2 * xi);
    wC[q] = w * profile.sp()[q] / (xi2 * xi2);
    wv[q] = w * profile.spp()[q] / (xi2 * xi);
  }

  sys.massY = e * wMassY.asDiagonal() * e.transpose();
  sys.massTheta = e * wMassT.asDiagonal() * e.transpose();
  sys.Q = ep * wQ.asDiagonal() * ep.transpose();
  sys.D = ep * wD.asDiagonal() * ep.transpose();
  sys.v = e * wv;
  // exact symmetry of the assembled matrices
  sys.massY = 0.5 * (sys.massY + sys.massY.transpose()).eval();
  sys.massTheta = 0.5 * (sys.massTheta + sys.massTheta.transpose()).eval();
  sys.Q = 0.5 * (sys.Q + sys.Q.transpose()).eval();
  sys.D = 0.5 * (sys.D + sys.D.transpose()).eval();

  sys.C.assign(n, Mat::Zero(n, n));
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      for (int k = j; k < n; ++k) {
        double sum = 0.0;
        for (int q = 0; q < nq; ++q) sum += wC[q] * ep(i, q) * ep(j, q) * ep(k, q);
        sys.C[i](j, k) = sys.C[i](k, j) = sum;
        sys.C[j](i, k) = sys.C[j](k, i) = sum;
        sys.C[k](i, j) = sys.C[k](j, i) = sum;
      }
    }
  }

  sys.bendY.resize(n);
  sys.stiffTorsion.resize(n);
  const double ell2 = params.ell * params.ell;
  for (int k = 0; k < n; ++k) {
    const double kk = sys.wavenumbers[k];
    sys.bendY[k] = params.EI * std::pow(kk, 4) * L / 2.0;
    sys.stiffTorsion[k] = (params.GK / ell2) * kk * kk * L / 2.0;
  }

  sys.cholY.compute(sys.massY);
  sys.cholTheta.compute(sys.massTheta);
  if (sys.cholY.info() != Eigen::Success || sys.cholTheta.info() != Eigen::Success) {
    throw std::runtime_error("mass matrix is not positive definite");
  }
  return sys;
}

Vec generalized_force(const GalerkinSystem& sys, const Vec& Y) {
  const double H0 = sys.params.H0;
  const double a = sys.axial();
  const double P = sys.v.dot(Y);
  const Vec DY = sys.D * Y;
  Vec F = -sys.bendY.cwiseProduct(Y);
  F.noalias() -= 2.0 * H0 * (sys.Q * Y);
  F.noalias() -= 3.0 * H0 * sys.cubic_vector(Y);
  F.noalias() -= a * Y.dot(DY) * sys.v;
  F.noalias() -= 2.0 * a * P * (sys.v + DY);
  return F;
}

Mat force_jacobian(const GalerkinSystem& sys, const Vec& Y) {
  const double H0 = sys.params.H0;
  const double a = sys.axial();
  const double P = sys.v.dot(Y);
  const Vec DY = sys.D * Y;
  Mat J = -2.0 * H0 * sys.Q - 6.0 * H0 * sys.cubic_matrix(Y);
  J.diagonal() -= sys.bendY;
  J.noalias() -= 2.0 * a * (sys.v * DY.transpose() + DY * sys.v.transpose());
  J.noalias() -= 2.0 * a * sys.v * sys.v.transpose();
  J.noalias() -= 2.0 * a * P * sys.D;
  return J;
}

Vec acceleration(const GalerkinSystem& sys, const Vec& Y) {
  return sys.cholY.solve(generalized_force(sys, Y));
}

double potential_energy(const GalerkinSystem& sys, const Vec& Y) {
  const double H0 = sys.params.H0;
  const double P = sys.v.dot(Y);
  const double YDY = Y.dot(sys.D * Y);
  return 0.5 * Y.dot(sys.bendY.cwiseProduct(Y)) + H0 * Y.dot(sys.Q * Y) +
         H0 * Y.dot(sys.cubic_vector(Y)) + sys.axial() * (P * P + P * YDY);
}

double Spectrum::period(int i) const { return 2.0 * kPi / std::sqrt(eigenvalues[i]); }

int Spectrum::index_of_dominant(int k) const {
  for (int c = 0; c < eigenvectors.cols(); ++c) {
    Eigen::Index arg = 0;
    eigenvectors.col(c).cwiseAbs().maxCoeff(&arg);
    if (arg == k - 1) return c;
  }
  throw std::out_of_range("no eigenvector dominated by basis function " + std::to_string(k));
}

Spectrum linear_spectrum(const GalerkinSystem& sys, int k_max) {
  if (k_max < 1 || k_max > sys.n) {
    throw std::invalid_argument("truncation too small: k_max=" + std::to_string(k_max) +
                                " exceeds n=" + std::to_string(sys.n));
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> solver(linear_stiffness(sys), sys.massY);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("generalized eigenproblem failed (mass not SPD?)");
  }
  Spectrum sp;
  sp.eigenvalues = solver.eigenvalues().head(k_max);
  sp.eigenvectors = solver.eigenvectors().leftCols(k_max);
  for (int c = 0; c < k_max; ++c) {
    Eigen::Index arg = 0;
    sp.eigenvectors.col(c).cwiseAbs().maxCoeff(&arg);
    if (sp.eigenvectors(arg, c) < 0) sp.eigenvectors.col(c) *= -1.0;
  }
  return sp;
}

double flat_cable_eigenvalue(const BridgeParams& p, int k) {
  const double kp = k * kPi;
  const double L2 = p.L * p.L;
  return (p.EI * std::pow(kp, 4) + 2.0 * p.H0 * kp * kp * L2) / ((p.M + 2.0 * p.m) * L2 * L2);
}

void write_tensors_csv(const GalerkinSystem& sys, std::ostream& out) {
  out << "tensor,i,j,k,value\n";
  out.precision(17);
  const int n = sys.n;
  auto mat = [&](const char* name, const Mat& A) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out << name << ',' << i + 1 << ',' << j + 1 << ",0," << A(i, j) << '\n';
  };
  mat("massY", sys.massY);
  mat("massTheta", sys.massTheta);
  mat("Q", sys.Q);
  mat("D", sys.D);
  for (int i = 0; i < n; ++i) {
    out << "bendY," << i + 1 << ",0,0," << sys.bendY[i] << '\n';
    out << "stiffTorsion," << i + 1 << ",0,0," << sys.stiffTorsion[i] << '\n';
    out << "v," << i + 1 << ",0,0," << sys.v[i] << '\n';
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        out << "C," << i + 1 << ',' << j + 1 << ',' << k + 1 << ',' << sys.C[i](j, k) << '\n';
}

}  // namespace bridgelab
