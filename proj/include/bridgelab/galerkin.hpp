#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "bridgelab/cable.hpp"
#include "bridgelab/params.hpp"

namespace bridgelab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Sine-basis projection of the coupled deck/cable equations.
///
/// Basis e_k(x) = sin(k pi x / L), k = 1..n. With y = sum_k Y_k e_k the
/// longitudinal equations become massY * Y'' = F(Y), F = -grad V, where
///
///   V(Y) = 1/2 Y.bendY.Y + H0 Y.Q.Y + H0 C:(Y,Y,Y)
///        + a [ (v.Y)^2 + (v.Y)(Y.D.Y) ],          a = A E / Lc.
///
/// Gravity and the first-order cable terms cancel against the equilibrium
/// shape, so Y = 0 is the rest state. Divergence-form terms are projected
/// after one integration by parts; only s, s', s'' of the cable appear.
struct GalerkinSystem {
  int n = 0;
  BridgeParams params;
  std::vector<double> wavenumbers;  // k pi / L

  Mat massY;      // int (M + 2 m xi) e_j e_k
  Mat massTheta;  // int (M/3 + 2 m xi) e_j e_k
  Vec bendY;      // EI (k pi/L)^4 L/2, diagonal
  Vec stiffTorsion;  // (GK/ell^2) (k pi/L)^2 L/2, diagonal
  Mat Q;          // int e_j' e_k' / xi^2
  Mat D;          // int e_j' e_k' / xi^3
  std::vector<Mat> C;  // C[i](j,k) = int s' e_i' e_j' e_k' / xi^4, fully symmetric
  Vec v;          // int s'' e_k / xi^3

  Eigen::LLT<Mat> cholY;
  Eigen::LLT<Mat> cholTheta;

  double axial() const { return params.axial_coefficient(); }

  /// C contracted once: sum_i C[i] Y_i.
  Mat cubic_matrix(const Vec& Y) const;
  /// C contracted twice: (C:(Y,Y))_i = Y.C[i].Y.
  Vec cubic_vector(const Vec& Y) const;
};

/// Builds all coefficient tensors with the profile's quadrature.
/// Throws std::invalid_argument if the grid has fewer than 16 nodes per
/// half-wave of the highest basis function.
GalerkinSystem assemble(const BridgeParams& params, const CableProfile& profile, int n);

/// F(Y) = -grad V(Y).
Vec generalized_force(const GalerkinSystem& sys, const Vec& Y);

/// dF/dY = -Hess V(Y), symmetric.
Mat force_jacobian(const GalerkinSystem& sys, const Vec& Y);

/// massY^{-1} F(Y).
Vec acceleration(const GalerkinSystem& sys, const Vec& Y);

double potential_energy(const GalerkinSystem& sys, const Vec& Y);

struct Spectrum {
  Vec eigenvalues;   // ascending, 1/s^2
  Mat eigenvectors;  // columns, massY-normalized, dominant entry positive

  double period(int i) const;  // 2 pi / sqrt(lambda_i), i zero-based
  /// Column whose largest component (in mass-weighted norm) sits at basis index k-1.
  int index_of_dominant(int k) const;
};

/// Solves (bendY + 2 H0 Q + 2a v v^T) u = lambda massY u; returns the k_max
/// lowest pairs.
Spectrum linear_spectrum(const GalerkinSystem& sys, int k_max);

/// (EI k^4 pi^4 + 2 H0 k^2 pi^2 L^2) / ((M + 2m) L^4), horizontal cable.
double flat_cable_eigenvalue(const BridgeParams& params, int k);

/// Row-major dump "tensor,i,j,k,value" of every assembled coefficient.
void write_tensors_csv(const GalerkinSystem& sys, std::ostream& out);

}  // namespace bridgelab
