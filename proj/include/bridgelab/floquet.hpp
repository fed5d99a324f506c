#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bridgelab/cable.hpp"
#include "bridgelab/galerkin.hpp"
#include "bridgelab/modes.hpp"

namespace bridgelab {

/// Torsional perturbations around a longitudinal mode: W'' + Xi(t) W = 0.
///
/// K(t) is the projected torsional stiffness with the deck displacement of
/// the mode frozen in; the consistent torsional mass is removed by the
/// congruence Xi = L^-1 K L^-T (massTheta = L L^T), which keeps Xi
/// symmetric and leaves the multipliers unchanged.
///
/// The mode is cached at uniform instants over one period (positions,
/// velocities, accelerations) and read back with quintic Hermite
/// interpolation, so Xi can be evaluated at any t.
class TorsionalSystem {
 public:
  TorsionalSystem(const GalerkinSystem& sys, const PeriodicMode& mode, int nu,
                  int cache_samples = 512, double tol = kDefaultTol);

  int nu() const { return nu_; }
  double period() const { return T_; }

  /// Mode coefficients Y(t), t taken modulo the period.
  Vec mode_position(double t) const;
  /// Projected torsional stiffness for a given deck state Y.
  Mat stiffness(const Vec& Y) const;
  /// Symmetric coefficient matrix at time t.
  Mat xi(double t) const;
  /// Mass-reduced coefficient matrix for an arbitrary deck state.
  Mat xi_for(const Vec& Y) const;

 private:
  int n_ = 0;
  int nu_ = 0;
  double T_ = 0;
  double H0_ = 0;
  double axial_ = 0;
  Mat K0_;      // nu x nu, deck-independent stiffness
  Mat D_;       // nu x nu block
  Mat Dfull_;   // nu x n rows of D
  Vec v_;       // full length n
  std::vector<Mat> C_;  // n slices, nu x nu blocks
  Mat Linv_;    // inverse Cholesky factor of massTheta block

  std::vector<Vec> cacheY_, cacheV_, cacheA_;  // samples at t_i = i T / N, i = 0..N
};

/// Build the torsional linearization; nu <= n of the mode's system.
TorsionalSystem assemble_torsional(const GalerkinSystem& sys, const PeriodicMode& mode, int nu,
                                   int cache_samples = 512, double tol = kDefaultTol);

struct MonodromyResult {
  Mat transition;  // 2nu x 2nu
  std::vector<std::complex<double>> multipliers;
  double period = 0;
  double expansion_rate = 1;
  double determinant = 0;
  /// max_i min_j |lambda_i - 1/lambda_j| / |lambda_i|
  double reciprocal_error = 0;
};

/// Integrates Z' = [[0, I], [-Xi(t), 0]] Z from Z(0) = I over one period.
MonodromyResult monodromy(const TorsionalSystem& torsys, double tol = kDefaultTol);

/// max_j |lambda_j|^(1/T).
double expansion_rate(std::span<const std::complex<double>> multipliers, double T);

/// Zero-displacement diagonal coefficients of the two lowest torsional
/// components, from the explicit quadrature formulas.
struct GammaCoefficients {
  double gamma1 = 0;
  double gamma2 = 0;
  double norm1 = 0;  // ell^2 int (M/3 + 2 m xi) sin^2(pi x/L)
  double norm2 = 0;  // same with sin(2 pi x / L)
};
GammaCoefficients gamma_coefficients(const BridgeParams& params, const CableProfile& profile);

enum class Verdict { Stable, Inconclusive };

struct ZhukovskiiResult {
  Verdict verdict = Verdict::Inconclusive;
  int band = -1;  // n with n^2 pi^2/T^2 <= p <= (n+1)^2 pi^2/T^2, -1 if none
};

/// Sufficient stability test for z'' + p(t) z = 0 from samples of p over
/// one period T. Throws std::invalid_argument on non-finite samples.
ZhukovskiiResult zhukovskii_test(std::span<const double> p, double T);

struct Nu2Result {
  Verdict verdict = Verdict::Inconclusive;
  ZhukovskiiResult first, second;  // the two Hill families
  /// Both families stable inside the same band. Families in different
  /// bands can still meet a combination resonance through chi_12
  /// (sqrt(chi_11) + sqrt(chi_22) near a multiple of 2 pi / T), which the
  /// comparison with scalar equations does not exclude.
  bool common_zone = false;
};

/// Diagonal-plus-residual criterion for nu = 2: both families
/// chi_kk(t) + alpha chi_12(t), alpha in [-1, 1], must pass Zhukovskii.
Nu2Result nu2_sufficient_stability(const TorsionalSystem& torsys, int samples = 512);

struct StabilityPoint {
  double T = 0;
  double energy = 0;
  double delta = 0;
  double expansion_rate = 1;
  double determinant = 0;
  double reciprocal_error = 0;
  std::vector<double> moduli;  // sorted descending
};

/// Monodromy of a single mode with nu torsional components (nu <= 0: n).
StabilityPoint evaluate_stability(const GalerkinSystem& sys, const PeriodicMode& mode, int nu = 0,
                                  double tol = kDefaultTol);

inline constexpr double kInstabilityTol = 1e-4;

struct Threshold {
  bool found = false;
  std::string message;
  int k = 0;
  double energy = 0;  // J
  double T = 0;       // fundamental period (s)
  double delta = 0;   // m
  PeriodicMode below, above;
  double er_below = 1, er_above = 1;
};

enum class ThresholdRule {
  /// Start of the unstable run that extends to the end of the branch:
  /// the energy above which stability is lost for good. Isolated
  /// instability tongues below it are skipped.
  Persistent,
  /// First point on the branch with ER above the limit.
  FirstCrossing,
};

/// Crossing of ER = 1 + tol_instab along the branch (selected by `rule`),
/// refined by bisection in T (re-converging the mode at each midpoint)
/// until the energy bracket is below 1% relative. `rates` may carry
/// precomputed ER values for the branch points.
Threshold find_threshold(const GalerkinSystem& sys, const Branch& branch, int nu = 0,
                         double tol_instab = kInstabilityTol,
                         std::optional<std::vector<double>> rates = std::nullopt,
                         ThresholdRule rule = ThresholdRule::Persistent);

/// Locates the mode with the given energy by bisection in T on the branch
/// (within rel_tol), re-converging with Newton. Empty if out of range.
std::optional<PeriodicMode> mode_at_energy(const GalerkinSystem& sys, const Branch& branch,
                                           double energy, double rel_tol = 0.005);

}  // namespace bridgelab
