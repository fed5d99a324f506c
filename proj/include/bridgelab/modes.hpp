#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bridgelab/dynamics.hpp"
#include "bridgelab/galerkin.hpp"

namespace bridgelab {

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Time-symmetric periodic orbit of the longitudinal system, starting at
/// rest from Y0. T is the fundamental period of the orbit.
struct PeriodicMode {
  int k = 0;
  int n = 0;
  double T = 0;
  Vec Y0;
  double energy = 0;    // J
  double delta = 0;     // max - min of y(x, t) over one period (m)
  double residual = 0;  // scaled full-period closure error, relative to |Y0|
  int iterations = 0;
};

struct Branch {
  int k = 0;
  int n = 0;
  /// Fundamental periods are multiplied by this when reported; some
  /// reference tables list an orbit over several fundamental oscillations.
  int windings = 1;
  std::string params_fingerprint;
  std::vector<PeriodicMode> modes;  // strictly increasing T
  std::string stop_reason;
  /// Period intervals skipped at internal resonances (see continue_branch).
  std::vector<std::pair<double, double>> gaps;
};

struct NewtonOptions {
  double tol = kDefaultTol;        // integrator tolerance
  int max_iterations = 25;
  double residual_tol = 1e-10;     // |V(T/2)| T / (2 pi |Y0|)
  double closure_tol = 1e-9;       // full-period closure relative to |Y0|
  bool compute_metrics = true;
};

struct Seed {
  Vec Y0;
  double T_guess = 0;
};

/// Y0 = alpha * (mass-normalized eigenvector dominated by e_k), T = 2 pi / sqrt(lambda).
Seed seed_linear(const GalerkinSystem& sys, int k, double alpha);

/// Newton on V(T/2) = 0 over Y0 at fixed T, with the Jacobian from the
/// variational equations. Verifies full-period closure at a 2x tighter
/// tolerance. Throws ConvergenceError on divergence, rank deficiency,
/// collapse to the rest state or failed closure.
PeriodicMode newton_mode(const GalerkinSystem& sys, int k, double T, const Vec& guess,
                         const NewtonOptions& opts = {});

/// Classical Newton on the fixed-point problem Phi_T(Y0, V0) = (Y0, V0)
/// in all 2n unknowns. The phase direction makes the Jacobian singular, so
/// each step is a minimum-norm least-squares solve. Returns the converged
/// (Y0, V0); V0 is generally nonzero.
std::pair<Vec, Vec> newton_fixed_point(const GalerkinSystem& sys, double T, const Vec& Y0,
                                       const Vec& V0, const NewtonOptions& opts = {});

/// Small-amplitude mode at prescribed linear amplitude: the projection of Y0
/// on the k-th eigenvector is held at alpha, T is solved for.
PeriodicMode amplitude_mode(const GalerkinSystem& sys, int k, double alpha,
                            const NewtonOptions& opts = {});

struct ContinuationOptions {
  double dT0 = 0;             // <= 0: 1% of the linear period
  double dT_min = 1e-4;       // s
  double seed_energy = 1e4;   // J
  double max_energy_step = 2e6;  // J between consecutive points
  double energy_stop = 0;     // stop once a point exceeds this (J); <= 0: off
  int max_points = 2000;
  int max_resonance_jumps = 3;
  NewtonOptions newton;
};

/// Continues the k-th branch in T from the near-linear mode until T_max,
/// the energy stop, or step underflow. Never throws on numerical failure;
/// the reason is in stop_reason.
///
/// A point is accepted when its k-th component dominates and both energy
/// and amplitude grow, with the energy increment at most three energy steps.
/// When the step collapses at an internal resonance (another component
/// drains the k-th one), the branch is restarted beyond it: the predictor is
/// extrapolated from points before the resonance with the resonant component
/// reset to zero. Points of the approach that would break monotonicity are
/// dropped and the skipped period interval is recorded in `gaps`.
Branch continue_branch(const GalerkinSystem& sys, int k, double T_max,
                       const ContinuationOptions& opts = {});

struct ModeMetrics {
  double energy_MJ = 0;
  double delta = 0;
  int dominant = 0;          // 1-based index of the largest Fourier component, 0 if none
  double dominance_ratio = 0;  // largest / second largest component amplitude
  bool symmetric = true;     // even components vanish (x-symmetry about midspan)
  double y1_max = 0;         // max over t of Y_1(t)
  double y1_min = 0;
  std::vector<double> amplitudes;  // max_t |Y_j(t)|
};

/// Samples one period at 256 instants and the deck at 512 abscissae.
ModeMetrics mode_metrics(const GalerkinSystem& sys, const PeriodicMode& mode,
                         double tol = kDefaultTol);

/// Deck profile y(x, t=0) at `points` abscissae, CSV "x,y".
void write_snapshot_csv(const GalerkinSystem& sys, const PeriodicMode& mode, int points,
                        std::ostream& out);

/// Fourier components over one period, CSV "t,y_1..y_n".
void write_components_csv(const GalerkinSystem& sys, const PeriodicMode& mode, int samples,
                          std::ostream& out, double tol = kDefaultTol);

/// JSON: {params_fingerprint, k, n, windings, stop_reason,
///        points: [{T, Y0[], energy_J, delta_m}]}.
std::string branch_to_json(const Branch& branch);

/// Throws std::runtime_error on malformed text or when the stored
/// fingerprint differs from expected_fingerprint (if given).
Branch branch_from_json(const std::string& text,
                        const std::optional<std::string>& expected_fingerprint = std::nullopt);

}  // namespace bridgelab
