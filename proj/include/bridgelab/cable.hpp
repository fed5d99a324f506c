#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "bridgelab/params.hpp"
#include "bridgelab/quadrature.hpp"

namespace bridgelab {

/// Cable shape and derivatives at one abscissa.
struct CablePoint {
  double s;    ///< depth of the cable below the tower tops' reference (m)
  double sp;   ///< s'
  double spp;  ///< s''
  double xi;   ///< sqrt(1 + s'^2), local cable length
};

/// Rest shape of the sustaining cable.
///
/// Samples live on a composite Gauss-Legendre grid so downstream Galerkin
/// quadratures reuse them directly. Off-grid queries go through a Chebyshev
/// interpolant of s and s'.
class CableProfile {
 public:
  double span() const { return span_; }
  double H0() const { return H0_; }
  const QuadratureGrid& grid() const { return grid_; }

  const std::vector<double>& nodes() const { return grid_.nodes; }
  const std::vector<double>& s() const { return s_; }
  const std::vector<double>& sp() const { return sp_; }
  const std::vector<double>& spp() const { return spp_; }
  const std::vector<double>& xi() const { return xi_; }
  /// Tangential tension at rest, H0 * xi.
  const std::vector<double>& H() const { return H_; }

  /// Integral of xi over the span.
  double computed_length() const { return length_; }
  /// Largest relative ODE residual at the quadrature nodes (0 for fixtures).
  double max_residual() const { return residual_; }
  /// True for the flat-cable fixture (s' = s'' = 0, xi = 1).
  bool is_flat() const { return flat_; }

  /// Throws std::out_of_range outside [0, L].
  CablePoint eval(double x) const;

  friend CableProfile solve_cable_shape(const BridgeParams&, std::size_t);
  friend CableProfile flat_cable_profile(const BridgeParams&, std::size_t);

 private:
  void sample_grid(const BridgeParams& p);

  double span_ = 0;
  double H0_ = 0;
  bool flat_ = false;
  // equilibrium curvature parameters: s'' = (a + b xi)
  double curv_a_ = 0;
  double curv_b_ = 0;

  QuadratureGrid grid_;
  std::vector<double> s_, sp_, spp_, xi_, H_;
  double length_ = 0;
  double residual_ = 0;

  // Chebyshev-Lobatto representation on [0, L]
  std::vector<double> cheb_x_, cheb_w_, cheb_s_, cheb_sp_, cheb_spp_;
};

/// Solves H0 s'' = (M/2 + m xi) g, s(0) = s(L) = s0 by Chebyshev collocation
/// and Newton iteration seeded with the massless-cable parabola.
/// n_nodes is the size of the quadrature grid (>= 64, multiple of 16).
CableProfile solve_cable_shape(const BridgeParams& params, std::size_t n_nodes = 1024);

/// Horizontal-cable fixture: s = s0, s' = s'' = 0, xi = 1.
CableProfile flat_cable_profile(const BridgeParams& params, std::size_t n_nodes = 1024);

CablePoint profile_eval(const CableProfile& profile, double x);

/// High-order quadrature of xi over [0, L].
double cable_length(const CableProfile& profile);

/// CSV with header x,s,sp,spp,xi on the quadrature nodes.
void write_profile_csv(const CableProfile& profile, std::ostream& out);

}  // namespace bridgelab
