#pragma once

#include <cstddef>
#include <vector>

namespace bridgelab {

/// Composite Gauss-Legendre rule on [a, b]: equal panels, 16 points each.
struct QuadratureGrid {
  std::vector<double> nodes;    // strictly increasing
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }

  template <class F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t q = 0; q < nodes.size(); ++q) sum += weights[q] * f(nodes[q]);
    return sum;
  }
};

inline constexpr std::size_t kPanelOrder = 16;

/// n_points must be a positive multiple of kPanelOrder.
QuadratureGrid composite_gauss_legendre(double a, double b, std::size_t n_points);

}  // namespace bridgelab
