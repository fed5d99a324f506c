#include "bridgelab/quadrature.hpp"

#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

namespace bridgelab {

QuadratureGrid composite_gauss_legendre(double a, double b, std::size_t n_points) {
  if (n_points == 0 || n_points % kPanelOrder != 0) {
    throw std::invalid_argument("quadrature size must be a positive multiple of " +
                                std::to_string(kPanelOrder));
  }
  using Rule = boost::math::quadrature::gauss<double, kPanelOrder>;
  const auto& abscissa = Rule::abscissa();  // positive half, ascending
  const auto& weight = Rule::weights();
  const std::size_t half = abscissa.size();

  // reference rule on [-1, 1] in ascending order
  std::vector<double> ref_x, ref_w;
  for (std::size_t i = half; i-- > 0;) {
    ref_x.push_back(-abscissa[i]);
    ref_w.push_back(weight[i]);
  }
  for (std::size_t i = 0; i < half; ++i) {
    ref_x.push_back(abscissa[i]);
    ref_w.push_back(weight[i]);
  }

  QuadratureGrid grid;
  const std::size_t panels = n_points / kPanelOrder;
  const double h = (b - a) / static_cast<double>(panels);
  grid.nodes.reserve(n_points);
  grid.weights.reserve(n_points);
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + h * static_cast<double>(p);
    const double mid = lo + 0.5 * h;
    for (std::size_t i = 0; i < ref_x.size(); ++i) {
      grid.nodes.push_back(mid + 0.5 * h * ref_x[i]);
      grid.weights.push_back(0.5 * h * ref_w[i]);
    }
  }
  return grid;
}

}  // namespace bridgelab
