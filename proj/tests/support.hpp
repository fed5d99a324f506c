#pragma once

#include <cmath>
#include <map>

#include "bridgelab/cable.hpp"
#include "bridgelab/galerkin.hpp"
#include "bridgelab/modes.hpp"
#include "bridgelab/params.hpp"

namespace testing {

inline const bridgelab::CableProfile& tnb_profile() {
  static const bridgelab::CableProfile profile =
      bridgelab::solve_cable_shape(bridgelab::default_tnb());
  return profile;
}

inline const bridgelab::GalerkinSystem& tnb_system(int n) {
  static std::map<int, bridgelab::GalerkinSystem> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    it = cache.emplace(n, bridgelab::assemble(bridgelab::default_tnb(), tnb_profile(), n)).first;
  }
  return it->second;
}

/// Converged mode of branch k with roughly the requested energy (J).
inline bridgelab::PeriodicMode small_mode(int k, int n, double energy = 1e4) {
  const auto& sys = tnb_system(n);
  const auto sp = bridgelab::linear_spectrum(sys, n);
  const double lambda = sp.eigenvalues[sp.index_of_dominant(k)];
  return bridgelab::amplitude_mode(sys, k, std::sqrt(2 * energy / lambda));
}

}  // namespace testing
