#pragma once

#include <array>
#include <limits>

// Published results for the Tacoma Narrows configuration (default_tnb()),
// used by the report command and the acceptance checks.

namespace bridgelab::reference {

inline constexpr int kBranches = 10;

/// Small-energy period of each branch (s), k = 1..10.
inline constexpr std::array<double, kBranches> kLinearPeriods = {10.95, 7.67, 5.42, 3.75, 2.9,
                                                                 2.41,  2.02, 1.72, 1.5,  1.32};

struct ThresholdRow {
  int k;
  double energy_MJ;
  double period;  // s, as tabulated (branch 1 spans three oscillations)
  double delta;   // m
};

inline constexpr std::array<ThresholdRow, kBranches> kThresholds = {{
    {1, 38.0, 11.22, 5.8},
    {2, 51.8, 8.46, 10.0},
    {3, 15.5, 5.48, 6.5},
    {4, 53.7, 3.97, 7.8},
    {5, 74.1, 3.14, 6.9},
    {6, 56.6, 2.53, 4.5},
    {7, 91.4, 2.18, 5.2},
    {8, 95.8, 1.86, 4.6},
    {9, 87.1, 1.59, 3.8},
    {10, 82.1, 1.38, 3.3},
}};

/// Energies of the expansion-rate grid, in the tabulated unit (MJ).
inline constexpr std::array<double, 7> kGridEnergies = {2, 4, 6, 8, 10, 12, 14};

inline constexpr double kNA = std::numeric_limits<double>::quiet_NaN();

/// Expansion rates on the grid; NaN where the branch was not available.
inline constexpr std::array<std::array<double, 7>, kBranches> kExpansionRates = {{
    {1., 1., 1.0662, kNA, kNA, kNA, kNA},
    {1., 1.00365, 1.03904, kNA, kNA, kNA, kNA},
    {1.00614, 1.02071, 1.02961, 1.08141, 1.20949, kNA, kNA},
    {1., 1., 1.01287, kNA, kNA, kNA, kNA},
    {1., 1., 1.00001, 1.01521, 1.50051, kNA, kNA},
    {1., 1., 1., 1.09919, 1.16332, kNA, kNA},
    {1., 1., 1., 1., 1.09852, 1.58567, 1.97158},
    {1., 1., 1., 1., 1.00112, 1.66552, kNA},
    {1., 1., 1.01322, 1.01353, 1.24852, 1.76429, 2.12488},
    {1., 1., 1., 1., 1.25447, 1.73715, 2.05263},
}};

struct RateSpot {
  int k;
  double energy_MJ;
  double rate;
};

/// Clearly supercritical grid entries checked quantitatively.
inline constexpr std::array<RateSpot, 4> kRateSpots = {{
    {5, 10, 1.50051},
    {7, 14, 1.97158},
    {9, 12, 1.76429},
    {10, 14, 2.05263},
}};

inline constexpr double kPeriodTol = 0.02;
inline constexpr double kThresholdEnergyTol = 0.15;
inline constexpr double kThresholdPeriodTol = 0.05;
inline constexpr double kThresholdDeltaTol = 0.15;
inline constexpr double kRateTol = 0.10;  // on (ER - 1)

/// Fundamental oscillations per tabulated period. The first branch is
/// listed with three oscillations (10.95 s = 3 x 3.65 s).
constexpr int windings(int k) { return k == 1 ? 3 : 1; }

/// Galerkin truncation used for each branch.
constexpr int default_truncation(int k) { return k <= 6 ? 10 : 16; }

/// Continuation stops once a branch exceeds this energy (J).
inline constexpr double kBranchEnergyStop = 150e6;

}  // namespace bridgelab::reference
