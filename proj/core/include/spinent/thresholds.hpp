#pragma once
// Threshold temperatures T_X solving U(T_X) = bound_X for finite rings, the
// analytic free-fermion internal energy of the XY chain in the
// thermodynamic limit, and temperature sweeps with verdicts.

#include <optional>
#include <vector>

#include "spinent/thermo.hpp"
#include "spinent/witness.hpp"

namespace spinent {

struct ThresholdResult {
  BoundClass cls;
  double temperature;   // J/k_B
  double bracket_lo;    // U(bracket_lo) < bound < U(bracket_hi)
  double bracket_hi;
  double residual;      // |U(T) - bound| in J
};

struct ThresholdOptions {
  double temperature_tol = 1e-10;
};

// Bisection on the monotone U(T). Returns nullopt when the ground energy
// does not beat the bound (no threshold exists); that is an outcome, not an
// error. The decomposition overload reuses a shared spectrum and requires a
// decomposition carrying its source ChainSpec.
std::optional<ThresholdResult> threshold_temperature(
    const ChainSpec& spec, BoundClass cls, const ThresholdOptions& opts = {});
std::optional<ThresholdResult> threshold_temperature(
    const SpectralDecomposition& decomposition, BoundClass cls,
    const ThresholdOptions& opts = {});

// Thermodynamic-limit internal energy per site of the isotropic XY ring,
// u(T) = (1/2pi) Integral eps(k) / (1 + exp(eps(k)/T)) dk over [-pi, pi]
// with eps(k) = -4 J cos k, normalized so that u(0) = -4J/pi. J = 1.
double xy_limit_internal_energy(double temperature);

// Root of u(T) = c for cls in {C3, R3}; bisection to 1e-8.
double xy_limit_threshold(BoundClass cls);

struct SweepRow {
  double temperature;
  double energy;                 // U(T) in J
  EntanglementVerdict verdict;
};

// One row per grid point (grid must be sorted ascending).
std::vector<SweepRow> temperature_sweep(const ChainSpec& spec,
                                        const std::vector<double>& grid);
std::vector<SweepRow> temperature_sweep(const SpectralDecomposition& decomposition,
                                        const std::vector<double>& grid);

}  // namespace spinent
