#include "spinent/thresholds.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spinent {

namespace {

double internal_energy_at(const SpectralDecomposition& dec, double temperature) {
  return internal_energy(ThermalEnsemble(dec, temperature));
}

}  // namespace

std::optional<ThresholdResult> threshold_temperature(
    const SpectralDecomposition& decomposition, BoundClass cls,
    const ThresholdOptions& opts) {
  if (!decomposition.source()) {
    throw std::invalid_argument(
        "threshold search needs a decomposition built from a ChainSpec");
  }
  const ChainSpec& spec = *decomposition.source();
  const double bound =
      bound_value(spec.model, cls, spec.n_sites, spec.coupling);

  // U(0) = E_0; no threshold exists unless the ground state beats the bound.
  if (!(decomposition.ground_energy() < bound)) return std::nullopt;

  double lo = 0.0;
  double hi = 1.0;
  while (internal_energy_at(decomposition, hi) <= bound) {
    hi *= 2.0;
    if (hi > 1e12) throw std::runtime_error("threshold bracket expansion failed");
  }
  // Invariant: U(lo) < bound < U(hi); U is monotone non-decreasing.
  while (hi - lo > opts.temperature_tol) {
    const double mid = 0.5 * (lo + hi);
    if (internal_energy_at(decomposition, mid) < bound) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double t = 0.5 * (lo + hi);
  return ThresholdResult{cls, t, lo, hi,
                         std::abs(internal_energy_at(decomposition, t) - bound)};
}

std::optional<ThresholdResult> threshold_temperature(const ChainSpec& spec,
                                                     BoundClass cls,
                                                     const ThresholdOptions& opts) {
  return threshold_temperature(diagonalize(build_hamiltonian(spec)), cls, opts);
}

double xy_limit_internal_energy(double temperature) {
  if (std::isnan(temperature) || temperature < 0.0) {
    throw std::invalid_argument("temperature must be non-negative");
  }
  constexpr double kPi = std::numbers::pi;
  if (temperature == 0.0) return -4.0 / kPi;  // filled negative half-band

  // Smooth periodic integrand over a full period: the trapezoid rule
  // converges spectrally; double the grid until the value settles.
  const auto integrand = [temperature](double k) {
    const double eps = -4.0 * std::cos(k);
    // Fermi factor, written to avoid overflow for large |eps|/T.
    const double x = eps / temperature;
    const double fermi = x > 0.0 ? std::exp(-x) / (1.0 + std::exp(-x))
                                 : 1.0 / (1.0 + std::exp(x));
    return eps * fermi;
  };

  int n = 64;
  double prev = 0.0;
  for (int i = 0; i < n; ++i) prev += integrand(-kPi + (2.0 * kPi * i) / n);
  prev *= (2.0 * kPi / n) / (2.0 * kPi);
  for (int refine = 0; refine < 16; ++refine) {
    n *= 2;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += integrand(-kPi + (2.0 * kPi * i) / n);
    const double cur = sum / n;
    if (std::abs(cur - prev) < 1e-10) return cur;
    prev = cur;
  }
  return prev;
}

double xy_limit_threshold(BoundClass cls) {
  if (cls != BoundClass::C3 && cls != BoundClass::R3) {
    throw std::invalid_argument(
        "thermodynamic-limit thresholds are defined for C3 and R3 only");
  }
  const double target = bound_coefficient(Model::XY, cls);

  double lo = 0.0;
  double hi = 1.0;
  while (xy_limit_internal_energy(hi) <= target) hi *= 2.0;
  while (hi - lo > 1e-8) {
    const double mid = 0.5 * (lo + hi);
    if (xy_limit_internal_energy(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<SweepRow> temperature_sweep(const SpectralDecomposition& decomposition,
                                        const std::vector<double>& grid) {
  if (!decomposition.source()) {
    throw std::invalid_argument(
        "temperature sweep needs a decomposition built from a ChainSpec");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] < grid[i - 1]) {
      throw std::invalid_argument("temperature grid must be sorted ascending");
    }
  }
  const ChainSpec& spec = *decomposition.source();
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (double t : grid) {
    const double u = internal_energy_at(decomposition, t);
    rows.push_back(SweepRow{t, u, classify(u, spec)});
  }
  return rows;
}

std::vector<SweepRow> temperature_sweep(const ChainSpec& spec,
                                        const std::vector<double>& grid) {
  return temperature_sweep(diagonalize(build_hamiltonian(spec)), grid);
}

}  // namespace spinent
