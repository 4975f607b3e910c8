#pragma once
// Energy-bound constants per model and entanglement class, and the
// translation of a measured internal energy into a per-class verdict.

#include <array>
#include <string>

#include "spinent/hilbert.hpp"

namespace spinent {

// R2: some neighboring pair has an entangled reduced state.
// C2: the state is not 1-producible (contains 2-party entanglement).
// C3: the state is not 2-producible (contains 3-party entanglement).
// R3: some neighboring triple has a genuine tripartite entangled reduced state.
enum class BoundClass { R2, C2, C3, R3 };

inline constexpr std::array<BoundClass, 4> kAllBoundClasses = {
    BoundClass::R2, BoundClass::C2, BoundClass::C3, BoundClass::R3};

std::string class_name(BoundClass cls);

// Coefficient c with bound = c * J * N.
//   Heisenberg: c_R2 = c_C2 = -1, c_C3 = -3/2, c_R3 = -(1+sqrt5)/2
//   XY:         c_R2 = c_C2 = -1, c_C3 = -9/8, c_R3 = -(1+sqrt2)/2
double bound_coefficient(Model model, BoundClass cls);
double bound_value(Model model, BoundClass cls, int n_sites, double coupling);

struct ClassVerdict {
  bool fired;      // energy strictly below the class bound
  double margin;   // (bound - energy) in units of J*N, positive when fired
};

// Detection outcome for every class; the bound ordering guarantees
// R3 fired => C3 fired => C2 fired.
struct EntanglementVerdict {
  double energy;
  std::array<ClassVerdict, 4> verdicts;  // indexed in kAllBoundClasses order

  const ClassVerdict& operator[](BoundClass cls) const {
    return verdicts[static_cast<int>(cls)];
  }
};

// Strict-inequality classification of a bare energy; energies exactly at a
// bound do not fire (the saturating states are separable / 2-producible).
EntanglementVerdict classify(double energy, const ChainSpec& spec);

// Largest |<W_ijk>| reachable by biseparable triples:
// 1 + sqrt(5) for Heisenberg, 1 + sqrt(2) for XY.
double biseparable_witness_bound(Model model);

// True iff |value| strictly exceeds the biseparable bound, certifying
// genuine tripartite entanglement on the triple.
bool witness_verdict(double value, Model model);

}  // namespace spinent
