#include "spinent/witness.hpp"

#include <cmath>
#include <stdexcept>

namespace spinent {

std::string class_name(BoundClass cls) {
  switch (cls) {
    case BoundClass::R2: return "R2";
    case BoundClass::C2: return "C2";
    case BoundClass::C3: return "C3";
    case BoundClass::R3: return "R3";
  }
  throw std::invalid_argument("unknown bound class");
}

double bound_coefficient(Model model, BoundClass cls) {
  if (model == Model::Heisenberg) {
    switch (cls) {
      case BoundClass::R2: return -1.0;
      case BoundClass::C2: return -1.0;
      case BoundClass::C3: return -1.5;
      case BoundClass::R3: return -(1.0 + std::sqrt(5.0)) / 2.0;
    }
  } else {
    switch (cls) {
      case BoundClass::R2: return -1.0;
      case BoundClass::C2: return -1.0;
      case BoundClass::C3: return -9.0 / 8.0;
      case BoundClass::R3: return -(1.0 + std::sqrt(2.0)) / 2.0;
    }
  }
  throw std::invalid_argument("unknown bound class");
}

double bound_value(Model model, BoundClass cls, int n_sites, double coupling) {
  return bound_coefficient(model, cls) * coupling * n_sites;
}

EntanglementVerdict classify(double energy, const ChainSpec& spec) {
  spec.validate();
  EntanglementVerdict verdict;
  verdict.energy = energy;
  const double scale = spec.coupling * spec.n_sites;
  for (BoundClass cls : kAllBoundClasses) {
    const double bound = bound_value(spec.model, cls, spec.n_sites, spec.coupling);
    verdict.verdicts[static_cast<int>(cls)] =
        ClassVerdict{energy < bound, (bound - energy) / scale};
  }
  return verdict;
}

double biseparable_witness_bound(Model model) {
  return model == Model::Heisenberg ? 1.0 + std::sqrt(5.0) : 1.0 + std::sqrt(2.0);
}

bool witness_verdict(double value, Model model) {
  return std::abs(value) > biseparable_witness_bound(model);
}

}  // namespace spinent
