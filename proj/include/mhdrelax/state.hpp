#pragma once

#include <stdexcept>

#include "mhdrelax/field.hpp"
#include "mhdrelax/operators.hpp"

namespace mhdrelax {

/// Time-stamped magnetic field with the physical parameters of the run.
/// eta == 0 is allowed (non-resistive exploratory mode).
struct FlowState {
  double t = 0.0;
  VectorField B;
  double nu = 1.0;
  double eta = 0.0;

  FlowState(double time, VectorField field, double viscosity, double resistivity)
      : t(time), B(std::move(field)), nu(viscosity), eta(resistivity) {
    if (!(nu > 0.0)) throw std::invalid_argument("viscosity must be positive");
    if (!(eta >= 0.0)) throw std::invalid_argument("resistivity must be nonnegative");
    if (!is_divergence_free(B)) throw std::invalid_argument("magnetic field is not divergence-free");
    B.divergence_free = true;
  }
};

}  // namespace mhdrelax
