#pragma once

#include "stablab/grid.hpp"

namespace stablab {

// Continuous phase (radians) of a nodeless complex field. The unwrap is
// anchored at the maximum-amplitude sample, which keeps its principal
// argument; adjacent samples then differ by less than pi. amplitude_floor < 0
// selects the default floor 1e-10 * max|psi|; samples below the floor raise
// AmplitudeFloorError with the node location.
RealField unwrap_phase(const ComplexField& psi, double amplitude_floor = -1.0);

}  // namespace stablab
