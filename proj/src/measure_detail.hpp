#pragma once

// Shared nodal lumping for the flat-norm LP and the transport oracle: both
// must see the identical discrete measure or the cross-check is meaningless.

#include <cstddef>
#include <vector>

#include "curvelab/measures.hpp"

namespace curvelab::detail {

struct NodalMasses {
  double domain = 0.0;
  std::vector<double> pos;   // strictly increasing, within [0, D]
  std::vector<double> mass;  // same length as pos
};

// Trapezoid-lump the density onto its grid (rebinned down to at most
// max_density_nodes nodes, mass preserved), then merge in the atoms at
// their exact positions.  Guarantees nodes at 0 and D.
NodalMasses lump_measure(const IntervalMeasure& mu, std::size_t max_density_nodes);

}  // namespace curvelab::detail
