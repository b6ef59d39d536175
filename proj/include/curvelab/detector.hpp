#pragma once

// Locates where a curve's tangent strays from a reference field, classifies
// each excursion by its swept winding, and distills the result into an atomic
// concentration record.  A sweep driver audits the quantitative bounds that
// make the excursions collapse to atoms as epsilon decreases.

#include <cstddef>
#include <functional>
#include <vector>

#include "curvelab/geometry.hpp"
#include "curvelab/measures.hpp"

namespace curvelab {

// One maximal excursion of the tangent outside the rho-ball around the
// reference.  Ends are linear interpolations of the threshold crossing in the
// curve parameter; `b` exceeds the domain length when the excursion crosses
// the periodic seam, so b - a is always the true extent.
struct DeviationInterval {
  double a = 0.0;
  double b = 0.0;
  double raw_turn = 0.0;    // lifted relative angle change across the interval
  int winding = 0;          // nearest integer of raw_turn / 2*pi
  double confidence = 0.0;  // |raw_turn / 2*pi - winding|, small is reliable
};

struct DeviationSet {
  double rho = 0.0;
  double domain = 0.0;
  std::vector<DeviationInterval> intervals;  // sorted by start point

  double total_length() const;  // parameter measure of the union
};

// Compare node tangents against a fixed direction (open comparisons) or
// against a second curve sampled on the same grid (closed comparisons, node
// counts and domains must agree).  The deviation at a node is the Euclidean
// gap between unit tangents; intervals are the maximal runs where it exceeds
// rho, with the threshold crossings placed by linear interpolation.  rho must
// lie in (0, 1/2); winding classification is reliable below 1/8.
DeviationSet deviation_intervals(const PlanarCurve& curve_eps, Vec2 direction,
                                 double rho);
DeviationSet deviation_intervals(const PlanarCurve& curve_eps,
                                 const PlanarCurve& reference, double rho);

// Atomic record read off a deviation set: every interval with nonzero winding
// contributes an atom at its midpoint (wrapped into the domain) with the
// rounded winding as multiplicity.  `low_confidence` reports that some
// interval was classified outside the trusted regime: either its rounding
// residual exceeds 0.15, or a same-grid comparison produced |winding| > 1.
// Flagged intervals still contribute their rounded atom; nothing is dropped
// silently.
struct SingularityExtraction {
  DeviationSet deviations;
  AtomicIntegerMeasure omega;
  bool low_confidence = false;
};

SingularityExtraction extract_singularities(const PlanarCurve& curve_eps,
                                            Vec2 direction, double rho);
SingularityExtraction extract_singularities(const PlanarCurve& curve_eps,
                                            const PlanarCurve& reference,
                                            double rho);

// One sweep row.  Lengths and curvature mass are in arclength units; the two
// flat distances compare the curve's excess curvature measure against the
// extracted record and the extracted record against the prescribed target.
struct SweepRow {
  double epsilon = 0.0;
  double deviation_length = 0.0;   // arclength of the deviation set
  double curvature_mass = 0.0;     // integral of |kappa| ds over the set
  std::size_t interval_count = 0;  // intervals with nonzero winding
  double flat_extracted = 0.0;
  double flat_target = 0.0;
};

// Audit of a family of curves along a decreasing epsilon list.  c_bound is
// twice the supplied uniform energy bound; the two bound flags check
// deviation_length * rho^2 <= c_bound * sqrt(eps) and
// curvature_mass <= c_bound / rho on every row, which is how a uniform energy
// level forces the excursions to shrink and keeps their curvature mass tight.
// stable_from is the largest epsilon from which the extracted atom count
// equals the target's total index through the end of the sweep (NaN when the
// counts never settle).
struct SweepDiagnostics {
  double rho = 0.0;
  double c_bound = 0.0;
  bool measure_bound_ok = false;
  bool curvature_bound_ok = false;
  bool flats_decreasing = false;
  double stable_from = 0.0;
  std::vector<SweepRow> rows;
};

using CurveBuilder = std::function<PlanarCurve(double epsilon)>;

SweepDiagnostics sweep_diagnostics(const CurveBuilder& builder,
                                   const std::vector<double>& eps_list,
                                   Vec2 direction, double rho,
                                   const AtomicIntegerMeasure& target,
                                   double energy_bound);
SweepDiagnostics sweep_diagnostics(const CurveBuilder& builder,
                                   const std::vector<double>& eps_list,
                                   const PlanarCurve& reference, double rho,
                                   const AtomicIntegerMeasure& target,
                                   double energy_bound);

}  // namespace curvelab
