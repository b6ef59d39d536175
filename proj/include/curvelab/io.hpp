#pragma once

// File formats shared by the command-line tools: curves and measures as
// small JSON documents, energy reports as JSON objects or CSV rows, and
// relaxation trajectories as JSON lines.  CSV numbers are printed at 17
// significant digits, so rerunning a configuration reproduces its tables
// byte for byte.

#include <string>
#include <vector>

#include "curvelab/energies.hpp"
#include "curvelab/geometry.hpp"
#include "curvelab/measures.hpp"
#include "curvelab/relaxer.hpp"

namespace curvelab {

// {"param":"arclength"|"constant_speed","L":number,"closed":bool,
//  "points":[[x,y],...]}.  Closed curves store their duplicated seam node.
// The reader trusts the declared parametrization: "L" is the parameter
// domain, required for constant speed and defaulting to the chordal length
// for arclength curves; the constant-speed factor is recomputed from the
// chords.  Structural validation matches the library's own.
std::string write_curve_json(const PlanarCurve& curve);
PlanarCurve read_curve_json(const std::string& text);

// {"D":number,"density":[...]|null,"atoms":[[x,w],...]} with nodal density
// values on the uniform grid over [0, D].  The integer-multiplicity variant
// is written in the same format through its 2*pi-weighted atoms.
std::string write_measure_json(const IntervalMeasure& mu);
std::string write_measure_json(const AtomicIntegerMeasure& omega);
IntervalMeasure read_measure_json(const std::string& text);

// Every report component; block terms are null unless present.
std::string write_report_json(const EnergyReport& report);

inline constexpr const char* kReportCsvHeader =
    "epsilon,curvature_term,excess_term,total,mm_total,mm_lower_bound";
std::string report_csv_row(const EnergyReport& report);

// printf %.17g: enough digits to reproduce the double exactly.
std::string csv_number(double value);
// Comma-joined %.17g fields with a trailing newline.
std::string csv_line(const std::vector<double>& values);

// One JSON object per state: step count, penalty weights, grid size, length,
// energy split, gradient norm, constraint residuals, convergence flag.
std::string trajectory_jsonl(const std::vector<RelaxState>& trajectory);

}  // namespace curvelab
