#include "curvelab/io.hpp"

#include <cstdio>
#include <utility>

#include <json.hpp>

#include "curvelab/errors.hpp"

namespace curvelab {
namespace {

using Json = nlohmann::ordered_json;

Json parse_document(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(e.what());
  }
}

const Json& require_field(const Json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key))
    throw ParseError(std::string("missing field \"") + key + "\"");
  return doc.at(key);
}

double number_field(const Json& doc, const char* key) {
  const Json& value = require_field(doc, key);
  if (!value.is_number())
    throw ParseError(std::string("field \"") + key + "\" must be a number");
  return value.get<double>();
}

bool bool_field(const Json& doc, const char* key) {
  const Json& value = require_field(doc, key);
  if (!value.is_boolean())
    throw ParseError(std::string("field \"") + key + "\" must be a boolean");
  return value.get<bool>();
}

// [x, y] pairs of finite numbers; anything else is malformed.
std::vector<Vec2> point_list(const Json& value) {
  if (!value.is_array()) throw ParseError("\"points\" must be an array");
  std::vector<Vec2> points;
  points.reserve(value.size());
  for (const Json& entry : value) {
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
        !entry[1].is_number())
      throw ParseError("each point must be a pair of numbers");
    points.push_back({entry[0].get<double>(), entry[1].get<double>()});
  }
  return points;
}

}  // namespace

std::string write_curve_json(const PlanarCurve& curve) {
  validate_curve(curve);
  Json doc;
  doc["param"] =
      curve.param == ParamKind::arclength ? "arclength" : "constant_speed";
  doc["L"] = curve.domain;
  doc["closed"] = curve.closed;
  Json points = Json::array();
  for (const Vec2& p : curve.samples) points.push_back(Json::array({p.x, p.y}));
  doc["points"] = std::move(points);
  return doc.dump() + "\n";
}

PlanarCurve read_curve_json(const std::string& text) {
  const Json doc = parse_document(text);
  if (!doc.is_object()) throw ParseError("curve document must be a JSON object");

  PlanarCurve curve;
  const Json& kind = require_field(doc, "param");
  if (kind == "arclength")
    curve.param = ParamKind::arclength;
  else if (kind == "constant_speed")
    curve.param = ParamKind::constant_speed;
  else
    throw ParseError("param must be \"arclength\" or \"constant_speed\"");

  curve.closed = bool_field(doc, "closed");
  curve.samples = point_list(require_field(doc, "points"));

  const bool has_L = doc.contains("L") && !doc.at("L").is_null();
  const double chordal = polyline_length(curve.samples);
  if (curve.param == ParamKind::arclength) {
    curve.domain = has_L ? number_field(doc, "L") : chordal;
    curve.speed = 1.0;
  } else {
    if (!has_L) throw ParseError("constant_speed curves require \"L\"");
    curve.domain = number_field(doc, "L");
    if (!(curve.domain > 0.0)) throw ParseError("\"L\" must be positive");
    curve.speed = chordal / curve.domain;
  }
  validate_curve(curve);
  return curve;
}

std::string write_measure_json(const IntervalMeasure& mu) {
  validate_measure(mu);
  Json doc;
  doc["D"] = mu.domain;
  if (mu.density.empty())
    doc["density"] = nullptr;
  else
    doc["density"] = mu.density;
  Json atoms = Json::array();
  for (const Atom& a : mu.atoms)
    atoms.push_back(Json::array({a.position, a.weight}));
  doc["atoms"] = std::move(atoms);
  return doc.dump() + "\n";
}

std::string write_measure_json(const AtomicIntegerMeasure& omega) {
  validate_atomic(omega);
  return write_measure_json(omega.to_measure());
}

IntervalMeasure read_measure_json(const std::string& text) {
  const Json doc = parse_document(text);
  if (!doc.is_object())
    throw ParseError("measure document must be a JSON object");

  IntervalMeasure mu;
  mu.domain = number_field(doc, "D");

  const Json& density = require_field(doc, "density");
  if (density.is_array()) {
    mu.density.reserve(density.size());
    for (const Json& v : density) {
      if (!v.is_number()) throw ParseError("density values must be numbers");
      mu.density.push_back(v.get<double>());
    }
  } else if (!density.is_null()) {
    throw ParseError("\"density\" must be an array or null");
  }

  const Json& atoms = require_field(doc, "atoms");
  if (!atoms.is_array()) throw ParseError("\"atoms\" must be an array");
  for (const Json& entry : atoms) {
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
        !entry[1].is_number())
      throw ParseError("each atom must be a [position, weight] pair");
    mu.atoms.push_back({entry[0].get<double>(), entry[1].get<double>()});
  }
  validate_measure(mu);
  return mu;
}

std::string write_report_json(const EnergyReport& report) {
  Json doc;
  doc["epsilon"] = report.epsilon;
  doc["curvature_term"] = report.curvature_term;
  doc["excess_term"] = report.excess_term;
  doc["total"] = report.total;
  doc["mm_total"] = report.mm_total;
  doc["mm_lower_bound"] = report.mm_lower_bound;
  if (report.block_terms) {
    Json terms;
    terms["arc_excess"] = report.block_terms->arc_excess;
    terms["core_transition"] = report.block_terms->core_transition;
    terms["arc_bending"] = report.block_terms->arc_bending;
    doc["block_terms"] = std::move(terms);
  } else {
    doc["block_terms"] = nullptr;
  }
  return doc.dump() + "\n";
}

std::string report_csv_row(const EnergyReport& report) {
  return csv_line({report.epsilon, report.curvature_term, report.excess_term,
                   report.total, report.mm_total, report.mm_lower_bound});
}

std::string csv_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string csv_line(const std::vector<double>& values) {
  std::string line;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k > 0) line += ',';
    line += csv_number(values[k]);
  }
  line += '\n';
  return line;
}

std::string trajectory_jsonl(const std::vector<RelaxState>& trajectory) {
  std::string out;
  for (const RelaxState& state : trajectory) {
    const std::array<double, 3> res = state.residuals();
    Json line;
    line["step"] = state.step;
    line["penalty_weights"] = state.penalty_weights;
    line["n"] = state.theta.size();
    line["D"] = state.D;
    line["energy"] = state.energy;
    line["elastic"] = state.elastic;
    line["grad_norm"] = state.grad_norm;
    line["residuals"] = res;
    line["converged"] = state.converged;
    out += line.dump();
    out += '\n';
  }
  return out;
}

}  // namespace curvelab
