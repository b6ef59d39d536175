#include "curvelab/energies.hpp"

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "quadrature.hpp"

namespace curvelab {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kFourRootTwo = 5.656854249492380195206754896839;

// Admissibility tolerances for clamped open arcs; violations are surfaced,
// never silently absorbed.
constexpr double kPosTol = 1e-6;      // relative to length
constexpr double kAngleTol = 1e-3;    // radians at the clamped ends
constexpr double kClosureTol = 1e-4;  // relative to length, on the closure integrals

std::vector<double> grid_weights(std::size_t n, double domain) {
  std::vector<double> w(n, 0.0);
  if (n < 2) return w;
  const double h = domain / double(n - 1);
  for (auto& v : w) v = h;
  w.front() = 0.5 * h;
  w.back() = 0.5 * h;
  return w;
}

double bending_from_lifting(const AngleLifting& lifting) {
  const auto kappa = curvature_profile(lifting);
  const auto w = grid_weights(lifting.size(), lifting.domain);
  double acc = 0.0;
  for (std::size_t k = 0; k < kappa.size(); ++k)
    acc += w[k] * kappa[k] * kappa[k];
  return acc * lifting.speed;  // ds = speed dx
}

}  // namespace

double sigma_quadrature(std::size_t panels) {
  // Raw defining integrand, deliberately not the simplified half-angle form.
  auto f = [](double t) { return 2.0 * std::sqrt(std::max(0.0, 1.0 - std::cos(t))); };
  return detail::composite_gauss_legendre(f, 0.0, kTwoPi, panels);
}

double transition_cost(double theta) {
  const double k = std::floor(theta / kTwoPi);
  const double r = theta - kTwoPi * k;  // reduced angle in [0, 2*pi)
  const double s = std::sin(0.25 * r);
  return kSigma * k + 2.0 * kFourRootTwo * s * s;
}

double transition_defect(double theta) {
  return (kTwoPi / kSigma) * transition_cost(theta) - theta;
}

double bending_energy(const PlanarCurve& curve) {
  return bending_from_lifting(lift_tangent(curve));
}

EnergyReport open_excess_energy(const PlanarCurve& curve, Vec2 p, Vec2 q,
                                double epsilon) {
  validate_curve(curve);
  if (curve.closed) throw AdmissibilityError("open curve required");
  if (!(epsilon > 0.0)) throw ParameterOutOfRangeError("epsilon must be positive");

  const double ell = curve.length();
  const double chord = norm(q - p);
  const double scale = std::max(ell, chord);
  if (norm(curve.samples.front() - p) > kPosTol * scale)
    throw AdmissibilityError("curve does not start at the clamped point");
  if (norm(curve.samples.back() - q) > kPosTol * scale)
    throw AdmissibilityError("curve does not end at the clamped point");

  const AngleLifting lifting = lift_tangent(curve);
  if (std::abs(lifting.theta.front()) > kAngleTol)
    throw AdmissibilityError("start tangent is not horizontal");
  const double end_turns = lifting.theta.back() / kTwoPi;
  if (std::abs(end_turns - std::round(end_turns)) * kTwoPi > kAngleTol)
    throw AdmissibilityError("end tangent is not a full turn from horizontal");

  const auto w = grid_weights(lifting.size(), lifting.domain);
  double run = 0.0, rise = 0.0, misfit = 0.0;
  for (std::size_t k = 0; k < lifting.size(); ++k) {
    run += w[k] * std::cos(lifting.theta[k]);
    rise += w[k] * std::sin(lifting.theta[k]);
    const double s = std::sin(0.5 * lifting.theta[k]);
    misfit += w[k] * 2.0 * s * s;  // 1 - cos, cancellation-free
  }
  run *= lifting.speed;
  rise *= lifting.speed;
  misfit *= lifting.speed;
  if (std::abs(run - chord) > kClosureTol * scale)
    throw AdmissibilityError("horizontal closure integral off the chord length");
  if (std::abs(rise) > kClosureTol * scale)
    throw AdmissibilityError("vertical closure integral does not vanish");

  EnergyReport report;
  report.epsilon = epsilon;
  const double root = std::sqrt(epsilon);
  report.curvature_term = root * bending_from_lifting(lifting);
  report.excess_term = (ell - chord) / root;
  report.total = report.curvature_term + report.excess_term;
  report.mm_total = report.curvature_term + misfit / root;
  report.mm_lower_bound = mm_lower_bound(lifting);
  return report;
}

EnergyReport closed_excess_energy(const PlanarCurve& curve_eps,
                                  const PlanarCurve& reference, double epsilon) {
  validate_curve(curve_eps);
  validate_curve(reference);
  if (!curve_eps.closed || !reference.closed)
    throw AdmissibilityError("closed curves required");
  if (!(epsilon > 0.0)) throw ParameterOutOfRangeError("epsilon must be positive");
  if (curve_eps.size() != reference.size())
    throw GridMismatchError("curves live on different grids");
  const double ell = curve_eps.length();
  if (std::abs(ell - reference.length()) > 1e-6 * std::max(ell, reference.length()))
    throw LengthMismatchError("curve lengths differ beyond tolerance");

  const AngleLifting lift_eps = lift_tangent(curve_eps);
  const AngleLifting lift_ref = lift_tangent(reference);

  const auto w = grid_weights(lift_eps.size(), lift_eps.domain);
  double tangent_gap = 0.0, misfit = 0.0;
  for (std::size_t k = 0; k < lift_eps.size(); ++k) {
    const double te = lift_eps.theta[k];
    const double tr = lift_ref.theta[k];
    const Vec2 d{std::cos(te) - std::cos(tr), std::sin(te) - std::sin(tr)};
    tangent_gap += w[k] * dot(d, d);
    const double s = std::sin(0.5 * (te - tr));
    misfit += w[k] * 2.0 * s * s;  // (1 - cos) of the angle difference
  }
  tangent_gap *= lift_eps.speed;
  misfit *= lift_eps.speed;

  EnergyReport report;
  report.epsilon = epsilon;
  const double root = std::sqrt(epsilon);
  report.curvature_term = root * bending_from_lifting(lift_eps);
  report.excess_term = tangent_gap / (2.0 * root);
  report.total = report.curvature_term + report.excess_term;
  report.mm_total = report.curvature_term + misfit / root;
  report.mm_lower_bound = mm_lower_bound(lift_eps, &lift_ref);
  return report;
}

LimitEnergy limit_energy(const AtomicIntegerMeasure& omega) {
  validate_atomic(omega);
  LimitEnergy out;
  out.index = omega.total_index();
  out.scaled = kSigma * double(out.index);
  return out;
}

double mm_lower_bound(const AngleLifting& lifting, const AngleLifting* reference) {
  if (reference) {
    if (reference->size() != lifting.size() ||
        std::abs(reference->domain - lifting.domain) >
            1e-9 * std::max(1.0, lifting.domain))
      throw GridMismatchError("reference lifting on a different grid");
  }
  auto value = [&](std::size_t k) {
    return reference ? lifting.theta[k] - reference->theta[k] : lifting.theta[k];
  };
  double tv = 0.0;
  double prev = transition_cost(value(0));
  for (std::size_t k = 1; k < lifting.size(); ++k) {
    const double cur = transition_cost(value(k));
    tv += std::abs(cur - prev);
    prev = cur;
  }
  return tv;
}

DefectAudit flat_defect_audit(const AngleLifting& lifting, std::size_t max_nodes) {
  if (lifting.size() < 2 || max_nodes < 2)
    throw ParameterOutOfRangeError("audit needs at least two nodes");
  const std::size_t last = lifting.size() - 1;
  std::vector<std::size_t> idx;
  const std::size_t stride = std::max<std::size_t>(1, last / (max_nodes - 1) + (last % (max_nodes - 1) ? 1 : 0));
  for (std::size_t k = 0; k < last; k += stride) idx.push_back(k);
  idx.push_back(last);

  const double h = lifting.spacing();
  IntervalMeasure defect;
  defect.domain = lifting.domain;
  DefectAudit audit;
  for (std::size_t j = 0; j + 1 < idx.size(); ++j) {
    const double th0 = lifting.theta[idx[j]];
    const double th1 = lifting.theta[idx[j + 1]];
    const double weight = (kTwoPi / kSigma) * (transition_cost(th1) - transition_cost(th0)) -
                          (th1 - th0);
    defect.atoms.push_back({h * double(idx[j + 1]), weight});
  }
  // Summation by parts puts the pairing against the defect at interior
  // coarse nodes times the gap to the next one; nonzero end defects can
  // additionally couple to the sup-norm of the test function.
  for (std::size_t j = 1; j + 1 < idx.size(); ++j)
    audit.defect_l1 += std::abs(transition_defect(lifting.theta[idx[j]])) *
                       h * double(idx[j + 1] - idx[j]);
  audit.defect_l1 += std::abs(transition_defect(lifting.theta[idx.front()]));
  audit.defect_l1 += std::abs(transition_defect(lifting.theta[idx.back()]));
  audit.flat = flat_norm(defect);
  return audit;
}

}  // namespace curvelab
