#pragma once

// Small dense LP solver in dictionary form: maximize c.x subject to
// A x <= b, x >= 0.  Two-phase tableau simplex; the entering rule is
// steepest-coefficient with index tie-breaks and degrades to strict Bland
// selection after a pivot budget, so stalls cannot cycle.  Solutions are
// returned together with the dual vector and are certified (primal/dual
// feasibility plus duality gap) before being handed back.

#include <cstddef>
#include <vector>

#include "curvelab/errors.hpp"

namespace curvelab {

struct DenseLp {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;  // row-major, rows x cols
  std::vector<double> b;  // rows
  std::vector<double> c;  // cols

  DenseLp() = default;
  DenseLp(std::size_t m, std::size_t n)
      : rows(m), cols(n), a(m * n, 0.0), b(m, 0.0), c(n, 0.0) {}

  double& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

struct LpSolution {
  double value = 0.0;
  std::vector<double> x;     // primal point, length cols
  std::vector<double> dual;  // dual point, length rows
  std::size_t pivots = 0;
};

LpSolution solve_lp(const DenseLp& lp, double tol = 1e-9);

}  // namespace curvelab
