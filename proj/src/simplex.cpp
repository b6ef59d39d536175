#include "curvelab/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace curvelab {

namespace {

constexpr double kPivotEps = 1e-9;

struct Tableau {
  std::size_t m, n;
  std::vector<int> N, B;
  std::vector<std::vector<double>> D;
  std::size_t pivots = 0;
  std::size_t pivot_cap = 0;
  std::size_t bland_after = 0;

  explicit Tableau(const DenseLp& lp)
      : m(lp.rows), n(lp.cols), N(n + 1), B(m), D(m + 2, std::vector<double>(n + 2, 0.0)) {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) D[i][j] = lp.at(i, j);
    for (std::size_t i = 0; i < m; ++i) {
      B[i] = int(n + i);
      D[i][n] = -1.0;
      D[i][n + 1] = lp.b[i];
    }
    for (std::size_t j = 0; j < n; ++j) {
      N[j] = int(j);
      D[m][j] = -lp.c[j];
    }
    N[n] = -1;
    D[m + 1][n] = 1.0;
    pivot_cap = 200 * (m + n) + 20000;
    bland_after = 20 * (m + n) + 2000;
  }

  void pivot(std::size_t r, std::size_t s) {
    if (++pivots > pivot_cap)
      throw LpNumericalError("pivot budget exhausted (" + std::to_string(pivots) +
                             " pivots)");
    double* a = D[r].data();
    double inv = 1.0 / a[s];
    for (std::size_t i = 0; i < m + 2; ++i) {
      if (i != r && std::abs(D[i][s]) > kPivotEps) {
        double* bi = D[i].data();
        double inv2 = bi[s] * inv;
        for (std::size_t j = 0; j < n + 2; ++j) bi[j] -= a[j] * inv2;
        bi[s] = a[s] * inv2;
      }
    }
    for (std::size_t j = 0; j < n + 2; ++j)
      if (j != s) D[r][j] *= inv;
    for (std::size_t i = 0; i < m + 2; ++i)
      if (i != r) D[i][s] *= -inv;
    D[r][s] = inv;
    std::swap(B[r], N[s]);
  }

  bool simplex(int phase) {
    const std::size_t x = m + std::size_t(phase) - 1;
    for (;;) {
      const bool bland = pivots > bland_after;
      std::size_t s = std::size_t(-1);
      if (bland) {
        // strict Bland: lowest-id improving nonbasic variable
        int best_id = std::numeric_limits<int>::max();
        for (std::size_t j = 0; j < n + 1; ++j) {
          if (N[j] == -phase) continue;
          if (D[x][j] < -kPivotEps && N[j] < best_id) {
            best_id = N[j];
            s = j;
          }
        }
        if (s == std::size_t(-1)) return true;
      } else {
        for (std::size_t j = 0; j < n + 1; ++j) {
          if (N[j] == -phase) continue;
          if (s == std::size_t(-1) ||
              std::make_pair(D[x][j], N[j]) < std::make_pair(D[x][s], N[s]))
            s = j;
        }
        if (D[x][s] >= -kPivotEps) return true;
      }
      std::size_t r = std::size_t(-1);
      for (std::size_t i = 0; i < m; ++i) {
        if (D[i][s] <= kPivotEps) continue;
        if (r == std::size_t(-1) ||
            std::make_pair(D[i][n + 1] / D[i][s], B[i]) <
                std::make_pair(D[r][n + 1] / D[r][s], B[r]))
          r = i;
      }
      if (r == std::size_t(-1)) return false;  // unbounded direction
      pivot(r, s);
    }
  }

  double run(std::vector<double>& x) {
    std::size_t r = 0;
    for (std::size_t i = 1; i < m; ++i)
      if (D[i][n + 1] < D[r][n + 1]) r = i;
    if (D[r][n + 1] < -kPivotEps) {
      pivot(r, n);
      if (!simplex(2) || D[m + 1][n + 1] < -kPivotEps)
        throw LpNumericalError("LP infeasible");
      for (std::size_t i = 0; i < m; ++i) {
        if (B[i] == -1) {
          std::size_t s = 0;
          for (std::size_t j = 1; j < n + 1; ++j)
            if (std::make_pair(D[i][j], N[j]) < std::make_pair(D[i][s], N[s])) s = j;
          pivot(i, s);
        }
      }
    }
    if (!simplex(1)) throw LpNumericalError("LP unbounded");
    x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
      if (B[i] >= 0 && std::size_t(B[i]) < n) x[std::size_t(B[i])] = D[i][n + 1];
    return D[m][n + 1];
  }

  // Shadow prices: the final objective row holds the reduced cost of every
  // nonbasic variable; for a slack variable that is exactly the dual value.
  std::vector<double> extract_dual() const {
    std::vector<double> y(m, 0.0);
    for (std::size_t j = 0; j < n + 1; ++j) {
      if (N[j] >= int(n)) y[std::size_t(N[j]) - n] = D[m][j];
    }
    return y;
  }
};

// Worst constraint or gap residual of a candidate solution, for choosing
// between the raw dictionary values and the refined ones below.
double max_violation(const DenseLp& lp, const LpSolution& sol) {
  double worst = 0.0;
  for (std::size_t j = 0; j < lp.cols; ++j) worst = std::max(worst, -sol.x[j]);
  double by = 0.0, cx = 0.0;
  for (std::size_t i = 0; i < lp.rows; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < lp.cols; ++j) row += lp.at(i, j) * sol.x[j];
    worst = std::max(worst, row - lp.b[i]);
    worst = std::max(worst, -sol.dual[i]);
    by += lp.b[i] * sol.dual[i];
  }
  for (std::size_t j = 0; j < lp.cols; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < lp.rows; ++i) col += lp.at(i, j) * sol.dual[i];
    worst = std::max(worst, lp.c[j] - col);
    cx += lp.c[j] * sol.x[j];
  }
  worst = std::max(worst, std::abs(by - cx));
  worst = std::max(worst, std::abs(cx - sol.value));
  return worst;
}

// Thousands of rank-one tableau updates accumulate roundoff that the final
// dictionary inherits. Re-solving the basis system against the untouched
// input coefficients removes that drift: with basic structural columns S and
// the rows not claimed by a basic slack forming a square system, one LU
// factorization yields both the primal basics (forward problem) and the
// duals (transpose problem). Returns false when the basis is unusable, in
// which case the caller keeps the dictionary values.
bool refine_from_basis(const DenseLp& lp, const std::vector<int>& basis,
                       LpSolution& sol) {
  const std::size_t m = lp.rows, n = lp.cols;
  std::vector<char> row_free(m, 1);
  std::vector<std::size_t> cols;
  for (std::size_t i = 0; i < m; ++i) {
    const int v = basis[i];
    if (v < 0) return false;
    if (std::size_t(v) >= n)
      row_free[std::size_t(v) - n] = 0;
    else
      cols.push_back(std::size_t(v));
  }
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < m; ++r)
    if (row_free[r]) rows.push_back(r);
  const std::size_t k = cols.size();
  if (rows.size() != k) return false;

  std::vector<double> lu(k * k);
  double scale = 1.0;
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      lu[a * k + b] = lp.at(rows[a], cols[b]);
      scale = std::max(scale, std::abs(lu[a * k + b]));
    }
  std::vector<std::size_t> piv(k);
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < k; ++r)
      if (std::abs(lu[r * k + c]) > std::abs(lu[p * k + c])) p = r;
    if (std::abs(lu[p * k + c]) < 1e-13 * scale) return false;
    piv[c] = p;
    if (p != c)
      for (std::size_t j = 0; j < k; ++j) std::swap(lu[c * k + j], lu[p * k + j]);
    const double inv = 1.0 / lu[c * k + c];
    for (std::size_t r = c + 1; r < k; ++r) {
      const double f = lu[r * k + c] * inv;
      lu[r * k + c] = f;
      for (std::size_t j = c + 1; j < k; ++j) lu[r * k + j] -= f * lu[c * k + j];
    }
  }

  // Primal: P A x = L U x = P b.
  std::vector<double> xb(k);
  for (std::size_t a = 0; a < k; ++a) xb[a] = lp.b[rows[a]];
  for (std::size_t c = 0; c < k; ++c)
    if (piv[c] != c) std::swap(xb[c], xb[piv[c]]);
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t j = 0; j < r; ++j) xb[r] -= lu[r * k + j] * xb[j];
  for (std::size_t r = k; r-- > 0;) {
    for (std::size_t j = r + 1; j < k; ++j) xb[r] -= lu[r * k + j] * xb[j];
    xb[r] /= lu[r * k + r];
  }

  // Dual: A^T y = c restricted to the free rows, via U^T L^T (P y) = c.
  std::vector<double> yb(k);
  for (std::size_t a = 0; a < k; ++a) yb[a] = lp.c[cols[a]];
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t j = 0; j < r; ++j) yb[r] -= lu[j * k + r] * yb[j];
    yb[r] /= lu[r * k + r];
  }
  for (std::size_t r = k; r-- > 0;)
    for (std::size_t j = r + 1; j < k; ++j) yb[r] -= lu[j * k + r] * yb[j];
  for (std::size_t c = k; c-- > 0;)
    if (piv[c] != c) std::swap(yb[c], yb[piv[c]]);

  std::fill(sol.x.begin(), sol.x.end(), 0.0);
  for (std::size_t a = 0; a < k; ++a) sol.x[cols[a]] = xb[a];
  std::fill(sol.dual.begin(), sol.dual.end(), 0.0);
  for (std::size_t a = 0; a < k; ++a) sol.dual[rows[a]] = yb[a];
  double cx = 0.0;
  for (std::size_t j = 0; j < n; ++j) cx += lp.c[j] * sol.x[j];
  sol.value = cx;
  return true;
}

}  // namespace

LpSolution solve_lp(const DenseLp& lp, double tol) {
  if (lp.b.size() != lp.rows || lp.c.size() != lp.cols ||
      lp.a.size() != lp.rows * lp.cols)
    throw ParameterOutOfRangeError("inconsistent LP dimensions");
  if (lp.cols == 0 || lp.rows == 0)
    throw ParameterOutOfRangeError("empty LP");

  Tableau tab(lp);
  LpSolution sol;
  sol.value = tab.run(sol.x);
  sol.dual = tab.extract_dual();
  sol.pivots = tab.pivots;

  LpSolution refined = sol;
  if (refine_from_basis(lp, tab.B, refined) &&
      max_violation(lp, refined) < max_violation(lp, sol))
    sol = std::move(refined);

  // Certify before returning: primal feasible, dual feasible, gap closed.
  double scale = 1.0 + std::abs(sol.value);
  for (double v : lp.b) scale = std::max(scale, std::abs(v));
  for (double v : lp.c) scale = std::max(scale, std::abs(v));
  const double slack_tol = tol * scale;

  for (std::size_t j = 0; j < lp.cols; ++j)
    if (sol.x[j] < -slack_tol)
      throw LpNumericalError("primal negativity at certification");
  double by = 0.0, cx = 0.0;
  for (std::size_t i = 0; i < lp.rows; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < lp.cols; ++j) row += lp.at(i, j) * sol.x[j];
    if (row > lp.b[i] + slack_tol)
      throw LpNumericalError("primal infeasibility at certification");
    if (sol.dual[i] < -slack_tol)
      throw LpNumericalError("dual negativity at certification");
    by += lp.b[i] * sol.dual[i];
  }
  for (std::size_t j = 0; j < lp.cols; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < lp.rows; ++i) col += lp.at(i, j) * sol.dual[i];
    if (col < lp.c[j] - slack_tol)
      throw LpNumericalError("dual infeasibility at certification");
    cx += lp.c[j] * sol.x[j];
  }
  if (std::abs(by - cx) > slack_tol || std::abs(cx - sol.value) > slack_tol)
    throw LpNumericalError("duality gap above tolerance at certification");
  return sol;
}

}  // namespace curvelab
