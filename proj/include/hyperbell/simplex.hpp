#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace hyperbell {

// Small dense LP solver, sufficient for the polytope-membership problems in
// this library (at most a few hundred rows and columns). Two-phase tableau
// simplex with Bland's rule, so it terminates on the heavily degenerate
// instances the membership formulation produces.

enum class SimplexStatus { optimal, infeasible, unbounded };

struct SimplexResult {
  SimplexStatus status = SimplexStatus::infeasible;
  double objective = 0.0;      // for the solved form
  std::vector<double> x;       // primal solution
  std::vector<double> y;       // row duals (phase-1 Farkas certificate when infeasible)
};

class SimplexSolver {
 public:
  explicit SimplexSolver(double feasibility_tol = 1e-9) : tol_(feasibility_tol) {}

  // min c.x  s.t.  A x = b, x >= 0.  A is row-major, m x n.
  // On infeasible instances, y holds a Farkas certificate: y.A <= 0
  // componentwise and y.b = (phase-1 optimum) > 0.
  SimplexResult solve_equality_form(const std::vector<std::vector<double>>& A,
                                    const std::vector<double>& b,
                                    const std::vector<double>& c) const {
    const std::size_t m = A.size();
    const std::size_t n = m ? A[0].size() : 0;
    if (b.size() != m || c.size() != n) throw std::invalid_argument("simplex: shape mismatch");

    // Tableau columns: n structural, m artificial, rhs. Rows flipped so that
    // rhs >= 0; flips remembered to restore dual signs.
    const std::size_t cols = n + m + 1;
    std::vector<std::vector<double>> t(m + 1, std::vector<double>(cols, 0.0));
    std::vector<int> flipped(m, 1);
    for (std::size_t i = 0; i < m; ++i) {
      const double s = b[i] < 0 ? -1.0 : 1.0;
      flipped[i] = b[i] < 0 ? -1 : 1;
      for (std::size_t j = 0; j < n; ++j) t[i][j] = s * A[i][j];
      t[i][n + i] = 1.0;
      t[i][cols - 1] = s * b[i];
    }
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

    // Phase 1: minimize the artificial sum. Reduced costs r_j = c_j - z_j.
    auto& obj = t[m];
    for (std::size_t j = 0; j < cols; ++j) {
      double z = 0.0;
      for (std::size_t i = 0; i < m; ++i) z += t[i][j];
      obj[j] = (j >= n && j < n + m ? 1.0 : 0.0) - z;
    }
    run_pivots(t, basis, n + m, m);

    const double phase1 = -t[m][cols - 1];
    SimplexResult res;
    if (phase1 > tol_) {
      res.status = SimplexStatus::infeasible;
      res.objective = phase1;
      res.y.assign(m, 0.0);
      // Dual from artificial reduced costs: r_{n+i} = 1 - y_i.
      for (std::size_t i = 0; i < m; ++i) res.y[i] = flipped[i] * (1.0 - t[m][n + i]);
      return res;
    }

    // Phase 2 on the original costs; artificial columns are barred from
    // entering (they may linger in the basis at zero level, which is fine).
    for (std::size_t j = 0; j < cols; ++j) {
      double z = 0.0;
      for (std::size_t i = 0; i < m; ++i)
        if (basis[i] < n) z += c[basis[i]] * t[i][j];
      obj[j] = (j < n ? c[j] : 0.0) - z;
    }
    obj[cols - 1] = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      if (basis[i] < n) obj[cols - 1] -= c[basis[i]] * t[i][cols - 1];
    if (!run_pivots(t, basis, n, m)) {
      res.status = SimplexStatus::unbounded;
      return res;
    }

    res.status = SimplexStatus::optimal;
    res.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
      if (basis[i] < n) res.x[basis[i]] = t[i][cols - 1];
    res.objective = 0.0;
    for (std::size_t j = 0; j < n; ++j) res.objective += c[j] * res.x[j];
    res.y.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) res.y[i] = flipped[i] * (0.0 - t[m][n + i]);
    return res;
  }

  // max c.x  s.t.  A x <= b, x free. Split x = u - w and add slacks, then
  // solve min -c.(u - w).
  SimplexResult maximize_inequality_form(const std::vector<std::vector<double>>& A,
                                         const std::vector<double>& b,
                                         const std::vector<double>& c) const {
    const std::size_t m = A.size();
    const std::size_t n = m ? A[0].size() : c.size();
    std::vector<std::vector<double>> Aeq(m, std::vector<double>(2 * n + m, 0.0));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        Aeq[i][j] = A[i][j];
        Aeq[i][n + j] = -A[i][j];
      }
      Aeq[i][2 * n + i] = 1.0;
    }
    std::vector<double> ceq(2 * n + m, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      ceq[j] = -c[j];
      ceq[n + j] = c[j];
    }
    SimplexResult inner = solve_equality_form(Aeq, b, ceq);
    SimplexResult res;
    res.status = inner.status;
    res.y = inner.y;
    if (inner.status == SimplexStatus::optimal) {
      res.objective = -inner.objective;
      res.x.assign(n, 0.0);
      for (std::size_t j = 0; j < n; ++j) res.x[j] = inner.x[j] - inner.x[n + j];
    }
    return res;
  }

 private:
  // Bland's rule pivoting over columns [0, pricing_cols). Returns false on
  // an unbounded ray.
  bool run_pivots(std::vector<std::vector<double>>& t, std::vector<std::size_t>& basis,
                  std::size_t pricing_cols, std::size_t m) const {
    const std::size_t rhs = t[0].size() - 1;
    while (true) {
      std::size_t enter = pricing_cols;
      for (std::size_t j = 0; j < pricing_cols; ++j) {
        if (t[m][j] < -tol_) {
          enter = j;
          break;
        }
      }
      if (enter == pricing_cols) return true;  // optimal

      std::size_t leave = m;
      double best_ratio = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        if (t[i][enter] > tol_) {
          const double ratio = t[i][rhs] / t[i][enter];
          if (leave == m || ratio < best_ratio - tol_ ||
              (std::abs(ratio - best_ratio) <= tol_ && basis[i] < basis[leave])) {
            leave = i;
            best_ratio = ratio;
          }
        }
      }
      if (leave == m) return false;  // unbounded

      pivot(t, leave, enter);
      basis[leave] = enter;
    }
  }

  static void pivot(std::vector<std::vector<double>>& t, std::size_t row, std::size_t col) {
    const double p = t[row][col];
    for (double& v : t[row]) v /= p;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (i == row) continue;
      const double f = t[i][col];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < t[i].size(); ++j) t[i][j] -= f * t[row][j];
      t[i][col] = 0.0;
    }
  }

  double tol_;
};

}  // namespace hyperbell
