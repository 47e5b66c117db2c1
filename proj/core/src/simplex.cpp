#include "qdetect/simplex.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace qdetect {

namespace {

constexpr double kPivotTol = 1e-11;    // entries smaller than this cannot pivot
constexpr double kReducedTol = 1e-9;   // reduced-cost optimality threshold
constexpr double kPhaseOneTol = 1e-9;  // residual artificial mass meaning infeasible

// Canonical-form tableau: basis columns are unit vectors, rhs >= 0.
struct Tableau {
  RealMatrix t;             // rows x (num_vars + 1), last column is the rhs
  std::vector<Index> basis; // basis[r] = variable owning row r

  Index rows() const { return t.rows(); }
  Index rhs_col() const { return t.cols() - 1; }

  void pivot(Index row, Index col) {
    t.row(row) /= t(row, col);
    for (Index r = 0; r < rows(); ++r) {
      if (r == row) continue;
      const double factor = t(r, col);
      if (factor != 0.0) t.row(r) -= factor * t.row(row);
    }
    basis[static_cast<std::size_t>(row)] = col;
  }
};

enum class PhaseStatus { optimal, unbounded };

// Bland's rule throughout: entering variable is the lowest-index column
// with a negative reduced cost, the leaving row breaks ratio ties by
// lowest basis index. Guarantees termination on degenerate tableaus.
PhaseStatus run_simplex(Tableau& tab, const RealVector& cost,
                        Index num_columns) {
  while (true) {
    RealVector basic_cost(tab.rows());
    for (Index r = 0; r < tab.rows(); ++r) {
      const Index var = tab.basis[static_cast<std::size_t>(r)];
      basic_cost(r) = var < cost.size() ? cost(var) : 0.0;
    }

    Index entering = -1;
    for (Index j = 0; j < num_columns; ++j) {
      const double reduced =
          (j < cost.size() ? cost(j) : 0.0) - basic_cost.dot(tab.t.col(j));
      if (reduced < -kReducedTol) {
        entering = j;
        break;
      }
    }
    if (entering < 0) return PhaseStatus::optimal;

    Index leaving = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (Index r = 0; r < tab.rows(); ++r) {
      const double coeff = tab.t(r, entering);
      if (coeff <= kPivotTol) continue;
      const double ratio = tab.t(r, tab.rhs_col()) / coeff;
      if (ratio < best_ratio - kPivotTol ||
          (ratio < best_ratio + kPivotTol && leaving >= 0 &&
           tab.basis[static_cast<std::size_t>(r)] <
               tab.basis[static_cast<std::size_t>(leaving)])) {
        best_ratio = ratio;
        leaving = r;
      }
    }
    if (leaving < 0) return PhaseStatus::unbounded;

    tab.pivot(leaving, entering);
  }
}

}  // namespace

LpResult simplex_lp(const RealVector& c, const RealMatrix& a,
                    const RealVector& b) {
  const Index rows = a.rows();
  const Index vars = a.cols();
  if (c.size() != vars || b.size() != rows)
    throw ValidationError("simplex_lp: shape mismatch between c, A, b");

  // Tableau layout: [original vars | artificials | rhs], one artificial
  // per row so the artificial columns form the starting basis.
  Tableau tab;
  tab.t = RealMatrix::Zero(rows, vars + rows + 1);
  tab.t.block(0, 0, rows, vars) = a;
  tab.t.col(vars + rows) = b;
  for (Index r = 0; r < rows; ++r) {
    if (tab.t(r, vars + rows) < 0.0) tab.t.row(r) = -tab.t.row(r);
    tab.t(r, vars + r) = 1.0;
    tab.basis.push_back(vars + r);
  }

  // Phase 1: minimize the artificial mass.
  RealVector phase1_cost = RealVector::Zero(vars + rows);
  phase1_cost.tail(rows).setOnes();
  run_simplex(tab, phase1_cost, vars + rows);

  double artificial_mass = 0.0;
  for (Index r = 0; r < rows; ++r)
    if (tab.basis[static_cast<std::size_t>(r)] >= vars)
      artificial_mass += tab.t(r, tab.rhs_col());
  if (artificial_mass > kPhaseOneTol) return {LpStatus::infeasible, {}, 0.0};

  // Drive leftover artificials out of the basis; rows where no original
  // column can pivot are redundant constraints and are dropped.
  for (Index r = tab.rows() - 1; r >= 0; --r) {
    if (tab.basis[static_cast<std::size_t>(r)] < vars) continue;
    Index col = -1;
    for (Index j = 0; j < vars; ++j)
      if (std::abs(tab.t(r, j)) > kPivotTol) {
        col = j;
        break;
      }
    if (col >= 0) {
      tab.pivot(r, col);
    } else {
      const Index last = tab.rows() - 1;
      tab.t.row(r) = tab.t.row(last);
      tab.basis[static_cast<std::size_t>(r)] =
          tab.basis[static_cast<std::size_t>(last)];
      tab.t.conservativeResize(last, Eigen::NoChange);
      tab.basis.pop_back();
    }
  }

  // Phase 2 over the original columns only.
  if (run_simplex(tab, c, vars) == PhaseStatus::unbounded)
    return {LpStatus::unbounded, {}, 0.0};

  RealVector x = RealVector::Zero(vars);
  for (Index r = 0; r < tab.rows(); ++r) {
    const Index var = tab.basis[static_cast<std::size_t>(r)];
    if (var < vars) x(var) = std::max(tab.t(r, tab.rhs_col()), 0.0);
  }
  return {LpStatus::optimal, x, c.dot(x)};
}

}  // namespace qdetect
