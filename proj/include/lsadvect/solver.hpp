#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lsadvect {

/// Per-step linear system in matrix-free row form.
///
/// Row r solves for grid node `nodes[r]`:
///   diag[r] * U[nodes[r]] + sum_k vals[k] * U[cols[k]] = rhs[r]
/// with k over [offsets[r], offsets[r+1]).  Columns are grid indices of other
/// solved nodes.  Rows are stored in ascending grid index (row-major) order.
struct LinearStep {
  int nx = 0;  // nodes per grid row
  int ny = 0;  // grid rows
  std::vector<std::size_t> nodes;
  std::vector<double> diag;
  std::vector<std::size_t> offsets{0};
  std::vector<std::size_t> cols;
  std::vector<double> vals;
  std::vector<double> rhs;
  std::vector<std::size_t> grid_row_start;  // rows of grid row j are [grid_row_start[j], grid_row_start[j+1])

  std::size_t size() const { return nodes.size(); }
  /// Rebuilds grid_row_start from nodes; call after filling rows.
  void index_rows();
};

/// One of the four (2D) or two (1D) sweep directions.
struct Ordering {
  bool i_ascending = true;
  bool j_ascending = true;
};

std::vector<Ordering> sweep_orderings(int dim);

struct SweepPolicy {
  enum class Mode { FixedSweeps, ResidualTolerance };
  Mode mode = Mode::FixedSweeps;
  int sweeps = 1;        // FixedSweeps
  double tolerance = 0;  // ResidualTolerance
  int max_sweeps = 100;  // ResidualTolerance

  static SweepPolicy fixed(int count);
  static SweepPolicy to_tolerance(double tol, int max_sweeps);
};

struct SolveDiagnostics {
  int sweeps = 0;
  double residual = 0.0;
  bool converged = true;
};

/// Single Gauss-Seidel pass in the given ordering; updates `u` in place.
void gauss_seidel_pass(const LinearStep& step, std::span<double> u, Ordering ordering);

/// max_r |diag U + sum a U - rhs| over the solved rows.
double residual(const LinearStep& step, std::span<const double> u);

/// Fast sweeping: each sweep applies one Gauss-Seidel pass per ordering.
/// `u` holds the initial guess on entry and the solution on return.  In
/// ResidualTolerance mode the best iterate is kept and `converged` is false
/// when max_sweeps is exhausted.
SolveDiagnostics fast_sweep_solve(const LinearStep& step, std::span<double> u, const SweepPolicy& policy, int dim);

}  // namespace lsadvect
