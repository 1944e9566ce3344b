#include "lsadvect/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lsadvect {

void LinearStep::index_rows() {
  grid_row_start.assign(static_cast<std::size_t>(ny) + 1, 0);
  std::size_t r = 0;
  for (int j = 0; j < ny; ++j) {
    grid_row_start[j] = r;
    const std::size_t row_end = static_cast<std::size_t>(j + 1) * nx;
    while (r < nodes.size() && nodes[r] < row_end) ++r;
  }
  grid_row_start[ny] = r;
}

std::vector<Ordering> sweep_orderings(int dim) {
  if (dim == 1) return {{true, true}, {false, true}};
  return {{true, true}, {false, true}, {true, false}, {false, false}};
}

SweepPolicy SweepPolicy::fixed(int count) {
  if (count < 1) throw std::invalid_argument("sweep count must be at least 1");
  SweepPolicy p;
  p.mode = Mode::FixedSweeps;
  p.sweeps = count;
  return p;
}

SweepPolicy SweepPolicy::to_tolerance(double tol, int max_sweeps) {
  if (!(tol > 0.0)) throw std::invalid_argument("residual tolerance must be positive");
  if (max_sweeps < 1) throw std::invalid_argument("max sweeps must be at least 1");
  SweepPolicy p;
  p.mode = Mode::ResidualTolerance;
  p.tolerance = tol;
  p.max_sweeps = max_sweeps;
  return p;
}

namespace {

inline void relax(const LinearStep& step, std::span<double> u, std::size_t r) {
  double acc = step.rhs[r];
  for (std::size_t k = step.offsets[r]; k < step.offsets[r + 1]; ++k) acc -= step.vals[k] * u[step.cols[k]];
  u[step.nodes[r]] = acc / step.diag[r];
}

}  // namespace

void gauss_seidel_pass(const LinearStep& step, std::span<double> u, Ordering ordering) {
  for (double d : step.diag) {
    if (d == 0.0) throw std::domain_error("zero diagonal in linear step");
  }
  const int ny = step.ny;
  for (int jj = 0; jj < ny; ++jj) {
    const int j = ordering.j_ascending ? jj : ny - 1 - jj;
    const std::size_t begin = step.grid_row_start[j];
    const std::size_t end = step.grid_row_start[j + 1];
    if (ordering.i_ascending) {
      for (std::size_t r = begin; r < end; ++r) relax(step, u, r);
    } else {
      for (std::size_t r = end; r > begin; --r) relax(step, u, r - 1);
    }
  }
}

double residual(const LinearStep& step, std::span<const double> u) {
  double worst = 0.0;
  for (std::size_t r = 0; r < step.size(); ++r) {
    double acc = step.diag[r] * u[step.nodes[r]] - step.rhs[r];
    for (std::size_t k = step.offsets[r]; k < step.offsets[r + 1]; ++k) acc += step.vals[k] * u[step.cols[k]];
    worst = std::max(worst, std::abs(acc));
  }
  return worst;
}

SolveDiagnostics fast_sweep_solve(const LinearStep& step, std::span<double> u, const SweepPolicy& policy, int dim) {
  const auto orderings = sweep_orderings(dim);
  SolveDiagnostics diag;
  if (policy.mode == SweepPolicy::Mode::FixedSweeps) {
    for (int s = 0; s < policy.sweeps; ++s) {
      for (const auto& o : orderings) gauss_seidel_pass(step, u, o);
    }
    diag.sweeps = policy.sweeps;
    diag.residual = residual(step, u);
    return diag;
  }

  double best = residual(step, u);
  std::vector<double> best_u(u.begin(), u.end());
  diag.converged = best <= policy.tolerance;
  while (!diag.converged && diag.sweeps < policy.max_sweeps) {
    for (const auto& o : orderings) gauss_seidel_pass(step, u, o);
    ++diag.sweeps;
    const double res = residual(step, u);
    if (res < best) {
      best = res;
      std::copy(u.begin(), u.end(), best_u.begin());
    }
    diag.converged = res <= policy.tolerance;
  }
  if (!diag.converged) std::copy(best_u.begin(), best_u.end(), u.begin());
  diag.residual = best;
  return diag;
}

}  // namespace lsadvect
