#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lsadvect/assembly.hpp"
#include "lsadvect/core.hpp"
#include "lsadvect/schemes2d.hpp"
#include "lsadvect/solver.hpp"

namespace lsadvect {

enum class ErrorMetric {
  MaxOverTime,     // E = h^dim max_n sum |U^n - u(t^n)|
  FinalExact,      // e = h^dim sum |U^N - u(T)| over all nodes
  FinalReference,  // e against a subsampled finer run
};

/// Time steps as a rational multiple of M, e.g. 5M/4.
struct StepRule {
  int numerator = 5;
  int denominator = 4;
  int steps(int cells) const;
};

struct ExperimentCase {
  std::string name;
  int dim = 2;
  Bounds bounds{};
  VectorFunction velocity;
  ScalarFunction initial;
  TimeFunction exact;  // empty for reference-solution cases
  std::optional<ScalarFunction> domain_phi;
  BoundarySpec boundary;
  double final_time = 1.0;
  ErrorMetric metric = ErrorMetric::MaxOverTime;
  StepRule steps{};
  int reference_cells = 0;  // FinalReference only

  bool has_exact() const { return static_cast<bool>(exact); }
};

/// rotation_euclid, rotation_maxdist, exp_velocity, zalesak, vortex, the
/// polynomial checks poly2_quadratic, poly2_cubic, and the 1D checks
/// smooth_1d, poly1_quadratic.  Throws std::invalid_argument otherwise.
ExperimentCase builtin_case(std::string_view name);
std::vector<std::string> builtin_case_names();

inline constexpr double kZalesakRadius = 0.3;
inline constexpr double kZalesakHalfWidth = 0.05;
inline constexpr double kZalesakSlotHeight = 0.5;
/// y coordinate of the slot bottom, 0.5 - sqrt(0.3^2 - 0.05^2).
double zalesak_slot_bottom();

/// Signed Euclidean distance to the slotted disc centred at (0, 0.5):
/// negative inside, positive outside.  The slot walls end on the circle, so
/// the slot is open towards the bottom of the disc.
double zalesak_signed_distance(double x, double y);

/// Exact solution of the exponential-velocity case by tracing the
/// characteristic back to t = 0 or to the inflow edge.
double exp_velocity_exact(double x, double y, double t);

/// Accumulates E over time levels.  `mask` selects the summed nodes.
class MaxOverTimeError {
 public:
  MaxOverTimeError(const Grid& grid, std::vector<bool> mask) : grid_(grid), mask_(std::move(mask)) {}
  void add_level(std::span<const double> values, const TimeFunction& exact, double t);
  double value() const { return worst_; }

 private:
  Grid grid_;
  std::vector<bool> mask_;
  double worst_ = 0.0;
};

/// E over a stored series; levels[n] pairs with times[n].
double error_E(const std::vector<std::vector<double>>& levels, const std::vector<double>& times,
               const TimeFunction& exact, const Grid& grid, const std::vector<bool>& mask);

/// h^dim sum_{i,j=0..M} |U_ij - Uref_{i r, j r}| with r = M_ref / M, which
/// is 4/M^2 times the sum on (-1,1)^2.  Throws if M does not divide M_ref or
/// the grids differ in bounds or dimension.
double error_ref_e(const Field& numerical, const Field& reference);

/// The same sum against an exact solution at time t.
double error_final_exact(const Field& numerical, const TimeFunction& exact, double t);

/// max |U_ij - u(x_i, y_j, t)| over all nodes.
double error_max_nodal(const Field& numerical, const TimeFunction& exact, double t);

/// log2(coarse / fine).  Throws std::invalid_argument for nonpositive errors.
double eoc(double error_coarse, double error_fine);

struct ErrorReport {
  int cells = 0;
  int steps = 0;
  double max_courant = 0.0;  // over every node not outside the domain
  double max_effective_courant = 0.0;
  double error = 0.0;
  std::optional<double> eoc;
  int sweeps = 0;            // per step (fixed) or the largest used (tolerance)
  double max_residual = 0.0;  // largest final residual over all steps
  bool converged = true;
  std::size_t solved_nodes = 0;
  double min_gamma = 1.0;
};

struct RunOptions {
  SweepPolicy sweeps = SweepPolicy::fixed(1);
  int dump_stride = 0;  // keep every k-th level when > 0
  std::optional<double> final_time;  // overrides the case's T
};

struct RunResult {
  ErrorReport report;
  Field final_field;
  std::vector<Field> stored;  // levels kept by dump_stride, plus the last
};

/// Runs the case with h = (x_max - x_min)/M and tau = T/N.  The error field
/// of a FinalReference case is left at zero; use run_convergence or
/// error_ref_e with a reference field.
RunResult run_experiment(const ExperimentCase& c, const SchemeSpec& scheme, int cells, int steps,
                         const RunOptions& options = {});

/// Runs every M with N = rule(M) and fills consecutive EOCs.  For
/// FinalReference cases the reference is computed once at reference_cells
/// (overridden by `reference_cells` when nonzero).
std::vector<ErrorReport> run_convergence(const ExperimentCase& c, const SchemeSpec& scheme,
                                         const std::vector<int>& cells, const StepRule& rule,
                                         const RunOptions& options = {}, int reference_cells = 0);

}  // namespace lsadvect
