#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lsadvect/core.hpp"
#include "lsadvect/kappa.hpp"
#include "lsadvect/schemes1d.hpp"
#include "lsadvect/stencil.hpp"

namespace lsadvect {

enum class SchemeFamily { SemiImplicit1D, FullyImplicit1D, SemiImplicit2D, CTU };

/// Scheme family plus per-axis kappa choices.  `theta` blends the explicit
/// corner terms of the two CTU variants (1 = first variant, 0 = second) and
/// is only meaningful for the CTU family.
struct SchemeSpec {
  SchemeFamily family = SchemeFamily::SemiImplicit2D;
  KappaChoice kappa_x = KappaChoice::central();
  KappaChoice kappa_y = KappaChoice::central();
  double theta = 1.0;

  static SchemeSpec semi_implicit_1d(KappaChoice k) { return {SchemeFamily::SemiImplicit1D, k, k, 1.0}; }
  static SchemeSpec fully_implicit_1d(KappaChoice k) { return {SchemeFamily::FullyImplicit1D, k, k, 1.0}; }
  static SchemeSpec semi_implicit_2d(KappaChoice k) { return {SchemeFamily::SemiImplicit2D, k, k, 1.0}; }
  static SchemeSpec ctu(KappaChoice k, double theta = 1.0) { return {SchemeFamily::CTU, k, k, theta}; }

  int dim() const;
  /// Throws std::invalid_argument for theta outside [0,1] or a family/grid
  /// dimension mismatch.
  void validate(int grid_dim) const;

  bool operator==(const SchemeSpec&) const = default;
};

std::string_view family_name(SchemeFamily family);
/// Accepts si1d, impl1d, si2d, ctu.
SchemeFamily parse_family(std::string_view name);

/// Dimension-by-dimension semi-implicit row; x and y parts share one diagonal.
StencilRow semi_implicit_row_2d(double c, double d, double kappa_x, double kappa_y);

/// Semi-implicit row plus the corner transport terms.  The implicit corner
/// group is common to both CTU variants; the explicit corner groups are
/// blended as theta * first + (1 - theta) * second.
StencilRow ctu_row(double c, double d, double kappa_x, double kappa_y, double theta);

/// Row of `spec` for frozen Courant numbers (c, d).  `c_upwind` is the x
/// Courant number at the upwind neighbor, used only by the fully implicit
/// family.
StencilRow scheme_row(const SchemeSpec& spec, double c, double d, double c_upwind);
inline StencilRow scheme_row(const SchemeSpec& spec, double c, double d) { return scheme_row(spec, c, d, c); }

/// The two-point (kappa = sign) semi-implicit row used next to boundaries.
inline StencilRow smallest_stencil_row(double c, double d) { return semi_implicit_row_2d(c, d, sign(c), sign(d)); }

StencilRow assemble_semi_implicit_row_2d(const Grid& grid, int i, int j, const VelocityField& velocity, double tau,
                                         const KappaChoice& kappa_x, const KappaChoice& kappa_y);
StencilRow assemble_ctu_row(const Grid& grid, int i, int j, const VelocityField& velocity, double tau,
                            const KappaChoice& kappa_x, const KappaChoice& kappa_y, double theta);

/// Computational domain {phi < 0} on the background grid.  Nodes with
/// phi == 0 lie on the boundary and carry Dirichlet values.
struct ImplicitDomain {
  std::vector<double> phi;  // nodal values, grid layout
  TimeFunction dirichlet;   // u^D(x, y, t)
};

ImplicitDomain make_implicit_domain(const Grid& grid, const ScalarFunction& phi, TimeFunction dirichlet);

enum class NodeClass { Outside, InteriorFull, NearBoundary };

/// Offsets touched by a row (implicit and explicit, nonzero coefficients).
std::vector<std::pair<int, int>> footprint(const StencilRow& row);

/// Outside if phi_ij >= 0; InteriorFull if every in-grid node of the
/// footprint has phi <= 0; NearBoundary otherwise.  Footprint offsets that
/// fall off the grid are left to the rectangular-edge policy.
NodeClass classify_node(const Grid& grid, const std::vector<double>& phi, int i, int j,
                        const std::vector<std::pair<int, int>>& offsets);

/// Smallest accepted gamma; crossings closer than gamma_min*h to the outside
/// node are snapped onto it.
inline constexpr double kGammaMin = 1e-6;

/// Crossing parameter for a sign change between an inside value (< 0) and
/// an outside value (> 0) by linear interpolation.  The crossing lies at
/// distance gamma*h from the outside node.
double boundary_gamma(double phi_in, double phi_out);

struct SubstitutionWeights {
  double diagonal_delta;  // added to the diagonal coefficient
  double boundary_coef;   // rhs -= boundary_coef * u^D
};

/// Weights that replace a * U_out^{n+1} by the linear extrapolation through
/// U_in^{n+1} and the boundary value u^D at the crossing.
SubstitutionWeights inflow_substitution(double a, double gamma);

/// Replaces the implicit term at (di, dj) of `row` by the substitution.
/// Throws std::invalid_argument if gamma is outside [0, 1).
void apply_inflow_substitution(StencilRow& row, int di, int dj, double gamma, double boundary_value);

/// Outflow ghost value 2 U_ij - U_behind, or U_ij when the node behind is
/// not available.
inline double outflow_extrapolate(double u_center, std::optional<double> u_behind) {
  return u_behind ? 2.0 * u_center - *u_behind : u_center;
}

}  // namespace lsadvect
