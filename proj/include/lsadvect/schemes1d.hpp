#pragma once

#include "lsadvect/core.hpp"
#include "lsadvect/kappa.hpp"
#include "lsadvect/stencil.hpp"

namespace lsadvect {

/// Semi-implicit kappa-scheme row along x in Courant units:
///
///   U_i^{n+1} + C (d^{-+} U_i^{n+1} - 0.5 h d^kappa U_{i-+1}^{n+1}) = U_i^n - 0.5 C h d^kappa U_i^n
///
/// The implicit part lies on the upwind side (offsets 0, -s, -2s with
/// s = sign(C)); the explicit part touches offsets -1, 0, +1.  kappa = sign(C)
/// gives the two-point implicit stencil, kappa = 0 the central variant.
StencilRow semi_implicit_row_1d(double courant, double kappa);

/// Fully implicit kappa-scheme row along x.  `courant_upwind` is the Courant
/// number at the upwind neighbor i -+ 1; the second-order time term uses both
/// velocity values.  The explicit part is exactly {0: 1}.
StencilRow fully_implicit_row_1d(double courant, double courant_upwind, double kappa);

/// Grid-facing wrappers: evaluate the Courant number(s) at node i and the
/// kappa choice, then build the row.  The fully implicit row needs the upwind
/// neighbor velocity; std::out_of_range is thrown when it lies off the grid.
StencilRow assemble_semi_implicit_row_1d(const Grid& grid, int i, const VelocityField& velocity, double tau,
                                         const KappaChoice& kappa);
StencilRow assemble_implicit_row_1d(const Grid& grid, int i, const VelocityField& velocity, double tau,
                                    const KappaChoice& kappa);

/// Maps a row built along x onto the y axis.
StencilRow transpose_row(const StencilRow& row);

}  // namespace lsadvect
