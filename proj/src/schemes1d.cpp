#include "lsadvect/schemes1d.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lsadvect {

namespace {

// Adds weight * h * d^kappa U at offset `center` (along x).
void add_kappa_gradient(TermList& terms, int center, double kappa, double weight) {
  terms.add(center - 1, 0, -weight * 0.5 * (1.0 - kappa));
  terms.add(center, 0, -weight * kappa);
  terms.add(center + 1, 0, weight * 0.5 * (1.0 + kappa));
}

}  // namespace

StencilRow semi_implicit_row_1d(double courant, double kappa) {
  const int s = static_cast<int>(sign(courant));
  if (s == 0) return identity_row();
  const double a = std::abs(courant);
  const double k_up = s * kappa;  // kappa measured along the flow direction

  StencilRow row;
  row.implicit_terms.add(0, 0, 1.0 + a * (3.0 - k_up) / 4.0);
  row.implicit_terms.add(-s, 0, -a * (1.0 - 0.5 * k_up));
  row.implicit_terms.add(-2 * s, 0, a * (1.0 - k_up) / 4.0);

  row.explicit_terms.add(0, 0, 1.0 + 0.5 * courant * kappa);
  row.explicit_terms.add(-1, 0, 0.25 * courant * (1.0 - kappa));
  row.explicit_terms.add(1, 0, -0.25 * courant * (1.0 + kappa));
  row.prune();
  return row;
}

StencilRow fully_implicit_row_1d(double courant, double courant_upwind, double kappa) {
  const int s = static_cast<int>(sign(courant));
  if (s == 0) return identity_row();
  const double a = std::abs(courant);

  StencilRow row;
  row.implicit_terms.add(0, 0, 1.0 + a);
  row.implicit_terms.add(-s, 0, -a);
  add_kappa_gradient(row.implicit_terms, 0, kappa, 0.5 * courant * (1.0 + s * courant));
  add_kappa_gradient(row.implicit_terms, -s, kappa, -0.5 * courant * (1.0 + s * courant_upwind));
  row.explicit_terms.add(0, 0, 1.0);
  row.prune();
  return row;
}

StencilRow assemble_semi_implicit_row_1d(const Grid& grid, int i, const VelocityField& velocity, double tau,
                                         const KappaChoice& kappa) {
  const double c = tau * velocity.vx.at(grid.index(i, 0)) / grid.h();
  return semi_implicit_row_1d(c, kappa.value(c));
}

StencilRow assemble_implicit_row_1d(const Grid& grid, int i, const VelocityField& velocity, double tau,
                                    const KappaChoice& kappa) {
  const double c = tau * velocity.vx.at(grid.index(i, 0)) / grid.h();
  const int s = static_cast<int>(sign(c));
  if (s == 0) return identity_row();
  const int upwind = i - s;
  if (!grid.contains(upwind, 0)) {
    throw std::out_of_range("fully implicit row at node " + std::to_string(i) + " needs velocity off the grid");
  }
  const double c_up = tau * velocity.vx[grid.index(upwind, 0)] / grid.h();
  return fully_implicit_row_1d(c, c_up, kappa.value(c));
}

StencilRow transpose_row(const StencilRow& row) {
  StencilRow out;
  for (const Term& t : row.implicit_terms) out.implicit_terms.add(t.dj, t.di, t.coef);
  for (const Term& t : row.explicit_terms) out.explicit_terms.add(t.dj, t.di, t.coef);
  out.rhs_extra = row.rhs_extra;
  return out;
}

}  // namespace lsadvect
