#include "lsadvect/schemes2d.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lsadvect {

int SchemeSpec::dim() const {
  switch (family) {
    case SchemeFamily::SemiImplicit1D:
    case SchemeFamily::FullyImplicit1D: return 1;
    case SchemeFamily::SemiImplicit2D:
    case SchemeFamily::CTU: return 2;
  }
  return 2;
}

void SchemeSpec::validate(int grid_dim) const {
  if (!(theta >= 0.0 && theta <= 1.0)) throw std::invalid_argument("CTU blend theta must lie in [0, 1]");
  if (family == SchemeFamily::CTU && grid_dim != 2) throw std::invalid_argument("CTU schemes need a 2D grid");
  if (dim() == 1 && grid_dim != 1) {
    throw std::invalid_argument(std::string(family_name(family)) + " needs a 1D grid");
  }
}

std::string_view family_name(SchemeFamily family) {
  switch (family) {
    case SchemeFamily::SemiImplicit1D: return "si1d";
    case SchemeFamily::FullyImplicit1D: return "impl1d";
    case SchemeFamily::SemiImplicit2D: return "si2d";
    case SchemeFamily::CTU: return "ctu";
  }
  return "?";
}

SchemeFamily parse_family(std::string_view name) {
  if (name == "si1d") return SchemeFamily::SemiImplicit1D;
  if (name == "impl1d") return SchemeFamily::FullyImplicit1D;
  if (name == "si2d") return SchemeFamily::SemiImplicit2D;
  if (name == "ctu") return SchemeFamily::CTU;
  throw std::invalid_argument("unknown scheme '" + std::string(name) + "' (allowed: si1d, impl1d, si2d, ctu)");
}

StencilRow semi_implicit_row_2d(double c, double d, double kappa_x, double kappa_y) {
  const StencilRow x_part = semi_implicit_row_1d(c, kappa_x);
  const StencilRow y_part = transpose_row(semi_implicit_row_1d(d, kappa_y));

  // Both 1D parts include the identity (also when their diagonal was
  // pruned to nothing); the sum counts it once.
  StencilRow row;
  row.implicit_terms.add(0, 0, -1.0);
  row.explicit_terms.add(0, 0, -1.0);
  for (const StencilRow* part : {&x_part, &y_part}) {
    for (const Term& t : part->implicit_terms) row.implicit_terms.add(t.di, t.dj, t.coef);
    for (const Term& t : part->explicit_terms) row.explicit_terms.add(t.di, t.dj, t.coef);
  }
  row.prune();
  return row;
}

StencilRow ctu_row(double c, double d, double kappa_x, double kappa_y, double theta) {
  StencilRow row = semi_implicit_row_2d(c, d, kappa_x, kappa_y);
  const int sx = static_cast<int>(sign(c));
  const int sy = static_cast<int>(sign(d));
  const double w = std::abs(c * d);
  if (w == 0.0) return row;

  // Implicit corner group on the upwind quadrant.
  row.implicit_terms.add(0, 0, w / 6.0);
  row.implicit_terms.add(-sx, -sy, w / 6.0);
  row.implicit_terms.add(-sx, 0, -w / 6.0);
  row.implicit_terms.add(0, -sy, -w / 6.0);

  auto add_explicit_group = [&](double weight, int ax, int ay, int bx, int by) {
    if (weight == 0.0) return;
    row.explicit_terms.add(0, 0, 2.0 * weight);
    row.explicit_terms.add(ax, ay, weight);
    row.explicit_terms.add(bx, by, weight);
    row.explicit_terms.add(1, 0, -weight);
    row.explicit_terms.add(-1, 0, -weight);
    row.explicit_terms.add(0, 1, -weight);
    row.explicit_terms.add(0, -1, -weight);
  };
  add_explicit_group(theta * w / 12.0, sx, sy, -sx, -sy);
  add_explicit_group(-(1.0 - theta) * w / 12.0, -sx, sy, sx, -sy);
  row.prune();
  return row;
}

StencilRow scheme_row(const SchemeSpec& spec, double c, double d, double c_upwind) {
  switch (spec.family) {
    case SchemeFamily::SemiImplicit1D: return semi_implicit_row_1d(c, spec.kappa_x.value(c));
    case SchemeFamily::FullyImplicit1D: return fully_implicit_row_1d(c, c_upwind, spec.kappa_x.value(c));
    case SchemeFamily::SemiImplicit2D:
      return semi_implicit_row_2d(c, d, spec.kappa_x.value(c), spec.kappa_y.value(d));
    case SchemeFamily::CTU: return ctu_row(c, d, spec.kappa_x.value(c), spec.kappa_y.value(d), spec.theta);
  }
  throw std::logic_error("unhandled scheme family");
}

StencilRow assemble_semi_implicit_row_2d(const Grid& grid, int i, int j, const VelocityField& velocity, double tau,
                                         const KappaChoice& kappa_x, const KappaChoice& kappa_y) {
  const auto k = grid.index(i, j);
  const double c = tau * velocity.vx.at(k) / grid.h();
  const double d = tau * velocity.vy.at(k) / grid.h();
  return semi_implicit_row_2d(c, d, kappa_x.value(c), kappa_y.value(d));
}

StencilRow assemble_ctu_row(const Grid& grid, int i, int j, const VelocityField& velocity, double tau,
                            const KappaChoice& kappa_x, const KappaChoice& kappa_y, double theta) {
  if (grid.dim() != 2) throw std::invalid_argument("CTU rows need a 2D grid");
  if (!(theta >= 0.0 && theta <= 1.0)) throw std::invalid_argument("CTU blend theta must lie in [0, 1]");
  const auto k = grid.index(i, j);
  const double c = tau * velocity.vx.at(k) / grid.h();
  const double d = tau * velocity.vy.at(k) / grid.h();
  return ctu_row(c, d, kappa_x.value(c), kappa_y.value(d), theta);
}

ImplicitDomain make_implicit_domain(const Grid& grid, const ScalarFunction& phi, TimeFunction dirichlet) {
  ImplicitDomain domain{sample_field(phi, grid).values, std::move(dirichlet)};
  bool any_inside = false;
  for (double v : domain.phi) any_inside = any_inside || v < 0.0;
  if (!any_inside) throw std::invalid_argument("implicit domain {phi < 0} contains no grid node");
  return domain;
}

std::vector<std::pair<int, int>> footprint(const StencilRow& row) {
  std::vector<std::pair<int, int>> out;
  auto push = [&out](const Term& t) {
    if (t.coef == 0.0) return;
    for (const auto& o : out) {
      if (o.first == t.di && o.second == t.dj) return;
    }
    out.emplace_back(t.di, t.dj);
  };
  for (const Term& t : row.implicit_terms) push(t);
  for (const Term& t : row.explicit_terms) push(t);
  return out;
}

NodeClass classify_node(const Grid& grid, const std::vector<double>& phi, int i, int j,
                        const std::vector<std::pair<int, int>>& offsets) {
  if (phi[grid.index(i, j)] >= 0.0) return NodeClass::Outside;
  for (const auto& [di, dj] : offsets) {
    const int a = i + di;
    const int b = j + dj;
    if (!grid.contains(a, b)) continue;
    if (phi[grid.index(a, b)] > 0.0) return NodeClass::NearBoundary;
  }
  return NodeClass::InteriorFull;
}

double boundary_gamma(double phi_in, double phi_out) {
  if (!(phi_in < 0.0 && phi_out > 0.0)) throw std::invalid_argument("boundary_gamma needs a strict sign change");
  const double gamma = phi_out / (phi_out - phi_in);
  return gamma < kGammaMin ? 0.0 : gamma;
}

SubstitutionWeights inflow_substitution(double a, double gamma) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("substitution gamma must lie in [0, 1)");
  return {-a * gamma / (1.0 - gamma), a / (1.0 - gamma)};
}

void apply_inflow_substitution(StencilRow& row, int di, int dj, double gamma, double boundary_value) {
  const double a = row.implicit_terms.at(di, dj);
  const auto w = inflow_substitution(a, gamma);
  TermList kept;
  for (const Term& t : row.implicit_terms) {
    if (t.di == di && t.dj == dj) continue;
    kept.add(t.di, t.dj, t.coef);
  }
  kept.add(0, 0, w.diagonal_delta);
  row.implicit_terms = kept;
  row.rhs_extra -= w.boundary_coef * boundary_value;
}

}  // namespace lsadvect
