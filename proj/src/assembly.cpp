#include "lsadvect/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace lsadvect {

void validate_boundary_1d(const BoundarySpec1D& spec, double v_left, double v_right) {
  auto check = [](EndCondition cond, double inward, const char* end) {
    const bool ok = (cond == EndCondition::DirichletInflow && inward > 0.0) ||
                    (cond == EndCondition::Frozen && inward == 0.0) ||
                    (cond == EndCondition::OutflowExtrapolate && inward < 0.0);
    if (!ok) throw std::invalid_argument(std::string(end) + " boundary condition does not match the velocity sign");
  };
  check(spec.left, v_left, "left");
  check(spec.right, -v_right, "right");
  if (spec.left == EndCondition::DirichletInflow && !spec.left_value) {
    throw std::invalid_argument("left inflow boundary needs a value function");
  }
  if (spec.right == EndCondition::DirichletInflow && !spec.right_value) {
    throw std::invalid_argument("right inflow boundary needs a value function");
  }
}

BoundarySpec to_boundary_spec(const BoundarySpec1D& spec, const Grid& grid) {
  const double mid = 0.5 * (grid.bounds().x_min + grid.bounds().x_max);
  auto left = spec.left_value;
  auto right = spec.right_value;
  return BoundarySpec::characteristic([=](double x, double, double t) {
    const auto& f = x < mid ? left : right;
    if (!f) throw std::logic_error("boundary value requested at an end without a value function");
    return f(t);
  });
}

namespace {

struct Weight {
  int index;
  double w;
};

// Linear extrapolation weights for an index along one axis with n nodes.
int axis_weights(int a, int n, Weight out[2]) {
  if (a < 0) {
    const int d = -a;
    out[0] = {0, 1.0 + d};
    out[1] = {1, -static_cast<double>(d)};
    return 2;
  }
  if (a > n - 1) {
    const int d = a - (n - 1);
    out[0] = {n - 1, 1.0 + d};
    out[1] = {n - 2, -static_cast<double>(d)};
    return 2;
  }
  out[0] = {a, 1.0};
  return 1;
}

void accumulate(std::vector<std::pair<std::size_t, double>>& list, std::size_t col, double v) {
  for (auto& e : list) {
    if (e.first == col) {
      e.second += v;
      return;
    }
  }
  list.emplace_back(col, v);
}

}  // namespace

struct StepOperator::RowBuilder {
  std::size_t node = 0;
  double diag = 0.0;
  std::vector<std::pair<std::size_t, double>> unknown;
  std::vector<std::pair<std::size_t, double>> known;
  std::vector<std::pair<std::size_t, double>> expl;
  std::vector<PointTerm> points;
  double rhs_extra = 0.0;

  void reset(std::size_t k) {
    node = k;
    diag = 0.0;
    unknown.clear();
    known.clear();
    expl.clear();
    points.clear();
    rhs_extra = 0.0;
  }
};

StepOperator::StepOperator(const Grid& grid, const VelocityField& velocity, double tau, const SchemeSpec& scheme,
                           const BoundarySpec& boundary, const ImplicitDomain* domain)
    : grid_(grid), boundary_(boundary), scheme_(scheme) {
  scheme.validate(grid.dim());
  if (domain) {
    if (grid.dim() != 2) throw std::invalid_argument("implicit domains need a 2D grid");
    if (domain->phi.size() != grid.size()) throw std::invalid_argument("implicit domain does not match the grid");
    domain_ = *domain;
  }
  if (velocity.vx.size() != grid.size() || velocity.vy.size() != grid.size()) {
    throw std::invalid_argument("velocity field does not match the grid");
  }
  if (!(tau > 0.0)) throw std::invalid_argument("time step must be positive");

  const std::size_t n = grid.size();
  courant_x_.resize(n);
  courant_y_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    courant_x_[k] = tau * velocity.vx[k] / grid.h();
    courant_y_[k] = grid.dim() == 2 ? tau * velocity.vy[k] / grid.h() : 0.0;
  }

  status_.assign(n, NodeStatus::Unknown);
  classes_.assign(n, NodeClass::InteriorFull);
  std::vector<bool> from_domain(n, false);
  if (domain_) {
    for (std::size_t k = 0; k < n; ++k) {
      const double p = domain_->phi[k];
      if (p > 0.0) {
        status_[k] = NodeStatus::Outside;
      } else if (p == 0.0) {
        status_[k] = NodeStatus::Dirichlet;
        from_domain[k] = true;
      }
      if (p >= 0.0) classes_[k] = NodeClass::Outside;
    }
  }

  // Rectangular edges.
  const int nx = grid.nx();
  const int ny = grid.ny();
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const std::size_t k = grid.index(i, j);
      if (status_[k] != NodeStatus::Unknown) continue;
      bool dirichlet = false;
      auto edge = [&](Edge e, bool on_edge, double inward) {
        if (!on_edge) return;
        const auto policy = boundary_.edges[static_cast<int>(e)];
        if (policy == EdgePolicy::Prescribed || inward > 0.0) dirichlet = true;
      };
      edge(Edge::West, i == 0, courant_x_[k]);
      edge(Edge::East, i == nx - 1, -courant_x_[k]);
      if (grid.dim() == 2) {
        edge(Edge::South, j == 0, courant_y_[k]);
        edge(Edge::North, j == ny - 1, -courant_y_[k]);
      }
      if (dirichlet) {
        if (!boundary_.dirichlet) {
          throw std::invalid_argument("inflow or prescribed edge node (" + std::to_string(i) + "," +
                                      std::to_string(j) + ") needs a Dirichlet function");
        }
        status_[k] = NodeStatus::Dirichlet;
        classes_[k] = NodeClass::Outside;
      }
    }
  }
  if (domain_ && !domain_->dirichlet) {
    for (std::size_t k = 0; k < n; ++k) {
      if (from_domain[k]) throw std::invalid_argument("implicit domain needs a Dirichlet function");
    }
  }

  for (std::size_t k = 0; k < n; ++k) {
    if (status_[k] == NodeStatus::Dirichlet) {
      dirichlet_nodes_.push_back(k);
      dirichlet_from_domain_.push_back(from_domain[k]);
    } else if (status_[k] == NodeStatus::Outside) {
      ++info_.outside_nodes;
    }
  }
  info_.dirichlet_nodes = dirichlet_nodes_.size();

  system_.nx = nx;
  system_.ny = ny;
  RowBuilder b;
  for (std::size_t k = 0; k < n; ++k) {
    if (status_[k] != NodeStatus::Unknown) continue;
    b.reset(k);
    build_row(k, b);
    if (b.diag == 0.0) {
      auto [i, j] = grid.coords(k);
      throw std::runtime_error("zero diagonal at node (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
    const std::size_t r = system_.nodes.size();
    system_.nodes.push_back(k);
    system_.diag.push_back(b.diag);
    for (const auto& [col, v] : b.unknown) {
      if (v == 0.0) continue;
      system_.cols.push_back(col);
      system_.vals.push_back(v);
    }
    system_.offsets.push_back(system_.cols.size());
    for (const auto& [col, v] : b.known) {
      known_cols_.push_back(col);
      known_vals_.push_back(v);
    }
    known_offsets_.push_back(known_cols_.size());
    for (const auto& [col, v] : b.expl) {
      if (v == 0.0) continue;
      explicit_cols_.push_back(col);
      explicit_vals_.push_back(v);
    }
    explicit_offsets_.push_back(explicit_cols_.size());
    rhs_extra_.push_back(b.rhs_extra);
    for (PointTerm p : b.points) {
      p.row = r;
      point_terms_.push_back(p);
    }
  }
  system_.rhs.assign(system_.nodes.size(), 0.0);
  system_.index_rows();
}

void StepOperator::build_row(std::size_t k, RowBuilder& b) {
  auto [i, j] = grid_.coords(k);
  const double c = courant_x_[k];
  const double d = courant_y_[k];
  double c_up = c;
  const int up = i - static_cast<int>(sign(c));
  if (grid_.contains(up, j)) c_up = courant_x_[grid_.index(up, j)];

  info_.max_courant = std::max({info_.max_courant, std::abs(c), std::abs(d)});
  info_.max_effective_courant = std::max({info_.max_effective_courant, std::abs(c), std::abs(d)});

  StencilRow row = scheme_row(scheme_, c, d, c_up);
  bool near = false;
  if (domain_) {
    const NodeClass cls = classify_node(grid_, domain_->phi, i, j, footprint(row));
    classes_[k] = cls;
    near = cls == NodeClass::NearBoundary;
  }
  if (near) {
    row = smallest_stencil_row(c, d);
    ++info_.near_boundary_rows;
  } else {
    ++info_.interior_rows;
  }
  resolve(row, i, j, near, b);
}

void StepOperator::resolve(const StencilRow& row, int i, int j, bool near_boundary, RowBuilder& b) {
  const int nx = grid_.nx();
  const int ny = grid_.ny();
  const std::size_t self = grid_.index(i, j);
  auto fail = [&](const std::string& why) {
    throw std::runtime_error("cannot close row at node (" + std::to_string(i) + "," + std::to_string(j) + "): " + why);
  };
  auto prescribed_beyond = [&](int a, int bj) {
    return (a < 0 && boundary_.edges[0] == EdgePolicy::Prescribed) ||
           (a >= nx && boundary_.edges[1] == EdgePolicy::Prescribed) ||
           (bj < 0 && boundary_.edges[2] == EdgePolicy::Prescribed) ||
           (bj >= ny && boundary_.edges[3] == EdgePolicy::Prescribed);
  };

  // Implicit part.
  for (const Term& t : row.implicit_terms) {
    const int a = i + t.di;
    const int bj = j + t.dj;
    if (grid_.contains(a, bj)) {
      const std::size_t q = grid_.index(a, bj);
      switch (status_[q]) {
        case NodeStatus::Unknown:
          if (q == self) {
            b.diag += t.coef;
          } else {
            accumulate(b.unknown, q, t.coef);
          }
          break;
        case NodeStatus::Dirichlet: accumulate(b.known, q, t.coef); break;
        case NodeStatus::Outside: {
          if (!near_boundary || std::abs(t.di) + std::abs(t.dj) != 1) fail("implicit reference outside the domain");
          const double phi_in = domain_->phi[self];
          const double phi_out = domain_->phi[q];
          const double raw_gamma = phi_out / (phi_out - phi_in);
          const double gamma = boundary_gamma(phi_in, phi_out);
          const auto w = inflow_substitution(t.coef, gamma);
          b.diag += w.diagonal_delta;
          const double x = gamma * grid_.x(i) + (1.0 - gamma) * grid_.x(a);
          const double y = gamma * grid_.y(j) + (1.0 - gamma) * grid_.y(bj);
          b.points.push_back({0, x, y, w.boundary_coef, true, true});
          info_.min_gamma = std::min(info_.min_gamma, raw_gamma);
          if (gamma > 0.0) {
            const double cn = t.di != 0 ? std::abs(courant_x_[self]) : std::abs(courant_y_[self]);
            info_.max_effective_courant = std::max(info_.max_effective_courant, cn / gamma);
          }
          break;
        }
      }
      continue;
    }
    if (prescribed_beyond(a, bj)) {
      b.points.push_back({0, grid_.x(a), grid_.y(bj), t.coef, true, false});
      continue;
    }
    Weight wx[2], wy[2];
    const int mx = axis_weights(a, nx, wx);
    const int my = axis_weights(bj, ny, wy);
    for (int p = 0; p < mx; ++p) {
      for (int r = 0; r < my; ++r) {
        const std::size_t q = grid_.index(wx[p].index, wy[r].index);
        const double v = t.coef * wx[p].w * wy[r].w;
        switch (status_[q]) {
          case NodeStatus::Unknown:
            if (q == self) {
              b.diag += v;
            } else {
              accumulate(b.unknown, q, v);
            }
            break;
          case NodeStatus::Dirichlet: accumulate(b.known, q, v); break;
          case NodeStatus::Outside: fail("edge extrapolation reaches outside the domain");
        }
      }
    }
  }

  // Explicit part.
  for (const Term& t : row.explicit_terms) {
    const int a = i + t.di;
    const int bj = j + t.dj;
    if (grid_.contains(a, bj)) {
      const std::size_t q = grid_.index(a, bj);
      if (status_[q] != NodeStatus::Outside) {
        accumulate(b.expl, q, t.coef);
        continue;
      }
      if (!near_boundary || std::abs(t.di) + std::abs(t.dj) != 1) fail("explicit reference outside the domain");
      const int ba = i - t.di;
      const int bb = j - t.dj;
      if (grid_.contains(ba, bb) && status_[grid_.index(ba, bb)] != NodeStatus::Outside) {
        accumulate(b.expl, self, 2.0 * t.coef);
        accumulate(b.expl, grid_.index(ba, bb), -t.coef);
      } else {
        accumulate(b.expl, self, t.coef);
      }
      continue;
    }
    if (prescribed_beyond(a, bj)) {
      b.points.push_back({0, grid_.x(a), grid_.y(bj), t.coef, false, false});
      continue;
    }
    Weight wx[2], wy[2];
    const int mx = axis_weights(a, nx, wx);
    const int my = axis_weights(bj, ny, wy);
    for (int p = 0; p < mx; ++p) {
      for (int r = 0; r < my; ++r) {
        const std::size_t q = grid_.index(wx[p].index, wy[r].index);
        if (status_[q] == NodeStatus::Outside) fail("edge extrapolation reaches outside the domain");
        accumulate(b.expl, q, t.coef * wx[p].w * wy[r].w);
      }
    }
  }
  b.rhs_extra += row.rhs_extra;
}

const LinearStep& StepOperator::advance(std::span<const double> current, double t_now, double t_next,
                                        std::span<double> next) {
  for (std::size_t m = 0; m < dirichlet_nodes_.size(); ++m) {
    const std::size_t k = dirichlet_nodes_[m];
    auto [i, j] = grid_.coords(k);
    next[k] = source(dirichlet_from_domain_[m])(grid_.x(i), grid_.y(j), t_next);
  }
  for (std::size_t r = 0; r < system_.size(); ++r) {
    double acc = rhs_extra_[r];
    for (std::size_t m = explicit_offsets_[r]; m < explicit_offsets_[r + 1]; ++m) {
      acc += explicit_vals_[m] * current[explicit_cols_[m]];
    }
    for (std::size_t m = known_offsets_[r]; m < known_offsets_[r + 1]; ++m) {
      acc -= known_vals_[m] * next[known_cols_[m]];
    }
    system_.rhs[r] = acc;
  }
  for (const PointTerm& p : point_terms_) {
    const double value = source(p.from_domain)(p.x, p.y, p.next_level ? t_next : t_now);
    system_.rhs[p.row] += p.next_level ? -p.coef * value : p.coef * value;
  }
  return system_;
}

LinearStep assemble_step(const Field& field, const VelocityField& velocity, double tau, const SchemeSpec& scheme,
                         const BoundarySpec& boundary, const ImplicitDomain* domain, double t_now,
                         std::vector<double>& next) {
  StepOperator op(field.grid, velocity, tau, scheme, boundary, domain);
  next = field.values;
  return op.advance(field.values, t_now, t_now + tau, next);
}

}  // namespace lsadvect
