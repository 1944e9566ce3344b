#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "lsadvect/core.hpp"
#include "lsadvect/schemes2d.hpp"
#include "lsadvect/solver.hpp"

namespace lsadvect {

enum class Edge { West = 0, East = 1, South = 2, North = 3 };

/// Treatment of one edge of the rectangular grid.
///
/// Characteristic: a node on the edge whose velocity points into the domain
/// takes the Dirichlet value; elsewhere values referenced beyond the edge are
/// linear extrapolations of the two nearest nodes along the axis (corners use
/// the tensor product of the two axis rules).  A node with zero velocity gets
/// the identity row and stays frozen.
///
/// Prescribed: every node on the edge and every value beyond it is taken
/// from the Dirichlet function.
enum class EdgePolicy { Characteristic, Prescribed };

struct BoundarySpec {
  std::array<EdgePolicy, 4> edges{EdgePolicy::Characteristic, EdgePolicy::Characteristic,
                                  EdgePolicy::Characteristic, EdgePolicy::Characteristic};
  TimeFunction dirichlet;  // u^D(x, y, t); required for inflow or prescribed edges

  static BoundarySpec characteristic(TimeFunction u) { return {{}, std::move(u)}; }
  static BoundarySpec prescribed(TimeFunction u) {
    return {{EdgePolicy::Prescribed, EdgePolicy::Prescribed, EdgePolicy::Prescribed, EdgePolicy::Prescribed},
            std::move(u)};
  }
};

/// Per-end condition for 1D problems.
enum class EndCondition { DirichletInflow, Frozen, OutflowExtrapolate };

struct BoundarySpec1D {
  EndCondition left = EndCondition::OutflowExtrapolate;
  EndCondition right = EndCondition::OutflowExtrapolate;
  std::function<double(double t)> left_value;
  std::function<double(double t)> right_value;
};

/// Throws std::invalid_argument when an end condition disagrees with the
/// sign of the velocity at that end.
void validate_boundary_1d(const BoundarySpec1D& spec, double v_left, double v_right);
BoundarySpec to_boundary_spec(const BoundarySpec1D& spec, const Grid& grid);

/// Linear extrapolation `distance` nodes beyond the edge value.
inline double extrapolate_ghost(double u_edge, double u_inner, int distance) {
  return (1.0 + distance) * u_edge - distance * u_inner;
}

enum class NodeStatus : std::uint8_t { Unknown, Dirichlet, Outside };

struct AssemblyInfo {
  std::size_t interior_rows = 0;
  std::size_t near_boundary_rows = 0;
  std::size_t dirichlet_nodes = 0;
  std::size_t outside_nodes = 0;
  double max_courant = 0.0;            // max |C|, |D| over solved nodes
  double max_effective_courant = 0.0;  // including 1/gamma at cut cells
  double min_gamma = 1.0;              // over substituted crossings
};

/// Time-step operator compiled once for a fixed grid, velocity, time step,
/// scheme and boundary description.
///
/// Rows are assembled per node from the preferred scheme; nodes whose
/// footprint reaches outside an implicit domain fall back to the two-point
/// semi-implicit row with inflow substitution and outflow extrapolation.
/// Each call to `advance` evaluates the boundary data and right-hand side for
/// one step.
class StepOperator {
 public:
  StepOperator(const Grid& grid, const VelocityField& velocity, double tau, const SchemeSpec& scheme,
               const BoundarySpec& boundary, const ImplicitDomain* domain = nullptr);

  /// Writes Dirichlet values at t_next into `next` and returns the system
  /// for the remaining solved nodes.  The returned reference stays valid
  /// until the next call.
  const LinearStep& advance(std::span<const double> current, double t_now, double t_next, std::span<double> next);

  const Grid& grid() const { return grid_; }
  const std::vector<NodeStatus>& status() const { return status_; }
  const std::vector<NodeClass>& classes() const { return classes_; }
  const AssemblyInfo& info() const { return info_; }
  const LinearStep& system() const { return system_; }

 private:
  struct PointTerm {
    std::size_t row;
    double x;
    double y;
    double coef;
    bool next_level;   // true: implicit, rhs -= coef * u^D(t_next)
    bool from_domain;  // implicit-domain Dirichlet function, else the edge one
  };
  struct RowBuilder;

  void build_row(std::size_t k, RowBuilder& b);
  void resolve(const StencilRow& row, int i, int j, bool near_boundary, RowBuilder& b);

  const TimeFunction& source(bool from_domain) const { return from_domain ? domain_->dirichlet : boundary_.dirichlet; }

  Grid grid_;
  std::optional<ImplicitDomain> domain_;
  BoundarySpec boundary_;
  SchemeSpec scheme_;
  std::vector<double> courant_x_;
  std::vector<double> courant_y_;

  std::vector<NodeStatus> status_;
  std::vector<NodeClass> classes_;
  std::vector<std::size_t> dirichlet_nodes_;
  std::vector<bool> dirichlet_from_domain_;
  AssemblyInfo info_;

  LinearStep system_;
  std::vector<std::size_t> known_offsets_{0};
  std::vector<std::size_t> known_cols_;
  std::vector<double> known_vals_;
  std::vector<std::size_t> explicit_offsets_{0};
  std::vector<std::size_t> explicit_cols_;
  std::vector<double> explicit_vals_;
  std::vector<double> rhs_extra_;
  std::vector<PointTerm> point_terms_;
};

/// One-shot assembly of the system advancing `field` by one step.
LinearStep assemble_step(const Field& field, const VelocityField& velocity, double tau, const SchemeSpec& scheme,
                         const BoundarySpec& boundary, const ImplicitDomain* domain, double t_now,
                         std::vector<double>& next);

}  // namespace lsadvect
