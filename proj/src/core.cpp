#include "lsadvect/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace lsadvect {

Grid::Grid(Bounds bounds, int cells, int dim) : bounds_(bounds), cells_(cells), dim_(dim) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("grid dimension must be 1 or 2");
  if (cells < 4) throw std::invalid_argument("grid needs at least 4 cells per axis, got " + std::to_string(cells));
  if (!(bounds.x_max > bounds.x_min)) throw std::invalid_argument("grid x bounds are not ordered");
  if (dim == 2 && !(bounds.y_max > bounds.y_min)) throw std::invalid_argument("grid y bounds are not ordered");
  h_ = (bounds.x_max - bounds.x_min) / cells;
  if (dim == 2) {
    const double hy = (bounds.y_max - bounds.y_min) / cells;
    if (std::abs(hy - h_) > 1e-12 * h_) throw std::invalid_argument("grid must have equal spacing in x and y");
  }
}

Grid make_grid(Bounds bounds, int cells, int dim) { return Grid(bounds, cells, dim); }

bool Field::all_finite() const {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

Field sample_field(const ScalarFunction& f, const Grid& grid) {
  Field field{grid, std::vector<double>(grid.size()), 0};
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) {
      const double v = f(grid.x(i), grid.y(j));
      if (!std::isfinite(v)) {
        throw std::domain_error("non-finite sample at node (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
      field(i, j) = v;
    }
  }
  return field;
}

VelocityField sample_velocity(const VectorFunction& v, const Grid& grid) {
  VelocityField out{std::vector<double>(grid.size()), std::vector<double>(grid.size())};
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) {
      auto [vx, vy] = v(grid.x(i), grid.y(j));
      if (!std::isfinite(vx) || !std::isfinite(vy)) {
        throw std::domain_error("non-finite velocity at node (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
      const auto k = grid.index(i, j);
      out.vx[k] = vx;
      out.vy[k] = grid.dim() == 2 ? vy : 0.0;
    }
  }
  return out;
}

std::vector<Courant> courant_numbers(const VelocityField& velocity, double tau, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("grid spacing must be positive");
  std::vector<Courant> out(velocity.vx.size());
  const double scale = tau / h;
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = {scale * velocity.vx[k], velocity.vy.empty() ? 0.0 : scale * velocity.vy[k]};
  }
  return out;
}

TimeStepping make_time_stepping(double final_time, int steps) {
  if (!(final_time > 0.0)) throw std::invalid_argument("final time must be positive");
  if (steps < 1) throw std::invalid_argument("step count must be at least 1");
  return {final_time / steps, final_time, steps};
}

}  // namespace lsadvect
