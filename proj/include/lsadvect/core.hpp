#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace lsadvect {

using ScalarFunction = std::function<double(double x, double y)>;
using TimeFunction = std::function<double(double x, double y, double t)>;
using VectorFunction = std::function<std::pair<double, double>(double x, double y)>;

struct Bounds {
  double x_min = -1.0;
  double x_max = 1.0;
  double y_min = -1.0;
  double y_max = 1.0;

  bool operator==(const Bounds&) const = default;
};

/// Uniform Cartesian grid with M cells per axis and M+1 nodes per axis.
///
/// A one-dimensional grid is the degenerate case with a single row of nodes
/// (j == 0); the y bounds are then ignored.  Nodes are stored row-major, j
/// outer and i inner.
class Grid {
 public:
  Grid() = default;
  Grid(Bounds bounds, int cells, int dim);

  int dim() const { return dim_; }
  int cells() const { return cells_; }
  double h() const { return h_; }
  const Bounds& bounds() const { return bounds_; }

  int nx() const { return cells_ + 1; }
  int ny() const { return dim_ == 2 ? cells_ + 1 : 1; }
  std::size_t size() const { return static_cast<std::size_t>(nx()) * ny(); }

  double x(int i) const { return bounds_.x_min + i * h_; }
  double y(int j) const { return dim_ == 2 ? bounds_.y_min + j * h_ : 0.0; }

  bool contains(int i, int j) const { return i >= 0 && i < nx() && j >= 0 && j < ny(); }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx() + i; }
  std::pair<int, int> coords(std::size_t k) const {
    return {static_cast<int>(k % nx()), static_cast<int>(k / nx())};
  }

  bool operator==(const Grid&) const = default;

 private:
  Bounds bounds_{};
  int cells_ = 0;
  int dim_ = 2;
  double h_ = 0.0;
};

/// Throws std::invalid_argument for fewer than 4 cells or inverted bounds.
Grid make_grid(Bounds bounds, int cells, int dim);

/// Nodal scalar values on a grid at a given time level.
struct Field {
  Grid grid;
  std::vector<double> values;
  int time_level = 0;

  double& operator()(int i, int j) { return values[grid.index(i, j)]; }
  double operator()(int i, int j) const { return values[grid.index(i, j)]; }
  bool all_finite() const;
};

/// Samples f at every node.  Rejects non-finite samples.
Field sample_field(const ScalarFunction& f, const Grid& grid);

/// Nodal velocity components, sampled once per grid.
struct VelocityField {
  std::vector<double> vx;
  std::vector<double> vy;
};

VelocityField sample_velocity(const VectorFunction& v, const Grid& grid);

/// Signed grid Courant numbers tau*V/h and tau*W/h at one node.
struct Courant {
  double c = 0.0;
  double d = 0.0;
};

std::vector<Courant> courant_numbers(const VelocityField& velocity, double tau, double h);

struct TimeStepping {
  double tau = 0.0;
  double final_time = 0.0;
  int steps = 0;

  double time(int n) const { return n == steps ? final_time : n * tau; }
};

/// tau = T/N.  Rejects T <= 0 or N < 1.
TimeStepping make_time_stepping(double final_time, int steps);

inline double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace lsadvect
