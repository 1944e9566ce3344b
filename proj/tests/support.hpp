#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "lsadvect/stencil.hpp"

namespace testsupport {

// Dense 2D array indexed with an offset so rows can be applied around a
// centre node without bounds bookkeeping.
struct Patch {
  int radius = 3;
  std::vector<double> v;

  explicit Patch(int r = 3) : radius(r), v((2 * r + 1) * (2 * r + 1), 0.0) {}
  double& at(int di, int dj) { return v[(dj + radius) * (2 * radius + 1) + di + radius]; }
  double at(int di, int dj) const { return v[(dj + radius) * (2 * radius + 1) + di + radius]; }

  static Patch random(std::mt19937& rng, int r = 3) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    Patch p(r);
    for (double& x : p.v) x = d(rng);
    return p;
  }
  static Patch from(const std::function<double(int, int)>& f, int r = 3) {
    Patch p(r);
    for (int j = -r; j <= r; ++j)
      for (int i = -r; i <= r; ++i) p.at(i, j) = f(i, j);
    return p;
  }
};

inline double apply(const lsadvect::TermList& terms, const Patch& p) {
  double s = 0.0;
  for (const auto& t : terms) s += t.coef * p.at(t.di, t.dj);
  return s;
}

// h * d^kappa U at (i, j) along x (axis 0) or y (axis 1).
inline double hgrad(const Patch& p, int i, int j, int axis, double kappa) {
  const int ex = axis == 0 ? 1 : 0, ey = axis == 1 ? 1 : 0;
  const double l = p.at(i - ex, j - ey), c = p.at(i, j), r = p.at(i + ex, j + ey);
  return 0.5 * ((1.0 - kappa) * (c - l) + (1.0 + kappa) * (r - c));
}

}  // namespace testsupport
