#pragma once

#include <complex>
#include <cstddef>

#include "lsadvect/schemes2d.hpp"
#include "lsadvect/stencil.hpp"

namespace lsadvect {

/// |S| <= 1 + kStabilitySlack counts as stable.
inline constexpr double kStabilitySlack = 1e-9;

/// Plane-wave phases (xi, eta) in (-pi, pi) and frozen Courant numbers.
struct WaveProbe {
  double xi = 0.0;
  double eta = 0.0;
  double c = 0.0;
  double d = 0.0;
};

/// S = (explicit row applied to exp(i(k xi + l eta))) / (implicit row applied
/// to the same).  Covers every offset of the row, including CTU corners.
/// Throws std::domain_error when the implicit symbol vanishes.
std::complex<double> amplification_factor(const StencilRow& row, double xi, double eta);
std::complex<double> amplification_factor(const SchemeSpec& spec, double c, double d, double xi, double eta);

struct SamplingSpec {
  int points_1d = 2048;
  int points_2d = 512;  // per axis
  int candidates = 16;
  int refine_iterations = 40;
  bool refine = true;
  // Region searches: Courant grid per axis and the coarser phase grid used
  // while scanning it.
  int courant_points_1d = 401;
  int courant_points_2d = 41;
  int region_phase_points_1d = 512;
  int region_phase_points_2d = 96;
  int region_candidates = 12;
};

struct StabilityReport {
  double max_abs_s = 0.0;
  WaveProbe argmax;
  bool stable = true;
  std::size_t samples = 0;
};

/// Grid scan over the open phase square followed by golden-section line
/// refinement around the best candidates.  The scan grids are nested under
/// doubling of the point count.
StabilityReport max_amplification(const SchemeSpec& spec, double c, double d, const SamplingSpec& sampling = {});

/// Maximum of |S| over every frozen Courant pair in the rectangle spanned by
/// (0, 0) and (c, d), i.e. |C'| <= |c| and |D'| <= |d| with the signs of c, d.
/// The argmax reports the worst Courant pair.  Nested rectangles give
/// monotone results, so this is the quantity behind per-axis limits such as
/// "stable for |C| <= a and |D| <= b".
StabilityReport max_amplification_region(const SchemeSpec& spec, double c, double d, const SamplingSpec& sampling = {});

enum class ThresholdMode {
  Pointwise,  // |S| at the ray point only
  Region      // |S| over the rectangle spanned by the ray point
};

struct ThresholdReport {
  bool bounded = false;  // false: stable over the whole bracket
  double limit = 0.0;    // midpoint of the final bracket
  double lower = 0.0;    // last stable ray parameter
  double upper = 0.0;    // first unstable ray parameter
  double dir_c = 0.0;    // direction that produced the limit
  double dir_d = 0.0;
};

/// First r in [r_min, r_max] along the ray r * (dir_c, dir_d) where max |S|
/// exceeds 1 + slack.  The ray is sampled at `ray_samples` uniform points and
/// the first unstable sample is bracketed by bisection to `tol`, so unstable
/// windows narrower than the sample spacing can be missed in pointwise mode.
ThresholdReport stability_threshold(const SchemeSpec& spec, double dir_c, double dir_d, double r_min, double r_max,
                                    double tol, ThresholdMode mode = ThresholdMode::Region,
                                    const SamplingSpec& sampling = {}, int ray_samples = 64);

/// Largest r with |S| <= 1 + slack for every |C|, |D| <= r, taken as the
/// smallest region threshold over the four diagonal directions.  The box
/// contains the rectangle of every other ray direction of the same max-norm.
/// In 1D this is the smaller threshold of the two velocity signs.
ThresholdReport stability_threshold_box(const SchemeSpec& spec, double r_min, double r_max, double tol,
                                        const SamplingSpec& sampling = {});

}  // namespace lsadvect
