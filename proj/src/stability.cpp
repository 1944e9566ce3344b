#include "lsadvect/stability.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace lsadvect {

namespace {

constexpr double kPi = std::numbers::pi;

struct Symbol {
  std::complex<double> num;
  std::complex<double> den;
};

Symbol symbol(const StencilRow& row, double xi, double eta) {
  Symbol s{};
  for (const Term& t : row.explicit_terms) s.num += t.coef * std::polar(1.0, t.di * xi + t.dj * eta);
  for (const Term& t : row.implicit_terms) s.den += t.coef * std::polar(1.0, t.di * xi + t.dj * eta);
  return s;
}

// Evaluates |S| with precomputed powers exp(i k xi), k in [-2, 2].
struct FastRow {
  struct Entry {
    int di;
    int dj;
    double coef;
  };
  std::vector<Entry> num;
  std::vector<Entry> den;
  explicit FastRow(const StencilRow& row) {
    for (const Term& t : row.explicit_terms) num.push_back({t.di + 2, t.dj + 2, t.coef});
    for (const Term& t : row.implicit_terms) den.push_back({t.di + 2, t.dj + 2, t.coef});
    for (const auto* list : {&num, &den}) {
      for (const auto& e : *list) {
        if (e.di < 0 || e.di > 4 || e.dj < 0 || e.dj > 4) throw std::logic_error("row offset beyond +-2");
      }
    }
  }
  double abs_s(const std::array<std::complex<double>, 5>& ex, const std::array<std::complex<double>, 5>& ey) const {
    std::complex<double> n{}, d{};
    for (const auto& e : num) n += e.coef * ex[e.di] * ey[e.dj];
    for (const auto& e : den) d += e.coef * ex[e.di] * ey[e.dj];
    if (std::abs(d) == 0.0) throw std::domain_error("vanishing implicit symbol");
    return std::abs(n) / std::abs(d);
  }
};

std::array<std::complex<double>, 5> powers(double phase) {
  std::array<std::complex<double>, 5> p;
  for (int k = -2; k <= 2; ++k) p[k + 2] = std::polar(1.0, k * phase);
  return p;
}

double abs_at(const StencilRow& row, double xi, double eta) { return std::abs(amplification_factor(row, xi, eta)); }

// Maximizes f on [lo, hi] by golden-section search; returns the arg max.
template <typename F>
double golden_max(F&& f, double lo, double hi, int iterations, double& best) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < iterations; ++it) {
    if (f1 > f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = f(x2);
    }
  }
  const double arg = f1 > f2 ? x1 : x2;
  best = std::max(f1, f2);
  return arg;
}

}  // namespace

std::complex<double> amplification_factor(const StencilRow& row, double xi, double eta) {
  const Symbol s = symbol(row, xi, eta);
  if (std::abs(s.den) == 0.0) throw std::domain_error("vanishing implicit symbol");
  return s.num / s.den;
}

std::complex<double> amplification_factor(const SchemeSpec& spec, double c, double d, double xi, double eta) {
  return amplification_factor(scheme_row(spec, c, d), xi, spec.dim() == 1 ? 0.0 : eta);
}

StabilityReport max_amplification(const SchemeSpec& spec, double c, double d, const SamplingSpec& sampling) {
  const bool one_d = spec.dim() == 1;
  if (one_d) d = 0.0;
  const StencilRow row = scheme_row(spec, c, d);
  const FastRow fast(row);

  struct Sample {
    double value;
    double xi;
    double eta;
  };
  std::vector<Sample> samples;
  const int n = one_d ? sampling.points_1d : sampling.points_2d;
  if (n < 4) throw std::invalid_argument("sampling needs at least 4 points per axis");
  const double step = 2.0 * kPi / n;
  const auto ey0 = powers(0.0);
  if (one_d) {
    samples.reserve(n);
    for (int k = 1; k < n; ++k) {
      const double xi = -kPi + k * step;
      samples.push_back({fast.abs_s(powers(xi), ey0), xi, 0.0});
    }
  } else {
    std::vector<std::array<std::complex<double>, 5>> table(n);
    for (int k = 1; k < n; ++k) table[k] = powers(-kPi + k * step);
    samples.reserve(static_cast<std::size_t>(n) * n);
    for (int k = 1; k < n; ++k) {
      for (int l = 1; l < n; ++l) samples.push_back({fast.abs_s(table[k], table[l]), -kPi + k * step, -kPi + l * step});
    }
  }

  StabilityReport report;
  report.samples = samples.size();
  const std::size_t top = std::min<std::size_t>(std::max(sampling.candidates, 1), samples.size());
  std::partial_sort(samples.begin(), samples.begin() + top, samples.end(),
                    [](const Sample& a, const Sample& b) { return a.value > b.value; });
  report.max_abs_s = samples[0].value;
  report.argmax = {samples[0].xi, samples[0].eta, c, d};

  if (sampling.refine) {
    const double lim = kPi - 1e-12;
    for (std::size_t m = 0; m < top; ++m) {
      double xi = samples[m].xi;
      double eta = samples[m].eta;
      double best = samples[m].value;
      for (int round = 0; round < (one_d ? 1 : 3); ++round) {
        double val = 0.0;
        const double nxi = golden_max([&](double t) { return abs_at(row, t, eta); }, std::max(-lim, xi - step),
                                      std::min(lim, xi + step), sampling.refine_iterations, val);
        report.samples += sampling.refine_iterations + 2;
        if (val > best) {
          best = val;
          xi = nxi;
        }
        if (one_d) break;
        const double neta = golden_max([&](double t) { return abs_at(row, xi, t); }, std::max(-lim, eta - step),
                                       std::min(lim, eta + step), sampling.refine_iterations, val);
        report.samples += sampling.refine_iterations + 2;
        if (val > best) {
          best = val;
          eta = neta;
        }
      }
      if (best > report.max_abs_s) {
        report.max_abs_s = best;
        report.argmax = {xi, eta, c, d};
      }
    }
  }
  report.stable = report.max_abs_s <= 1.0 + kStabilitySlack;
  return report;
}

StabilityReport max_amplification_region(const SchemeSpec& spec, double c, double d, const SamplingSpec& sampling) {
  const bool one_d = spec.dim() == 1;
  if (one_d) d = 0.0;
  const int pc = one_d ? sampling.courant_points_1d : sampling.courant_points_2d;
  const int pd = one_d ? 1 : pc;
  const int nph = one_d ? sampling.region_phase_points_1d : sampling.region_phase_points_2d;
  if (pc < 2 || nph < 4) throw std::invalid_argument("region sampling too coarse");
  // Half-offset phase grid: every scheme has |S| = 1 at zero phase, and those
  // ties would otherwise crowd out the genuine peaks.
  const double step = 2.0 * kPi / nph;
  auto phase = [&](int k) { return -kPi + (k + 0.5) * step; };
  std::vector<std::array<std::complex<double>, 5>> table(nph);
  for (int k = 0; k < nph; ++k) table[k] = powers(phase(k));
  const auto ey0 = powers(0.0);

  struct Candidate {
    double value;
    double fc;
    double fd;
    double xi;
    double eta;
  };
  std::vector<Candidate> cands;
  cands.reserve(static_cast<std::size_t>(pc) * pd);
  StabilityReport report;
  for (int p = 0; p < pc; ++p) {
    for (int q = 0; q < pd; ++q) {
      const double fc = static_cast<double>(p) / (pc - 1);
      const double fd = one_d ? 0.0 : static_cast<double>(q) / (pd - 1);
      const FastRow fast(scheme_row(spec, fc * c, fd * d));
      Candidate best{0.0, fc, fd, 0.0, 0.0};
      for (int k = 0; k < nph; ++k) {
        for (int l = 0; l < (one_d ? 1 : nph); ++l) {
          const double v = fast.abs_s(table[k], one_d ? ey0 : table[l]);
          if (v > best.value) best = {v, fc, fd, phase(k), one_d ? 0.0 : phase(l)};
        }
      }
      report.samples += one_d ? nph : static_cast<std::size_t>(nph) * nph;
      cands.push_back(best);
    }
  }
  const std::size_t top = std::min<std::size_t>(std::max(sampling.region_candidates, 1), cands.size());
  std::partial_sort(cands.begin(), cands.begin() + top, cands.end(),
                    [](const Candidate& a, const Candidate& b) { return a.value > b.value; });
  report.max_abs_s = cands[0].value;
  report.argmax = {cands[0].xi, cands[0].eta, cands[0].fc * c, cands[0].fd * d};

  if (sampling.refine) {
    // Cyclic coordinate ascent over (C', D', xi, eta) from each candidate.
    const double lim = kPi - 1e-12;
    const double dc = 1.0 / (pc - 1);
    const double dd = one_d ? 0.0 : 1.0 / (pd - 1);
    for (std::size_t m = 0; m < top; ++m) {
      Candidate x = cands[m];
      auto f = [&](double a, double b, double p, double q) { return abs_at(scheme_row(spec, a * c, b * d), p, q); };
      auto search = [&](double t, double w, double lo, double hi, auto&& g, double& coord) {
        double val = 0.0;
        const double arg = golden_max(g, std::max(lo, t - w), std::min(hi, t + w), sampling.refine_iterations, val);
        report.samples += sampling.refine_iterations + 2;
        if (val > x.value) {
          x.value = val;
          coord = arg;
        }
      };
      for (int round = 0; round < 200; ++round) {
        const double before = x.value;
        search(x.fc, dc, 0.0, 1.0, [&](double t) { return f(t, x.fd, x.xi, x.eta); }, x.fc);
        if (!one_d) search(x.fd, dd, 0.0, 1.0, [&](double t) { return f(x.fc, t, x.xi, x.eta); }, x.fd);
        search(x.xi, 2.0 * step, -lim, lim, [&](double t) { return f(x.fc, x.fd, t, x.eta); }, x.xi);
        if (!one_d) search(x.eta, 2.0 * step, -lim, lim, [&](double t) { return f(x.fc, x.fd, x.xi, t); }, x.eta);
        if (x.value - before < 1e-15) break;
      }
      if (x.value > report.max_abs_s) {
        report.max_abs_s = x.value;
        report.argmax = {x.xi, x.eta, x.fc * c, x.fd * d};
      }
    }
  }
  report.stable = report.max_abs_s <= 1.0 + kStabilitySlack;
  return report;
}

ThresholdReport stability_threshold(const SchemeSpec& spec, double dir_c, double dir_d, double r_min, double r_max,
                                    double tol, ThresholdMode mode, const SamplingSpec& sampling, int ray_samples) {
  if (!(r_max > r_min) || !(r_min >= 0.0) || !(tol > 0.0)) throw std::invalid_argument("invalid threshold bracket");
  if (dir_c == 0.0 && dir_d == 0.0) throw std::invalid_argument("threshold direction must be nonzero");
  if (ray_samples < 1) throw std::invalid_argument("ray needs at least one sample");
  auto stable_at = [&](double r) {
    return mode == ThresholdMode::Pointwise ? max_amplification(spec, r * dir_c, r * dir_d, sampling).stable
                                            : max_amplification_region(spec, r * dir_c, r * dir_d, sampling).stable;
  };
  ThresholdReport out;
  out.dir_c = dir_c;
  out.dir_d = dir_d;
  double lo = r_min;
  double hi = r_max;
  if (!stable_at(r_min)) {
    out.bounded = true;
    out.lower = out.upper = out.limit = r_min;
    return out;
  }
  if (mode == ThresholdMode::Pointwise) {
    bool found = false;
    for (int k = 1; k <= ray_samples; ++k) {
      const double r = r_min + (r_max - r_min) * k / ray_samples;
      if (!stable_at(r)) {
        hi = r;
        found = true;
        break;
      }
      lo = r;
    }
    if (!found) {
      out.lower = out.upper = out.limit = r_max;
      return out;
    }
  } else if (stable_at(r_max)) {
    out.lower = out.upper = out.limit = r_max;
    return out;
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (stable_at(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  out.bounded = true;
  out.lower = lo;
  out.upper = hi;
  out.limit = 0.5 * (lo + hi);
  return out;
}

ThresholdReport stability_threshold_box(const SchemeSpec& spec, double r_min, double r_max, double tol,
                                        const SamplingSpec& sampling) {
  std::vector<std::array<double, 2>> dirs{{1.0, 0.0}, {-1.0, 0.0}};
  if (spec.dim() == 2) dirs = {{1.0, 1.0}, {-1.0, 1.0}, {-1.0, -1.0}, {1.0, -1.0}};
  ThresholdReport worst;
  bool first = true;
  for (const auto& dir : dirs) {
    const ThresholdReport r = stability_threshold(spec, dir[0], dir[1], r_min, r_max, tol, ThresholdMode::Region, sampling);
    if (first || r.limit < worst.limit || (r.bounded && !worst.bounded)) worst = r;
    first = false;
  }
  return worst;
}

}  // namespace lsadvect
