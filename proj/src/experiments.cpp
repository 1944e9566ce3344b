#include "lsadvect/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lsadvect {

namespace {

constexpr double kPi = std::numbers::pi;

VectorFunction rotation_velocity() {
  return [](double x, double y) { return std::pair{-2.0 * kPi * y, 2.0 * kPi * x}; };
}

TimeFunction rotated(ScalarFunction u0) {
  return [u0 = std::move(u0)](double x, double y, double t) {
    const double c = std::cos(2.0 * kPi * t);
    const double s = std::sin(2.0 * kPi * t);
    return u0(x * c + y * s, y * c - x * s);
  };
}

ExperimentCase rotation_on_circle(std::string name, ScalarFunction u0) {
  ExperimentCase c;
  c.name = std::move(name);
  c.velocity = rotation_velocity();
  c.initial = u0;
  c.exact = rotated(u0);
  c.domain_phi = [](double x, double y) { return std::hypot(x, y) - 1.0; };
  c.boundary = BoundarySpec::characteristic(c.exact);
  c.final_time = 1.0;
  c.metric = ErrorMetric::MaxOverTime;
  return c;
}

ExperimentCase translation(std::string name, int dim, double vx, double vy, ScalarFunction u0, double final_time,
                           StepRule rule) {
  ExperimentCase c;
  c.name = std::move(name);
  c.dim = dim;
  if (dim == 1) vy = 0.0;
  c.velocity = [vx, vy](double, double) { return std::pair{vx, vy}; };
  c.initial = u0;
  c.exact = [u0, vx, vy](double x, double y, double t) { return u0(x - vx * t, y - vy * t); };
  c.boundary = BoundarySpec::prescribed(c.exact);
  c.final_time = final_time;
  c.steps = rule;
  return c;
}

double vortex_vx(double x, double y) {
  const double a = std::sin(kPi * (x + 1.0) / 2.0);
  const double b = kPi * (y + 1.0) / 2.0;
  return -4.0 * a * a * std::sin(b) * std::cos(b);
}

double vortex_vy(double x, double y) {
  const double a = std::sin(kPi * (y + 1.0) / 2.0);
  const double b = kPi * (x + 1.0) / 2.0;
  return 4.0 * a * a * std::sin(b) * std::cos(b);
}

double segment_distance(double px, double py, double ax, double ay, double bx, double by) {
  const double dx = bx - ax, dy = by - ay;
  const double t = std::clamp(((px - ax) * dx + (py - ay) * dy) / (dx * dx + dy * dy), 0.0, 1.0);
  return std::hypot(px - (ax + t * dx), py - (ay + t * dy));
}

}  // namespace

int StepRule::steps(int cells) const {
  if (numerator < 1 || denominator < 1) throw std::invalid_argument("step rule needs positive terms");
  if ((static_cast<long long>(cells) * numerator) % denominator != 0) {
    throw std::invalid_argument("step rule " + std::to_string(numerator) + "M/" + std::to_string(denominator) +
                                " is not an integer for M=" + std::to_string(cells));
  }
  return static_cast<int>(static_cast<long long>(cells) * numerator / denominator);
}

double zalesak_slot_bottom() {
  return 0.5 - std::sqrt(kZalesakRadius * kZalesakRadius - kZalesakHalfWidth * kZalesakHalfWidth);
}

double zalesak_signed_distance(double x, double y) {
  const double cy = 0.5;
  const double w = kZalesakHalfWidth;
  const double yb = zalesak_slot_bottom();
  const double yt = yb + kZalesakSlotHeight;
  const double rx = x, ry = y - cy;
  const double r = std::hypot(rx, ry);

  // The arc runs over the whole circle except the short piece between the
  // slot walls at the bottom.
  double d_arc;
  const double qx = r > 0.0 ? kZalesakRadius * rx / r : 0.0;
  const double qy = r > 0.0 ? cy + kZalesakRadius * ry / r : cy - kZalesakRadius;
  if (r > 0.0 && !(std::abs(qx) < w && qy < cy)) {
    d_arc = std::abs(r - kZalesakRadius);
  } else {
    d_arc = std::min(std::hypot(x - w, y - yb), std::hypot(x + w, y - yb));
  }
  const double d_walls = std::min({segment_distance(x, y, -w, yb, -w, yt), segment_distance(x, y, w, yb, w, yt),
                                   segment_distance(x, y, -w, yt, w, yt)});
  const double d = std::min(d_arc, d_walls);
  const bool inside = r < kZalesakRadius && !(std::abs(x) < w && y < yt);
  return inside ? -d : d;
}

double exp_velocity_exact(double x, double y, double t) {
  const double s = std::exp(2.0 * (y - x));
  const double to_inflow = (std::min(x, y) + 1.0) / s;
  const double shift = s * std::min(t, to_inflow);
  return std::hypot(x - shift + 1.0, y - shift + 1.0);
}

std::vector<std::string> builtin_case_names() {
  return {"rotation_euclid", "rotation_maxdist", "exp_velocity", "zalesak",        "vortex",
          "poly2_quadratic", "poly2_cubic",      "smooth_1d",    "poly1_quadratic"};
}

ExperimentCase builtin_case(std::string_view name) {
  if (name == "rotation_euclid") {
    return rotation_on_circle("rotation_euclid", [](double x, double y) { return std::hypot(x, y - 0.5); });
  }
  if (name == "rotation_maxdist") {
    return rotation_on_circle("rotation_maxdist",
                              [](double x, double y) { return std::max(std::abs(x + 0.5), std::abs(y)); });
  }
  if (name == "exp_velocity") {
    ExperimentCase c;
    c.name = "exp_velocity";
    c.velocity = [](double x, double y) {
      const double v = std::exp(2.0 * (y - x));
      return std::pair{v, v};
    };
    c.initial = [](double x, double y) { return std::hypot(x + 1.0, y + 1.0); };
    c.exact = exp_velocity_exact;
    // Values on inflow edges stay at u^0.
    c.boundary = BoundarySpec::characteristic([](double x, double y, double) { return std::hypot(x + 1.0, y + 1.0); });
    // Maximal Courant number e^4 T M / (2N) = 10.9 for N = M.
    c.final_time = 0.4;
    c.steps = {1, 1};
    return c;
  }
  if (name == "zalesak") {
    ExperimentCase c;
    c.name = "zalesak";
    c.velocity = rotation_velocity();
    c.initial = zalesak_signed_distance;
    c.exact = rotated(zalesak_signed_distance);
    c.boundary = BoundarySpec::characteristic(c.exact);
    c.final_time = 1.0;
    c.metric = ErrorMetric::FinalExact;
    return c;
  }
  if (name == "vortex") {
    ExperimentCase c;
    c.name = "vortex";
    c.velocity = [](double x, double y) { return std::pair{vortex_vx(x, y), vortex_vy(x, y)}; };
    c.initial = [](double x, double y) { return std::hypot(x, y - 0.5) - 0.3; };
    c.boundary = BoundarySpec::prescribed([](double x, double y, double) { return std::hypot(x, y - 0.5) - 0.3; });
    c.final_time = 2.5;
    c.metric = ErrorMetric::FinalReference;
    c.reference_cells = 640;
    return c;
  }
  if (name == "poly2_quadratic") {
    return translation(
        "poly2_quadratic", 2, 0.8, -0.55,
        [](double x, double y) { return 0.3 - 0.7 * x + 1.1 * y + 0.45 * x * x - 0.8 * x * y + 0.65 * y * y; }, 0.5,
        {1, 2});
  }
  if (name == "poly2_cubic") {
    return translation(
        "poly2_cubic", 2, 0.8, -0.55,
        [](double x, double y) {
          return 0.3 - 0.7 * x + 1.1 * y + 0.45 * x * x - 0.8 * x * y + 0.65 * y * y + 0.9 * x * x * x -
                 0.35 * x * x * y + 0.55 * x * y * y - 0.6 * y * y * y;
        },
        0.5, {1, 2});
  }
  if (name == "smooth_1d") {
    return translation(
        "smooth_1d", 1, 1.0, 0.0, [](double x, double) { return std::exp(-8.0 * (x + 0.3) * (x + 0.3)); }, 0.5,
        {1, 2});
  }
  if (name == "poly1_quadratic") {
    return translation(
        "poly1_quadratic", 1, -0.6, 0.0, [](double x, double) { return 0.2 + 1.3 * x - 0.9 * x * x; }, 0.5, {1, 2});
  }
  throw std::invalid_argument("unknown case '" + std::string(name) + "'");
}

void MaxOverTimeError::add_level(std::span<const double> values, const TimeFunction& exact, double t) {
  double sum = 0.0;
  for (std::size_t k = 0; k < grid_.size(); ++k) {
    if (!mask_[k]) continue;
    auto [i, j] = grid_.coords(k);
    sum += std::abs(values[k] - exact(grid_.x(i), grid_.y(j), t));
  }
  worst_ = std::max(worst_, std::pow(grid_.h(), grid_.dim()) * sum);
}

double error_E(const std::vector<std::vector<double>>& levels, const std::vector<double>& times,
               const TimeFunction& exact, const Grid& grid, const std::vector<bool>& mask) {
  if (levels.size() != times.size()) throw std::invalid_argument("levels and times differ in length");
  MaxOverTimeError acc(grid, mask);
  for (std::size_t n = 0; n < levels.size(); ++n) acc.add_level(levels[n], exact, times[n]);
  return acc.value();
}

double error_ref_e(const Field& numerical, const Field& reference) {
  const Grid& g = numerical.grid;
  const Grid& r = reference.grid;
  if (g.dim() != r.dim() || !(g.bounds().x_min == r.bounds().x_min && g.bounds().x_max == r.bounds().x_max &&
                              (g.dim() == 1 || (g.bounds().y_min == r.bounds().y_min &&
                                                g.bounds().y_max == r.bounds().y_max)))) {
    throw std::invalid_argument("reference grid covers a different domain");
  }
  if (r.cells() % g.cells() != 0) {
    throw std::invalid_argument("M=" + std::to_string(g.cells()) + " does not divide M_ref=" +
                                std::to_string(r.cells()));
  }
  const int q = r.cells() / g.cells();
  double sum = 0.0;
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) sum += std::abs(numerical(i, j) - reference(i * q, j * q));
  }
  return std::pow(g.h(), g.dim()) * sum;
}

double error_final_exact(const Field& numerical, const TimeFunction& exact, double t) {
  const Grid& g = numerical.grid;
  double sum = 0.0;
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) sum += std::abs(numerical(i, j) - exact(g.x(i), g.y(j), t));
  }
  return std::pow(g.h(), g.dim()) * sum;
}

double error_max_nodal(const Field& numerical, const TimeFunction& exact, double t) {
  const Grid& g = numerical.grid;
  double worst = 0.0;
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) worst = std::max(worst, std::abs(numerical(i, j) - exact(g.x(i), g.y(j), t)));
  }
  return worst;
}

double eoc(double error_coarse, double error_fine) {
  if (!(error_coarse > 0.0) || !(error_fine > 0.0)) throw std::invalid_argument("EOC needs positive errors");
  return std::log2(error_coarse / error_fine);
}

RunResult run_experiment(const ExperimentCase& c, const SchemeSpec& scheme, int cells, int steps,
                         const RunOptions& options) {
  scheme.validate(c.dim);
  if (c.domain_phi && c.dim != 2) throw std::invalid_argument("implicit domains need a 2D case");
  if (c.metric != ErrorMetric::FinalReference && !c.has_exact()) {
    throw std::invalid_argument("case '" + c.name + "' has no exact solution");
  }
  if (options.dump_stride < 0) throw std::invalid_argument("dump stride must be nonnegative");

  const Grid grid = make_grid(c.bounds, cells, c.dim);
  const TimeStepping ts = make_time_stepping(options.final_time.value_or(c.final_time), steps);
  const VelocityField velocity = sample_velocity(c.velocity, grid);

  std::optional<ImplicitDomain> domain;
  if (c.domain_phi) domain = make_implicit_domain(grid, *c.domain_phi, c.exact);
  StepOperator op(grid, velocity, ts.tau, scheme, c.boundary, domain ? &*domain : nullptr);

  RunResult out;
  ErrorReport& rep = out.report;
  rep.cells = cells;
  rep.steps = steps;
  const auto& status = op.status();
  std::vector<bool> mask(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    mask[k] = status[k] == NodeStatus::Unknown;
    if (status[k] == NodeStatus::Outside) continue;
    const double scale = ts.tau / grid.h();
    rep.max_courant = std::max({rep.max_courant, std::abs(velocity.vx[k]) * scale, std::abs(velocity.vy[k]) * scale});
  }
  rep.solved_nodes = op.system().size();
  rep.max_effective_courant = std::max(rep.max_courant, op.info().max_effective_courant);
  rep.min_gamma = op.info().min_gamma;
  rep.sweeps = options.sweeps.mode == SweepPolicy::Mode::FixedSweeps ? options.sweeps.sweeps : 0;

  Field u = sample_field(c.initial, grid);
  std::vector<double> next(u.values);
  MaxOverTimeError error(grid, mask);
  for (int n = 1; n <= steps; ++n) {
    const LinearStep& system = op.advance(u.values, ts.time(n - 1), ts.time(n), next);
    const SolveDiagnostics diag = fast_sweep_solve(system, next, options.sweeps, grid.dim());
    if (options.sweeps.mode == SweepPolicy::Mode::ResidualTolerance) rep.sweeps = std::max(rep.sweeps, diag.sweeps);
    rep.max_residual = std::max(rep.max_residual, diag.residual);
    rep.converged = rep.converged && diag.converged;
    u.values.swap(next);
    std::copy(u.values.begin(), u.values.end(), next.begin());
    u.time_level = n;
    if (!u.all_finite()) throw std::runtime_error("non-finite values after step " + std::to_string(n));
    if (c.metric == ErrorMetric::MaxOverTime) error.add_level(u.values, c.exact, ts.time(n));
    if (options.dump_stride > 0 && (n % options.dump_stride == 0 || n == steps)) out.stored.push_back(u);
  }
  if (c.metric == ErrorMetric::MaxOverTime) rep.error = error.value();
  if (c.metric == ErrorMetric::FinalExact) rep.error = error_final_exact(u, c.exact, ts.final_time);
  out.final_field = std::move(u);
  return out;
}

std::vector<ErrorReport> run_convergence(const ExperimentCase& c, const SchemeSpec& scheme,
                                         const std::vector<int>& cells, const StepRule& rule,
                                         const RunOptions& options, int reference_cells) {
  std::optional<Field> reference;
  if (c.metric == ErrorMetric::FinalReference) {
    const int m_ref = reference_cells > 0 ? reference_cells : c.reference_cells;
    if (m_ref <= 0) throw std::invalid_argument("case '" + c.name + "' needs a reference resolution");
    reference = run_experiment(c, scheme, m_ref, rule.steps(m_ref), options).final_field;
  }
  std::vector<ErrorReport> reports;
  for (int m : cells) {
    RunResult r = run_experiment(c, scheme, m, rule.steps(m), options);
    if (reference) r.report.error = error_ref_e(r.final_field, *reference);
    if (!reports.empty() && reports.back().error > 0.0 && r.report.error > 0.0) {
      r.report.eoc = eoc(reports.back().error, r.report.error);
    }
    reports.push_back(r.report);
  }
  return reports;
}

}  // namespace lsadvect
