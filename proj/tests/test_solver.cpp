#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "dense_oracle.hpp"
#include "lsadvect/assembly.hpp"
#include "lsadvect/solver.hpp"

using namespace lsadvect;

namespace {

LinearStep identity_system(std::vector<double> rhs) {
  LinearStep s;
  s.nx = static_cast<int>(rhs.size());
  s.ny = 1;
  for (std::size_t k = 0; k < rhs.size(); ++k) {
    s.nodes.push_back(k);
    s.diag.push_back(1.0);
    s.offsets.push_back(0);
  }
  s.rhs = std::move(rhs);
  s.index_rows();
  return s;
}

double max_diff(const LinearStep& s, const std::vector<double>& u, const std::vector<double>& ref) {
  double m = 0.0;
  for (std::size_t r = 0; r < s.size(); ++r) m = std::max(m, std::abs(u[s.nodes[r]] - ref[r]));
  return m;
}

struct Setup {
  Grid grid;
  VelocityField velocity;
  Field field;
};

Setup random_setup(std::mt19937& rng, int dim, int cells) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  const double a = d(rng), b = d(rng), c = d(rng), e = d(rng), f = 3.0 * d(rng);
  Setup s;
  s.grid = make_grid({}, cells, dim);
  s.velocity = sample_velocity(
      [=](double x, double y) { return std::pair{a + b * std::sin(f * y + x), c + e * std::cos(f * x - y)}; }, s.grid);
  s.field = sample_field([=](double x, double y) { return std::sin(2.0 * x + a) * std::cos(y - b) + c * x; }, s.grid);
  return s;
}

}  // namespace

TEST_CASE("identity system returns the rhs in one pass") {
  const LinearStep s = identity_system({1.0, -2.0, 3.5, 0.25});
  std::vector<double> u{9.0, 9.0, 9.0, 9.0};
  gauss_seidel_pass(s, u, {true, true});
  CHECK(u == s.rhs);
  CHECK(residual(s, u) == 0.0);
  std::fill(u.begin(), u.end(), 9.0);
  const auto diag = fast_sweep_solve(s, u, SweepPolicy::to_tolerance(1e-14, 10), 1);
  CHECK(diag.converged);
  CHECK(diag.sweeps == 1);
  CHECK(u == s.rhs);
}

TEST_CASE("residual single-row bound") {
  const LinearStep s = identity_system({1.0, 2.0, 3.0});
  std::vector<double> u = s.rhs;
  u[1] += 0.125;
  CHECK(residual(s, u) == doctest::Approx(0.125));
}

TEST_CASE("sweep orderings") {
  CHECK(sweep_orderings(1).size() == 2);
  CHECK(sweep_orderings(2).size() == 4);
  CHECK_THROWS(SweepPolicy::fixed(0));
  CHECK_THROWS(SweepPolicy::to_tolerance(-1.0, 10));
}

TEST_CASE("one-signed 1D velocity: one sweep solves the upwind system") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> d(0.2, 3.0);
  for (int trial = 0; trial < 5; ++trial) {
    const double v0 = d(rng), v1 = d(rng);
    const double sgn = trial % 2 ? -1.0 : 1.0;
    const Grid g = make_grid({0.0, 1.0, 0.0, 0.0}, 16, 1);
    const VelocityField v = sample_velocity([&](double x, double) { return std::pair{sgn * (v0 + v1 * x * x), 0.0}; }, g);
    const Field u0 = sample_field([](double x, double) { return std::cos(4.0 * x); }, g);
    StepOperator op(g, v, 0.2, SchemeSpec::semi_implicit_1d(KappaChoice::upwind()),
                    BoundarySpec::characteristic([](double, double, double t) { return 1.0 + t; }));
    std::vector<double> next(u0.values);
    const LinearStep& sys = op.advance(u0.values, 0.0, 0.2, next);
    const auto ref = testsupport::dense_solve(sys);
    const auto diag = fast_sweep_solve(sys, next, SweepPolicy::fixed(1), 1);
    CHECK(diag.residual <= 1e-12);
    CHECK(max_diff(sys, next, ref) <= 1e-12);
  }
}

TEST_CASE("toleranced sweeping agrees with a dense solve") {
  std::mt19937 rng(23);
  const std::vector<SchemeSpec> specs2d{
      SchemeSpec::semi_implicit_2d(KappaChoice::upwind()), SchemeSpec::semi_implicit_2d(KappaChoice::central()),
      SchemeSpec::semi_implicit_2d(KappaChoice::third_order_semi_implicit()),
      SchemeSpec::ctu(KappaChoice::third_order_semi_implicit(), 1.0),
      SchemeSpec::ctu(KappaChoice::third_order_semi_implicit(), 0.0)};
  const std::vector<SchemeSpec> specs1d{SchemeSpec::semi_implicit_1d(KappaChoice::third_order_semi_implicit()),
                                        SchemeSpec::fully_implicit_1d(KappaChoice::central())};
  for (int trial = 0; trial < 4; ++trial) {
    for (int dim : {1, 2}) {
      const Setup s = random_setup(rng, dim, dim == 2 ? 12 : 16);
      for (const SchemeSpec& spec : dim == 2 ? specs2d : specs1d) {
        StepOperator op(s.grid, s.velocity, 0.06, spec,
                        BoundarySpec::characteristic([](double x, double y, double) { return x - y; }));
        std::vector<double> next(s.field.values);
        const LinearStep& sys = op.advance(s.field.values, 0.0, 0.06, next);
        const auto ref = testsupport::dense_solve(sys);
        const auto diag = fast_sweep_solve(sys, next, SweepPolicy::to_tolerance(1e-12, 100), dim);
        INFO("family " << family_name(spec.family) << " trial " << trial);
        CHECK(diag.converged);
        CHECK(max_diff(sys, next, ref) <= 1e-10);
      }
    }
  }
}

TEST_CASE("toleranced result does not depend on the starting ordering") {
  std::mt19937 rng(29);
  const Setup s = random_setup(rng, 2, 12);
  StepOperator op(s.grid, s.velocity, 0.08, SchemeSpec::semi_implicit_2d(KappaChoice::central()),
                  BoundarySpec::characteristic([](double, double, double) { return 0.0; }));
  std::vector<double> a(s.field.values);
  const LinearStep& sys = op.advance(s.field.values, 0.0, 0.08, a);
  std::vector<double> b(a);
  for (std::size_t r = 0; r < sys.size(); ++r) b[sys.nodes[r]] = 0.0;  // a different initial guess
  fast_sweep_solve(sys, a, SweepPolicy::to_tolerance(1e-13, 200), 2);
  fast_sweep_solve(sys, b, SweepPolicy::to_tolerance(1e-13, 200), 2);
  for (std::size_t r = 0; r < sys.size(); ++r) CHECK(a[sys.nodes[r]] == doctest::Approx(b[sys.nodes[r]]).epsilon(1e-10));
}

TEST_CASE("fixed sweeps record the residual") {
  std::mt19937 rng(31);
  const Setup s = random_setup(rng, 2, 12);
  StepOperator op(s.grid, s.velocity, 0.3, SchemeSpec::semi_implicit_2d(KappaChoice::central()),
                  BoundarySpec::characteristic([](double, double, double) { return 0.0; }));
  std::vector<double> u(s.field.values);
  const LinearStep& sys = op.advance(s.field.values, 0.0, 0.3, u);
  const auto diag = fast_sweep_solve(sys, u, SweepPolicy::fixed(1), 2);
  CHECK(diag.sweeps == 1);
  CHECK(diag.residual == doctest::Approx(residual(sys, u)));
}
