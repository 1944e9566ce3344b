#include "doctest.h"

#include <random>

#include "lsadvect/kappa.hpp"
#include "lsadvect/schemes1d.hpp"
#include "support.hpp"

using namespace lsadvect;
using testsupport::apply;
using testsupport::hgrad;
using testsupport::Patch;

namespace {

// U_i + C (d^-+ U_i - 0.5 h d^kappa U_{i-+1}) on the new level, written out
// directly from the difference operators.
double si_implicit_oracle(const Patch& u, double c, double kappa) {
  if (c > 0.0) return u.at(0, 0) + c * ((u.at(0, 0) - u.at(-1, 0)) - 0.5 * hgrad(u, -1, 0, 0, kappa));
  if (c < 0.0) return u.at(0, 0) + c * ((u.at(1, 0) - u.at(0, 0)) - 0.5 * hgrad(u, 1, 0, 0, kappa));
  return u.at(0, 0);
}

double si_explicit_oracle(const Patch& u, double c, double kappa) {
  return u.at(0, 0) - 0.5 * c * hgrad(u, 0, 0, 0, kappa);
}

// Fully implicit operator with the upwind flux difference using both nodal
// Courant numbers.
double impl_oracle(const Patch& u, double c, double c_up, double kappa) {
  if (c > 0.0) {
    return u.at(0, 0) + c * ((u.at(0, 0) - u.at(-1, 0)) + 0.5 * (hgrad(u, 0, 0, 0, kappa) - hgrad(u, -1, 0, 0, kappa))) +
           0.5 * c * (c * hgrad(u, 0, 0, 0, kappa) - c_up * hgrad(u, -1, 0, 0, kappa));
  }
  if (c < 0.0) {
    return u.at(0, 0) + c * ((u.at(1, 0) - u.at(0, 0)) - 0.5 * (hgrad(u, 1, 0, 0, kappa) - hgrad(u, 0, 0, 0, kappa))) +
           0.5 * c * (c_up * hgrad(u, 1, 0, 0, kappa) - c * hgrad(u, 0, 0, 0, kappa));
  }
  return u.at(0, 0);
}

Patch line(const std::function<double(double)>& f, double shift = 0.0) {
  return Patch::from([&](int i, int) { return f(i - shift); });
}

}  // namespace

TEST_CASE("kappa gradient") {
  CHECK(kappa_gradient(0.0, 1.0, 4.0, 1.0, 0.0) == doctest::Approx(2.0));
  CHECK(kappa_gradient(0.0, 1.0, 4.0, 1.0, 1.0) == doctest::Approx(3.0));
  CHECK(kappa_gradient(0.0, 1.0, 4.0, 1.0, -1.0) == doctest::Approx(1.0));
  for (double k : {-1.0, -0.3, 0.0, 0.7, 1.0}) {
    CHECK(kappa_gradient(2.0 - 0.5 * 0.1, 2.0, 2.0 + 0.5 * 0.1, 0.1, k) == doctest::Approx(0.5));
  }
}

TEST_CASE("kappa choices") {
  CHECK(KappaChoice::third_order_implicit().value(1.0) == doctest::Approx(1.0));
  CHECK(KappaChoice::third_order_semi_implicit().value(1.0) == doctest::Approx(0.0));
  CHECK(KappaChoice::upwind().value(-0.7) == -1.0);
  CHECK(KappaChoice::downwind().value(-0.7) == 1.0);
  CHECK(KappaChoice::upwind().value(0.0) == 0.0);
  CHECK(KappaChoice::third_order_semi_implicit().value(-0.25) == doctest::Approx(-0.25));
  CHECK(KappaChoice::third_order_implicit().value(-0.25) == doctest::Approx(-0.5));
  CHECK(KappaChoice::central().value(3.0) == 0.0);
  CHECK(KappaChoice::constant(0.4).value(-2.0) == 0.4);
  CHECK_THROWS(KappaChoice::constant(1.5));
  CHECK(KappaChoice::constant(1.5, true).value(0.1) == 1.5);
}

TEST_CASE("kappa names round-trip") {
  for (const char* n : {"kp", "km", "k0", "k3", "k3i", "const:0.25"}) {
    CHECK(KappaChoice::parse(KappaChoice::parse(n).name()) == KappaChoice::parse(n));
  }
  CHECK_THROWS_WITH_AS(KappaChoice::parse("k9"), doctest::Contains("allowed"), std::invalid_argument);
  CHECK_THROWS(KappaChoice::parse("const:abc"));
}

TEST_CASE("semi-implicit row matches the difference operators") {
  std::mt19937 rng(7);
  for (double c : {-7.5, -1.0, -0.3, 0.4, 1.0, 2.5, 30.0}) {
    for (double k : {-1.0, -0.4, 0.0, 1.0 / 3.0, 1.0}) {
      const StencilRow row = semi_implicit_row_1d(c, k);
      for (int trial = 0; trial < 3; ++trial) {
        const Patch u = Patch::random(rng);
        CHECK(apply(row.implicit_terms, u) == doctest::Approx(si_implicit_oracle(u, c, k)).epsilon(1e-13));
        CHECK(apply(row.explicit_terms, u) == doctest::Approx(si_explicit_oracle(u, c, k)).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("semi-implicit row printed forms") {
  // kappa = 1 with C > 0: U_i + C (U_i - U_{i-1}) / 2 = U_i - C (U_{i+1} - U_i) / 2
  const StencilRow lw = semi_implicit_row_1d(0.8, 1.0);
  CHECK(lw.implicit_terms.size() == 2);
  CHECK(lw.implicit_terms.at(0, 0) == doctest::Approx(1.4));
  CHECK(lw.implicit_terms.at(-1, 0) == doctest::Approx(-0.4));
  CHECK(lw.explicit_terms.at(0, 0) == doctest::Approx(1.4));
  CHECK(lw.explicit_terms.at(1, 0) == doctest::Approx(-0.4));

  // kappa = 0 with C > 0: U_i + C (3 U_i - 4 U_{i-1} + U_{i-2}) / 4 = U_i - C (U_{i+1} - U_{i-1}) / 4
  const StencilRow f = semi_implicit_row_1d(2.0, 0.0);
  CHECK(f.implicit_terms.at(0, 0) == doctest::Approx(2.5));
  CHECK(f.implicit_terms.at(-1, 0) == doctest::Approx(-2.0));
  CHECK(f.implicit_terms.at(-2, 0) == doctest::Approx(0.5));
  CHECK(f.explicit_terms.at(1, 0) == doctest::Approx(-0.5));
  CHECK(f.explicit_terms.at(-1, 0) == doctest::Approx(0.5));

  // Negative velocity mirrors the stencil.
  const StencilRow m = semi_implicit_row_1d(-2.0, 0.0);
  CHECK(m.implicit_terms.at(1, 0) == doctest::Approx(-2.0));
  CHECK(m.implicit_terms.at(2, 0) == doctest::Approx(0.5));
}

TEST_CASE("implicit stencil sizes") {
  for (double c : {-3.0, -0.5, 0.5, 3.0}) {
    CHECK(semi_implicit_row_1d(c, sign(c)).implicit_terms.size() == 2);
    for (double k : {-1.0 * sign(c), 0.0, 0.3, -0.6}) CHECK(semi_implicit_row_1d(c, k).implicit_terms.size() == 3);
  }
}

TEST_CASE("zero velocity gives the identity row") {
  for (double k : {-1.0, 0.0, 1.0}) {
    const StencilRow s = semi_implicit_row_1d(0.0, k);
    CHECK(s.implicit_terms.size() == 1);
    CHECK(s.explicit_terms.size() == 1);
    CHECK(s.diagonal() == 1.0);
    const StencilRow f = fully_implicit_row_1d(0.0, 0.7, k);
    CHECK(f.implicit_terms.size() == 1);
    CHECK(f.diagonal() == 1.0);
  }
}

TEST_CASE("fully implicit row matches the difference operators") {
  std::mt19937 rng(11);
  for (double c : {-2.0, -0.4, 0.3, 1.5}) {
    for (double c_up : {0.2, 1.1, -0.8}) {
      for (double k : {-1.0, 0.0, 1.0 / 3.0, 1.0}) {
        const StencilRow row = fully_implicit_row_1d(c, c_up, k);
        CHECK(row.explicit_terms.size() == 1);
        CHECK(row.explicit_terms.at(0, 0) == 1.0);
        const Patch u = Patch::random(rng);
        CHECK(apply(row.implicit_terms, u) == doctest::Approx(impl_oracle(u, c, c_up, k)).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("rows preserve constants") {
  const Patch one = Patch::from([](int, int) { return 1.0; });
  for (double c : {-9.0, -0.6, 0.0, 0.6, 9.0}) {
    for (double k : {-1.0, 0.0, 0.5, 1.0}) {
      const StencilRow s = semi_implicit_row_1d(c, k);
      CHECK(apply(s.implicit_terms, one) == doctest::Approx(1.0));
      CHECK(apply(s.explicit_terms, one) == doctest::Approx(1.0));
      const StencilRow f = fully_implicit_row_1d(c, 0.5 * c, k);
      CHECK(apply(f.implicit_terms, one) == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("constant velocity: linear and quadratic data are transported exactly") {
  const auto quad = [](double x) { return 0.3 - 1.2 * x + 0.45 * x * x; };
  for (double c : {-3.3, -0.7, 0.25, 1.0, 4.5}) {
    const Patch now = line(quad);
    const Patch next = line(quad, c);
    for (double k : {-1.0, 0.0, 1.0 / 3.0, 1.0}) {
      const StencilRow s = semi_implicit_row_1d(c, k);
      CHECK(apply(s.implicit_terms, next) == doctest::Approx(apply(s.explicit_terms, now)).epsilon(1e-12));
      const StencilRow f = fully_implicit_row_1d(c, c, k);
      CHECK(apply(f.implicit_terms, next) == doctest::Approx(apply(f.explicit_terms, now)).epsilon(1e-12));
    }
  }
}

TEST_CASE("third-order kappa choices transport cubics exactly") {
  const auto cubic = [](double x) { return 0.1 + 0.5 * x - 0.3 * x * x + 0.07 * x * x * x; };
  for (double c : {-2.5, -0.4, 0.3, 0.9, 6.0}) {
    const Patch now = line(cubic);
    const Patch next = line(cubic, c);
    const StencilRow s = semi_implicit_row_1d(c, KappaChoice::third_order_semi_implicit().value(c));
    CHECK(apply(s.implicit_terms, next) == doctest::Approx(apply(s.explicit_terms, now)).epsilon(1e-12));
    const StencilRow f = fully_implicit_row_1d(c, c, KappaChoice::third_order_implicit().value(c));
    CHECK(apply(f.implicit_terms, next) == doctest::Approx(apply(f.explicit_terms, now)).epsilon(1e-12));

    // A fixed kappa leaves a cubic residual.
    const StencilRow z = semi_implicit_row_1d(c, 0.0);
    CHECK(std::abs(apply(z.implicit_terms, next) - apply(z.explicit_terms, now)) > 1e-4);
  }
}

TEST_CASE("transpose maps x offsets onto y") {
  const StencilRow r = semi_implicit_row_1d(1.5, 0.0);
  const StencilRow t = transpose_row(r);
  CHECK(t.implicit_terms.at(0, -2) == r.implicit_terms.at(-2, 0));
  CHECK(t.explicit_terms.at(0, 1) == r.explicit_terms.at(1, 0));
  CHECK(t.implicit_terms.at(-2, 0) == 0.0);
}

TEST_CASE("row assembly is a pure function of local data") {
  const Grid g = make_grid({0.0, 1.0, 0.0, 0.0}, 20, 1);
  const VelocityField v = sample_velocity([](double x, double) { return std::pair{std::sin(6.0 * x), 0.0}; }, g);
  for (int i = 2; i < 19; ++i) {
    const StencilRow a = assemble_semi_implicit_row_1d(g, i, v, 0.07, KappaChoice::third_order_semi_implicit());
    const double c = 0.07 * v.vx[i] / g.h();
    const StencilRow b = semi_implicit_row_1d(c, KappaChoice::third_order_semi_implicit().value(c));
    for (int d = -2; d <= 2; ++d) {
      CHECK(a.implicit_terms.at(d, 0) == b.implicit_terms.at(d, 0));
      CHECK(a.explicit_terms.at(d, 0) == b.explicit_terms.at(d, 0));
    }
  }
}
