#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "lsadvect/core.hpp"

using namespace lsadvect;

TEST_CASE("grid spacing and node counts") {
  CHECK(make_grid({}, 40, 2).h() == doctest::Approx(0.05));
  const Grid g1 = make_grid({0.0, 1.0, 0.0, 0.0}, 100, 1);
  CHECK(g1.h() == doctest::Approx(0.01));
  CHECK(g1.size() == 101);
  CHECK(g1.ny() == 1);
  CHECK(make_grid({}, 160, 2).h() == doctest::Approx(0.0125));
  CHECK(make_grid({}, 160, 2).size() == 161u * 161u);
}

TEST_CASE("grid construction rejects degenerate input") {
  CHECK_THROWS_AS(make_grid({}, 3, 2), std::invalid_argument);
  CHECK_THROWS_AS(make_grid({1.0, -1.0, -1.0, 1.0}, 10, 2), std::invalid_argument);
  CHECK_THROWS_AS(make_grid({}, 10, 3), std::invalid_argument);
}

TEST_CASE("node coordinates are affine in the index") {
  const Grid g = make_grid({-1.0, 1.0, -0.5, 1.5}, 80, 2);
  for (int i = 0; i + 1 < g.nx(); ++i) CHECK(g.x(i + 1) - g.x(i) == doctest::Approx(g.h()).epsilon(1e-12));
  for (int j = 0; j + 1 < g.ny(); ++j) CHECK(g.y(j + 1) - g.y(j) == doctest::Approx(g.h()).epsilon(1e-12));
  CHECK(g.x(g.nx() - 1) == doctest::Approx(1.0));
}

TEST_CASE("row-major storage") {
  const Grid g = make_grid({}, 4, 2);
  CHECK(g.index(2, 3) == 3u * 5u + 2u);
  auto [i, j] = g.coords(g.index(4, 1));
  CHECK(i == 4);
  CHECK(j == 1);
}

TEST_CASE("sampling") {
  const Grid g = make_grid({0.0, 1.0, 0.0, 0.0}, 4, 1);
  const Field zero = sample_field([](double, double) { return 0.0; }, g);
  for (double v : zero.values) CHECK(v == 0.0);

  const Field fx = sample_field([](double x, double) { return x; }, g);
  CHECK(fx(0, 0) == 0.0);
  CHECK(fx(2, 0) == doctest::Approx(0.5));
  CHECK(fx(4, 0) == doctest::Approx(1.0));

  const Grid g2 = make_grid({}, 8, 2);
  const Field f = sample_field([](double x, double y) { return 3.0 * x - y * y; }, g2);
  for (int j = 0; j < g2.ny(); ++j)
    for (int i = 0; i < g2.nx(); ++i) CHECK(f(i, j) == 3.0 * g2.x(i) - g2.y(j) * g2.y(j));

  CHECK_THROWS(sample_field([](double, double) { return std::nan(""); }, g2));
}

TEST_CASE("courant numbers") {
  const Grid g = make_grid({0.0, 1.0, 0.0, 0.0}, 20, 1);
  const VelocityField v2 = sample_velocity([](double, double) { return std::pair{2.0, 0.0}; }, g);
  const auto c = courant_numbers(v2, 0.1, 0.05);
  CHECK(c[3].c == doctest::Approx(4.0));
  CHECK(c[3].d == 0.0);

  const VelocityField v0 = sample_velocity([](double, double) { return std::pair{0.0, 0.0}; }, g);
  CHECK(courant_numbers(v0, 0.1, 0.05)[0].c == 0.0);
}

TEST_CASE("courant numbers are linear and keep the velocity sign") {
  const Grid g = make_grid({}, 10, 2);
  const VelocityField v = sample_velocity([](double x, double y) { return std::pair{x - 0.3, -y * y + 0.2}; }, g);
  const auto a = courant_numbers(v, 0.02, g.h());
  const auto b = courant_numbers(v, 0.06, g.h());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(b[k].c == doctest::Approx(3.0 * a[k].c));
    CHECK(b[k].d == doctest::Approx(3.0 * a[k].d));
    CHECK(sign(a[k].c) == sign(v.vx[k]));
    CHECK(sign(a[k].d) == sign(v.vy[k]));
  }
}

TEST_CASE("time stepping") {
  const TimeStepping ts = make_time_stepping(1.0, 3);
  CHECK(ts.tau == doctest::Approx(1.0 / 3.0));
  CHECK(ts.time(3) == 1.0);
  CHECK_THROWS(make_time_stepping(0.0, 3));
  CHECK_THROWS(make_time_stepping(1.0, 0));
}

TEST_CASE("unequal spacing is rejected") { CHECK_THROWS(make_grid({-1.0, 1.0, -0.5, 2.0}, 80, 2)); }
