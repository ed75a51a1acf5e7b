#include "doctest.h"

#include <Eigen/Dense>

#include "chaoslab/lattice.hpp"

using namespace chaoslab;

namespace {
Box box1d(double lo, double hi) {
  Box b;
  b.lo = Eigen::VectorXd::Constant(1, lo);
  b.hi = Eigen::VectorXd::Constant(1, hi);
  return b;
}
}  // namespace

TEST_CASE("unit interval at spacing 1/2 holds the single interior point") {
  auto d = build_domain(1, box1d(0, 1), 0.5);
  REQUIRE(d.site_count() == 1);
  CHECK(d.site(0)[0] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("unit interval at spacing 1/4") {
  auto d = build_domain(1, box1d(0, 1), 0.25);
  REQUIRE(d.site_count() == 3);
  CHECK(d.site(0)[0] == doctest::Approx(0.25));
  CHECK(d.site(1)[0] == doctest::Approx(0.5));
  CHECK(d.site(2)[0] == doctest::Approx(0.75));
}

TEST_CASE("boundary points are excluded: open box convention") {
  // (0, 1) at spacing 1/2: 0 and 1 are on the boundary, only 0.5 inside.
  auto d = build_domain(1, box1d(0.0, 0.5), 0.25);
  REQUIRE(d.site_count() == 1);
  CHECK(d.site(0)[0] == doctest::Approx(0.25));
}

TEST_CASE("empty interior raises") {
  CHECK_THROWS_AS(build_domain(1, box1d(0.1, 0.2), 0.5), EmptyDomain);
  CHECK_THROWS_AS(build_domain(1, box1d(1.0, 1.0), 0.5), EmptyDomain);
}

TEST_CASE("site cap raises before allocation") {
  CHECK_THROWS_AS(build_domain(1, box1d(0, 1), 1e-9, 1000), Overflow);
}

TEST_CASE("two dimensional sites come in lexicographic order") {
  Box b;
  b.lo = Eigen::Vector2d(0, 0);
  b.hi = Eigen::Vector2d(1, 1);
  auto d = build_domain(2, b, 0.5);
  // only (0.5, 0.5) at this spacing
  REQUIRE(d.site_count() == 1);
  auto d2 = build_domain(2, b, 0.25);
  REQUIRE(d2.site_count() == 9);
  // first coordinate most significant, second fastest
  CHECK(d2.site(0).isApprox(Eigen::Vector2d(0.25, 0.25)));
  CHECK(d2.site(1).isApprox(Eigen::Vector2d(0.25, 0.5)));
  CHECK(d2.site(3).isApprox(Eigen::Vector2d(0.5, 0.25)));
  CHECK(d2.site(8).isApprox(Eigen::Vector2d(0.75, 0.75)));
}

TEST_CASE("nearest site rounds and breaks ties toward the lower coordinate") {
  auto d = build_domain(1, box1d(0, 1), 0.25);
  Eigen::VectorXd x(1);
  x[0] = 0.26;
  CHECK(d.nearest_site(x) == 0);
  x[0] = 0.49;
  CHECK(d.nearest_site(x) == 1);
  x[0] = 0.375;  // equidistant between 0.25 and 0.5
  CHECK(d.nearest_site(x) == 0);
  x[0] = 0.99;  // nearest grid point 1.0 lies outside; clamp to 0.75
  CHECK(d.nearest_site(x) == 2);
  x[0] = 1.5;
  CHECK_THROWS_AS(d.nearest_site(x), OutsideDomain);
  x[0] = 1.0;  // boundary itself is outside the open box
  CHECK_THROWS_AS(d.nearest_site(x), OutsideDomain);
}

TEST_CASE("negative boxes and shifted boxes") {
  auto d = build_domain(1, box1d(-1, 1), 0.5);
  REQUIRE(d.site_count() == 3);
  CHECK(d.site(0)[0] == doctest::Approx(-0.5));
  CHECK(d.site(1)[0] == doctest::Approx(0.0));
  CHECK(d.site(2)[0] == doctest::Approx(0.5));
  CHECK(d.cell_volume() == doctest::Approx(0.5));
}
