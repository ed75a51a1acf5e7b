#include "doctest.h"

#include <cmath>

#include "chaoslab/disorder.hpp"
#include "chaoslab/rng.hpp"

using namespace chaoslab;

TEST_CASE("gaussian cumulants vanish beyond order two") {
  auto g = DisorderSpec::gaussian();
  CHECK(g.cumulant(1) == 0.0);
  CHECK(g.cumulant(2) == 1.0);
  for (int m = 3; m <= g.cumulant_depth(); ++m) CHECK(g.cumulant(m) == 0.0);
  CHECK(g.symmetric());
  CHECK(g.has_rational_cumulants());
}

TEST_CASE("rademacher cumulants from the exact log cosh series") {
  auto r = DisorderSpec::rademacher();
  const auto& kr = r.rational_cumulants();
  CHECK(kr[2] == Rational(1));
  CHECK(kr[3] == Rational(0));
  CHECK(kr[4] == Rational(-2));
  CHECK(kr[6] == Rational(16));
  CHECK(kr[8] == Rational(-272));
  CHECK(kr[10] == Rational(7936));  // tangent numbers with alternating sign
  for (int m = 1; m <= r.cumulant_depth(); m += 2) CHECK(kr[m] == Rational(0));
  CHECK(r.cumulant(4) == doctest::Approx(-2.0));
}

TEST_CASE("log mgf closed forms") {
  auto g = DisorderSpec::gaussian();
  auto r = DisorderSpec::rademacher();
  CHECK(g.log_mgf(0.7) == doctest::Approx(0.245).epsilon(1e-14));
  CHECK(g.log_mgf_prime(0.7) == doctest::Approx(0.7));
  CHECK(r.log_mgf(1.0) == doctest::Approx(std::log(std::cosh(1.0))).epsilon(1e-14));
  CHECK(r.log_mgf(1.0) == doctest::Approx(0.4337808304830271).epsilon(1e-13));
  CHECK(r.log_mgf(-3.0) == doctest::Approx(std::log(std::cosh(3.0))).epsilon(1e-14));
  CHECK(r.log_mgf_prime(0.5) == doctest::Approx(std::tanh(0.5)));
  CHECK(r.log_mgf(700.0) > 0);  // no overflow at large argument
}

TEST_CASE("tabulated two point distribution reproduces rademacher") {
  auto t = DisorderSpec::tabulated({-1.0, 1.0}, {0.5, 0.5});
  auto r = DisorderSpec::rademacher();
  for (int m = 2; m <= 10; ++m)
    CHECK(t.cumulant(m) == doctest::Approx(r.cumulant(m)).epsilon(1e-9));
  CHECK(t.symmetric());
  CHECK(t.log_mgf(0.8) == doctest::Approx(r.log_mgf(0.8)).epsilon(1e-13));
  CHECK(t.log_mgf_prime(0.8) == doctest::Approx(r.log_mgf_prime(0.8)).epsilon(1e-13));
}

TEST_CASE("tabulated three point distribution cumulants") {
  // support {-2, 0, 2} with probs {1/8, 3/4, 1/8}: mean 0, var 1.
  auto t = DisorderSpec::tabulated({-2.0, 0.0, 2.0}, {0.125, 0.75, 0.125});
  // mu4 = 2*(1/8)*16 = 4 so kappa4 = mu4 - 3 mu2^2 = 1.
  CHECK(t.cumulant(4) == doctest::Approx(1.0).epsilon(1e-12));
  // mu6 = 2*(1/8)*64 = 16, kappa6 = mu6 - 15 mu4 mu2 + 30 mu2^3 = -14? compute:
  // kappa6 = mu6 - 6 k2 mu4? use the known formula kappa6 = mu6 - 15 mu2 mu4
  //          + 30 mu2^3 for symmetric laws = 16 - 60 + 30 = -14.
  CHECK(t.cumulant(6) == doctest::Approx(-14.0).epsilon(1e-12));
  CHECK(t.symmetric());
  CHECK_FALSE(t.has_rational_cumulants());
}

TEST_CASE("tabulated validation rejects bad inputs") {
  CHECK_THROWS_AS(DisorderSpec::tabulated({-1.0, 1.0}, {0.6, 0.5}), ConfigError);
  CHECK_THROWS_AS(DisorderSpec::tabulated({-1.0, 2.0}, {0.5, 0.5}), ConfigError);
  CHECK_THROWS_AS(DisorderSpec::tabulated({}, {}), ConfigError);
}

TEST_CASE("asymmetric standardized law is flagged") {
  // support {-1/2, 2} with probs {4/5, 1/5}: mean 0, var 1.
  auto t = DisorderSpec::tabulated({-0.5, 2.0}, {0.8, 0.2});
  CHECK_FALSE(t.symmetric());
  CHECK(t.cumulant(3) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("growth constant certifies the cumulant cache") {
  auto r = DisorderSpec::rademacher();
  double fact = 1;
  for (int m = 2; m <= r.cumulant_depth(); ++m) {
    fact *= m;
    CHECK(std::abs(r.cumulant(m)) / fact <=
          std::pow(r.growth_constant(), m) * (1 + 1e-12));
  }
  CHECK(DisorderSpec::gaussian().growth_constant() ==
        doctest::Approx(1.25 / std::sqrt(2.0)));
}

TEST_CASE("cumulant depth errors") {
  auto g = DisorderSpec::gaussian(10);
  CHECK_THROWS_AS(g.cumulant(11), CumulantDepth);
  CHECK_THROWS_AS(g.cumulants(11), CumulantDepth);
  CHECK(g.cumulants(4).size() == 4);
}

TEST_CASE("sampling is counter based and deterministic") {
  auto g = DisorderSpec::gaussian();
  CHECK(g.sample(42, 7) == g.sample(42, 7));
  CHECK(g.sample(42, 7) != g.sample(42, 8));
  CHECK(g.sample(42, 7) != g.sample(43, 7));
  auto r = DisorderSpec::rademacher();
  CHECK(std::abs(r.sample(1, 0)) == 1.0);
}

TEST_CASE("sample moments match within four standard errors") {
  const int n = 200000;
  for (auto spec : {DisorderSpec::gaussian(), DisorderSpec::rademacher(),
                    DisorderSpec::tabulated({-2.0, 0.0, 2.0},
                                            {0.125, 0.75, 0.125})}) {
    double s1 = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
      const double w = spec.sample(20260823, i);
      s1 += w;
      s2 += w * w;
    }
    s1 /= n;
    s2 /= n;
    const double se = 1.0 / std::sqrt(double(n));
    CHECK(std::abs(s1) < 4 * se);
    // var of w^2 is mu4 - 1 <= 3 for these laws
    CHECK(std::abs(s2 - 1.0) < 4 * 2.0 * se);
  }
}

TEST_CASE("disorder field and white noise coupling") {
  Box b;
  b.lo = Eigen::VectorXd::Constant(1, 0.0);
  b.hi = Eigen::VectorXd::Constant(1, 1.0);
  auto dom = build_domain(1, b, 0.25);
  auto f = sample_disorder(DisorderSpec::gaussian(), dom, 99);
  REQUIRE(f.values.size() == 3);
  auto f2 = sample_disorder(DisorderSpec::gaussian(), dom, 99);
  CHECK(f.values == f2.values);
  auto w = couple_white_noise(f);
  CHECK(w.increments.isApprox(std::sqrt(0.25) * f.values));
}
