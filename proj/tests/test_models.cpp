#include "doctest.h"

#include <cmath>

#include "chaoslab/models.hpp"
#include "chaoslab/rng.hpp"

using namespace chaoslab;

namespace {

LatticeDomain chain_domain(long n) {
  Box b;
  b.lo = Eigen::VectorXd::Constant(1, 0.0);
  b.hi = Eigen::VectorXd::Constant(1, double(n + 1));
  return build_domain(1, b, 1.0);
}

ExactEnumModel ising_chain(const LatticeDomain& d, double J) {
  return ExactEnumModel(d, {-1.0, 1.0}, {0.5, 0.5}, J);
}

}  // namespace

TEST_CASE("symmetric chain basics") {
  auto d = chain_domain(6);
  auto m = ising_chain(d, 0.3);
  CHECK(m.binary());
  CHECK(m.binary_pm1());
  CHECK(m.symmetric());
  CHECK(m.spin_bound() == 1.0);
  CHECK(m.correlation({}, {}) == 1.0);
  CHECK(m.correlation({2}, {2}) == doctest::Approx(1.0));  // sigma^2 = 1
  CHECK(m.correlation({2}, {1}) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(m.correlation({2, 4}, {0, 0}) == 1.0);
  CHECK_THROWS_AS(m.correlation({2, 2}, {1, 1}), DuplicateSite);
  CHECK_THROWS_AS(m.correlation({2}, {1, 1}), ConfigError);
}

TEST_CASE("transfer matrix agrees with full enumeration") {
  auto d = chain_domain(6);
  ExactEnumModel m(d, {-1.0, 0.0, 1.0}, {0.3, 0.4, 0.3}, 0.45);
  for (auto [sites, powers] :
       {std::pair<std::vector<long>, std::vector<int>>{{0, 3}, {1, 1}},
        {{1, 2, 5}, {1, 2, 1}},
        {{0, 1, 2, 3, 4, 5}, {1, 1, 1, 1, 1, 1}},
        {{4}, {3}}}) {
    CHECK(m.correlation(sites, powers) ==
          doctest::Approx(m.correlation_enumerate(sites, powers))
              .epsilon(1e-12));
  }
  // probabilities sum to one
  double total = 0;
  m.enumerate([&](const Eigen::VectorXd&, double p) { total += p; });
  CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("correlation is permutation invariant and merge-extends") {
  auto d = chain_domain(5);
  ExactEnumModel m(d, {-1.0, 0.0, 1.0}, {0.25, 0.5, 0.25}, 0.2);
  CHECK(m.correlation({1, 3}, {2, 1}) ==
        doctest::Approx(m.correlation({3, 1}, {1, 2})).epsilon(1e-14));
  CHECK(correlation_merged(m, {1, 3, 1}, {1, 1, 1}) ==
        doctest::Approx(m.correlation({1, 3}, {2, 1})).epsilon(1e-14));
}

TEST_CASE("chain sampling reproduces exact correlations") {
  auto d = chain_domain(5);
  auto m = ising_chain(d, 0.4);
  const int n = 100000;
  double s01 = 0, s04 = 0;
  for (int i = 0; i < n; ++i) {
    auto c = m.sample_spins(rng::derive_seed(7, i));
    s01 += c.values[0] * c.values[1];
    s04 += c.values[0] * c.values[4];
  }
  const double se = 1.0 / std::sqrt(double(n));
  CHECK(std::abs(s01 / n - m.correlation({0, 1}, {1, 1})) < 4 * se);
  CHECK(std::abs(s04 / n - m.correlation({0, 4}, {1, 1})) < 4 * se);
}

TEST_CASE("enumeration cap") {
  auto d = chain_domain(20);
  CHECK_THROWS_AS(
      ExactEnumModel(d, {-1.0, 0.0, 1.0}, {0.3, 0.4, 0.3}, 0.1), Overflow);
}

TEST_CASE("gaussian field covariance structure") {
  Box b;
  b.lo = Eigen::VectorXd::Constant(1, 0.0);
  b.hi = Eigen::VectorXd::Constant(1, 1.0);
  auto d = build_domain(1, b, 0.125);
  GaussianFieldModel m(d, 0.2);
  const auto& C = m.covariance();
  // the raw kernel has unit diagonal; the PSD repair moves entries by at
  // most repair_max()
  CHECK(m.repair_max() > 0);
  CHECK(m.repair_max() <= 0.1);
  for (long i = 0; i < d.site_count(); ++i)
    CHECK(std::abs(C(i, i) - 1.0) <= m.repair_max() + 1e-12);
  const double expect = std::pow(0.125, 0.4) * std::pow(0.25, -0.4);
  CHECK(std::abs(C(0, 2) - expect) <= m.repair_max() + 1e-12);
  // repaired matrix is PSD
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
  CHECK(es.eigenvalues().minCoeff() >= -1e-12);
  CHECK_FALSE(m.bounded());
  CHECK(m.spin_bound() == 6.0);
  CHECK(m.truncation_probability() < 1e-8);
}

TEST_CASE("wick moments from the covariance matrix") {
  Box b;
  b.lo = Eigen::VectorXd::Constant(1, 0.0);
  b.hi = Eigen::VectorXd::Constant(1, 1.0);
  auto d = build_domain(1, b, 0.125);
  GaussianFieldModel m(d, 0.2);
  const auto& C = m.covariance();
  CHECK(m.correlation({0, 1, 2}, {1, 1, 1}) == 0.0);  // odd moment
  // three-pairing identity for four first powers
  const double wick4 = C(0, 1) * C(2, 4) + C(0, 2) * C(1, 4) +
                       C(0, 4) * C(1, 2);
  CHECK(m.correlation({0, 1, 2, 4}, {1, 1, 1, 1}) ==
        doctest::Approx(wick4).epsilon(1e-12));
  // sigma_x^2 sigma_y^2: pairings of (x,x,y,y)
  const double wick22 = C(0, 0) * C(3, 3) + 2 * C(0, 3) * C(0, 3);
  CHECK(m.correlation({0, 3}, {2, 2}) == doctest::Approx(wick22).epsilon(1e-12));
  CHECK(m.a3_ratio({0}, {2}) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(m.correlation({0, 1}, {9, 9}), PowerOverflow);
}

TEST_CASE("gaussian sampling covariance within four standard errors") {
  Box b;
  b.lo = Eigen::VectorXd::Constant(1, 0.0);
  b.hi = Eigen::VectorXd::Constant(1, 1.0);
  auto d = build_domain(1, b, 0.25);
  GaussianFieldModel m(d, 0.2);
  const int n = 50000;
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(3, 3);
  for (int i = 0; i < n; ++i) {
    auto c = m.sample_spins(rng::derive_seed(11, i));
    acc += c.values * c.values.transpose();
  }
  acc /= n;
  // Var(sigma_x sigma_y) <= E[s^2 s'^2] <= 3, so SE <= sqrt(3/n)
  const double se = std::sqrt(3.0 / n);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(std::abs(acc(i, j) - m.covariance()(i, j)) < 4 * se);
}

TEST_CASE("psi_delta and psi_limit for the gaussian field") {
  Box b;
  b.lo = Eigen::VectorXd::Constant(1, 0.0);
  b.hi = Eigen::VectorXd::Constant(1, 1.0);
  const double g = 0.2;
  Eigen::MatrixXd pts(2, 1);
  pts << 0.25, 0.75;
  // psi_delta(x, y) = delta^{-2g} Cov(x^delta, y^delta); up to the PSD
  // repair this is the Riesz value |x-y|^{-2g} when both points sit on
  // lattice sites
  for (double delta : {0.125, 0.0625}) {
    auto d = build_domain(1, b, delta);
    GaussianFieldModel m(d, g);
    const long sx = d.nearest_site(pts.row(0));
    const long sy = d.nearest_site(pts.row(1));
    CHECK(m.psi_delta(pts) ==
          doctest::Approx(std::pow(delta, -2 * g) * m.covariance()(sx, sy))
              .epsilon(1e-12));
    CHECK(std::abs(m.psi_delta(pts) - std::pow(0.5, -2 * g)) <=
          std::pow(delta, -2 * g) * m.repair_max());
    CHECK(m.psi_limit(pts) == doctest::Approx(std::pow(0.5, -2 * g)));
  }
  auto d = build_domain(1, b, 0.25);
  GaussianFieldModel m(d, g);
  // collision of rounded points
  Eigen::MatrixXd close(2, 1);
  close << 0.49, 0.51;
  CHECK(m.psi_delta(close) == 0.0);
  // odd tuple
  Eigen::MatrixXd one(1, 1);
  one << 0.5;
  CHECK(m.psi_limit(one) == 0.0);
  CHECK(m.psi_delta(one) == 0.0);
  Eigen::MatrixXd coincident(2, 1);
  coincident << 0.5, 0.5;
  CHECK_THROWS_AS(m.psi_limit(coincident), SingularInput);
  Eigen::MatrixXd outside(2, 1);
  outside << 0.5, 1.5;
  CHECK_THROWS_AS(m.psi_delta(outside), OutsideDomain);
}

TEST_CASE("renewal mass function and correlations") {
  auto d = chain_domain(8);
  RenewalPinningModel m(d, 0.8);
  CHECK(m.gamma() == doctest::Approx(0.2));
  const auto& u = m.renewal_mass();
  CHECK(u[0] == 1.0);
  for (double v : u) CHECK(v >= 0.0);
  // hand recursion: u1 = K1; u2 = K1 u1 + K2
  double norm = 0;
  for (int mm = 1; mm <= 8; ++mm) norm += std::pow(mm, -1.8);
  const double K1 = std::pow(1.0, -1.8) / norm;
  const double K2 = std::pow(2.0, -1.8) / norm;
  CHECK(u[1] == doctest::Approx(K1).epsilon(1e-13));
  CHECK(u[2] == doctest::Approx(K1 * K1 + K2).epsilon(1e-13));
  // k=2 correlation = u(t1) u(t2-t1); site i is time i+1 here
  CHECK(m.correlation({1, 4}, {1, 1}) ==
        doctest::Approx(u[2] * u[3]).epsilon(1e-13));
  CHECK(m.correlation({4, 1}, {1, 1}) ==
        doctest::Approx(u[2] * u[3]).epsilon(1e-13));
  // powers collapse: sigma^r = sigma
  CHECK(m.correlation({1, 4}, {3, 2}) ==
        doctest::Approx(m.correlation({1, 4}, {1, 1})));
}

TEST_CASE("renewal sampling matches the recursion") {
  auto d = chain_domain(6);
  RenewalPinningModel m(d, 0.8);
  const int n = 100000;
  Eigen::VectorXd hits = Eigen::VectorXd::Zero(6);
  for (int i = 0; i < n; ++i) hits += m.sample_spins(rng::derive_seed(3, i)).values;
  hits /= n;
  const double se = 0.5 / std::sqrt(double(n));
  for (int t = 1; t <= 6; ++t)
    CHECK(std::abs(hits[t - 1] - m.renewal_mass()[t]) < 4 * se);
}

TEST_CASE("binary pinning a3 ratio is exactly one") {
  auto d = chain_domain(8);
  RenewalPinningModel m(d, 0.8);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<long> sites;
    std::vector<int> powers;
    for (long s = 0; s < 8; ++s)
      if (rng::u01(77, trial * 16 + s) < 0.4) {
        sites.push_back(s);
        powers.push_back(1 + int(rng::u01(78, trial * 16 + s) * 4));
      }
    if (sites.empty()) continue;
    CHECK(m.a3_ratio(sites, powers) == 1.0);
  }
}

TEST_CASE("pinning psi_limit is the product of gap kernels") {
  auto d = chain_domain(8);
  RenewalPinningModel m(d, 0.8);
  const double ca = m.c_alpha();
  CHECK(ca == doctest::Approx(0.8 * std::sin(M_PI * 0.8) / M_PI));
  Eigen::MatrixXd pts(2, 1);
  pts << 2.0, 5.0;
  CHECK(m.psi_limit(pts) ==
        doctest::Approx(ca * std::pow(2.0, -0.2) * ca * std::pow(3.0, -0.2)));
  Eigen::MatrixXd bad(2, 1);
  bad << 3.0, 3.0;
  CHECK_THROWS_AS(m.psi_limit(bad), SingularInput);
}

TEST_CASE("bounded models respect the spin bound in all moments") {
  auto d = chain_domain(5);
  ExactEnumModel m(d, {-1.0, 0.0, 1.0}, {0.2, 0.6, 0.2}, 0.3);
  for (int r1 = 1; r1 <= 3; ++r1)
    for (int r2 = 1; r2 <= 3; ++r2)
      CHECK(std::abs(m.correlation({0, 3}, {r1, r2})) <=
            std::pow(m.spin_bound(), r1 + r2) + 1e-14);
}
