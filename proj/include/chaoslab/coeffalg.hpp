#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <map>
#include <tuple>
#include <vector>

#include "chaoslab/disorder.hpp"
#include "chaoslab/errors.hpp"

namespace chaoslab {

/// binom(m-j-1, j-1): the number of compositions of m into j parts >= 2
/// (0 when m < 2j).
long long compositions_count(int m, int j);

boost::multiprecision::cpp_int binomial_exact(int n, int k);

/// Coefficient tables of the eta-covariance expansion
///   E[eta_u(s) eta_u(s')] = sum_{m>=4} sum_{l=2}^{m-2} lambda^m a_{m,l} s^{m-l} s'^l
/// with a_{m,l} = kappa_m/m! binom(m,l) + d_{m,l} and
/// d_{m,l} = sum_{j=2}^{l} c_{j,m,l}/j! on the lower range, mirrored above.
///
/// c_{j,m,l} sums over compositions of m into j parts >= 2 with inner
/// binomial splits of l; evaluated by memoized recursive descent over the
/// first part.  Scalar is Rational for exact kinds, double otherwise.
template <class Scalar>
class CoeffTableT {
 public:
  /// kappa[m] = m-th cumulant, m = 0..m_max.
  CoeffTableT(std::vector<Scalar> kappa, int m_max)
      : kappa_(std::move(kappa)), m_max_(m_max) {
    if (static_cast<int>(kappa_.size()) <= m_max_)
      throw CumulantDepth("cumulant cache shallower than m_max");
    // w(m,l) = kappa_m/m! * binom(m,l)
    Scalar fact(1);
    weights_.assign(m_max_ + 1, {});
    for (int m = 2; m <= m_max_; ++m) {
      weights_[m].assign(m, Scalar(0));
      fact = Scalar(1);
      for (int i = 2; i <= m; ++i) fact *= Scalar(i);
      for (int l = 1; l <= m - 1; ++l)
        weights_[m][l] = kappa_[m] / fact * scalar_cast(binomial_exact(m, l));
    }
  }

  int m_max() const { return m_max_; }

  Scalar c(int j, int m, int l) const {
    if (j < 1) return Scalar(0);
    if (m < 2 * j || l < j || l > m - j) return Scalar(0);
    if (m > m_max_) throw CumulantDepth("c_{j,m,l} requires kappa beyond cache");
    if (j == 1) return weights_[m][l];
    auto key = std::make_tuple(j, m, l);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    Scalar acc(0);
    // recursive descent over the first composition part (m1, l1)
    for (int m1 = 2; m1 <= m - 2 * (j - 1); ++m1) {
      if (is_zero(weights_[m1][1]) && all_zero_row(m1)) continue;
      for (int l1 = 1; l1 <= m1 - 1; ++l1) {
        if (is_zero(weights_[m1][l1])) continue;
        acc += weights_[m1][l1] * c(j - 1, m - m1, l - l1);
      }
    }
    memo_.emplace(key, acc);
    return acc;
  }

  Scalar d(int m, int l) const {
    if (m < 4 || l < 2 || l > m - 2) return Scalar(0);
    if (l > m / 2) return d(m, m - l);
    Scalar acc(0);
    Scalar jfact(1);
    for (int j = 2; j <= l; ++j) {
      jfact = Scalar(1);
      for (int i = 2; i <= j; ++i) jfact *= Scalar(i);
      acc += c(j, m, l) / jfact;
    }
    return acc;
  }

  Scalar a(int m, int l) const {
    if (m < 4 || l < 2 || l > m - 2)
      throw ConfigError("a_{m,l} requires m >= 4, 2 <= l <= m-2");
    return weights_[m][l] + d(m, l);
  }

  double a_double(int m, int l) const { return to_double(a(m, l)); }

  double sum_abs_a(int m) const {
    double s = 0;
    for (int l = 2; l <= m - 2; ++l) s += std::abs(a_double(m, l));
    return s;
  }

  static double to_double(const Scalar& x);

 private:
  static Scalar scalar_cast(const boost::multiprecision::cpp_int& v);
  static bool is_zero(const Scalar& x) { return x == Scalar(0); }
  bool all_zero_row(int m) const {
    for (int l = 1; l <= m - 1; ++l)
      if (!is_zero(weights_[m][l])) return false;
    return true;
  }

  std::vector<Scalar> kappa_;
  int m_max_;
  std::vector<std::vector<Scalar>> weights_;
  mutable std::map<std::tuple<int, int, int>, Scalar> memo_;
};

template <>
inline double CoeffTableT<double>::to_double(const double& x) { return x; }
template <>
inline double CoeffTableT<Rational>::to_double(const Rational& x) {
  return x.convert_to<double>();
}
template <>
inline double CoeffTableT<double>::scalar_cast(
    const boost::multiprecision::cpp_int& v) {
  return v.convert_to<double>();
}
template <>
inline Rational CoeffTableT<Rational>::scalar_cast(
    const boost::multiprecision::cpp_int& v) {
  return Rational(v);
}

using CoeffTable = CoeffTableT<Rational>;

/// Exact-rational table for Gaussian/Rademacher disorder.
CoeffTable coeff_table_rational(const DisorderSpec& spec,
                                int m_max = DisorderSpec::kDefaultCumulantDepth);
/// Floating table for any disorder kind.
CoeffTableT<double> coeff_table(const DisorderSpec& spec,
                                int m_max = DisorderSpec::kDefaultCumulantDepth);

/// Single-coefficient conveniences (kappa[m] = m-th cumulant).
Rational c_coeff(int j, int m, int l, const std::vector<Rational>& kappa);
Rational d_coeff(int m, int l, const std::vector<Rational>& kappa);
Rational a_coeff(int m, int l, const std::vector<Rational>& kappa);

struct EtaCovInputs {
  double s = 0;
  double s_prime = 0;
  double lambda = 0;
  const DisorderSpec* spec = nullptr;
};

struct EtaCovSeriesResult {
  double value = 0;
  double tail_bound = 0;
};

/// Certified geometric tail sum_{m>M} (8 C lamK)^m.
double coeff_tail_bound(int M, double lam_k, double growth_c);

/// Truncated eta-covariance series, with the certified tail bound.
/// Requires the convergence guard 8 C lambda max(|s|,|s'|) < 1/2.
template <class Scalar>
EtaCovSeriesResult eta_cov_series(const CoeffTableT<Scalar>& table,
                                  const EtaCovInputs& in, int M) {
  if (in.spec == nullptr) throw ConfigError("eta_cov_series: missing spec");
  if (M < 4) throw ConfigError("eta_cov_series: M >= 4 required");
  if (M > table.m_max()) throw CumulantDepth("M beyond table depth");
  const double K = std::max(std::abs(in.s), std::abs(in.s_prime));
  const double guard = 8.0 * in.spec->growth_constant() * std::abs(in.lambda) * K;
  if (!(guard < 0.5))
    throw GuardViolated("eta covariance series convergence guard failed");
  if (!(std::abs(in.lambda) * K < 0.5 * in.spec->mgf_radius()))
    throw GuardViolated("lambda * spin bound too close to the mgf radius");
  EtaCovSeriesResult r;
  for (int m = 4; m <= M; ++m) {
    const double lm = std::pow(in.lambda, m);
    double inner = 0;
    for (int l = 2; l <= m - 2; ++l)
      inner += table.a_double(m, l) * std::pow(in.s, m - l) *
               std::pow(in.s_prime, l);
    r.value += lm * inner;
  }
  r.tail_bound = coeff_tail_bound(M, std::abs(in.lambda) * K,
                                  in.spec->growth_constant());
  return r;
}

/// Closed form F(s,s') = e^{phi(l(s+s')) - phi(ls) - phi(ls')} - 1
///                       + l^2 s s' - l s phi'(l s') - l s' phi'(l s).
double eta_cov_closed(const EtaCovInputs& in);

}  // namespace chaoslab
