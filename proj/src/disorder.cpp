#include "chaoslab/disorder.hpp"

#include <algorithm>
#include <cmath>

#include "chaoslab/rng.hpp"

namespace chaoslab {

namespace {

Rational factorial(int n) {
  boost::multiprecision::cpp_int f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return Rational(f);
}

/// Power-series coefficients of log cosh z up to degree m_max, exact.
/// With C(z) = cosh z = sum z^{2k}/(2k)! and L = log C, the coefficients
/// satisfy n c_n = sum_{k=1}^{n} k l_k c_{n-k}.
std::vector<Rational> log_cosh_coeffs(int m_max) {
  std::vector<Rational> c(m_max + 1, 0);  // cosh coefficients
  for (int k = 0; 2 * k <= m_max; ++k) c[2 * k] = Rational(1) / factorial(2 * k);
  std::vector<Rational> l(m_max + 1, 0);
  for (int n = 1; n <= m_max; ++n) {
    Rational acc = Rational(n) * c[n];
    for (int k = 1; k < n; ++k) acc -= Rational(k) * l[k] * c[n - k];
    l[n] = acc / n;
  }
  return l;
}

}  // namespace

DisorderSpec DisorderSpec::gaussian(int m_max) {
  DisorderSpec s;
  s.kind_ = DisorderKind::Gaussian;
  s.cumulants_.assign(m_max + 1, 0.0);
  s.rational_cumulants_.assign(m_max + 1, Rational(0));
  if (m_max >= 2) {
    s.cumulants_[2] = 1.0;
    s.rational_cumulants_[2] = 1;
  }
  s.certify();
  return s;
}

DisorderSpec DisorderSpec::rademacher(int m_max) {
  DisorderSpec s;
  s.kind_ = DisorderKind::Rademacher;
  auto l = log_cosh_coeffs(m_max);
  s.cumulants_.assign(m_max + 1, 0.0);
  s.rational_cumulants_.assign(m_max + 1, Rational(0));
  for (int m = 1; m <= m_max; ++m) {
    s.rational_cumulants_[m] = l[m] * factorial(m);
    s.cumulants_[m] = s.rational_cumulants_[m].convert_to<double>();
  }
  s.certify();
  return s;
}

DisorderSpec DisorderSpec::tabulated(std::vector<double> support,
                                     std::vector<double> probs, int m_max) {
  if (support.empty() || support.size() != probs.size())
    throw ConfigError("tabulated disorder: support/probability size mismatch");
  double psum = 0, mean = 0, var = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!(probs[i] >= 0)) throw ConfigError("negative probability");
    psum += probs[i];
    mean += probs[i] * support[i];
  }
  if (std::abs(psum - 1.0) > 1e-12)
    throw ConfigError("tabulated disorder: probabilities must sum to 1");
  for (std::size_t i = 0; i < probs.size(); ++i)
    var += probs[i] * (support[i] - mean) * (support[i] - mean);
  if (std::abs(mean) > 1e-9 || std::abs(var - 1.0) > 1e-9)
    throw ConfigError("tabulated disorder must have mean 0, variance 1");

  DisorderSpec s;
  s.kind_ = DisorderKind::Tabulated;
  s.support_ = support;
  s.probs_ = probs;
  s.cdf_.resize(probs.size());
  double acc = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    s.cdf_[i] = acc;
  }
  s.cdf_.back() = 1.0;

  // moments -> cumulants recursion
  std::vector<double> mu(m_max + 1, 0.0);
  mu[0] = 1.0;
  for (int m = 1; m <= m_max; ++m)
    for (std::size_t i = 0; i < probs.size(); ++i)
      mu[m] += probs[i] * std::pow(support[i], m);
  std::vector<double> kappa(m_max + 1, 0.0);
  auto binom = [](int n, int k) {
    double b = 1;
    for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return b;
  };
  for (int n = 1; n <= m_max; ++n) {
    double k = mu[n];
    for (int j = 1; j < n; ++j) k -= binom(n - 1, j - 1) * kappa[j] * mu[n - j];
    kappa[n] = k;
  }
  s.cumulants_ = kappa;

  s.symmetric_ = true;
  for (std::size_t i = 0; i < support.size(); ++i) {
    double p_neg = 0;
    for (std::size_t j = 0; j < support.size(); ++j)
      if (std::abs(support[j] + support[i]) < 1e-12) p_neg += probs[j];
    if (std::abs(p_neg - probs[i]) > 1e-12) {
      s.symmetric_ = false;
      break;
    }
  }
  s.certify();
  return s;
}

void DisorderSpec::certify() {
  const int m_max = cumulant_depth();
  if (m_max < 2) throw ConfigError("cumulant depth must be >= 2");
  if (std::abs(cumulants_[1]) > 1e-9 || std::abs(cumulants_[2] - 1.0) > 1e-9)
    throw ConfigError("disorder must be centered with unit variance");
  // Certified growth bound: max of (|kappa_m|/m!)^{1/m} over the cache,
  // extrapolated geometrically beyond it, with a 1.25 safety factor.
  double base = 0;
  double fact = 1;
  for (int m = 2; m <= m_max; ++m) {
    fact *= m;
    const double a = std::abs(cumulants_[m]) / fact;
    if (a > 0) base = std::max(base, std::pow(a, 1.0 / m));
  }
  growth_constant_ = 1.25 * base;
  fact = 1;
  for (int m = 2; m <= m_max; ++m) {
    fact *= m;
    if (std::abs(cumulants_[m]) / fact > std::pow(growth_constant_, m) * (1 + 1e-12))
      throw ConfigError("cumulant growth certification failed");
  }
}

double DisorderSpec::log_mgf(double a) const {
  if (!(std::abs(a) < mgf_radius_)) throw OutOfRadius("|a| >= mgf radius");
  switch (kind_) {
    case DisorderKind::Gaussian:
      return 0.5 * a * a;
    case DisorderKind::Rademacher: {
      const double t = std::abs(a);
      // log cosh t, stable for large t
      return t + std::log1p(std::exp(-2 * t)) - std::log(2.0);
    }
    case DisorderKind::Tabulated: {
      double mx = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < support_.size(); ++i)
        mx = std::max(mx, a * support_[i]);
      double s = 0;
      for (std::size_t i = 0; i < support_.size(); ++i)
        s += probs_[i] * std::exp(a * support_[i] - mx);
      return mx + std::log(s);
    }
  }
  return 0;
}

double DisorderSpec::log_mgf_prime(double a) const {
  if (!(std::abs(a) < mgf_radius_)) throw OutOfRadius("|a| >= mgf radius");
  switch (kind_) {
    case DisorderKind::Gaussian:
      return a;
    case DisorderKind::Rademacher:
      return std::tanh(a);
    case DisorderKind::Tabulated: {
      double mx = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < support_.size(); ++i)
        mx = std::max(mx, a * support_[i]);
      double num = 0, den = 0;
      for (std::size_t i = 0; i < support_.size(); ++i) {
        const double w = probs_[i] * std::exp(a * support_[i] - mx);
        den += w;
        num += w * support_[i];
      }
      return num / den;
    }
  }
  return 0;
}

std::vector<double> DisorderSpec::cumulants(int m_max) const {
  if (m_max < 2) throw ConfigError("m_max must be >= 2");
  if (m_max > cumulant_depth())
    throw CumulantDepth("requested cumulant beyond the cached depth");
  return std::vector<double>(cumulants_.begin() + 1,
                             cumulants_.begin() + m_max + 1);
}

double DisorderSpec::cumulant(int m) const {
  if (m < 1 || m > cumulant_depth())
    throw CumulantDepth("cumulant index out of cached range");
  return cumulants_[m];
}

const std::vector<Rational>& DisorderSpec::rational_cumulants() const {
  if (rational_cumulants_.empty())
    throw NotAvailable("no exact rational cumulants for this kind");
  return rational_cumulants_;
}

double DisorderSpec::sample(std::uint64_t seed, std::uint64_t index) const {
  switch (kind_) {
    case DisorderKind::Gaussian:
      return rng::normal(seed, index);
    case DisorderKind::Rademacher:
      return rng::rademacher(seed, index);
    case DisorderKind::Tabulated: {
      const double u = rng::u01(seed, index);
      const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
      const std::size_t i = std::min<std::size_t>(it - cdf_.begin(),
                                                  support_.size() - 1);
      return support_[i];
    }
  }
  return 0;
}

DisorderField sample_disorder(const DisorderSpec& spec,
                              const LatticeDomain& domain, std::uint64_t seed) {
  DisorderField f;
  f.domain = &domain;
  f.seed = seed;
  f.values.resize(domain.site_count());
  for (long i = 0; i < domain.site_count(); ++i)
    f.values[i] = spec.sample(seed, static_cast<std::uint64_t>(i));
  return f;
}

WhiteNoiseField couple_white_noise(const DisorderField& field) {
  WhiteNoiseField w;
  w.domain = field.domain;
  const double scale =
      std::pow(field.domain->spacing(), 0.5 * field.domain->dim());
  w.increments = scale * field.values;
  return w;
}

}  // namespace chaoslab
