#include "chaoslab/coeffalg.hpp"

#include <cmath>

namespace chaoslab {

boost::multiprecision::cpp_int binomial_exact(int n, int k) {
  if (k < 0 || k > n) return 0;
  boost::multiprecision::cpp_int b = 1;
  for (int i = 1; i <= k; ++i) {
    b *= (n - k + i);
    b /= i;
  }
  return b;
}

long long compositions_count(int m, int j) {
  if (j < 1 || m < 2 * j) return 0;
  return binomial_exact(m - j - 1, j - 1).convert_to<long long>();
}

CoeffTable coeff_table_rational(const DisorderSpec& spec, int m_max) {
  const auto& kr = spec.rational_cumulants();
  if (static_cast<int>(kr.size()) <= m_max)
    throw CumulantDepth("rational cumulant cache shallower than m_max");
  return CoeffTable(std::vector<Rational>(kr.begin(), kr.begin() + m_max + 1),
                    m_max);
}

CoeffTableT<double> coeff_table(const DisorderSpec& spec, int m_max) {
  if (m_max > spec.cumulant_depth())
    throw CumulantDepth("cumulant cache shallower than m_max");
  std::vector<double> kappa(m_max + 1, 0.0);
  for (int m = 1; m <= m_max; ++m) kappa[m] = spec.cumulant(m);
  return CoeffTableT<double>(std::move(kappa), m_max);
}

Rational c_coeff(int j, int m, int l, const std::vector<Rational>& kappa) {
  CoeffTable t(kappa, static_cast<int>(kappa.size()) - 1);
  return t.c(j, m, l);
}

Rational d_coeff(int m, int l, const std::vector<Rational>& kappa) {
  CoeffTable t(kappa, static_cast<int>(kappa.size()) - 1);
  return t.d(m, l);
}

Rational a_coeff(int m, int l, const std::vector<Rational>& kappa) {
  CoeffTable t(kappa, static_cast<int>(kappa.size()) - 1);
  return t.a(m, l);
}

double coeff_tail_bound(int M, double lam_k, double growth_c) {
  const double r = 8.0 * growth_c * lam_k;
  if (!(r < 1.0)) throw GuardViolated("tail ratio 8*C*lambda*K >= 1");
  return std::pow(r, M + 1) / (1.0 - r);
}

double eta_cov_closed(const EtaCovInputs& in) {
  if (in.spec == nullptr) throw ConfigError("eta_cov_closed: missing spec");
  const double l = in.lambda, s = in.s, sp = in.s_prime;
  const auto& phi = *in.spec;
  const double cross =
      phi.log_mgf(l * (s + sp)) - phi.log_mgf(l * s) - phi.log_mgf(l * sp);
  return std::expm1(cross) + l * l * s * sp - l * s * phi.log_mgf_prime(l * sp) -
         l * sp * phi.log_mgf_prime(l * s);
}

}  // namespace chaoslab
