#pragma once

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <limits>
#include <vector>

#include "chaoslab/errors.hpp"
#include "chaoslab/lattice.hpp"

namespace chaoslab {

using Rational = boost::multiprecision::cpp_rational;

enum class DisorderKind { Gaussian, Rademacher, Tabulated };

/// Disorder distribution: sampler, log moment generating function phi,
/// cumulants kappa_m and the certified cumulant growth constant C with
/// |kappa_m|/m! <= C^m.  Mean zero and unit variance are asserted at
/// construction.  Immutable.
class DisorderSpec {
 public:
  static constexpr int kDefaultCumulantDepth = 40;

  static DisorderSpec gaussian(int m_max = kDefaultCumulantDepth);
  static DisorderSpec rademacher(int m_max = kDefaultCumulantDepth);
  /// Finite-support distribution; support/probabilities must already be
  /// standardized to mean 0, variance 1 (tolerance 1e-9).
  static DisorderSpec tabulated(std::vector<double> support,
                                std::vector<double> probs,
                                int m_max = kDefaultCumulantDepth);

  DisorderKind kind() const { return kind_; }
  double mgf_radius() const { return mgf_radius_; }
  /// Certified growth constant for |kappa_m|/m! <= C^m.
  double growth_constant() const { return growth_constant_; }
  int cumulant_depth() const { return static_cast<int>(cumulants_.size()) - 1; }
  bool symmetric() const { return symmetric_; }
  bool has_rational_cumulants() const { return !rational_cumulants_.empty(); }

  /// phi(a) = log E[e^{a omega}], closed form per kind.
  double log_mgf(double a) const;
  /// phi'(a), closed form per kind.
  double log_mgf_prime(double a) const;

  /// kappa_1..kappa_m_max (index 0 unused in the return: result[i] = kappa_{i+1}).
  std::vector<double> cumulants(int m_max) const;
  /// kappa_m as a double; m <= cumulant_depth().
  double cumulant(int m) const;
  /// Exact rational cumulants (Gaussian/Rademacher only).
  const std::vector<Rational>& rational_cumulants() const;

  /// Counter-based draw: depends only on (seed, index).
  double sample(std::uint64_t seed, std::uint64_t index) const;

 private:
  DisorderSpec() = default;
  void certify();

  DisorderKind kind_ = DisorderKind::Gaussian;
  double mgf_radius_ = std::numeric_limits<double>::infinity();
  bool symmetric_ = true;
  std::vector<double> cumulants_;            // index m, m = 0..m_max
  std::vector<Rational> rational_cumulants_; // same indexing; empty if n/a
  double growth_constant_ = 1.0;
  std::vector<double> support_;
  std::vector<double> probs_;
  std::vector<double> cdf_;
};

/// Realized i.i.d. field over a domain.
struct DisorderField {
  const LatticeDomain* domain = nullptr;
  Eigen::VectorXd values;  // omega_x per site
  std::uint64_t seed = 0;
};

/// Per-cell white-noise increments W(Lambda_delta(x)).
struct WhiteNoiseField {
  const LatticeDomain* domain = nullptr;
  Eigen::VectorXd increments;
};

DisorderField sample_disorder(const DisorderSpec& spec,
                              const LatticeDomain& domain, std::uint64_t seed);

/// Increment at site x equals delta^{d/2} * omega_x.
WhiteNoiseField couple_white_noise(const DisorderField& field);

}  // namespace chaoslab
