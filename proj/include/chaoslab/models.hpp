#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "chaoslab/errors.hpp"
#include "chaoslab/lattice.hpp"

namespace chaoslab {

/// One draw of the reference spin field.
struct SpinConfiguration {
  const LatticeDomain* domain = nullptr;
  Eigen::VectorXd values;  // sigma_x per site
};

/// Reference spin measure P^ref: mixed-moment oracle, sampler, spin bound K,
/// scaling exponent gamma, and the rescaled correlation psi_delta with (when
/// known) its continuum limit psi_0.  Immutable after construction; all
/// evaluations are pure.
class SpinModel {
 public:
  static constexpr int kPairingCap = 16;

  virtual ~SpinModel() = default;

  const LatticeDomain& domain() const { return *domain_; }
  double gamma() const { return gamma_; }
  /// Spin bound K (effective truncation level for unbounded models).
  double spin_bound() const { return spin_bound_; }
  bool bounded() const { return bounded_; }

  /// E^ref[prod_i sigma_{x_i}^{r_i}] for distinct sites; zero powers are
  /// dropped first, the empty product is 1.
  double correlation(const std::vector<long>& sites,
                     const std::vector<int>& powers) const;

  virtual SpinConfiguration sample_spins(std::uint64_t seed) const = 0;

  /// Rescaled k-point function: maps each row of `points` (k x d) through
  /// nearest_site, returns 0 on any collision, else
  /// delta^{-k gamma} * correlation with all powers 1.
  double psi_delta(const Eigen::MatrixXd& points) const;

  virtual bool has_psi_limit() const { return false; }
  /// Continuum limit psi_0 at distinct continuum points (k x d).
  virtual double psi_limit(const Eigen::MatrixXd& points) const;

  /// |E[prod sigma^{r_i}]| / |E[prod sigma^{(r_i)_2}]| with the parity
  /// reduction (r)_2 = 2 for even r, 1 for odd r.
  double a3_ratio(const std::vector<long>& sites,
                  const std::vector<int>& powers) const;

 protected:
  /// Mixed moment for distinct sites and powers >= 1.
  virtual double moment(const std::vector<long>& sites,
                        const std::vector<int>& powers) const = 0;

  const LatticeDomain* domain_ = nullptr;
  double gamma_ = 0;
  double spin_bound_ = 1;
  bool bounded_ = true;
};

/// Merge repeated sites by summing powers, then evaluate; the consistent
/// extension of the distinct-site moment to arbitrary index tuples.
double correlation_merged(const SpinModel& model, std::vector<long> sites,
                          std::vector<int> powers);

/// Finite-alphabet 1-D chain with single-site weights and nearest-neighbor
/// coupling J: P(sigma) proportional to prod_x w(sigma_x) e^{J sigma_x sigma_{x+1}}.
/// Ground-truth oracle: every quantity is available both by transfer matrix
/// and by full enumeration.
class ExactEnumModel : public SpinModel {
 public:
  static constexpr double kEnumCap = 45e6;  // q^n limit (3^16 ~ 4.3e7)

  ExactEnumModel(const LatticeDomain& domain, std::vector<double> alphabet,
                 std::vector<double> site_weights, double coupling,
                 double gamma = 0.2);

  const std::vector<double>& alphabet() const { return alphabet_; }
  double coupling() const { return coupling_; }
  bool binary() const { return alphabet_.size() == 2; }
  /// Spin values are exactly {-1, +1}.
  bool binary_pm1() const;
  /// Symmetric single-site weights on a sign-symmetric alphabet.
  bool symmetric() const;

  /// Normalizing constant of the unnormalized chain weights.
  double weight_normalizer() const { return normalizer_; }

  /// Visit all q^n configurations with their probabilities.
  void enumerate(const std::function<void(const Eigen::VectorXd&, double)>& f)
      const;

  /// Full-enumeration moment, for cross-checking the transfer matrix.
  double correlation_enumerate(const std::vector<long>& sites,
                               const std::vector<int>& powers) const;

  SpinConfiguration sample_spins(std::uint64_t seed) const override;

 protected:
  double moment(const std::vector<long>& sites,
                const std::vector<int>& powers) const override;

 private:
  std::vector<double> alphabet_;
  std::vector<double> site_weights_;
  double coupling_ = 0;
  double normalizer_ = 1;
  Eigen::MatrixXd transfer_;             // T(s,s') = e^{J s s'}
  std::vector<Eigen::VectorXd> backward_;  // b_i(s): partition of the suffix
};

/// Centered Gaussian field with covariance delta^{2 gamma} max(|x-y|, delta)^{-2 gamma}
/// (unit diagonal), PSD-repaired by eigenvalue clipping.  Unbounded spins:
/// runs with an effective spin bound of 6 standard deviations.
class GaussianFieldModel : public SpinModel {
 public:
  /// repair_eps bounds the entrywise PSD-repair perturbation.  The truncated
  /// Riesz kernel on a lattice is genuinely indefinite (least eigenvalue
  /// around -0.17 at gamma = 0.2), so the clipped matrix differs from the
  /// raw kernel by up to ~0.05 per entry; the scaled effect on psi_delta
  /// still vanishes like delta^{1-4 gamma}.
  GaussianFieldModel(const LatticeDomain& domain, double gamma,
                     double repair_eps = 0.1);

  /// Repaired covariance matrix.
  const Eigen::MatrixXd& covariance() const { return cov_; }
  /// Frobenius norm of the PSD repair perturbation.
  double repair_norm() const { return repair_norm_; }
  /// Largest entrywise PSD repair perturbation.
  double repair_max() const { return repair_max_; }
  /// Per-site probability of exceeding the effective spin bound.
  double truncation_probability() const;

  SpinConfiguration sample_spins(std::uint64_t seed) const override;

  bool has_psi_limit() const override { return true; }
  /// Wick pairing sum of Riesz kernels |x_i - x_j|^{-2 gamma}; 0 for odd k.
  double psi_limit(const Eigen::MatrixXd& points) const override;

 protected:
  double moment(const std::vector<long>& sites,
                const std::vector<int>& powers) const override;

 private:
  Eigen::MatrixXd cov_;
  Eigen::MatrixXd factor_;  // cov = factor factor^T
  double repair_norm_ = 0;
  double repair_max_ = 0;
};

/// Renewal pinning chain: sigma_x = 1{x in tau} for a renewal process with
/// inter-arrival law K(m) proportional to m^{-(1+alpha)}, started at the lower
/// box edge.  Binary reference case; gamma = 1 - alpha.
class RenewalPinningModel : public SpinModel {
 public:
  RenewalPinningModel(const LatticeDomain& domain, double alpha,
                      double c_alpha = 0);

  double alpha() const { return alpha_; }
  double c_alpha() const { return c_alpha_; }
  /// Renewal mass function u(0..n) from the convolution recursion.
  const std::vector<double>& renewal_mass() const { return u_; }

  SpinConfiguration sample_spins(std::uint64_t seed) const override;

  bool has_psi_limit() const override { return true; }
  /// prod over ordered gaps (from the lower box edge) of C_alpha gap^{alpha-1}.
  double psi_limit(const Eigen::MatrixXd& points) const override;

 protected:
  double moment(const std::vector<long>& sites,
                const std::vector<int>& powers) const override;

 private:
  long time_index(long site) const;

  double alpha_ = 0.8;
  double c_alpha_ = 0;
  std::vector<double> gap_law_;  // K(1..N), normalized
  std::vector<double> gap_cdf_;
  std::vector<double> u_;        // u(0..N)
};

}  // namespace chaoslab
