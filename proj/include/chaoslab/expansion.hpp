#pragma once

#include <cstdint>
#include <vector>

#include "chaoslab/disorder.hpp"
#include "chaoslab/models.hpp"

namespace chaoslab {

enum class EvalMethod { Exact, MonteCarlo };

struct PartitionResult {
  double value = 0;
  EvalMethod method = EvalMethod::Exact;
  double std_error = 0;     // MC only
  long spin_samples = 0;    // MC only
};

/// Per-site residual eta = e^{lambda omega sigma - phi(lambda sigma)} - 1
///                         - lambda omega sigma,
/// evaluated in compensated form (expm1 of the exponent, then subtracting
/// phi) to avoid cancellation at small lambda.
double eta_term(const DisorderSpec& spec, double lambda, double omega,
                double sigma);

/// Z = E^ref[e^{sum lambda omega_x sigma_x}].  Exact dispatch: chain models
/// by enumeration, Gaussian fields by the quadratic closed form; otherwise
/// MethodUnavailable.  MC averages over sample_spins.
PartitionResult partition_raw(const SpinModel& model,
                              const DisorderField& field, double lambda,
                              EvalMethod method, std::uint64_t seed = 0,
                              long mc_samples = 10000);

/// Wick-normalized variant with the per-site counterterm phi(lambda sigma_x);
/// its disorder average is 1.  The Gaussian-field closed form requires
/// Gaussian disorder.
PartitionResult partition_wick(const SpinModel& model,
                               const DisorderField& field, double lambda,
                               const DisorderSpec& spec, EvalMethod method,
                               std::uint64_t seed = 0, long mc_samples = 10000);

struct BinaryChainResult {
  double wick = 0;           // partition_wick, exact
  double reconstructed = 0;  // e^{sum log cosh - n phi(lambda)} * E[prod(1 + sigma tanh)]
};

/// The +-1 factorization identity: for binary spins and even phi,
/// Zhat = exp(sum_x log cosh(lambda omega_x) - n phi(lambda)) *
///        E^ref[prod_x (1 + sigma_x tanh(lambda omega_x))],
/// both sides computed independently.
BinaryChainResult binary_chain_check(const ExactEnumModel& model,
                                     const DisorderField& field, double lambda,
                                     const DisorderSpec& spec);

struct ExpansionBreakdown {
  int order = 0;                    // M
  std::vector<double> main_terms;   // T_k, k = 1..M
  std::vector<double> error_terms;  // E_{k,delta}, k = 1..M
  double remainder = 0;
  bool remainder_available = false;
  double total = 0;                 // 1 + sum_k (T_k + E_k)
};

/// Zhat = 1 + sum_{k<=M} sum_{k-subsets} E^ref[prod (lambda omega sigma + eta)]
///          + R_{M,delta}, split into all-linear main terms and eta error
/// terms.  Exact mode (enumerable models) evaluates the subset sums through
/// the elementary-symmetric-polynomial recursion per spin configuration and
/// gets the remainder by subtraction from partition_wick; MC mode averages
/// the same per-configuration quantities and leaves the remainder
/// unavailable.
ExpansionBreakdown truncated_expansion(const SpinModel& model,
                                       const DisorderField& field,
                                       double lambda, int M,
                                       const DisorderSpec& spec,
                                       EvalMethod method,
                                       std::uint64_t seed = 0,
                                       long mc_samples = 10000);

struct ChaosApprox {
  int order = 0;
  std::vector<double> terms;  // k = 1..M
  double total = 1;           // 1 + sum of terms
};

/// Discrete chaos series 1 + sum_k lambda_hat^k sum_{k-subsets}
/// psi_delta(x_1..x_k) prod delta^{d/2} omega_{x_i}, by direct subset
/// enumeration (independent of truncated_expansion's code path).
ChaosApprox chaos_discrete(const SpinModel& model, const DisorderField& field,
                           double lambda_hat, int M,
                           double subset_budget = 2e7);

/// Coupled Wiener-chaos approximation: order-k term
/// lambda_hat^k sum over k-subsets of distinct cells of psi_0(centers)
/// prod increments (the symmetric rewriting of the 1/k! ordered-tuple sum).
/// Gaussian fields use a weighted-matching closed form (orders <= 6); other
/// models enumerate subsets under the budget.
ChaosApprox chaos_limit_coupled(const SpinModel& model,
                                const WhiteNoiseField& noise,
                                double lambda_hat, int M,
                                double subset_budget = 2e7);

/// (A2) tail sum_{k>M} lambda_hat^{2k}/k! * norms2[k], where norms2[k] is the
/// L2(Omega^k)^2 norm of psi (indices beyond the vector are treated as the
/// last available value, conservatively).
double chaos_tail(double lambda_hat, int M, const std::vector<double>& norms2);

/// lambda_delta = lambda_hat * delta^{d/2 - gamma}, the intermediate
/// disorder scaling.
double intermediate_lambda(double lambda_hat, double delta, int dim,
                           double gamma);

}  // namespace chaoslab
