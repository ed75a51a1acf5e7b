#pragma once

#include <cstdint>
#include <vector>

#include "chaoslab/disorder.hpp"
#include "chaoslab/expansion.hpp"
#include "chaoslab/models.hpp"

namespace chaoslab {

/// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct L2Report {
  int k = 0;
  long nodes = 0;
  double err2 = 0;      // ||psi_delta - psi_0||^2 over Omega^k
  double err2_se = 0;
  double norm2 = 0;     // ||psi_delta||^2
  double norm2_se = 0;
  bool has_limit = false;
};

/// (A1) check: uniform MC quadrature over Omega^k of (psi_delta - psi_0)^2
/// and psi_delta^2; the collision indicator is psi_delta's own.
L2Report check_a1(const SpinModel& model, int k, long node_budget,
                  std::uint64_t seed);

/// ||psi_delta||^2_{L2(Omega^k)} for k = 1..k_max (index 0 unused), by the
/// same quadrature.
std::vector<double> psi_l2_norms(const SpinModel& model, int k_max,
                                 long node_budget, std::uint64_t seed);

struct TailTable {
  std::vector<double> deltas;
  std::vector<int> orders;                 // M values
  std::vector<std::vector<double>> tails;  // [delta index][M index]
  std::vector<double> sup_over_delta;      // per M
  int smallest_order = -1;                 // first M with sup <= threshold
  double threshold = 0;
};

/// (A2) check: tail table over (delta, M); models supplied one per delta.
TailTable check_a2(const std::vector<const SpinModel*>& models,
                   double lambda_hat, const std::vector<int>& orders,
                   int k_max, long node_budget, std::uint64_t seed,
                   double threshold);

struct A3Report {
  double max_ratio = 0;
  long sampled = 0;
  long degenerate = 0;
  std::vector<double> ratios;
};

/// (A3) check: random (sites, powers) tuples; returns the empirical ratio
/// distribution and maximum (the C estimate).
A3Report check_a3(const SpinModel& model, long count, int max_k, int max_power,
                  std::uint64_t seed);

struct Stratum {
  int eta_pairs = 0;    // iota_1: sites carrying one eta factor
  int eta_squares = 0;  // iota_2: sites carrying two
  double exponent = 0;  // d(i1+i2) - 2 gamma (i1 + 2 i2)
};

struct RemainderReport {
  int order = 0;       // M
  double delta = 0;
  double lambda = 0;   // lambda_delta
  double s0 = 0;        // dominant pure-psi part of the E[R^2] bound
  double s1 = 0;        // eta part (plain stratum sum)
  double s1_bound = 0;  // eta part with the 2^k bound weights
  // Dominant eta stratum: one self-paired eta site, sum_x E^{(2)}[E[eta eta']].
  // The quantity carrying the predicted delta^{d - 4 gamma} decay with a
  // drift-free prefactor; the full eta part mixes in slowly-converging
  // psi-norm factors that mask the exponent at desk scale.
  double s1_lead = 0;
  double er2 = 0;      // E[R^2], exact in omega given the replica pairs
  bool exact = false;  // spin expectation exact (enumeration) or MC
  long replica_pairs = 0;
  std::vector<double> chaos_orders;  // A_k = E[e_k(G)] for k = M+1..n
  std::vector<Stratum> strata;
  double min_exponent = 0;  // d - 4 gamma, stratum (0,1)
};

/// Remainder second-moment diagnostics.  The disorder expectation is done in
/// closed form through the one-site kernels
///   h = lambda^2 s s',  F = E[eta eta'],  G = E[(t+eta)(t'+eta')],
/// so only the spin expectation is enumerated (exact mode) or sampled over
/// replica pairs (MC mode):
///   S0    = E^{(2)}[sum_{k>M} e_k(2h)]
///   S1    = E^{(2)}[sum_{k>M} (e_k(F+h) - e_k(h))]
///   E[R^2]= E^{(2)}[sum_{k>M} e_k(G)],
/// plus the 2^k-weighted variant of S1 (s1_bound) entering the exact-mode
/// inequality s0 + s1_bound >= E[R^2].
RemainderReport remainder_diag(const SpinModel& model, const DisorderSpec& spec,
                               double lambda_hat, int M, EvalMethod mode,
                               long budget, std::uint64_t seed);

struct ConvergencePoint {
  double delta = 0;
  double lambda = 0;
  double l2_distance = 0;  // sqrt E[(Zhat - chaos)^2]
  double mean_zhat = 0, var_zhat = 0;
  double mean_chaos = 0, var_chaos = 0;
  double ks = 0;
};

struct ConvergenceParams {
  int dim = 1;
  double gamma = 0.2;
  double lambda_hat = 0.5;
  std::vector<double> deltas{0.125, 0.0625, 0.03125};
  int order = 4;  // chaos truncation M
  long replicas = 1000;
  std::uint64_t seed = 1;
};

struct ConvergenceReport {
  std::vector<ConvergencePoint> points;
  long replicas = 0;
  int order = 0;
};

/// Coupled convergence study on the Gaussian field model over a unit box:
/// per replica, one Gaussian disorder field drives both the exact Zhat and
/// the coupled chaos series built from the same white-noise increments.
ConvergenceReport convergence_study(const ConvergenceParams& params);

}  // namespace chaoslab
