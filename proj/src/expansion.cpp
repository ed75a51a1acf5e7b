#include "chaoslab/expansion.hpp"

#include <algorithm>
#include <cmath>

#include "chaoslab/rng.hpp"

namespace chaoslab {

namespace {

/// In-place elementary symmetric polynomial update: after processing all
/// values v_x, e[k] = e_k(v).
void esp_update(std::vector<double>& e, double v) {
  for (std::size_t k = e.size() - 1; k >= 1; --k) e[k] += v * e[k - 1];
}

/// Visit all k-subsets of {0..n-1}.
void for_each_subset(long n, int k,
                     const std::function<void(const std::vector<long>&)>& f) {
  std::vector<long> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    f(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

double binom_approx(long n, int k) {
  double b = 1;
  for (int i = 1; i <= k; ++i) b = b * double(n - k + i) / double(i);
  return b;
}

PartitionResult mc_partition(const SpinModel& model, const DisorderField& field,
                             double lambda, const DisorderSpec* spec,
                             std::uint64_t seed, long mc_samples) {
  const long n = model.domain().site_count();
  double s1 = 0, s2 = 0;
  for (long rep = 0; rep < mc_samples; ++rep) {
    auto c = model.sample_spins(rng::derive_seed(seed, rep));
    double expo = 0;
    for (long x = 0; x < n; ++x) {
      expo += lambda * field.values[x] * c.values[x];
      if (spec) expo -= spec->log_mgf(lambda * c.values[x]);
    }
    const double v = std::exp(expo);
    s1 += v;
    s2 += v * v;
  }
  PartitionResult r;
  r.method = EvalMethod::MonteCarlo;
  r.spin_samples = mc_samples;
  r.value = s1 / mc_samples;
  const double var = std::max(0.0, s2 / mc_samples - r.value * r.value);
  r.std_error = std::sqrt(var / mc_samples);
  return r;
}

/// Weighted p-matching sums of the kernel Q (upper triangle used), p <= 3.
double matching_sum(const Eigen::MatrixXd& Q, int p) {
  const long n = Q.rows();
  double A = 0, B = 0;
  Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd q = Eigen::VectorXd::Zero(n);
  for (long x = 0; x < n; ++x)
    for (long y = x + 1; y < n; ++y) {
      A += Q(x, y);
      B += Q(x, y) * Q(x, y);
      r[x] += Q(x, y);
      r[y] += Q(x, y);
      q[x] += Q(x, y) * Q(x, y);
      q[y] += Q(x, y) * Q(x, y);
    }
  const double C = r.squaredNorm();
  if (p == 1) return A;
  if (p == 2) return 0.5 * (A * A + B - C);
  // p == 3: each 3-matching is counted once per member edge
  double acc = 0;
  for (long x = 0; x < n; ++x)
    for (long y = x + 1; y < n; ++y) {
      if (Q(x, y) == 0) continue;
      const double Ae = A - r[x] - r[y] + Q(x, y);
      const double Be = B - q[x] - q[y] + Q(x, y) * Q(x, y);
      double Ce = 0;
      for (long z = 0; z < n; ++z) {
        if (z == x || z == y) continue;
        const double rz = r[z] - Q(std::min(z, x), std::max(z, x)) -
                          Q(std::min(z, y), std::max(z, y));
        Ce += rz * rz;
      }
      acc += Q(x, y) * 0.5 * (Ae * Ae + Be - Ce);
    }
  return acc / 3.0;
}

}  // namespace

double eta_term(const DisorderSpec& spec, double lambda, double omega,
                double sigma) {
  const double phi = spec.log_mgf(lambda * sigma);
  const double y = lambda * omega * sigma - phi;
  return (std::expm1(y) - y) - phi;
}

double intermediate_lambda(double lambda_hat, double delta, int dim,
                           double gamma) {
  return lambda_hat * std::pow(delta, 0.5 * dim - gamma);
}

PartitionResult partition_raw(const SpinModel& model,
                              const DisorderField& field, double lambda,
                              EvalMethod method, std::uint64_t seed,
                              long mc_samples) {
  if (method == EvalMethod::MonteCarlo)
    return mc_partition(model, field, lambda, nullptr, seed, mc_samples);
  PartitionResult r;
  if (const auto* chain = dynamic_cast<const ExactEnumModel*>(&model)) {
    double acc = 0;
    chain->enumerate([&](const Eigen::VectorXd& sigma, double p) {
      acc += p * std::exp(lambda * field.values.dot(sigma));
    });
    r.value = acc;
    return r;
  }
  if (const auto* gf = dynamic_cast<const GaussianFieldModel*>(&model)) {
    // E[e^{b' sigma}] = e^{b' C b / 2}
    const Eigen::VectorXd b = lambda * field.values;
    r.value = std::exp(0.5 * b.dot(gf->covariance() * b));
    return r;
  }
  throw MethodUnavailable("no exact partition for this model kind");
}

PartitionResult partition_wick(const SpinModel& model,
                               const DisorderField& field, double lambda,
                               const DisorderSpec& spec, EvalMethod method,
                               std::uint64_t seed, long mc_samples) {
  if (method == EvalMethod::MonteCarlo)
    return mc_partition(model, field, lambda, &spec, seed, mc_samples);
  PartitionResult r;
  if (const auto* chain = dynamic_cast<const ExactEnumModel*>(&model)) {
    const long n = model.domain().site_count();
    double acc = 0;
    chain->enumerate([&](const Eigen::VectorXd& sigma, double p) {
      double expo = 0;
      for (long x = 0; x < n; ++x)
        expo += lambda * field.values[x] * sigma[x] -
                spec.log_mgf(lambda * sigma[x]);
      acc += p * std::exp(expo);
    });
    r.value = acc;
    return r;
  }
  if (const auto* gf = dynamic_cast<const GaussianFieldModel*>(&model)) {
    if (spec.kind() != DisorderKind::Gaussian)
      throw MethodUnavailable(
          "gaussian-field closed form requires gaussian disorder");
    // E[e^{b' s - l^2 s's/2}] = det(I + l^2 C)^{-1/2} e^{b'(I + l^2 C)^{-1} C b/2}
    const long n = model.domain().site_count();
    const Eigen::MatrixXd& C = gf->covariance();
    const Eigen::MatrixXd A =
        Eigen::MatrixXd::Identity(n, n) + lambda * lambda * C;
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success)
      throw SingularInput("I + lambda^2 C not positive definite");
    double logdet = 0;
    for (long i = 0; i < n; ++i) logdet += 2 * std::log(llt.matrixL()(i, i));
    const Eigen::VectorXd b = lambda * field.values;
    r.value = std::exp(-0.5 * logdet + 0.5 * b.dot(llt.solve(C * b)));
    return r;
  }
  throw MethodUnavailable("no exact partition for this model kind");
}

BinaryChainResult binary_chain_check(const ExactEnumModel& model,
                                     const DisorderField& field, double lambda,
                                     const DisorderSpec& spec) {
  if (!model.binary_pm1())
    throw NotBinary("factorization requires spins in {-1,+1}");
  if (!spec.symmetric())
    throw AsymmetricDisorder("factorization requires an even log-mgf");
  BinaryChainResult out;
  out.wick = partition_wick(model, field, lambda, spec, EvalMethod::Exact).value;

  const long n = model.domain().site_count();
  double pref = -double(n) * spec.log_mgf(lambda);
  Eigen::VectorXd th(n);
  for (long x = 0; x < n; ++x) {
    const double a = lambda * field.values[x];
    const double t = std::abs(a);
    pref += t + std::log1p(std::exp(-2 * t)) - std::log(2.0);  // log cosh
    th[x] = std::tanh(a);
  }
  double poly = 0;
  model.enumerate([&](const Eigen::VectorXd& sigma, double p) {
    double prod = 1;
    for (long x = 0; x < n; ++x) prod *= 1.0 + sigma[x] * th[x];
    poly += p * prod;
  });
  out.reconstructed = std::exp(pref) * poly;
  return out;
}

ExpansionBreakdown truncated_expansion(const SpinModel& model,
                                       const DisorderField& field,
                                       double lambda, int M,
                                       const DisorderSpec& spec,
                                       EvalMethod method, std::uint64_t seed,
                                       long mc_samples) {
  const long n = model.domain().site_count();
  if (M < 0 || M > n)
    throw ConfigError("truncation order must satisfy 0 <= M <= site count");
  ExpansionBreakdown out;
  out.order = M;
  out.main_terms.assign(M, 0.0);
  out.error_terms.assign(M, 0.0);

  // accumulate E^ref[e_k(t)] and E^ref[e_k(t + eta)] per spin configuration
  std::vector<double> e_main(M + 1), e_full(M + 1);
  std::vector<double> acc_main(M + 1, 0.0), acc_full(M + 1, 0.0);
  auto accumulate = [&](const Eigen::VectorXd& sigma, double weight) {
    std::fill(e_main.begin(), e_main.end(), 0.0);
    std::fill(e_full.begin(), e_full.end(), 0.0);
    e_main[0] = e_full[0] = 1.0;
    for (long x = 0; x < n; ++x) {
      const double t = lambda * field.values[x] * sigma[x];
      const double eta = eta_term(spec, lambda, field.values[x], sigma[x]);
      esp_update(e_main, t);
      esp_update(e_full, t + eta);
    }
    for (int k = 1; k <= M; ++k) {
      acc_main[k] += weight * e_main[k];
      acc_full[k] += weight * e_full[k];
    }
  };

  if (method == EvalMethod::Exact) {
    const auto* chain = dynamic_cast<const ExactEnumModel*>(&model);
    if (chain == nullptr)
      throw MethodUnavailable("exact expansion requires an enumerable model");
    chain->enumerate(accumulate);
    out.remainder_available = true;
  } else {
    const double w = 1.0 / double(mc_samples);
    for (long rep = 0; rep < mc_samples; ++rep)
      accumulate(model.sample_spins(rng::derive_seed(seed, rep)).values, w);
  }

  out.total = 1.0;
  for (int k = 1; k <= M; ++k) {
    out.main_terms[k - 1] = acc_main[k];
    out.error_terms[k - 1] = acc_full[k] - acc_main[k];
    out.total += acc_full[k];
  }
  if (out.remainder_available) {
    const double zhat =
        partition_wick(model, field, lambda, spec, EvalMethod::Exact).value;
    out.remainder = zhat - out.total;
    if (M == n) out.remainder = 0.0;  // identity: nothing is truncated
  }
  return out;
}

ChaosApprox chaos_discrete(const SpinModel& model, const DisorderField& field,
                           double lambda_hat, int M, double subset_budget) {
  const long n = model.domain().site_count();
  const int d = model.domain().dim();
  const double delta = model.domain().spacing();
  if (M < 0 || M > n)
    throw ConfigError("chaos order must satisfy 0 <= M <= site count");
  ChaosApprox out;
  out.order = M;
  out.terms.assign(M, 0.0);
  const double half_cell = std::pow(delta, 0.5 * d);
  for (int k = 1; k <= M; ++k) {
    if (binom_approx(n, k) > subset_budget)
      throw BudgetExceeded("subset enumeration budget exceeded at order " +
                           std::to_string(k) + "; admissible M = " +
                           std::to_string(k - 1));
    Eigen::MatrixXd pts(k, d);
    double term = 0;
    for_each_subset(n, k, [&](const std::vector<long>& idx) {
      double w = 1;
      for (int i = 0; i < k; ++i) {
        pts.row(i) = model.domain().site(idx[i]);
        w *= half_cell * field.values[idx[i]];
      }
      term += model.psi_delta(pts) * w;
    });
    out.terms[k - 1] = std::pow(lambda_hat, k) * term;
    out.total += out.terms[k - 1];
  }
  return out;
}

ChaosApprox chaos_limit_coupled(const SpinModel& model,
                                const WhiteNoiseField& noise,
                                double lambda_hat, int M,
                                double subset_budget) {
  if (!model.has_psi_limit())
    throw NotAvailable("model declares no continuum limit psi_0");
  const long n = model.domain().site_count();
  const int d = model.domain().dim();
  if (M < 0) throw ConfigError("chaos order must be nonnegative");
  ChaosApprox out;
  out.order = M;
  out.terms.assign(std::min<long>(M, n), 0.0);

  const auto* gf = dynamic_cast<const GaussianFieldModel*>(&model);
  Eigen::MatrixXd Q;
  if (gf != nullptr) {
    // psi_0 is a Wick pairing sum of Riesz kernels, so the subset sum over
    // 2p cells is a weighted p-matching sum of the pairwise kernel
    Q = Eigen::MatrixXd::Zero(n, n);
    const double g = model.gamma();
    for (long x = 0; x < n; ++x)
      for (long y = x + 1; y < n; ++y)
        Q(x, y) = std::pow(
                      (model.domain().site(x) - model.domain().site(y)).norm(),
                      -2 * g) *
                  noise.increments[x] * noise.increments[y];
  }

  for (int k = 1; k <= M && k <= n; ++k) {
    if (gf != nullptr) {
      if (k % 2 != 0) continue;  // odd psi_0 vanishes
      const int p = k / 2;
      if (p <= 3) {
        out.terms[k - 1] = std::pow(lambda_hat, k) * matching_sum(Q, p);
        out.total += out.terms[k - 1];
        continue;
      }
      // fall through to generic enumeration for deep even orders
    }
    if (binom_approx(n, k) > subset_budget)
      throw BudgetExceeded("subset enumeration budget exceeded at order " +
                           std::to_string(k) + "; admissible M = " +
                           std::to_string(k - 1));
    Eigen::MatrixXd pts(k, d);
    double term = 0;
    for_each_subset(n, k, [&](const std::vector<long>& idx) {
      double w = 1;
      for (int i = 0; i < k; ++i) {
        pts.row(i) = model.domain().site(idx[i]);
        w *= noise.increments[idx[i]];
      }
      term += model.psi_limit(pts) * w;
    });
    out.terms[k - 1] = std::pow(lambda_hat, k) * term;
    out.total += out.terms[k - 1];
  }
  return out;
}

double chaos_tail(double lambda_hat, int M, const std::vector<double>& norms2) {
  if (M < 0) throw ConfigError("tail order must be nonnegative");
  if (lambda_hat == 0 || norms2.size() <= 1) return 0.0;
  double tail = 0;
  double lfact = 1;
  const double l2 = lambda_hat * lambda_hat;
  double pw = 1;
  for (int k = 1; k <= std::max<int>(M + 400, norms2.size()); ++k) {
    lfact *= k;
    pw *= l2;
    if (k <= M) continue;
    const double norm2 = (k < static_cast<int>(norms2.size()))
                             ? norms2[k]
                             : norms2.back();
    const double term = pw / lfact * norm2;
    tail += term;
    if (k > static_cast<int>(norms2.size()) && term < 1e-300) break;
  }
  return tail;
}

}  // namespace chaoslab
