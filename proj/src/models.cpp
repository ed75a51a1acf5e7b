#include "chaoslab/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "chaoslab/rng.hpp"

namespace chaoslab {

namespace {

/// Sum over perfect matchings of `slots` (site ids, one per spin factor) of
/// the product of pair kernels.
double pairing_sum(std::vector<long>& slots,
                   const std::function<double(long, long)>& kernel) {
  const std::size_t n = slots.size();
  if (n == 0) return 1.0;
  if (n % 2 != 0) return 0.0;
  double acc = 0;
  const long first = slots[0];
  for (std::size_t j = 1; j < n; ++j) {
    std::vector<long> rest;
    rest.reserve(n - 2);
    for (std::size_t t = 1; t < n; ++t)
      if (t != j) rest.push_back(slots[t]);
    acc += kernel(first, slots[j]) * pairing_sum(rest, kernel);
  }
  return acc;
}

}  // namespace

double SpinModel::correlation(const std::vector<long>& sites,
                              const std::vector<int>& powers) const {
  if (sites.size() != powers.size())
    throw ConfigError("correlation: sites/powers length mismatch");
  std::vector<long> s;
  std::vector<int> r;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    if (powers[i] < 0) throw ConfigError("correlation: negative power");
    if (powers[i] == 0) continue;
    if (sites[i] < 0 || sites[i] >= domain().site_count())
      throw OutsideDomain("correlation: site id out of range");
    s.push_back(sites[i]);
    r.push_back(powers[i]);
  }
  if (s.empty()) return 1.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      if (s[i] == s[j]) throw DuplicateSite("correlation: repeated site");
  return moment(s, r);
}

double correlation_merged(const SpinModel& model, std::vector<long> sites,
                          std::vector<int> powers) {
  std::vector<long> s;
  std::vector<int> r;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    bool merged = false;
    for (std::size_t j = 0; j < s.size(); ++j)
      if (s[j] == sites[i]) {
        r[j] += powers[i];
        merged = true;
        break;
      }
    if (!merged) {
      s.push_back(sites[i]);
      r.push_back(powers[i]);
    }
  }
  return model.correlation(s, r);
}

double SpinModel::psi_delta(const Eigen::MatrixXd& points) const {
  const int k = static_cast<int>(points.rows());
  if (k == 0) return 1.0;
  std::vector<long> s(k);
  for (int i = 0; i < k; ++i) s[i] = domain().nearest_site(points.row(i));
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (s[i] == s[j]) return 0.0;  // the off-diagonal indicator
  const std::vector<int> ones(k, 1);
  return std::pow(domain().spacing(), -k * gamma_) * moment(s, ones);
}

double SpinModel::psi_limit(const Eigen::MatrixXd&) const {
  throw NotAvailable("model declares no continuum limit psi_0");
}

double SpinModel::a3_ratio(const std::vector<long>& sites,
                           const std::vector<int>& powers) const {
  for (int r : powers)
    if (r < 1) throw ConfigError("a3_ratio: powers must be >= 1");
  const double num = correlation(sites, powers);
  std::vector<int> reduced(powers.size());
  for (std::size_t i = 0; i < powers.size(); ++i)
    reduced[i] = (powers[i] % 2 == 0) ? 2 : 1;
  const double den = correlation(sites, reduced);
  if (den == 0.0)
    throw DegenerateDenominator("a3_ratio: reduced moment vanishes");
  return std::abs(num) / std::abs(den);
}

// ---------------------------------------------------------------- ExactEnum

ExactEnumModel::ExactEnumModel(const LatticeDomain& domain,
                               std::vector<double> alphabet,
                               std::vector<double> site_weights,
                               double coupling, double gamma)
    : alphabet_(std::move(alphabet)),
      site_weights_(std::move(site_weights)),
      coupling_(coupling) {
  domain_ = &domain;
  gamma_ = gamma;
  if (domain.dim() != 1)
    throw ConfigError("exact chain model requires a 1-D domain");
  const int q = static_cast<int>(alphabet_.size());
  if (q < 2 || site_weights_.size() != alphabet_.size())
    throw ConfigError("alphabet/site-weight mismatch or alphabet too small");
  for (double w : site_weights_)
    if (!(w > 0)) throw ConfigError("site weights must be positive");
  const long n = domain.site_count();
  if (std::pow(double(q), double(n)) > kEnumCap)
    throw Overflow("configuration space exceeds the enumeration cap");
  spin_bound_ = 0;
  for (double s : alphabet_) spin_bound_ = std::max(spin_bound_, std::abs(s));

  transfer_.resize(q, q);
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b)
      transfer_(a, b) = std::exp(coupling_ * alphabet_[a] * alphabet_[b]);

  // suffix partition messages; backward_[i](s) sums configurations of sites
  // i..n-1 given sigma_i = s, including w(sigma_i)
  backward_.resize(n);
  Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(site_weights_.data(), q);
  backward_[n - 1] = w;
  for (long i = n - 2; i >= 0; --i)
    backward_[i] = w.cwiseProduct(transfer_ * backward_[i + 1]);
  normalizer_ = backward_[0].sum();
}

bool ExactEnumModel::binary_pm1() const {
  if (alphabet_.size() != 2) return false;
  const double lo = std::min(alphabet_[0], alphabet_[1]);
  const double hi = std::max(alphabet_[0], alphabet_[1]);
  return std::abs(lo + 1.0) < 1e-12 && std::abs(hi - 1.0) < 1e-12;
}

bool ExactEnumModel::symmetric() const {
  for (std::size_t i = 0; i < alphabet_.size(); ++i) {
    bool found = false;
    for (std::size_t j = 0; j < alphabet_.size(); ++j)
      if (std::abs(alphabet_[j] + alphabet_[i]) < 1e-12 &&
          std::abs(site_weights_[j] - site_weights_[i]) < 1e-12)
        found = true;
    if (!found) return false;
  }
  return true;
}

void ExactEnumModel::enumerate(
    const std::function<void(const Eigen::VectorXd&, double)>& f) const {
  const long n = domain().site_count();
  const int q = static_cast<int>(alphabet_.size());
  std::vector<int> idx(n, 0);
  Eigen::VectorXd sigma(n);
  for (;;) {
    double w = 1;
    for (long i = 0; i < n; ++i) {
      sigma[i] = alphabet_[idx[i]];
      w *= site_weights_[idx[i]];
      if (i + 1 < n) w *= transfer_(idx[i], idx[i + 1]);
    }
    f(sigma, w / normalizer_);
    long i = n - 1;
    for (; i >= 0; --i) {
      if (++idx[i] < q) break;
      idx[i] = 0;
    }
    if (i < 0) break;
  }
}

double ExactEnumModel::correlation_enumerate(
    const std::vector<long>& sites, const std::vector<int>& powers) const {
  double acc = 0;
  enumerate([&](const Eigen::VectorXd& sigma, double p) {
    double m = 1;
    for (std::size_t i = 0; i < sites.size(); ++i)
      m *= std::pow(sigma[sites[i]], powers[i]);
    acc += p * m;
  });
  return acc;
}

double ExactEnumModel::moment(const std::vector<long>& sites,
                              const std::vector<int>& powers) const {
  const long n = domain().site_count();
  const int q = static_cast<int>(alphabet_.size());
  std::vector<int> power_at(n, 0);
  for (std::size_t i = 0; i < sites.size(); ++i) power_at[sites[i]] = powers[i];

  Eigen::VectorXd v(q);
  for (int a = 0; a < q; ++a)
    v[a] = site_weights_[a] * std::pow(alphabet_[a], power_at[0]);
  for (long i = 1; i < n; ++i) {
    Eigen::VectorXd next = transfer_.transpose() * v;
    for (int a = 0; a < q; ++a)
      next[a] *= site_weights_[a] * std::pow(alphabet_[a], power_at[i]);
    v = next;
  }
  return v.sum() / normalizer_;
}

SpinConfiguration ExactEnumModel::sample_spins(std::uint64_t seed) const {
  const long n = domain().site_count();
  const int q = static_cast<int>(alphabet_.size());
  SpinConfiguration c;
  c.domain = domain_;
  c.values.resize(n);
  int prev = -1;
  for (long i = 0; i < n; ++i) {
    Eigen::VectorXd p = backward_[i];
    if (prev >= 0) p = p.cwiseProduct(transfer_.row(prev).transpose());
    const double u = rng::u01(seed, static_cast<std::uint64_t>(i)) * p.sum();
    double acc = 0;
    int pick = q - 1;
    for (int a = 0; a < q; ++a) {
      acc += p[a];
      if (u <= acc) {
        pick = a;
        break;
      }
    }
    c.values[i] = alphabet_[pick];
    prev = pick;
  }
  return c;
}

// ------------------------------------------------------------ GaussianField

GaussianFieldModel::GaussianFieldModel(const LatticeDomain& domain,
                                       double gamma, double repair_eps) {
  domain_ = &domain;
  gamma_ = gamma;
  bounded_ = false;
  spin_bound_ = 6.0;  // effective bound: six standard deviations
  if (!(gamma > 0)) throw ConfigError("gamma must be positive");

  const long n = domain.site_count();
  const double delta = domain.spacing();
  cov_.resize(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j <= i; ++j) {
      const double dist = (domain.site(i) - domain.site(j)).norm();
      const double c = std::pow(delta, 2 * gamma) *
                       std::pow(std::max(dist, delta), -2 * gamma);
      cov_(i, j) = c;
      cov_(j, i) = c;
    }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov_);
  Eigen::VectorXd lam = es.eigenvalues();
  double clip2 = 0;
  for (long i = 0; i < n; ++i)
    if (lam[i] < 0) {
      clip2 += lam[i] * lam[i];
      lam[i] = 0;
    }
  repair_norm_ = std::sqrt(clip2);
  if (repair_norm_ > 0) {
    Eigen::MatrixXd repaired = es.eigenvectors() * lam.asDiagonal() *
                               es.eigenvectors().transpose();
    repair_max_ = (repaired - cov_).cwiseAbs().maxCoeff();
    if (repair_max_ > repair_eps)
      throw ConfigError("PSD repair perturbation exceeds the configured bound");
    cov_ = 0.5 * (repaired + repaired.transpose());
  }
  factor_ = es.eigenvectors() * lam.cwiseSqrt().asDiagonal();
}

double GaussianFieldModel::truncation_probability() const {
  return std::erfc(spin_bound_ / std::sqrt(2.0));
}

double GaussianFieldModel::moment(const std::vector<long>& sites,
                                  const std::vector<int>& powers) const {
  int total = 0;
  for (int r : powers) total += r;
  if (total % 2 != 0) return 0.0;
  if (total > kPairingCap)
    throw PowerOverflow("total power exceeds the Wick pairing cap");
  std::vector<long> slots;
  slots.reserve(total);
  for (std::size_t i = 0; i < sites.size(); ++i)
    for (int r = 0; r < powers[i]; ++r) slots.push_back(sites[i]);
  return pairing_sum(slots,
                     [this](long a, long b) { return cov_(a, b); });
}

SpinConfiguration GaussianFieldModel::sample_spins(std::uint64_t seed) const {
  const long n = domain().site_count();
  Eigen::VectorXd z(n);
  for (long i = 0; i < n; ++i)
    z[i] = rng::normal(seed, static_cast<std::uint64_t>(i));
  SpinConfiguration c;
  c.domain = domain_;
  c.values = factor_ * z;
  return c;
}

double GaussianFieldModel::psi_limit(const Eigen::MatrixXd& points) const {
  const int k = static_cast<int>(points.rows());
  if (k % 2 != 0) return 0.0;
  if (k > kPairingCap)
    throw PowerOverflow("tuple size exceeds the Wick pairing cap");
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if ((points.row(i) - points.row(j)).norm() == 0.0)
        throw SingularInput("coincident continuum points in psi_0");
  std::vector<long> slots(k);
  std::iota(slots.begin(), slots.end(), 0);
  const double g = gamma_;
  return pairing_sum(slots, [&points, g](long a, long b) {
    return std::pow((points.row(a) - points.row(b)).norm(), -2 * g);
  });
}

// ----------------------------------------------------------- RenewalPinning

RenewalPinningModel::RenewalPinningModel(const LatticeDomain& domain,
                                         double alpha, double c_alpha)
    : alpha_(alpha) {
  domain_ = &domain;
  if (domain.dim() != 1)
    throw ConfigError("renewal pinning requires a 1-D domain");
  if (!(alpha > 0.75 && alpha < 1.0))
    throw ConfigError("inter-arrival exponent alpha must lie in (3/4, 1)");
  gamma_ = 1.0 - alpha;
  spin_bound_ = 1.0;
  c_alpha_ =
      c_alpha > 0 ? c_alpha : alpha * std::sin(M_PI * alpha) / M_PI;

  const long n = domain.site_count();
  const long t_max = time_index(n - 1);
  gap_law_.assign(t_max + 1, 0.0);
  double norm = 0;
  for (long m = 1; m <= t_max; ++m) {
    gap_law_[m] = std::pow(double(m), -(1.0 + alpha_));
    norm += gap_law_[m];
  }
  gap_cdf_.assign(t_max + 1, 0.0);
  double acc = 0;
  for (long m = 1; m <= t_max; ++m) {
    gap_law_[m] /= norm;
    acc += gap_law_[m];
    gap_cdf_[m] = acc;
  }
  gap_cdf_[t_max] = 1.0;

  u_.assign(t_max + 1, 0.0);
  u_[0] = 1.0;
  for (long t = 1; t <= t_max; ++t)
    for (long m = 1; m <= t; ++m) u_[t] += gap_law_[m] * u_[t - m];
}

long RenewalPinningModel::time_index(long site) const {
  const double lo = domain().box().lo[0];
  const long t =
      std::lround((domain().site(site)[0] - lo) / domain().spacing());
  if (t < 1) throw ConfigError("site does not sit on a positive time index");
  return t;
}

double RenewalPinningModel::moment(const std::vector<long>& sites,
                                   const std::vector<int>&) const {
  // sigma^r = sigma for r >= 1
  std::vector<long> t(sites.size());
  for (std::size_t i = 0; i < sites.size(); ++i) t[i] = time_index(sites[i]);
  std::sort(t.begin(), t.end());
  double acc = 1;
  long prev = 0;
  for (long ti : t) {
    acc *= u_[ti - prev];
    prev = ti;
  }
  return acc;
}

SpinConfiguration RenewalPinningModel::sample_spins(std::uint64_t seed) const {
  const long n = domain().site_count();
  const long t0 = time_index(0);
  const long t_max = time_index(n - 1);
  SpinConfiguration c;
  c.domain = domain_;
  c.values = Eigen::VectorXd::Zero(n);
  long t = 0;
  std::uint64_t draw = 0;
  while (t <= t_max) {
    const double u = rng::u01(seed, draw++);
    const auto it = std::lower_bound(gap_cdf_.begin() + 1, gap_cdf_.end(), u);
    t += it - gap_cdf_.begin();
    if (t >= t0 && t <= t_max) c.values[t - t0] = 1.0;
  }
  return c;
}

double RenewalPinningModel::psi_limit(const Eigen::MatrixXd& points) const {
  const int k = static_cast<int>(points.rows());
  std::vector<double> x(k);
  for (int i = 0; i < k; ++i) x[i] = points(i, 0);
  std::sort(x.begin(), x.end());
  double acc = 1;
  double prev = domain().box().lo[0];
  for (double xi : x) {
    const double gap = xi - prev;
    if (!(gap > 0)) throw SingularInput("coincident continuum points in psi_0");
    acc *= c_alpha_ * std::pow(gap, alpha_ - 1.0);
    prev = xi;
  }
  return acc;
}

}  // namespace chaoslab
