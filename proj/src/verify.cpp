#include "chaoslab/verify.hpp"

#include <algorithm>
#include <cmath>

#include "chaoslab/coeffalg.hpp"
#include "chaoslab/rng.hpp"

namespace chaoslab {

namespace {

void esp_update(std::vector<double>& e, double v) {
  for (std::size_t k = e.size() - 1; k >= 1; --k) e[k] += v * e[k - 1];
}

/// Uniform point in the open box, one coordinate per counter stream.
Eigen::VectorXd uniform_point(const Box& box, std::uint64_t seed,
                              std::uint64_t base) {
  const int d = static_cast<int>(box.lo.size());
  Eigen::VectorXd x(d);
  for (int a = 0; a < d; ++a) {
    const double u = rng::u01(seed, base + a);
    x[a] = box.lo[a] + u * (box.hi[a] - box.lo[a]);
  }
  return x;
}

double box_volume(const Box& box) {
  double v = 1;
  for (int a = 0; a < box.lo.size(); ++a) v *= box.hi[a] - box.lo[a];
  return v;
}

}  // namespace

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw ConfigError("ks: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    d = std::max(d, std::abs(double(i) / a.size() - double(j) / b.size()));
  }
  return d;
}

double loglog_slope(const std::vector<double>& x,
                    const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw ConfigError("slope fit needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0 && y[i] > 0))
      throw ConfigError("slope fit needs positive data");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0) throw DegenerateDenominator("slope fit: constant abscissa");
  return (n * sxy - sx * sy) / den;
}

L2Report check_a1(const SpinModel& model, int k, long node_budget,
                  std::uint64_t seed) {
  if (k < 1) throw ConfigError("check_a1: k >= 1 required");
  if (node_budget < 2) throw QuadratureBudget("need at least two nodes");
  const Box& box = model.domain().box();
  const int d = model.domain().dim();
  const double vk = std::pow(box_volume(box), k);
  L2Report rep;
  rep.k = k;
  rep.nodes = node_budget;
  rep.has_limit = model.has_psi_limit();
  double se1 = 0, se2 = 0, sn1 = 0, sn2 = 0;
  Eigen::MatrixXd pts(k, d);
  const std::uint64_t s = rng::derive_seed(seed, k);
  for (long node = 0; node < node_budget; ++node) {
    for (int j = 0; j < k; ++j)
      pts.row(j) =
          uniform_point(box, s, (std::uint64_t(node) * k + j) * d);
    const double pd = model.psi_delta(pts);
    sn1 += pd * pd;
    sn2 += pd * pd * pd * pd;
    if (rep.has_limit) {
      const double diff = pd - model.psi_limit(pts);
      se1 += diff * diff;
      se2 += diff * diff * diff * diff;
    }
  }
  const double n = double(node_budget);
  rep.norm2 = vk * sn1 / n;
  rep.norm2_se =
      vk * std::sqrt(std::max(0.0, sn2 / n - (sn1 / n) * (sn1 / n)) / n);
  if (rep.has_limit) {
    rep.err2 = vk * se1 / n;
    rep.err2_se =
        vk * std::sqrt(std::max(0.0, se2 / n - (se1 / n) * (se1 / n)) / n);
  }
  return rep;
}

std::vector<double> psi_l2_norms(const SpinModel& model, int k_max,
                                 long node_budget, std::uint64_t seed) {
  if (k_max < 1) throw ConfigError("k_max >= 1 required");
  if (node_budget < 2) throw QuadratureBudget("need at least two nodes");
  const Box& box = model.domain().box();
  const int d = model.domain().dim();
  std::vector<double> norms2(k_max + 1, 0.0);
  Eigen::MatrixXd pts(k_max, d);
  for (int k = 1; k <= k_max; ++k) {
    const std::uint64_t s = rng::derive_seed(seed, k);
    double acc = 0;
    for (long node = 0; node < node_budget; ++node) {
      for (int j = 0; j < k; ++j)
        pts.row(j) =
            uniform_point(box, s, (std::uint64_t(node) * k + j) * d);
      const double pd = model.psi_delta(pts.topRows(k));
      acc += pd * pd;
    }
    norms2[k] = std::pow(box_volume(box), k) * acc / double(node_budget);
  }
  return norms2;
}

TailTable check_a2(const std::vector<const SpinModel*>& models,
                   double lambda_hat, const std::vector<int>& orders,
                   int k_max, long node_budget, std::uint64_t seed,
                   double threshold) {
  if (models.empty()) throw ConfigError("check_a2: no models");
  TailTable t;
  t.orders = orders;
  t.threshold = threshold;
  for (std::size_t i = 0; i < models.size(); ++i) {
    t.deltas.push_back(models[i]->domain().spacing());
    const auto norms2 =
        psi_l2_norms(*models[i], k_max, node_budget, rng::derive_seed(seed, i));
    std::vector<double> row;
    for (int M : orders) row.push_back(chaos_tail(lambda_hat, M, norms2));
    t.tails.push_back(std::move(row));
  }
  t.sup_over_delta.assign(orders.size(), 0.0);
  for (const auto& row : t.tails)
    for (std::size_t m = 0; m < row.size(); ++m)
      t.sup_over_delta[m] = std::max(t.sup_over_delta[m], row[m]);
  for (std::size_t m = 0; m < orders.size(); ++m)
    if (t.sup_over_delta[m] <= threshold) {
      t.smallest_order = orders[m];
      break;
    }
  return t;
}

A3Report check_a3(const SpinModel& model, long count, int max_k, int max_power,
                  std::uint64_t seed) {
  const long n = model.domain().site_count();
  if (max_k < 1 || max_k > n) throw ConfigError("check_a3: bad max_k");
  A3Report rep;
  std::uint64_t stream = 0;
  for (long trial = 0; trial < count; ++trial) {
    const int k = 1 + int(rng::u01(seed, stream++) * max_k);
    std::vector<long> sites;
    while (static_cast<int>(sites.size()) < k) {
      const long s = long(rng::u01(seed, stream++) * n);
      if (std::find(sites.begin(), sites.end(), s) == sites.end())
        sites.push_back(s);
    }
    std::vector<int> powers(k);
    for (int i = 0; i < k; ++i)
      powers[i] = 1 + int(rng::u01(seed, stream++) * max_power);
    try {
      const double r = model.a3_ratio(sites, powers);
      rep.ratios.push_back(r);
      rep.max_ratio = std::max(rep.max_ratio, r);
      ++rep.sampled;
    } catch (const DegenerateDenominator&) {
      ++rep.degenerate;
    } catch (const PowerOverflow&) {
      ++rep.degenerate;
    }
  }
  return rep;
}

RemainderReport remainder_diag(const SpinModel& model, const DisorderSpec& spec,
                               double lambda_hat, int M, EvalMethod mode,
                               long budget, std::uint64_t seed) {
  const long n = model.domain().site_count();
  const int d = model.domain().dim();
  const double delta = model.domain().spacing();
  const double g = model.gamma();
  if (M < 0 || M > n) throw ConfigError("remainder order out of range");
  const double lambda = intermediate_lambda(lambda_hat, delta, d, g);

  RemainderReport rep;
  rep.order = M;
  rep.delta = delta;
  rep.lambda = lambda;
  rep.chaos_orders.assign(std::max<long>(n - M, 0), 0.0);

  // one-site disorder-averaged kernels for a replica pair (s, s')
  auto h_kernel = [lambda](double s, double sp) { return lambda * lambda * s * sp; };
  auto cross_kernel = [lambda, &spec](double s, double sp) {
    // E[eta(s) t(s')] = lambda s' (phi'(lambda s) - lambda s)
    return lambda * sp * (spec.log_mgf_prime(lambda * s) - lambda * s);
  };
  auto f_kernel = [lambda, &spec](double s, double sp) {
    EtaCovInputs in;
    in.s = s;
    in.s_prime = sp;
    in.lambda = lambda;
    in.spec = &spec;
    return eta_cov_closed(in);
  };

  std::vector<double> e_2h(n + 1), e_h(n + 1), e_fh(n + 1), e_g(n + 1);
  double acc_s0 = 0, acc_s1 = 0, acc_s1b = 0, acc_lead = 0, acc_r2 = 0,
         acc_w = 0;
  auto accumulate = [&](const Eigen::VectorXd& s, const Eigen::VectorXd& sp,
                        double w) {
    std::fill(e_2h.begin(), e_2h.end(), 0.0);
    std::fill(e_h.begin(), e_h.end(), 0.0);
    std::fill(e_fh.begin(), e_fh.end(), 0.0);
    std::fill(e_g.begin(), e_g.end(), 0.0);
    e_2h[0] = e_h[0] = e_fh[0] = e_g[0] = 1.0;
    double lead = 0;
    for (long x = 0; x < n; ++x) {
      const double h = h_kernel(s[x], sp[x]);
      const double f = f_kernel(s[x], sp[x]);
      const double gx =
          h + cross_kernel(s[x], sp[x]) + cross_kernel(sp[x], s[x]) + f;
      lead += f;
      esp_update(e_2h, 2 * h);
      esp_update(e_h, h);
      esp_update(e_fh, f + h);
      esp_update(e_g, gx);
    }
    acc_lead += w * lead;
    double s0 = 0, s1 = 0, s1b = 0, r2 = 0;
    double two_k = std::pow(2.0, M);
    for (long k = M + 1; k <= n; ++k) {
      two_k *= 2;
      s0 += e_2h[k];
      s1 += e_fh[k] - e_h[k];
      s1b += two_k * (e_fh[k] - e_h[k]);
      r2 += e_g[k];
      rep.chaos_orders[k - M - 1] += w * e_g[k];
    }
    acc_s0 += w * s0;
    acc_s1 += w * s1;
    acc_s1b += w * s1b;
    acc_r2 += w * r2;
    acc_w += w;
  };

  if (mode == EvalMethod::Exact) {
    const auto* chain = dynamic_cast<const ExactEnumModel*>(&model);
    if (chain == nullptr)
      throw MethodUnavailable("exact remainder needs an enumerable model");
    std::vector<Eigen::VectorXd> configs;
    std::vector<double> probs;
    chain->enumerate([&](const Eigen::VectorXd& sigma, double p) {
      configs.push_back(sigma);
      probs.push_back(p);
    });
    if (double(configs.size()) * double(configs.size()) > double(budget))
      throw BudgetExceeded("replica-pair enumeration exceeds the budget");
    for (std::size_t i = 0; i < configs.size(); ++i)
      for (std::size_t j = 0; j < configs.size(); ++j)
        accumulate(configs[i], configs[j], probs[i] * probs[j]);
    rep.exact = true;
    rep.replica_pairs = long(configs.size()) * long(configs.size());
  } else {
    const long pairs = budget;
    if (pairs < 2) throw BudgetExceeded("need at least two replica pairs");
    for (long r = 0; r < pairs; ++r) {
      auto a = model.sample_spins(rng::derive_seed(seed, 2 * r));
      auto b = model.sample_spins(rng::derive_seed(seed, 2 * r + 1));
      accumulate(a.values, b.values, 1.0);
    }
    rep.replica_pairs = pairs;
  }
  rep.s0 = acc_s0 / acc_w;
  rep.s1 = acc_s1 / acc_w;
  rep.s1_bound = acc_s1b / acc_w;
  rep.s1_lead = acc_lead / acc_w;
  rep.er2 = acc_r2 / acc_w;
  for (auto& a : rep.chaos_orders) a /= acc_w;

  for (int i1 = 0; i1 <= 3; ++i1)
    for (int i2 = 0; i2 <= 3; ++i2) {
      if (i1 + i2 == 0) continue;
      Stratum st;
      st.eta_pairs = i1;
      st.eta_squares = i2;
      st.exponent = d * (i1 + i2) - 2 * g * (i1 + 2 * i2);
      rep.strata.push_back(st);
    }
  rep.min_exponent = d - 4 * g;
  return rep;
}

ConvergenceReport convergence_study(const ConvergenceParams& params) {
  if (params.deltas.empty()) throw ConfigError("no delta values");
  ConvergenceReport rep;
  rep.replicas = params.replicas;
  rep.order = params.order;
  auto spec = DisorderSpec::gaussian();
  for (std::size_t di = 0; di < params.deltas.size(); ++di) {
    const double delta = params.deltas[di];
    Box box;
    box.lo = Eigen::VectorXd::Constant(params.dim, 0.0);
    box.hi = Eigen::VectorXd::Constant(params.dim, 1.0);
    auto dom = build_domain(params.dim, box, delta);
    GaussianFieldModel model(dom, params.gamma);
    const double lambda =
        intermediate_lambda(params.lambda_hat, delta, params.dim, params.gamma);
    const std::uint64_t dseed = rng::derive_seed(params.seed, di);

    ConvergencePoint pt;
    pt.delta = delta;
    pt.lambda = lambda;
    std::vector<double> zs, cs;
    zs.reserve(params.replicas);
    cs.reserve(params.replicas);
    double sd2 = 0;
    for (long r = 0; r < params.replicas; ++r) {
      auto field = sample_disorder(spec, dom, rng::derive_seed(dseed, r));
      const double zhat =
          partition_wick(model, field, lambda, spec, EvalMethod::Exact).value;
      const double chaos =
          chaos_limit_coupled(model, couple_white_noise(field),
                              params.lambda_hat, params.order)
              .total;
      zs.push_back(zhat);
      cs.push_back(chaos);
      sd2 += (zhat - chaos) * (zhat - chaos);
    }
    const double n = double(params.replicas);
    pt.l2_distance = std::sqrt(sd2 / n);
    for (double z : zs) pt.mean_zhat += z / n;
    for (double c : cs) pt.mean_chaos += c / n;
    for (double z : zs)
      pt.var_zhat += (z - pt.mean_zhat) * (z - pt.mean_zhat) / n;
    for (double c : cs)
      pt.var_chaos += (c - pt.mean_chaos) * (c - pt.mean_chaos) / n;
    pt.ks = ks_statistic(zs, cs);
    rep.points.push_back(pt);
  }
  return rep;
}

}  // namespace chaoslab
