// chaoslab command-line laboratory: deterministic experiment orchestration
// around the library modules.  Every subcommand writes CSV artifacts plus a
// manifest.json carrying the config hash and seed; reruns with the same seed
// and worker count are byte-identical.
#include <algorithm>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "chaoslab/coeffalg.hpp"
#include "chaoslab/config.hpp"
#include "chaoslab/expansion.hpp"
#include "chaoslab/report.hpp"
#include "chaoslab/rng.hpp"
#include "chaoslab/verify.hpp"

namespace fs = std::filesystem;
using namespace chaoslab;

namespace {

struct GlobalOpts {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  bool seed_set = false;
  int workers = 0;
  bool allow_irrelevant = false;
};

int resolve_workers(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("CHAOSLAB_WORKERS")) {
    int w = std::atoi(env);
    if (w > 0) return w;
  }
  return 1;
}

ExperimentConfig load_config(const GlobalOpts& g) {
  if (g.config_path.empty()) throw ConfigError("--config is required");
  auto c = ExperimentConfig::from_file(g.config_path, g.allow_irrelevant);
  if (g.seed_set) c.seed = g.seed;
  return c;
}

void ensure_out(const GlobalOpts& g) { fs::create_directories(g.out_dir); }

std::string out_path(const GlobalOpts& g, const std::string& name) {
  return (fs::path(g.out_dir) / name).string();
}

void finish(const GlobalOpts& g, const std::string& command,
            std::uint64_t config_hash, std::uint64_t seed,
            const std::vector<std::string>& artifacts) {
  write_manifest(g.out_dir, command, config_hash, seed,
                 resolve_workers(g.workers), artifacts);
}

// Per-delta instantiation; domains live in a deque so model pointers stay
// valid as entries are appended.
struct Instances {
  std::deque<LatticeDomain> domains;
  std::vector<std::unique_ptr<SpinModel>> models;
};

Instances build_instances(const ExperimentConfig& c) {
  Instances inst;
  for (double delta : c.deltas) {
    inst.domains.push_back(c.make_domain(delta));
    inst.models.push_back(c.make_model(inst.domains.back()));
  }
  return inst;
}

void write_json_report(const std::string& path, const nlohmann::ordered_json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open report file " + path);
  out << j.dump(2) << "\n";
}

// ---------------------------------------------------------------- coeffs ---

int cmd_coeffs(const GlobalOpts& g, const std::string& disorder, int m_max) {
  ensure_out(g);
  DisorderSpec spec = disorder == "gaussian"    ? DisorderSpec::gaussian(m_max)
                      : disorder == "rademacher" ? DisorderSpec::rademacher(m_max)
                                                 : throw ConfigError(
                                                       "coeffs: --disorder must "
                                                       "be gaussian or "
                                                       "rademacher");
  auto table = coeff_table_rational(spec, m_max);
  auto path = out_path(g, "coeffs.csv");
  std::ofstream out(path, std::ios::binary);
  out << "m,l,exact,float\n";
  for (int m = 4; m <= m_max; ++m)
    for (int l = 2; l <= m - 2; ++l) {
      auto v = table.a(m, l);
      out << m << "," << l << "," << v.str() << ","
          << format_number(table.to_double(v)) << "\n";
    }
  out.close();
  finish(g, "coeffs", fnv1a(disorder + "/" + std::to_string(m_max)), 0,
         {"coeffs.csv"});
  return 0;
}

// ------------------------------------------------------------- partition ---

int cmd_partition(const GlobalOpts& g) {
  auto c = load_config(g);
  ensure_out(g);
  auto inst = build_instances(c);
  auto spec = c.make_disorder();
  CsvTable t;
  t.header = {"delta", "lambda", "raw", "wick", "wick_se", "exact"};
  for (std::size_t i = 0; i < c.deltas.size(); ++i) {
    const double delta = c.deltas[i];
    const double lambda = intermediate_lambda(c.lambda_hat, delta, c.dim,
                                              c.gamma);
    auto field = sample_disorder(spec, inst.domains[i],
                                 rng::derive_seed(c.seed, i));
    PartitionResult raw, wick;
    bool exact = true;
    try {
      raw = partition_raw(*inst.models[i], field, lambda, EvalMethod::Exact);
      wick = partition_wick(*inst.models[i], field, lambda, spec,
                            EvalMethod::Exact);
    } catch (const MethodUnavailable&) {
      exact = false;
      raw = partition_raw(*inst.models[i], field, lambda,
                          EvalMethod::MonteCarlo,
                          rng::derive_seed(c.seed, 1000 + i), c.mc_samples);
      wick = partition_wick(*inst.models[i], field, lambda, spec,
                            EvalMethod::MonteCarlo,
                            rng::derive_seed(c.seed, 2000 + i), c.mc_samples);
    }
    t.rows.push_back({delta, lambda, raw.value, wick.value, wick.std_error,
                      exact ? 1.0 : 0.0});
  }
  write_csv(out_path(g, "partition.csv"), t);
  finish(g, "partition", c.hash(), c.seed, {"partition.csv"});
  return 0;
}

// ---------------------------------------------------------------- expand ---

int cmd_expand(const GlobalOpts& g) {
  auto c = load_config(g);
  ensure_out(g);
  auto inst = build_instances(c);
  auto spec = c.make_disorder();
  CsvTable t, s;
  t.header = {"delta", "k", "main_term", "error_term", "cumulative"};
  s.header = {"delta", "order", "total", "remainder", "remainder_available"};
  for (std::size_t i = 0; i < c.deltas.size(); ++i) {
    const double delta = c.deltas[i];
    const double lambda = intermediate_lambda(c.lambda_hat, delta, c.dim,
                                              c.gamma);
    auto field = sample_disorder(spec, inst.domains[i],
                                 rng::derive_seed(c.seed, i));
    ExpansionBreakdown e;
    try {
      e = truncated_expansion(*inst.models[i], field, lambda, c.order, spec,
                              EvalMethod::Exact);
    } catch (const MethodUnavailable&) {
      e = truncated_expansion(*inst.models[i], field, lambda, c.order, spec,
                              EvalMethod::MonteCarlo,
                              rng::derive_seed(c.seed, 3000 + i),
                              c.mc_samples);
    }
    double cum = 1;
    for (int k = 1; k <= e.order; ++k) {
      cum += e.main_terms[k - 1] + e.error_terms[k - 1];
      t.rows.push_back({delta, double(k), e.main_terms[k - 1],
                        e.error_terms[k - 1], cum});
    }
    s.rows.push_back({delta, double(e.order), e.total, e.remainder,
                      e.remainder_available ? 1.0 : 0.0});
  }
  write_csv(out_path(g, "expand.csv"), t);
  write_csv(out_path(g, "expand_summary.csv"), s);
  finish(g, "expand", c.hash(), c.seed, {"expand.csv", "expand_summary.csv"});
  return 0;
}

// ----------------------------------------------------------------- chaos ---

int cmd_chaos(const GlobalOpts& g) {
  auto c = load_config(g);
  ensure_out(g);
  auto inst = build_instances(c);
  auto spec = c.make_disorder();
  CsvTable t;
  t.header = {"delta", "k", "discrete_term", "coupled_term",
              "coupled_available"};
  for (std::size_t i = 0; i < c.deltas.size(); ++i) {
    const double delta = c.deltas[i];
    auto field = sample_disorder(spec, inst.domains[i],
                                 rng::derive_seed(c.seed, i));
    const int M = std::min<int>(c.order, inst.domains[i].sites().rows());
    auto disc = chaos_discrete(*inst.models[i], field, c.lambda_hat, M);
    ChaosApprox coup;
    bool have_coup = inst.models[i]->has_psi_limit();
    if (have_coup) {
      auto noise = couple_white_noise(field);
      coup = chaos_limit_coupled(*inst.models[i], noise, c.lambda_hat, M);
    }
    for (int k = 1; k <= M; ++k)
      t.rows.push_back({delta, double(k), disc.terms[k - 1],
                        have_coup ? coup.terms[k - 1] : 0.0,
                        have_coup ? 1.0 : 0.0});
  }
  write_csv(out_path(g, "chaos.csv"), t);
  finish(g, "chaos", c.hash(), c.seed, {"chaos.csv"});
  return 0;
}

// ------------------------------------------------------------- verify-a1 ---

int cmd_verify_a1(const GlobalOpts& g) {
  auto c = load_config(g);
  ensure_out(g);
  auto inst = build_instances(c);
  CsvTable t;
  t.header = {"delta", "k", "nodes", "err2", "err2_se", "norm2", "norm2_se",
              "has_limit"};
  nlohmann::ordered_json rep = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < c.deltas.size(); ++i)
    for (int k = 1; k <= c.k_max; ++k) {
      auto r = check_a1(*inst.models[i], k, c.node_budget,
                        rng::derive_seed(c.seed, i * 100 + k));
      t.rows.push_back({c.deltas[i], double(k), double(r.nodes), r.err2,
                        r.err2_se, r.norm2, r.norm2_se,
                        r.has_limit ? 1.0 : 0.0});
      rep.push_back({{"delta", c.deltas[i]},
                     {"k", k},
                     {"err2", r.err2},
                     {"norm2", r.norm2}});
    }
  write_csv(out_path(g, "a1.csv"), t);
  write_json_report(out_path(g, "a1_report.json"),
                    {{"check", "a1"}, {"rows", rep}});
  emit_series_plot(out_path(g, "a1.gp"), "a1.csv", 1, 4,
                   "psi L2 error vs delta", true);
  finish(g, "verify-a1", c.hash(), c.seed,
         {"a1.csv", "a1_report.json", "a1.gp"});
  return 0;
}

// ------------------------------------------------------------- verify-a2 ---

int cmd_verify_a2(const GlobalOpts& g) {
  auto c = load_config(g);
  ensure_out(g);
  auto inst = build_instances(c);
  std::vector<const SpinModel*> models;
  for (const auto& m : inst.models) models.push_back(m.get());
  std::vector<int> orders;
  for (int m = 1; m <= c.order; ++m) orders.push_back(m);
  auto tab = check_a2(models, c.lambda_hat, orders, c.k_max, c.node_budget,
                      c.seed, c.tail_threshold);
  CsvTable t, s;
  t.header = {"delta", "order", "tail"};
  for (std::size_t i = 0; i < tab.deltas.size(); ++i)
    for (std::size_t j = 0; j < tab.orders.size(); ++j)
      t.rows.push_back({tab.deltas[i], double(tab.orders[j]),
                        tab.tails[i][j]});
  s.header = {"order", "sup_tail"};
  for (std::size_t j = 0; j < tab.orders.size(); ++j)
    s.rows.push_back({double(tab.orders[j]), tab.sup_over_delta[j]});
  write_csv(out_path(g, "a2.csv"), t);
  write_csv(out_path(g, "a2_sup.csv"), s);
  write_json_report(out_path(g, "a2_report.json"),
                    {{"check", "a2"},
                     {"threshold", tab.threshold},
                     {"smallest_order", tab.smallest_order}});
  emit_series_plot(out_path(g, "a2.gp"), "a2_sup.csv", 1, 2,
                   "chaos tail vs truncation order", true);
  finish(g, "verify-a2", c.hash(), c.seed,
         {"a2.csv", "a2_sup.csv", "a2_report.json", "a2.gp"});
  return 0;
}

// ------------------------------------------------------------- verify-a3 ---

int cmd_verify_a3(const GlobalOpts& g) {
  auto c = load_config(g);
  ensure_out(g);
  auto inst = build_instances(c);
  auto rep = check_a3(*inst.models.front(), c.replicas, c.k_max, c.max_power,
                      c.seed);
  CsvTable t;
  t.header = {"index", "ratio"};
  for (std::size_t i = 0; i < rep.ratios.size(); ++i)
    t.rows.push_back({double(i), rep.ratios[i]});
  write_csv(out_path(g, "a3.csv"), t);
  write_json_report(out_path(g, "a3_report.json"),
                    {{"check", "a3"},
                     {"max_ratio", rep.max_ratio},
                     {"sampled", rep.sampled},
                     {"degenerate", rep.degenerate}});
  emit_series_plot(out_path(g, "a3.gp"), "a3.csv", 1, 2,
                   "moment ratio samples", false);
  finish(g, "verify-a3", c.hash(), c.seed,
         {"a3.csv", "a3_report.json", "a3.gp"});
  return 0;
}

// ------------------------------------------------------------- remainder ---

int cmd_remainder(const GlobalOpts& g) {
  auto c = load_config(g);
  ensure_out(g);
  auto inst = build_instances(c);
  auto spec = c.make_disorder();
  CsvTable t;
  t.header = {"delta", "order", "s0", "s1", "s1_lead", "er2", "exact"};
  std::vector<double> s1_at_order, lead_at_order;
  double min_exp = 0;
  nlohmann::ordered_json strata = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < c.deltas.size(); ++i)
    for (int M = 0; M <= c.order; ++M) {
      EvalMethod mode = dynamic_cast<const ExactEnumModel*>(
                            inst.models[i].get()) != nullptr
                            ? EvalMethod::Exact
                            : EvalMethod::MonteCarlo;
      const long budget =
          mode == EvalMethod::Exact ? long(1e8) : c.replicas;
      auto r = remainder_diag(*inst.models[i], spec, c.lambda_hat, M, mode,
                              budget, rng::derive_seed(c.seed, i));
      t.rows.push_back({c.deltas[i], double(M), r.s0, r.s1, r.s1_lead, r.er2,
                        r.exact ? 1.0 : 0.0});
      if (M == c.order) {
        s1_at_order.push_back(r.s1);
        lead_at_order.push_back(r.s1_lead);
        min_exp = r.min_exponent;
        if (i == 0) {
          for (const auto& st : r.strata)
            strata.push_back({{"eta_pairs", st.eta_pairs},
                              {"eta_squares", st.eta_squares},
                              {"exponent", st.exponent}});
        }
      }
    }
  write_csv(out_path(g, "remainder.csv"), t);
  double slope = 0, lead_slope = 0;
  bool have_slope = c.deltas.size() >= 2;
  if (have_slope) {
    bool positive = true;
    for (double v : s1_at_order) positive = positive && v > 0;
    for (double v : lead_at_order) positive = positive && v > 0;
    if (positive) {
      slope = loglog_slope(c.deltas, s1_at_order);
      lead_slope = loglog_slope(c.deltas, lead_at_order);
      emit_slope_fit_plot(out_path(g, "remainder_slope.gp"), "remainder.csv",
                          1, 5, lead_slope, 0.0, "dominant eta stratum vs delta");
    } else {
      have_slope = false;
    }
  }
  write_json_report(out_path(g, "remainder_report.json"),
                    {{"check", "remainder"},
                     {"s1_slope", slope},
                     {"s1_lead_slope", lead_slope},
                     {"slope_available", have_slope},
                     {"min_exponent", min_exp},
                     {"strata", strata}});
  std::vector<std::string> artifacts{"remainder.csv", "remainder_report.json"};
  if (have_slope) artifacts.push_back("remainder_slope.gp");
  finish(g, "remainder", c.hash(), c.seed, artifacts);
  return 0;
}

// -------------------------------------------------------------- converge ---

int cmd_converge(const GlobalOpts& g) {
  auto c = load_config(g);
  ensure_out(g);
  if (c.model.kind != "gaussian_field")
    throw ConfigError("converge requires the gaussian_field model");
  ConvergenceParams p;
  p.dim = c.dim;
  p.gamma = c.gamma;
  p.lambda_hat = c.lambda_hat;
  p.deltas = c.deltas;
  p.order = c.order;
  p.replicas = c.replicas;
  p.seed = c.seed;
  auto rep = convergence_study(p);
  CsvTable t;
  t.header = {"delta", "lambda", "l2_distance", "mean_zhat", "var_zhat",
              "mean_chaos", "var_chaos", "ks"};
  for (const auto& pt : rep.points)
    t.rows.push_back({pt.delta, pt.lambda, pt.l2_distance, pt.mean_zhat,
                      pt.var_zhat, pt.mean_chaos, pt.var_chaos, pt.ks});
  write_csv(out_path(g, "converge.csv"), t);
  write_json_report(out_path(g, "converge_report.json"),
                    {{"check", "converge"},
                     {"replicas", rep.replicas},
                     {"order", rep.order},
                     {"points", rep.points.size()}});
  emit_loglog_plot(out_path(g, "converge.gp"), "converge.csv", 1, 3,
                   "coupled L2 distance vs delta");
  finish(g, "converge", c.hash(), c.seed,
         {"converge.csv", "converge_report.json", "converge.gp"});
  return 0;
}

// ----------------------------------------------------------------- plots ---

int cmd_plots(const GlobalOpts& g, const std::vector<std::string>& reports) {
  ensure_out(g);
  std::vector<std::string> artifacts;
  for (const auto& rep : reports) {
    if (!fs::exists(rep)) throw MissingReport("report file not found: " + rep);
    auto name = fs::path(rep).filename().string();
    auto script = out_path(g, fs::path(rep).stem().string() + ".gp");
    if (name.find("converge") != std::string::npos)
      emit_loglog_plot(script, rep, 1, 3, "coupled L2 distance vs delta");
    else if (name.find("a2_sup") != std::string::npos ||
             name.find("a2") != std::string::npos)
      emit_series_plot(script, rep, 1, 2, "chaos tail vs order", true);
    else if (name.find("coeffs") != std::string::npos)
      emit_heatmap_plot(script, rep, 1, 2, 4, "coefficient table a(m,l)");
    else if (name.find("remainder") != std::string::npos)
      emit_series_plot(script, rep, 1, 4, "remainder S1 vs delta", true);
    else
      throw MissingReport("no plot rule for report " + name);
    artifacts.push_back(fs::path(script).filename().string());
  }
  if (!reports.empty()) finish(g, "plots", fnv1a("plots"), 0, artifacts);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chaoslab: chaos expansions of disordered spin partition "
               "functions"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  GlobalOpts g;
  app.add_option("--config", g.config_path, "JSON experiment config");
  app.add_option("--out", g.out_dir, "output directory");
  auto* seed_opt = app.add_option("--seed", g.seed, "seed override");
  app.add_option("--workers", g.workers,
                 "worker-count hint (env CHAOSLAB_WORKERS as fallback)");
  app.add_flag("--allow-irrelevant", g.allow_irrelevant,
               "bypass the gamma < dim/4 relevance gate");

  std::string coeffs_disorder = "gaussian";
  int coeffs_mmax = 12;
  auto* sc_coeffs = app.add_subcommand("coeffs",
                                       "dump the a(m,l) coefficient table");
  sc_coeffs->add_option("--disorder", coeffs_disorder,
                        "gaussian or rademacher");
  sc_coeffs->add_option("--mmax", coeffs_mmax, "largest order m");

  auto* sc_partition = app.add_subcommand("partition",
                                          "raw and Wick-normalized partition "
                                          "values per delta");
  auto* sc_expand = app.add_subcommand("expand",
                                       "truncated expansion breakdown");
  auto* sc_chaos = app.add_subcommand("chaos",
                                      "discrete and coupled chaos series");
  auto* sc_a1 = app.add_subcommand("verify-a1", "psi L2 convergence check");
  auto* sc_a2 = app.add_subcommand("verify-a2", "chaos tail uniformity check");
  auto* sc_a3 = app.add_subcommand("verify-a3", "moment ratio bound check");
  auto* sc_rem = app.add_subcommand("remainder",
                                    "remainder second-moment diagnostics");
  auto* sc_conv = app.add_subcommand("converge", "coupled convergence study");
  std::vector<std::string> plot_reports;
  auto* sc_plots = app.add_subcommand("plots",
                                      "emit plot scripts for report files");
  sc_plots->add_option("reports", plot_reports, "report CSV files");

  CLI11_PARSE(app, argc, argv);
  g.seed_set = seed_opt->count() > 0;

  try {
    if (sc_coeffs->parsed()) return cmd_coeffs(g, coeffs_disorder, coeffs_mmax);
    if (sc_partition->parsed()) return cmd_partition(g);
    if (sc_expand->parsed()) return cmd_expand(g);
    if (sc_chaos->parsed()) return cmd_chaos(g);
    if (sc_a1->parsed()) return cmd_verify_a1(g);
    if (sc_a2->parsed()) return cmd_verify_a2(g);
    if (sc_a3->parsed()) return cmd_verify_a3(g);
    if (sc_rem->parsed()) return cmd_remainder(g);
    if (sc_conv->parsed()) return cmd_converge(g);
    if (sc_plots->parsed()) return cmd_plots(g, plot_reports);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
