#include "chaoslab/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "chaoslab/report.hpp"

namespace chaoslab {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError("config error at " + where + ": " + what);
}

void reject_unknown(const json& j, const std::string& where,
                    const std::set<std::string>& allowed) {
  if (!j.is_object()) fail(where, "expected an object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!allowed.count(key)) fail(where + "." + key, "unknown key");
  }
}

template <typename T>
void read(const json& j, const std::string& where, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(where + "." + key, e.what());
  }
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j,
                                             bool allow_irrelevant) {
  ExperimentConfig c;
  reject_unknown(j, "$",
                 {"schema_version", "dim", "gamma", "lambda_hat", "deltas",
                  "box_lo", "box_hi", "model", "disorder", "order", "k_max",
                  "max_power", "replicas", "mc_samples", "node_budget",
                  "tail_threshold", "seed"});
  read(j, "$", "schema_version", c.schema_version);
  if (c.schema_version != 1) fail("$.schema_version", "unsupported version");
  read(j, "$", "dim", c.dim);
  read(j, "$", "gamma", c.gamma);
  read(j, "$", "lambda_hat", c.lambda_hat);
  read(j, "$", "deltas", c.deltas);
  read(j, "$", "box_lo", c.box_lo);
  read(j, "$", "box_hi", c.box_hi);
  read(j, "$", "order", c.order);
  read(j, "$", "k_max", c.k_max);
  read(j, "$", "max_power", c.max_power);
  read(j, "$", "replicas", c.replicas);
  read(j, "$", "mc_samples", c.mc_samples);
  read(j, "$", "node_budget", c.node_budget);
  read(j, "$", "tail_threshold", c.tail_threshold);
  read(j, "$", "seed", c.seed);

  if (j.contains("model")) {
    const json& m = j.at("model");
    reject_unknown(m, "$.model",
                   {"kind", "alpha", "c_alpha", "repair_eps", "alphabet",
                    "weights", "coupling"});
    read(m, "$.model", "kind", c.model.kind);
    read(m, "$.model", "alpha", c.model.alpha);
    read(m, "$.model", "c_alpha", c.model.c_alpha);
    read(m, "$.model", "repair_eps", c.model.repair_eps);
    read(m, "$.model", "alphabet", c.model.alphabet);
    read(m, "$.model", "weights", c.model.weights);
    read(m, "$.model", "coupling", c.model.coupling);
  }
  if (j.contains("disorder")) {
    const json& d = j.at("disorder");
    reject_unknown(d, "$.disorder", {"kind", "support", "probs"});
    read(d, "$.disorder", "kind", c.disorder.kind);
    read(d, "$.disorder", "support", c.disorder.support);
    read(d, "$.disorder", "probs", c.disorder.probs);
  }

  // structural validation
  if (c.dim < 1 || c.dim > 4) fail("$.dim", "must be in 1..4");
  if (!(c.gamma > 0)) fail("$.gamma", "must be positive");
  if (!(c.lambda_hat >= 0)) fail("$.lambda_hat", "must be nonnegative");
  if (c.deltas.empty()) fail("$.deltas", "must be nonempty");
  for (std::size_t i = 0; i < c.deltas.size(); ++i) {
    if (!(c.deltas[i] > 0)) fail("$.deltas", "entries must be positive");
    if (i && !(c.deltas[i] < c.deltas[i - 1]))
      fail("$.deltas", "must be strictly decreasing");
  }
  if (static_cast<int>(c.box_lo.size()) != c.dim ||
      static_cast<int>(c.box_hi.size()) != c.dim)
    fail("$.box_lo", "box bounds must have dim entries");
  for (int i = 0; i < c.dim; ++i)
    if (!(c.box_lo[i] < c.box_hi[i])) fail("$.box_hi", "box must be nonempty");
  if (c.order < 0) fail("$.order", "must be nonnegative");
  if (c.k_max < 1) fail("$.k_max", "must be at least 1");
  if (c.max_power < 1) fail("$.max_power", "must be at least 1");
  if (c.replicas < 1) fail("$.replicas", "must be at least 1");
  if (c.mc_samples < 1) fail("$.mc_samples", "must be at least 1");
  if (c.node_budget < 1) fail("$.node_budget", "must be at least 1");
  if (!(c.tail_threshold > 0)) fail("$.tail_threshold", "must be positive");

  if (c.model.kind == "gaussian_field") {
    if (!(c.model.repair_eps > 0))
      fail("$.model.repair_eps", "must be positive");
  } else if (c.model.kind == "renewal_pinning") {
    if (c.dim != 1) fail("$.model.kind", "renewal_pinning requires dim 1");
    if (!(c.model.alpha > 0.75 && c.model.alpha < 1))
      fail("$.model.alpha", "must lie in (3/4, 1)");
    if (std::abs(c.gamma - (1 - c.model.alpha)) > 1e-12)
      fail("$.gamma", "must equal 1 - alpha for renewal_pinning");
  } else if (c.model.kind == "exact_chain") {
    if (c.dim != 1) fail("$.model.kind", "exact_chain requires dim 1");
    if (c.model.alphabet.size() < 2)
      fail("$.model.alphabet", "needs at least two values");
    if (c.model.weights.size() != c.model.alphabet.size())
      fail("$.model.weights", "must match the alphabet length");
    for (double w : c.model.weights)
      if (!(w > 0)) fail("$.model.weights", "must be positive");
  } else {
    fail("$.model.kind", "unknown model kind '" + c.model.kind + "'");
  }

  if (c.disorder.kind == "tabulated") {
    if (c.disorder.support.size() < 2 ||
        c.disorder.support.size() != c.disorder.probs.size())
      fail("$.disorder.support", "support/probs must match, length >= 2");
  } else if (c.disorder.kind != "gaussian" &&
             c.disorder.kind != "rademacher") {
    fail("$.disorder.kind", "unknown disorder kind '" + c.disorder.kind + "'");
  }

  // relevance gate: the intermediate-disorder scaling is only meaningful for
  // gamma < dim/4
  if (!(c.gamma < c.dim / 4.0) && !allow_irrelevant)
    fail("$.gamma", "relevance gate gamma < dim/4 violated "
                    "(pass --allow-irrelevant to override)");
  return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path,
                                             bool allow_irrelevant) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse failure: ") + e.what());
  }
  return from_json(j, allow_irrelevant);
}

nlohmann::ordered_json ExperimentConfig::canonical() const {
  nlohmann::ordered_json j;
  j["schema_version"] = schema_version;
  j["dim"] = dim;
  j["gamma"] = gamma;
  j["lambda_hat"] = lambda_hat;
  j["deltas"] = deltas;
  j["box_lo"] = box_lo;
  j["box_hi"] = box_hi;
  nlohmann::ordered_json m;
  m["kind"] = model.kind;
  m["alpha"] = model.alpha;
  m["c_alpha"] = model.c_alpha;
  m["repair_eps"] = model.repair_eps;
  m["alphabet"] = model.alphabet;
  m["weights"] = model.weights;
  m["coupling"] = model.coupling;
  j["model"] = m;
  nlohmann::ordered_json d;
  d["kind"] = disorder.kind;
  d["support"] = disorder.support;
  d["probs"] = disorder.probs;
  j["disorder"] = d;
  j["order"] = order;
  j["k_max"] = k_max;
  j["max_power"] = max_power;
  j["replicas"] = replicas;
  j["mc_samples"] = mc_samples;
  j["node_budget"] = node_budget;
  j["tail_threshold"] = tail_threshold;
  j["seed"] = seed;
  return j;
}

std::uint64_t ExperimentConfig::hash() const {
  return fnv1a(canonical().dump());
}

LatticeDomain ExperimentConfig::make_domain(double delta) const {
  Box b;
  b.lo = Eigen::Map<const Eigen::VectorXd>(box_lo.data(), dim);
  b.hi = Eigen::Map<const Eigen::VectorXd>(box_hi.data(), dim);
  return build_domain(dim, b, delta);
}

std::unique_ptr<SpinModel> ExperimentConfig::make_model(
    const LatticeDomain& domain) const {
  if (model.kind == "gaussian_field")
    return std::make_unique<GaussianFieldModel>(domain, gamma,
                                                model.repair_eps);
  if (model.kind == "renewal_pinning")
    return std::make_unique<RenewalPinningModel>(domain, model.alpha,
                                                 model.c_alpha);
  return std::make_unique<ExactEnumModel>(domain, model.alphabet,
                                          model.weights, model.coupling,
                                          gamma);
}

DisorderSpec ExperimentConfig::make_disorder() const {
  if (disorder.kind == "gaussian") return DisorderSpec::gaussian();
  if (disorder.kind == "rademacher") return DisorderSpec::rademacher();
  return DisorderSpec::tabulated(disorder.support, disorder.probs);
}

}  // namespace chaoslab
