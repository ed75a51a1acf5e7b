#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "chaoslab/disorder.hpp"
#include "chaoslab/lattice.hpp"
#include "chaoslab/models.hpp"

namespace chaoslab {

struct ModelConfig {
  std::string kind = "gaussian_field";  // gaussian_field | renewal_pinning | exact_chain
  double alpha = 0.8;                   // renewal_pinning
  double c_alpha = 0;                   // renewal_pinning (0 = derived)
  double repair_eps = 0.1;              // gaussian_field
  std::vector<double> alphabet{-1.0, 1.0};  // exact_chain
  std::vector<double> weights{0.5, 0.5};    // exact_chain
  double coupling = 0;                      // exact_chain
};

struct DisorderConfig {
  std::string kind = "gaussian";  // gaussian | rademacher | tabulated
  std::vector<double> support;
  std::vector<double> probs;
};

/// Experiment description parsed from JSON.  Unknown keys are rejected with
/// their location; the relevance gate gamma < dim/4 is enforced unless
/// explicitly overridden.  lambda_delta is always derived, never stored.
struct ExperimentConfig {
  int schema_version = 1;
  int dim = 1;
  double gamma = 0.2;
  double lambda_hat = 0.5;
  std::vector<double> deltas{0.125, 0.0625, 0.03125};
  std::vector<double> box_lo{0.0};
  std::vector<double> box_hi{1.0};
  ModelConfig model;
  DisorderConfig disorder;
  int order = 4;
  int k_max = 8;
  int max_power = 4;
  long replicas = 1000;
  long mc_samples = 10000;
  long node_budget = 20000;
  double tail_threshold = 1e-3;
  std::uint64_t seed = 1;

  static ExperimentConfig from_json(const nlohmann::json& j,
                                    bool allow_irrelevant);
  static ExperimentConfig from_file(const std::string& path,
                                    bool allow_irrelevant);

  /// Canonical re-serialization (fixed key order, all defaults materialized).
  nlohmann::ordered_json canonical() const;
  /// FNV-1a hash of the canonical form.
  std::uint64_t hash() const;

  LatticeDomain make_domain(double delta) const;
  std::unique_ptr<SpinModel> make_model(const LatticeDomain& domain) const;
  DisorderSpec make_disorder() const;
};

}  // namespace chaoslab
