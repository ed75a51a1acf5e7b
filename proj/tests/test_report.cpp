#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "chaoslab/config.hpp"
#include "chaoslab/report.hpp"

using namespace chaoslab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("chaoslab_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("shortest round-trip number formatting") {
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(-3.0) == "-3");
  CHECK(format_number(0.1) == "0.1");
  for (double v : {1.0 / 3, 0.1 + 0.2, 1e-17, 6.02214076e23, -0.0625}) {
    double back;
    std::sscanf(format_number(v).c_str(), "%lf", &back);
    CHECK(back == v);
  }
}

TEST_CASE("csv writing is deterministic and validated") {
  TempDir tmp;
  CsvTable t;
  t.header = {"delta", "value"};
  t.rows = {{0.125, 1.0 / 3}, {0.0625, 0.25}};
  auto p = tmp.path / "a.csv";
  write_csv(p.string(), t);
  auto first = slurp(p);
  CHECK(first.substr(0, 12) == "delta,value\n");
  write_csv(p.string(), t);
  CHECK(slurp(p) == first);
  t.rows.push_back({1.0});
  CHECK_THROWS_AS(write_csv(p.string(), t), ConfigError);
}

TEST_CASE("fnv1a known vectors") {
  CHECK(fnv1a("") == 14695981039346656037ull);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("manifest structure") {
  TempDir tmp;
  write_manifest(tmp.path.string(), "converge", 0xdeadbeefull, 7, 2,
                 {"distance.csv"});
  auto j = nlohmann::json::parse(slurp(tmp.path / "manifest.json"));
  CHECK(j.at("command") == "converge");
  CHECK(j.at("config_hash") == "00000000deadbeef");
  CHECK(j.at("seed") == 7);
  CHECK(j.at("workers") == 2);
  CHECK(j.at("artifacts").at(0) == "distance.csv");
}

TEST_CASE("plot scripts reference the data columns") {
  TempDir tmp;
  auto p = (tmp.path / "d.gp").string();
  emit_loglog_plot(p, "d.csv", 1, 3, "distance");
  auto s = slurp(p);
  CHECK(s.find("set logscale xy") != std::string::npos);
  CHECK(s.find("'d.csv' using 1:3") != std::string::npos);
  emit_slope_fit_plot(p, "d.csv", 1, 2, 0.2, -1.5, "slope");
  s = slurp(p);
  CHECK(s.find("x**0.2") != std::string::npos);
  emit_heatmap_plot(p, "d.csv", 1, 2, 3, "coeffs");
  CHECK(slurp(p).find("splot") != std::string::npos);
}

TEST_CASE("config defaults, hash stability, and round-trip") {
  auto c = ExperimentConfig::from_json(nlohmann::json::object(), false);
  CHECK(c.dim == 1);
  CHECK(c.gamma == 0.2);
  CHECK(c.model.kind == "gaussian_field");
  CHECK(c.hash() == ExperimentConfig::from_json(c.canonical(), false).hash());
  auto c2 = c;
  c2.seed = 2;
  CHECK(c.hash() != c2.hash());
}

TEST_CASE("config rejects unknown keys with a location") {
  nlohmann::json j{{"gama", 0.1}};
  CHECK_THROWS_WITH_AS(ExperimentConfig::from_json(j, false),
                       doctest::Contains("$.gama"), ConfigError);
  nlohmann::json j2{{"model", {{"kind", "gaussian_field"}, {"beta", 1}}}};
  CHECK_THROWS_WITH_AS(ExperimentConfig::from_json(j2, false),
                       doctest::Contains("$.model.beta"), ConfigError);
}

TEST_CASE("config relevance gate") {
  nlohmann::json j{{"gamma", 0.3}};
  CHECK_THROWS_AS(ExperimentConfig::from_json(j, false), ConfigError);
  auto c = ExperimentConfig::from_json(j, true);
  CHECK(c.gamma == 0.3);
  // d = 2, gamma = 1/8 passes the gate
  nlohmann::json j2{{"dim", 2},
                    {"gamma", 0.125},
                    {"box_lo", {0.0, 0.0}},
                    {"box_hi", {1.0, 1.0}}};
  CHECK(ExperimentConfig::from_json(j2, false).dim == 2);
}

TEST_CASE("config structural validation") {
  using nlohmann::json;
  CHECK_THROWS_AS(
      ExperimentConfig::from_json(json{{"deltas", {0.25, 0.25}}}, false),
      ConfigError);
  CHECK_THROWS_AS(
      ExperimentConfig::from_json(json{{"model", {{"kind", "nope"}}}}, false),
      ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(
                      json{{"model", {{"kind", "renewal_pinning"},
                                      {"alpha", 0.5}}}},
                      false),
                  ConfigError);
  // renewal_pinning requires gamma = 1 - alpha
  CHECK_THROWS_AS(ExperimentConfig::from_json(
                      json{{"model", {{"kind", "renewal_pinning"},
                                      {"alpha", 0.9}}}},
                      false),
                  ConfigError);
  auto c = ExperimentConfig::from_json(
      json{{"gamma", 0.2}, {"model", {{"kind", "renewal_pinning"},
                                      {"alpha", 0.8}}}},
      false);
  CHECK(c.model.alpha == 0.8);
}

TEST_CASE("config factories build working objects") {
  auto c = ExperimentConfig::from_json(
      nlohmann::json{{"model",
                      {{"kind", "exact_chain"},
                       {"alphabet", {-1.0, 1.0}},
                       {"weights", {0.5, 0.5}},
                       {"coupling", 0.3}}},
                     {"disorder", {{"kind", "rademacher"}}}},
      false);
  auto d = c.make_domain(0.25);
  CHECK(d.sites().rows() == 3);
  auto m = c.make_model(d);
  CHECK(m->gamma() == 0.2);
  CHECK(m->spin_bound() == 1.0);
  auto spec = c.make_disorder();
  CHECK(spec.kind() == DisorderKind::Rademacher);
}
