// Copyright 2026 The vbs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "cli.hpp"
#include "vbs/errors.hpp"

using namespace vbs;
namespace fs = std::filesystem;

namespace {

nlohmann::json so2_config(double temperature) {
  return {
      {"schema_version", "1.0"},
      {"label", "SO2- -> SO2"},
      {"omega_initial", {989.5, 451.4}},
      {"omega_final", {1178.4, 518.9}},
      {"duschinsky", {{0.9979, 0.0646}, {-0.0646, 0.9979}}},
      {"delta", {-1.8830, 0.4551}},
      {"temperature_K", temperature},
      {"truncation", {{"target_mass", 0.999}}},
      {"bin_width_cm1", 10},
      {"seed", 5},
  };
}

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("vbs_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string write_json(const TempDir& dir, const std::string& name, const nlohmann::json& j) {
  const std::string p = dir.file(name);
  std::ofstream(p) << j.dump();
  return p;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "vbs");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') out.push_back(line);
  }
  return out;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config parsing") {
  const auto cfg = cli::parse_config(so2_config(650));
  CHECK(cfg.temperature_k == 650);
  CHECK(cfg.seed == 5);
  CHECK(!cfg.n_max);
  CHECK(cfg.molecule.duschinsky(0, 1) == 0.0646);

  auto extra = so2_config(650);
  extra["colour"] = "blue";
  CHECK_THROWS_AS(cli::parse_config(extra), ConfigError);
  auto nested = so2_config(650);
  nested["truncation"]["n_maximum"] = 3;
  CHECK_THROWS_AS(cli::parse_config(nested), ConfigError);
  auto version = so2_config(650);
  version["schema_version"] = "2.0";
  CHECK_THROWS_AS(cli::parse_config(version), ConfigError);
  auto missing = so2_config(650);
  missing.erase("delta");
  CHECK_THROWS_AS(cli::parse_config(missing), ConfigError);

  auto neg = cli::parse_config(so2_config(-5));
  CHECK_THROWS_AS(cli::check_config(neg), ConfigError);
  auto ragged = so2_config(0);
  ragged["delta"] = {1.0};
  CHECK_THROWS_AS(cli::check_config(cli::parse_config(ragged)), ConfigError);

  cli::Overrides o;
  o.temperature_k = 300.0;
  o.n_max = 7;
  o.count = 3;
  auto over = cli::parse_config(so2_config(650));
  cli::apply_overrides(over, o);
  CHECK(over.temperature_k == 300.0);
  CHECK(*over.n_max == 7);
  CHECK(over.sample_count == 3);
}

TEST_CASE("molecule snapping") {
  auto cfg = cli::parse_config(so2_config(0));
  double res = 0.0;
  const auto mol = cli::make_molecule(cfg.molecule, &res);
  CHECK(res > 1e-5);
  CHECK(orthogonality_residual(mol.duschinsky()) <= 1e-14);
  cfg.molecule.duschinsky(0, 1) = 0.3;
  CHECK_THROWS_AS(cli::make_molecule(cfg.molecule), InvalidMolecule);
}

TEST_CASE("number formatting") {
  CHECK(cli::format_number(0.1) == "0.10000000000000001");
  CHECK(cli::format_number(-451.4) == "-451.39999999999998");
  CHECK(cli::format_number(0.0) == "0");
}

TEST_CASE("compile writes the circuit") {
  TempDir dir;
  const auto in = write_json(dir, "job.json", so2_config(650));
  const auto r = run({"compile", "--input", in, "--output-dir", dir.file("out")});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(slurp(dir.file("out/circuit.json")));
  CHECK(doc["schema_version"] == "1.0");
  CHECK(doc["kind"] == "circuit");
  const std::vector<double> s = doc["squeezing"];
  const std::vector<double> expect{0.7419, 0.6701, 0.3932, 0.3080};
  for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(s[k] - expect[k]) <= 1e-3);
  CHECK(doc["interferometer"].size() == 4);
  CHECK(doc["interferometer"][0].size() == 4);
  CHECK(doc["interferometer"][0][0].size() == 2);
  CHECK(doc["intermediates"].contains("x"));
  CHECK(doc["intermediates"].contains("gamma_prime"));
  CHECK(!fs::exists(dir.file("out/circuit.json.tmp")));

  const auto cold = run({"compile", "--input", in, "--temperature", "0", "--output-dir", dir.file("cold")});
  REQUIRE(cold.code == 0);
  const std::vector<double> db = nlohmann::json::parse(slurp(dir.file("cold/circuit.json")))["squeezing_db"];
  for (double v : db) CHECK(std::abs(v) < 1.0);
}

TEST_CASE("identity molecule") {
  TempDir dir;
  nlohmann::json j = {{"omega_initial", {700.0, 300.0}},
                      {"omega_final", {700.0, 300.0}},
                      {"duschinsky", {{1.0, 0.0}, {0.0, 1.0}}},
                      {"delta", {0.0, 0.0}},
                      {"temperature_K", 0}};
  const auto in = write_json(dir, "id.json", j);
  REQUIRE(run({"compile", "--input", in, "--output-dir", dir.path.string()}).code == 0);
  const auto doc = nlohmann::json::parse(slurp(dir.file("circuit.json")));
  for (double s : doc["squeezing"].get<std::vector<double>>()) CHECK(std::abs(s) <= 1e-12);
  for (const auto& g : doc["input_amplitudes"]) CHECK(std::hypot(g[0].get<double>(), g[1].get<double>()) <= 1e-12);

  REQUIRE(run({"spectrum", "--input", in, "--output-dir", dir.path.string(), "--n-max", "3"}).code == 0);
  const auto sticks = data_lines(slurp(dir.file("sticks.csv")));
  REQUIRE(sticks.size() >= 2);
  CHECK(sticks[0] == "omega_v_cm1,probability,m_pattern,n_pattern");
  CHECK(sticks[1].rfind("0,", 0) == 0);
  CHECK(sticks[1].substr(sticks[1].size() - 8) == ",0 0,0 0");
  CHECK(std::stod(sticks[1].substr(2)) == doctest::Approx(1.0).epsilon(1e-12));
  double other = 0.0;
  for (std::size_t i = 2; i < sticks.size(); ++i) {
    other += std::stod(sticks[i].substr(sticks[i].find(',') + 1));
  }
  CHECK(other <= 1e-20);
}

TEST_CASE("spectrum files and circuit round trip") {
  TempDir dir;
  const auto in = write_json(dir, "job.json", so2_config(650));
  REQUIRE(run({"compile", "--input", in, "--output-dir", dir.file("a")}).code == 0);
  REQUIRE(run({"spectrum", "--input", in, "--output-dir", dir.file("a")}).code == 0);
  REQUIRE(run({"spectrum", "--input", dir.file("a/circuit.json"), "--output-dir", dir.file("b")}).code == 0);
  CHECK(slurp(dir.file("a/sticks.csv")) == slurp(dir.file("b/sticks.csv")));
  CHECK(slurp(dir.file("a/spectrum.csv")) == slurp(dir.file("b/spectrum.csv")));

  const std::string sticks = slurp(dir.file("a/sticks.csv"));
  CHECK(sticks.rfind("# schema_version=1.0", 0) == 0);
  CHECK(sticks.find("captured_mass=") != std::string::npos);
  CHECK(sticks.find("n_max=") != std::string::npos);
  CHECK(sticks.find('\r') == std::string::npos);
  bool negative = false;
  for (const auto& line : data_lines(sticks)) {
    if (line[0] == '-') negative = true;
  }
  CHECK(negative);

  const auto hist = data_lines(slurp(dir.file("a/spectrum.csv")));
  CHECK(hist[0] == "bin_center_cm1,intensity");

  // A circuit fixes its temperature.
  const auto clash = run({"spectrum", "--input", dir.file("a/circuit.json"), "--temperature", "300"});
  CHECK(clash.code == 2);
}

TEST_CASE("insufficient truncation") {
  TempDir dir;
  const auto in = write_json(dir, "job.json", so2_config(650));
  const auto r = run({"spectrum", "--input", in, "--n-max", "2", "--output-dir", dir.file("x")});
  CHECK(r.code == 4);
  const auto err = nlohmann::json::parse(r.err);
  CHECK(err["error"] == "InsufficientTruncation");
  CHECK(err["achieved_mass"].get<double>() < 0.999);
  CHECK(!fs::exists(dir.file("x/sticks.csv")));
}

TEST_CASE("validate") {
  TempDir dir;
  const auto good = run({"validate", "--input", write_json(dir, "job.json", so2_config(650))});
  CHECK(good.code == 0);
  CHECK(good.out.find("FAIL") == std::string::npos);
  CHECK(good.out.find("PASS oracle_photon_means") != std::string::npos);

  auto corrupt = so2_config(650);
  corrupt["duschinsky"] = {{0.9, 0.3}, {-0.0646, 0.9979}};
  const auto bad = run({"validate", "--input", write_json(dir, "bad.json", corrupt)});
  CHECK(bad.code != 0);
  CHECK(bad.out.find("FAIL duschinsky_orthogonality") != std::string::npos);

  const auto neg = run({"validate", "--input", write_json(dir, "neg.json", so2_config(-10))});
  CHECK(neg.code == 2);
  CHECK(nlohmann::json::parse(neg.err)["error"] == "ConfigError");
  CHECK(neg.out.empty());
}

TEST_CASE("sample") {
  TempDir dir;
  const auto in = write_json(dir, "job.json", so2_config(650));
  REQUIRE(run({"sample", "--input", in, "--count", "0", "--output-dir", dir.file("z")}).code == 0);
  const auto zero = slurp(dir.file("z/samples.csv"));
  CHECK(data_lines(zero).size() == 1);
  CHECK(zero.find("seed=5") != std::string::npos);

  REQUIRE(run({"sample", "--input", in, "--count", "500", "--seed", "9", "--output-dir", dir.file("a")}).code == 0);
  REQUIRE(run({"sample", "--input", in, "--count", "500", "--seed", "9", "--output-dir", dir.file("b")}).code == 0);
  CHECK(slurp(dir.file("a/samples.csv")) == slurp(dir.file("b/samples.csv")));
  CHECK(data_lines(slurp(dir.file("a/samples.csv"))).size() == 501);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"compile"}).code == 2);
  CHECK(run({"compile", "--input", "/nonexistent/job.json"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

}  // TEST_SUITE
