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

#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string_view>
#include <utility>
#include <vector>

#include "vbs/errors.hpp"
#include "vbs/phase_space.hpp"
#include "vbs/thermal_ext.hpp"

namespace vbs::cli {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw ConfigError(msg); }

void check_keys(const json& obj, const std::set<std::string_view>& allowed,
                const std::string& where) {
  if (!obj.is_object()) config_error(where + " must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) config_error("unknown key '" + key + "' in " + where);
  }
}

bool is_count(const json& j) {
  return j.is_number_unsigned() || (j.is_number_integer() && j.get<long long>() >= 0);
}

double get_number(const json& j, const std::string& name) {
  if (!j.is_number()) config_error("'" + name + "' must be a number");
  return j.get<double>();
}

RVector get_vector(const json& j, const std::string& name) {
  if (!j.is_array()) config_error("'" + name + "' must be an array of numbers");
  RVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = get_number(j[i], name);
  return v;
}

RMatrix get_matrix(const json& j, const std::string& name) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    config_error("'" + name + "' must be a non-empty array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  RMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const RVector row = get_vector(j[static_cast<std::size_t>(r)], name);
    if (row.size() != cols) config_error("'" + name + "' has ragged rows");
    m.row(r) = row.transpose();
  }
  return m;
}

Complex get_complex(const json& j, const std::string& name) {
  if (!j.is_array() || j.size() != 2) config_error("'" + name + "' entries must be [re, im]");
  return {get_number(j[0], name), get_number(j[1], name)};
}

CVector get_cvector(const json& j, const std::string& name) {
  if (!j.is_array()) config_error("'" + name + "' must be an array of [re, im] pairs");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = get_complex(j[i], name);
  return v;
}

CMatrix get_cmatrix(const json& j, const std::string& name) {
  if (!j.is_array() || j.empty()) config_error("'" + name + "' must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].is_array() ? j[0].size() : 0);
  CMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const CVector row = get_cvector(j[static_cast<std::size_t>(r)], name);
    if (row.size() != cols) config_error("'" + name + "' has ragged rows");
    m.row(r) = row.transpose();
  }
  return m;
}

template <class Vec>
ojson to_json_vector(const Vec& v) {
  ojson out = ojson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

ojson to_json_matrix(const RMatrix& m) {
  ojson out = ojson::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(to_json_vector(RVector(m.row(r).transpose())));
  return out;
}

ojson to_json_cvector(const CVector& v) {
  ojson out = ojson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

ojson to_json_cmatrix(const CMatrix& m) {
  ojson out = ojson::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(to_json_cvector(CVector(m.row(r).transpose())));
  return out;
}

void check_schema(const json& doc) {
  if (!doc.contains("schema_version")) return;
  const json& v = doc["schema_version"];
  if (!v.is_string()) config_error("'schema_version' must be a string");
  const auto s = v.get<std::string>();
  int major = -1;
  try {
    std::size_t used = 0;
    major = std::stoi(s, &used);
    if (used < s.size() && s[used] != '.') major = -1;
  } catch (const std::exception&) {
    major = -1;
  }
  if (major != kSchemaMajor) config_error("unsupported schema_version '" + s + "'");
}

JobConfig parse_job(const json& doc) {
  check_keys(doc,
             {"schema_version", "label", "omega_initial", "omega_final", "duschinsky", "delta",
              "temperature_K", "truncation", "bin_width_cm1", "seed", "sample_count",
              "tolerances", "output_dir"},
             "config");
  check_schema(doc);
  for (const char* key : {"omega_initial", "omega_final", "duschinsky", "delta"}) {
    if (!doc.contains(key)) config_error(std::string("missing required key '") + key + "'");
  }
  JobConfig cfg;
  cfg.molecule.omega_initial = get_vector(doc["omega_initial"], "omega_initial");
  cfg.molecule.omega_final = get_vector(doc["omega_final"], "omega_final");
  cfg.molecule.duschinsky = get_matrix(doc["duschinsky"], "duschinsky");
  cfg.molecule.delta = get_vector(doc["delta"], "delta");
  if (doc.contains("label")) {
    if (!doc["label"].is_string()) config_error("'label' must be a string");
    cfg.molecule.label = doc["label"].get<std::string>();
  }
  if (doc.contains("temperature_K")) cfg.temperature_k = get_number(doc["temperature_K"], "temperature_K");
  if (doc.contains("truncation")) {
    const json& t = doc["truncation"];
    check_keys(t, {"n_max", "target_mass", "memory_limit_bytes"}, "truncation");
    if (t.contains("n_max")) {
      if (!t["n_max"].is_number_integer()) config_error("'n_max' must be an integer");
      const auto n = t["n_max"].get<long long>();
      if (n < 0 || n > 65535) config_error("'n_max' out of range");
      cfg.n_max = static_cast<int>(n);
    }
    if (t.contains("target_mass")) cfg.target_mass = get_number(t["target_mass"], "target_mass");
    if (t.contains("memory_limit_bytes")) {
      if (!is_count(t["memory_limit_bytes"])) {
        config_error("'memory_limit_bytes' must be a non-negative integer");
      }
      cfg.memory_limit_bytes = t["memory_limit_bytes"].get<std::size_t>();
    }
  }
  if (doc.contains("bin_width_cm1")) cfg.bin_width_cm1 = get_number(doc["bin_width_cm1"], "bin_width_cm1");
  if (doc.contains("seed")) {
    if (!is_count(doc["seed"])) config_error("'seed' must be a non-negative integer");
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("sample_count")) {
    if (!is_count(doc["sample_count"])) {
      config_error("'sample_count' must be a non-negative integer");
    }
    cfg.sample_count = doc["sample_count"].get<std::size_t>();
  }
  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    check_keys(t, {"constraint", "reconstruction"}, "tolerances");
    if (t.contains("constraint")) cfg.tolerances.constraint = get_number(t["constraint"], "constraint");
    if (t.contains("reconstruction")) {
      cfg.tolerances.reconstruction = get_number(t["reconstruction"], "reconstruction");
    }
  }
  if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string()) config_error("'output_dir' must be a string");
    cfg.output_dir = doc["output_dir"].get<std::string>();
  }
  return cfg;
}

ojson job_to_json(const JobConfig& cfg, const MolecularSystem& mol) {
  ojson j;
  j["schema_version"] = kSchemaVersion;
  j["label"] = mol.label();
  j["omega_initial"] = to_json_vector(mol.omega_initial());
  j["omega_final"] = to_json_vector(mol.omega_final());
  j["duschinsky"] = to_json_matrix(mol.duschinsky());
  j["delta"] = to_json_vector(mol.delta());
  j["temperature_K"] = cfg.temperature_k;
  ojson t;
  if (cfg.n_max) t["n_max"] = *cfg.n_max;
  t["target_mass"] = cfg.target_mass;
  t["memory_limit_bytes"] = cfg.memory_limit_bytes;
  j["truncation"] = t;
  j["bin_width_cm1"] = cfg.bin_width_cm1;
  j["seed"] = cfg.seed;
  j["sample_count"] = cfg.sample_count;
  j["tolerances"] = {{"constraint", cfg.tolerances.constraint},
                     {"reconstruction", cfg.tolerances.reconstruction}};
  return j;
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

std::string pattern_string(std::span<const PhotonCount> p, std::size_t from, std::size_t count) {
  std::string s;
  for (std::size_t k = 0; k < count; ++k) {
    if (k) s += ' ';
    s += std::to_string(p[from + k]);
  }
  return s;
}

std::string table_header(const JobConfig& cfg, const TransitionTable& table) {
  std::ostringstream h;
  h << "# schema_version=" << kSchemaVersion << ",temperature_K=" << format_number(cfg.temperature_k)
    << ",captured_mass=" << format_number(table.captured_mass())
    << ",n_max=" << table.truncation().n_max
    << ",internal_cutoff=" << table.internal_cutoff()
    << ",target_mass=" << format_number(table.truncation().target_mass) << "\n";
  return h.str();
}

double stick_frequency(const MolecularSystem& mol, const TransitionTable& table, std::size_t i) {
  const auto p = table.pattern(i);
  const auto m = static_cast<std::size_t>(mol.modes());
  double w = 0.0;
  for (std::size_t k = 0; k < m; ++k) w += p[k] * mol.omega_final()(static_cast<Eigen::Index>(k));
  for (std::size_t k = 0; k < static_cast<std::size_t>(table.ancilla_modes()); ++k) {
    w -= p[m + k] * mol.omega_initial()(static_cast<Eigen::Index>(k));
  }
  return w;
}

struct Check {
  std::string name;
  bool pass;
  double value;
  double tol;
  std::string note;
};

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  const std::filesystem::path target(path);
  if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot write " + tmp);
    f << contents;
    f.flush();
    if (!f) throw ConfigError("write to " + tmp + " failed");
  }
  std::filesystem::rename(tmp, target);
}

JobConfig parse_config(const json& doc) {
  if (!doc.is_object()) config_error("input must be a JSON object");
  if (!doc.contains("kind")) return parse_job(doc);

  if (doc["kind"] != "circuit") config_error("unknown document kind");
  check_keys(doc,
             {"schema_version", "kind", "job", "label", "temperature_K", "modes", "system_modes",
              "duschinsky_snap_residual", "interferometer", "squeezing", "squeezing_db",
              "input_amplitudes", "intermediates"},
             "circuit");
  check_schema(doc);
  for (const char* key : {"job", "interferometer", "squeezing", "input_amplitudes"}) {
    if (!doc.contains(key)) config_error(std::string("circuit is missing '") + key + "'");
  }
  JobConfig cfg = parse_job(doc["job"]);
  CircuitSpec c;
  c.interferometer = get_cmatrix(doc["interferometer"], "interferometer");
  c.squeezing = get_vector(doc["squeezing"], "squeezing");
  c.input_amplitudes = get_cvector(doc["input_amplitudes"], "input_amplitudes");
  c.temperature_k = cfg.temperature_k;
  c.label = cfg.molecule.label;
  if (doc.contains("intermediates")) {
    const json& in = doc["intermediates"];
    check_keys(in, {"x", "y", "gamma", "gamma_prime", "c_right"}, "intermediates");
    if (in.contains("x") && in.contains("y") && in.contains("gamma")) {
      c.source = BogoliubovTransform(get_cmatrix(in["x"], "x"), get_cmatrix(in["y"], "y"),
                                     get_cvector(in["gamma"], "gamma"));
    }
  }
  try {
    c.validate(1e-9);
  } catch (const Error& e) {
    config_error(std::string("invalid circuit: ") + e.what());
  }
  cfg.circuit = std::move(c);
  return cfg;
}

void apply_overrides(JobConfig& cfg, const Overrides& o) {
  if (o.output_dir) cfg.output_dir = *o.output_dir;
  if (o.temperature_k) {
    if (cfg.circuit && *o.temperature_k != cfg.temperature_k) {
      config_error("a compiled circuit fixes the temperature; recompile instead");
    }
    cfg.temperature_k = *o.temperature_k;
  }
  if (o.n_max) cfg.n_max = *o.n_max;
  if (o.target_mass) cfg.target_mass = *o.target_mass;
  if (o.bin_width_cm1) cfg.bin_width_cm1 = *o.bin_width_cm1;
  if (o.seed) cfg.seed = *o.seed;
  if (o.tolerance) cfg.tolerances.reconstruction = *o.tolerance;
  if (o.count) cfg.sample_count = *o.count;
}

void check_config(const JobConfig& cfg) {
  if (!std::isfinite(cfg.temperature_k) || cfg.temperature_k < 0.0) {
    config_error("temperature must be a non-negative number of kelvin");
  }
  if (cfg.n_max && (*cfg.n_max < 0 || *cfg.n_max > 65535)) config_error("n_max out of range");
  if (!(cfg.target_mass > 0.0 && cfg.target_mass <= 1.0)) {
    config_error("target_mass must lie in (0, 1]");
  }
  if (!(cfg.bin_width_cm1 > 0.0) || !std::isfinite(cfg.bin_width_cm1)) {
    config_error("bin_width_cm1 must be positive");
  }
  if (!(cfg.tolerances.constraint > 0.0) || !(cfg.tolerances.reconstruction > 0.0)) {
    config_error("tolerances must be positive");
  }
  if (cfg.memory_limit_bytes == 0) config_error("memory_limit_bytes must be positive");
  const MoleculeInput& m = cfg.molecule;
  const Eigen::Index n = m.omega_initial.size();
  if (n == 0 || m.omega_final.size() != n || m.delta.size() != n || m.duschinsky.rows() != n ||
      m.duschinsky.cols() != n) {
    config_error("molecule arrays must all describe the same number of modes");
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    if (!(m.omega_initial(k) > 0.0) || !(m.omega_final(k) > 0.0) ||
        !std::isfinite(m.omega_initial(k)) || !std::isfinite(m.omega_final(k))) {
      config_error("frequencies must be positive and finite");
    }
  }
  if (!m.delta.allFinite() || !m.duschinsky.allFinite()) config_error("non-finite molecule data");
}

JobConfig load_config(const std::string& path, const Overrides& overrides) {
  std::ifstream f(path);
  if (!f) config_error("cannot open " + path);
  json doc;
  try {
    doc = json::parse(f);
  } catch (const json::parse_error& e) {
    config_error(path + ": " + e.what());
  }
  JobConfig cfg = parse_config(doc);
  apply_overrides(cfg, overrides);
  check_config(cfg);
  return cfg;
}

MolecularSystem make_molecule(const MoleculeInput& in, double* snap_residual) {
  const double res = orthogonality_residual(in.duschinsky);
  if (snap_residual) *snap_residual = res;
  if (!(res <= kSnapTolerance)) {
    throw InvalidMolecule("Duschinsky matrix is not orthogonal (residual " + format_number(res) + ")");
  }
  const RMatrix u =
      res <= MolecularSystem::kOrthogonalityTolerance ? in.duschinsky : nearest_orthogonal(in.duschinsky);
  return {in.omega_initial, in.omega_final, u, in.delta, in.label};
}

CircuitSpec job_circuit(const JobConfig& cfg) {
  if (cfg.circuit) return *cfg.circuit;
  return compile_circuit(make_molecule(cfg.molecule), cfg.temperature_k, cfg.tolerances);
}

TransitionTable job_table(const JobConfig& cfg, const CircuitSpec& circuit) {
  if (cfg.n_max) {
    TruncationPolicy p;
    p.n_max = *cfg.n_max;
    p.target_mass = cfg.target_mass;
    p.memory_limit_bytes = cfg.memory_limit_bytes;
    return transition_table(circuit, p);
  }
  return adaptive_transition_table(circuit, cfg.target_mass, cfg.memory_limit_bytes);
}

nlohmann::ordered_json circuit_to_json(const JobConfig& cfg, const MolecularSystem& mol,
                                       const CircuitSpec& circuit) {
  ojson j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "circuit";
  j["label"] = mol.label();
  j["temperature_K"] = cfg.temperature_k;
  j["modes"] = circuit.modes();
  j["system_modes"] = mol.modes();
  j["duschinsky_snap_residual"] = orthogonality_residual(cfg.molecule.duschinsky);
  j["interferometer"] = to_json_cmatrix(circuit.interferometer);
  j["squeezing"] = to_json_vector(circuit.squeezing);
  j["squeezing_db"] = to_json_vector(circuit.squeezing_db());
  j["input_amplitudes"] = to_json_cvector(circuit.input_amplitudes);
  ojson in;
  if (circuit.source) {
    in["x"] = to_json_cmatrix(circuit.source->x());
    in["y"] = to_json_cmatrix(circuit.source->y());
    in["gamma"] = to_json_cvector(circuit.source->z());
  }
  if (circuit.decomposition) {
    in["gamma_prime"] = to_json_cvector(circuit.decomposition->gamma_prime);
    in["c_right"] = to_json_cmatrix(circuit.decomposition->c_right);
  }
  j["intermediates"] = in;
  j["job"] = job_to_json(cfg, mol);
  return j;
}

int cmd_compile(const JobConfig& cfg, std::ostream& out) {
  const MolecularSystem mol = make_molecule(cfg.molecule);
  const CircuitSpec circuit = job_circuit(cfg);
  const ojson doc = circuit_to_json(cfg, mol, circuit);
  const std::string path = join_path(cfg.output_dir, "circuit.json");
  write_file_atomic(path, doc.dump(2) + "\n");
  out << "wrote " << path << "\n";
  const RVector db = circuit.squeezing_db();
  out << "squeezing:";
  for (Eigen::Index k = 0; k < circuit.modes(); ++k) out << ' ' << format_number(circuit.squeezing(k));
  out << "\nsqueezing_dB:";
  for (Eigen::Index k = 0; k < db.size(); ++k) out << ' ' << format_number(db(k));
  out << "\n";
  return kOk;
}

int cmd_spectrum(const JobConfig& cfg, std::ostream& out) {
  const MolecularSystem mol = make_molecule(cfg.molecule);
  const CircuitSpec circuit = job_circuit(cfg);
  const TransitionTable table = job_table(cfg, circuit);
  const Spectrum spec = build_fcp(table, mol, cfg.bin_width_cm1);

  const std::string header = table_header(cfg, table);
  const auto m = static_cast<std::size_t>(table.system_modes());
  const auto b = static_cast<std::size_t>(table.ancilla_modes());
  std::string sticks = header + "omega_v_cm1,probability,m_pattern,n_pattern\n";
  for (const Stick& s : spec.sticks) {
    const auto p = table.pattern(s.entry);
    sticks += format_number(s.omega_v) + ',' + format_number(s.probability) + ',' +
              pattern_string(p, 0, m) + ',' + pattern_string(p, m, b) + '\n';
  }
  std::string hist = header;
  hist.insert(hist.size() - 1, ",bin_width_cm1=" + format_number(cfg.bin_width_cm1));
  hist += "bin_center_cm1,intensity\n";
  for (const SpectrumBin& bin : spec.bins) {
    hist += format_number(bin.center) + ',' + format_number(bin.intensity) + '\n';
  }
  const std::string sticks_path = join_path(cfg.output_dir, "sticks.csv");
  const std::string hist_path = join_path(cfg.output_dir, "spectrum.csv");
  write_file_atomic(sticks_path, sticks);
  write_file_atomic(hist_path, hist);
  out << "wrote " << sticks_path << " and " << hist_path << " (captured_mass "
      << format_number(table.captured_mass()) << ", n_max " << table.truncation().n_max << ")\n";
  return kOk;
}

int cmd_sample(const JobConfig& cfg, std::ostream& out) {
  const MolecularSystem mol = make_molecule(cfg.molecule);
  const CircuitSpec circuit = job_circuit(cfg);
  const TransitionTable table = job_table(cfg, circuit);
  const auto draws = sample_indices(table, cfg.sample_count, cfg.seed);

  std::string text = table_header(cfg, table);
  text.insert(text.size() - 1, ",seed=" + std::to_string(cfg.seed) +
                                   ",count=" + std::to_string(cfg.sample_count));
  text += "m_pattern,n_pattern,omega_v_cm1\n";
  const auto m = static_cast<std::size_t>(table.system_modes());
  const auto b = static_cast<std::size_t>(table.ancilla_modes());
  for (std::size_t i : draws) {
    const auto p = table.pattern(i);
    text += pattern_string(p, 0, m) + ',' + pattern_string(p, m, b) + ',' +
            format_number(stick_frequency(mol, table, i)) + '\n';
  }
  const std::string path = join_path(cfg.output_dir, "samples.csv");
  write_file_atomic(path, text);
  out << "wrote " << path << " (" << cfg.sample_count << " samples, seed " << cfg.seed << ")\n";
  return kOk;
}

int cmd_validate(const JobConfig& cfg, std::ostream& out) {
  std::vector<Check> checks;
  auto add = [&](std::string name, double value, double tol, std::string note = {}) {
    checks.push_back({std::move(name), value <= tol, value, tol, std::move(note)});
  };
  auto report = [&]() {
    bool ok = true;
    for (const Check& c : checks) {
      ok = ok && c.pass;
      out << (c.pass ? "PASS " : "FAIL ") << c.name << " value=" << format_number(c.value)
          << " tol=" << format_number(c.tol);
      if (!c.note.empty()) out << " (" << c.note << ")";
      out << "\n";
    }
    out << (ok ? "all checks passed" : "some checks failed") << "\n";
    return ok ? kOk : kChecksFailed;
  };

  const double ortho = orthogonality_residual(cfg.molecule.duschinsky);
  add("duschinsky_orthogonality", ortho, kSnapTolerance);
  if (!checks.back().pass) return report();

  const MolecularSystem mol = make_molecule(cfg.molecule);
  const auto m = mol.modes();
  const BogoliubovTransform dok = build_doktorov(mol);
  add("doktorov_constraints", dok.residuals().max(), cfg.tolerances.constraint);

  const ThermalExtension ext(mol.omega_initial(), cfg.temperature_k);
  const BogoliubovTransform full = extend_transform(dok, ext);
  add("extended_constraints", full.residuals().max(), cfg.tolerances.constraint);

  const GaussianDecomposition d = decompose(full, cfg.tolerances);
  const double scale = std::max(1.0, max_abs(full.y()));
  add("decomposition_x", max_abs(CMatrix(d.x_reconstructed() - full.x())) / scale,
      cfg.tolerances.reconstruction);
  add("decomposition_y", max_abs(CMatrix(d.y_reconstructed() - full.y())) / scale,
      cfg.tolerances.reconstruction);
  add("displacement_relocation",
      (full.z() - full.x() * d.gamma_prime - full.y() * d.gamma_prime.conjugate()).norm(), 1e-10);
  add("interferometer_unitarity", unitarity_residual(d.c_left), 1e-10);

  const CircuitSpec circuit = cfg.circuit ? *cfg.circuit : circuit_from_decomposition(d);
  if (cfg.circuit) {
    const CircuitSpec fresh = circuit_from_decomposition(d);
    double diff = (fresh.squeezing - circuit.squeezing).cwiseAbs().maxCoeff();
    diff = std::max(diff, max_abs(CMatrix(fresh.interferometer - circuit.interferometer)));
    diff = std::max(diff, (fresh.input_amplitudes - circuit.input_amplitudes).cwiseAbs().maxCoeff());
    add("stored_circuit_matches", diff, 1e-9);
  }

  const GaussianState pure = state_from_transform(full, RVector::Zero(2 * m));
  add("purity", (symplectic_eigenvalues(pure).array() - 1.0).abs().maxCoeff(), 1e-8);

  std::vector<int> system(static_cast<std::size_t>(m));
  std::vector<int> ancilla(static_cast<std::size_t>(m));
  for (Eigen::Index k = 0; k < m; ++k) {
    system[static_cast<std::size_t>(k)] = static_cast<int>(k);
    ancilla[static_cast<std::size_t>(k)] = static_cast<int>(k + m);
  }
  add("ancilla_thermal_occupation",
      (photon_moments(reduce(pure, ancilla)).mean - ext.n_bar()).cwiseAbs().maxCoeff(), 1e-8);
  const GaussianState direct = state_from_transform(dok, ext.n_bar());
  const GaussianState traced = reduce(pure, system);
  add("system_reduction_matches_thermal_route",
      std::max(max_abs(RMatrix(traced.cov() - direct.cov())),
               (traced.mean() - direct.mean()).cwiseAbs().maxCoeff()),
      1e-9);

  // Fock and phase-space oracles on the same circuit; a tight truncation keeps
  // the moment comparison meaningful.
  try {
    const TransitionTable table =
        adaptive_transition_table(circuit, 1.0 - 1e-9, cfg.memory_limit_bytes);
    const PhotonMoments pm = photon_moments(pure);
    add("oracle_photon_means", (table.mean_photons() - pm.mean).cwiseAbs().maxCoeff(), 1e-4);
    add("oracle_photon_covariance",
        max_abs(RMatrix(table.photon_covariance() - pm.covariance)), 1e-4);
    const std::vector<PhotonCount> vac(static_cast<std::size_t>(2 * m), 0);
    const double q0 = husimi_q(pure, CVector::Zero(2 * m)) * std::pow(std::numbers::pi, 2.0 * static_cast<double>(m));
    add("oracle_vacuum_probability", std::abs(table.lookup(vac) - q0), 1e-10);
    if (cfg.temperature_k == 0.0) {
      double excited = 0.0;
      for (const auto& [n, p] : table.marginal(ancilla)) {
        if (std::any_of(n.begin(), n.end(), [](int v) { return v != 0; })) excited += p;
      }
      add("zero_temperature_ancilla_vacuum", excited, 1e-10);
    }
  } catch (const InsufficientTruncation& e) {
    checks.push_back({"oracle_cross_check", false, 1.0 - e.achieved_mass(), 1e-9,
                      "truncation did not converge within the memory limit"});
  }
  return report();
}

namespace {

int exit_code_for(const Error& e) {
  const std::string_view kind = e.kind();
  if (kind == "InsufficientTruncation") return kTruncationError;
  if (kind == "NumericalFailure" || kind == "SingularSystem" || kind == "SingularJ" ||
      kind == "SingularCovariance" || kind == "ConstraintViolation" || kind == "EmptyTable") {
    return kNumericalError;
  }
  return kValidationError;
}

int report_error(std::ostream& err, std::string_view kind, const std::string& message, int code,
                 std::optional<double> achieved = std::nullopt) {
  ojson j;
  j["error"] = kind;
  j["message"] = message;
  j["exit_code"] = code;
  if (achieved) j["achieved_mass"] = *achieved;
  err << j.dump() << "\n";
  return code;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-temperature vibronic spectra as Gaussian boson-sampling circuits"};
  app.require_subcommand(1);
  std::string input;
  Overrides o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input", input, "job config or circuit JSON")->required();
    sub->add_option("--output-dir", o.output_dir, "directory for output files");
    sub->add_option("--temperature", o.temperature_k, "temperature in kelvin");
    sub->add_option("--n-max", o.n_max, "per-mode photon cutoff (disables adaptive truncation)");
    sub->add_option("--target-mass", o.target_mass, "required captured probability");
    sub->add_option("--bin-width", o.bin_width_cm1, "histogram bin width in cm^-1");
    sub->add_option("--seed", o.seed, "sampler seed");
    sub->add_option("--tolerance", o.tolerance, "decomposition reconstruction tolerance");
  };
  CLI::App* compile = app.add_subcommand("compile", "compile the molecule into a circuit");
  CLI::App* spectrum = app.add_subcommand("spectrum", "stick spectrum and histogram");
  CLI::App* validate = app.add_subcommand("validate", "run the invariant suite");
  CLI::App* sample_cmd = app.add_subcommand("sample", "draw samples from the transition table");
  for (CLI::App* sub : {compile, spectrum, validate, sample_cmd}) add_common(sub);
  sample_cmd->add_option("--count", o.count, "number of samples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kOk;
    }
    return report_error(err, "UsageError", e.what(), kValidationError);
  }

  try {
    const JobConfig cfg = load_config(input, o);
    if (compile->parsed()) return cmd_compile(cfg, out);
    if (spectrum->parsed()) return cmd_spectrum(cfg, out);
    if (validate->parsed()) return cmd_validate(cfg, out);
    return cmd_sample(cfg, out);
  } catch (const InsufficientTruncation& e) {
    return report_error(err, e.kind(), e.what(), kTruncationError, e.achieved_mass());
  } catch (const Error& e) {
    return report_error(err, e.kind(), e.what(), exit_code_for(e));
  } catch (const std::filesystem::filesystem_error& e) {
    return report_error(err, "IOError", e.what(), kValidationError);
  }
}

}  // namespace vbs::cli
