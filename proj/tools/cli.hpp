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

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "vbs/fock_oracle.hpp"
#include "vbs/gaussian_core.hpp"
#include "vbs/vibronic.hpp"

namespace vbs::cli {

inline constexpr const char* kSchemaVersion = "1.0";
inline constexpr int kSchemaMajor = 1;

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kOk = 0,
  kChecksFailed = 1,
  kValidationError = 2,
  kNumericalError = 3,
  kTruncationError = 4,
};

/// Molecule exactly as read from input; the Duschinsky matrix is not yet
/// required to be orthogonal.
struct MoleculeInput {
  RVector omega_initial;
  RVector omega_final;
  RMatrix duschinsky;
  RVector delta;
  std::string label;
};

/// Duschinsky matrices further than this from orthogonal are rejected;
/// closer ones are replaced by their polar factor (tabulated data is
/// usually rounded).
inline constexpr double kSnapTolerance = 1e-3;

struct JobConfig {
  MoleculeInput molecule;
  double temperature_k = 0.0;
  std::optional<int> n_max;
  double target_mass = 0.999;
  std::size_t memory_limit_bytes = std::size_t{2} << 30;
  double bin_width_cm1 = 10.0;
  std::uint64_t seed = 0;
  std::size_t sample_count = 1000;
  Tolerances tolerances;
  std::string output_dir = ".";
  /// Present when the input was a circuit file written by compile.
  std::optional<CircuitSpec> circuit;
};

/// Command-line values that override the input file.
struct Overrides {
  std::optional<std::string> output_dir;
  std::optional<double> temperature_k;
  std::optional<int> n_max;
  std::optional<double> target_mass;
  std::optional<double> bin_width_cm1;
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
  std::optional<std::size_t> count;
};

/// Parses a job config or a circuit file. Unknown keys, unsupported schema
/// versions and out-of-range values raise ConfigError.
JobConfig parse_config(const nlohmann::json& doc);
JobConfig load_config(const std::string& path, const Overrides& overrides = {});
void apply_overrides(JobConfig& cfg, const Overrides& overrides);
/// Range checks on every numeric field. Throws ConfigError.
void check_config(const JobConfig& cfg);

/// Builds the molecule, snapping a nearly orthogonal Duschinsky matrix.
/// Throws InvalidMolecule when it is too far from orthogonal.
MolecularSystem make_molecule(const MoleculeInput& in, double* snap_residual = nullptr);

/// Circuit for the job: the stored one for circuit files, else compiled.
CircuitSpec job_circuit(const JobConfig& cfg);
/// Table under the job's truncation settings (fixed n_max or adaptive).
TransitionTable job_table(const JobConfig& cfg, const CircuitSpec& circuit);

nlohmann::ordered_json circuit_to_json(const JobConfig& cfg, const MolecularSystem& mol,
                                       const CircuitSpec& circuit);

int cmd_compile(const JobConfig& cfg, std::ostream& out);
int cmd_spectrum(const JobConfig& cfg, std::ostream& out);
int cmd_validate(const JobConfig& cfg, std::ostream& out);
int cmd_sample(const JobConfig& cfg, std::ostream& out);

/// Full command-line entry point; errors go to err as one JSON object.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// "%.17g" in the C locale.
std::string format_number(double v);

/// Writes through a temporary file and a rename.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace vbs::cli
