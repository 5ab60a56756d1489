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

#include "vbs/vibronic.hpp"

#include <cmath>
#include <string>

#include "vbs/errors.hpp"
#include "vbs/thermal_ext.hpp"

namespace vbs {

MolecularSystem::MolecularSystem(RVector omega_initial, RVector omega_final, RMatrix duschinsky,
                                 RVector delta, std::string label)
    : omega_initial_(std::move(omega_initial)),
      omega_final_(std::move(omega_final)),
      duschinsky_(std::move(duschinsky)),
      delta_(std::move(delta)),
      label_(std::move(label)) {
  const Eigen::Index m = omega_initial_.size();
  if (m == 0) throw InvalidMolecule("molecule must have at least one mode");
  if (omega_final_.size() != m || delta_.size() != m || duschinsky_.rows() != m ||
      duschinsky_.cols() != m) {
    throw InvalidMolecule("inconsistent molecule dimensions for " + std::to_string(m) +
                          " modes");
  }
  for (Eigen::Index k = 0; k < m; ++k) {
    if (!(omega_initial_(k) > 0.0) || !(omega_final_(k) > 0.0) ||
        !std::isfinite(omega_initial_(k)) || !std::isfinite(omega_final_(k))) {
      throw InvalidFrequency("vibrational frequencies must be positive and finite");
    }
  }
  if (!delta_.allFinite()) throw InvalidMolecule("displacement must be finite");
  const double res = orthogonality_residual(duschinsky_);
  if (!(res <= kOrthogonalityTolerance)) {
    throw InvalidMolecule("Duschinsky matrix is not orthogonal (residual " +
                          std::to_string(res) + ")");
  }
}

double orthogonality_residual(const RMatrix& u) {
  if (u.rows() != u.cols() || !u.allFinite()) return std::numeric_limits<double>::infinity();
  return max_abs(u.transpose() * u - RMatrix::Identity(u.rows(), u.cols()));
}

RMatrix nearest_orthogonal(const RMatrix& u) {
  Eigen::JacobiSVD<RMatrix> svd(u, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

MolecularSystem so2_photodetachment() {
  RVector omega_initial(2), omega_final(2), delta(2);
  omega_initial << 989.5, 451.4;
  omega_final << 1178.4, 518.9;
  RMatrix u(2, 2);
  u << 0.9979, 0.0646, -0.0646, 0.9979;
  delta << -1.8830, 0.4551;
  return {omega_initial, omega_final, nearest_orthogonal(u), delta, "SO2- -> SO2"};
}

RMatrix build_j_matrix(const MolecularSystem& mol) {
  const RVector root_final = mol.omega_final().array().sqrt();
  const RVector inv_root_initial = mol.omega_initial().array().sqrt().inverse();
  return root_final.asDiagonal() * mol.duschinsky() * inv_root_initial.asDiagonal();
}

BogoliubovTransform build_doktorov(const MolecularSystem& mol) {
  const RMatrix j = build_j_matrix(mol);
  const RVector sv = Eigen::JacobiSVD<RMatrix>(j).singularValues();
  const double cond = sv(0) / sv(sv.size() - 1);
  if (!(cond <= 1e12)) {
    throw SingularJ("J is numerically singular (condition number " + std::to_string(cond) + ")");
  }
  const RMatrix j_inv_t = j.transpose().inverse();
  const CMatrix x = (0.5 * (j - j_inv_t)).cast<Complex>();
  const CMatrix y = (0.5 * (j + j_inv_t)).cast<Complex>();
  const CVector z = (mol.delta() / std::sqrt(2.0)).cast<Complex>();
  return {x, y, z};
}

BogoliubovTransform build_vibronic_transform(const MolecularSystem& mol, double temperature_k) {
  const ThermalExtension ext(mol.omega_initial(), temperature_k);
  return extend_transform(build_doktorov(mol), ext);
}

double squeezing_db(double s) { return 10.0 * std::log10(std::exp(-2.0 * s)); }

RVector CircuitSpec::squeezing_db() const {
  RVector db(squeezing.size());
  for (Eigen::Index k = 0; k < squeezing.size(); ++k) db(k) = vbs::squeezing_db(squeezing(k));
  return db;
}

void CircuitSpec::validate(double unitarity_tol) const {
  const Eigen::Index n = squeezing.size();
  if (n == 0 || interferometer.rows() != n || interferometer.cols() != n ||
      input_amplitudes.size() != n) {
    throw DimensionMismatch("circuit has inconsistent mode counts");
  }
  if (!squeezing.allFinite() || !input_amplitudes.allFinite()) {
    throw InvalidArgument("circuit parameters must be finite");
  }
  const double res = unitarity_residual(interferometer);
  if (!(res <= unitarity_tol)) {
    throw NonUnitary("interferometer is not unitary (residual " + std::to_string(res) + ")");
  }
}

CircuitSpec circuit_from_decomposition(const GaussianDecomposition& d) {
  CircuitSpec c;
  c.interferometer = d.c_left;
  c.squeezing = d.squeezing;
  c.input_amplitudes = d.gamma_dprime;
  c.decomposition = d;
  return c;
}

CircuitSpec compile_circuit(const MolecularSystem& mol, double temperature_k,
                            const Tolerances& tol) {
  BogoliubovTransform t = build_vibronic_transform(mol, temperature_k);
  CircuitSpec c = circuit_from_decomposition(decompose(t, tol));
  c.temperature_k = temperature_k;
  c.label = mol.label();
  c.source = std::move(t);
  return c;
}

}  // namespace vbs
