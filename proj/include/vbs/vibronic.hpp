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

#include <optional>
#include <string>

#include "vbs/gaussian_core.hpp"
#include "vbs/types.hpp"

namespace vbs {

/// Harmonic model of a vibronic transition between two electronic states.
///
/// Frequencies are wavenumbers in cm^-1. The Duschinsky matrix U is real
/// orthogonal and delta is the dimensionless displacement between the two
/// equilibrium geometries.
class MolecularSystem {
 public:
  static constexpr double kOrthogonalityTolerance = 1e-8;

  /// Throws InvalidMolecule (shapes, non-orthogonal U) or InvalidFrequency.
  MolecularSystem(RVector omega_initial, RVector omega_final, RMatrix duschinsky, RVector delta,
                  std::string label = {});

  Eigen::Index modes() const { return omega_initial_.size(); }
  const RVector& omega_initial() const { return omega_initial_; }
  const RVector& omega_final() const { return omega_final_; }
  const RMatrix& duschinsky() const { return duschinsky_; }
  const RVector& delta() const { return delta_; }
  const std::string& label() const { return label_; }

 private:
  RVector omega_initial_;
  RVector omega_final_;
  RMatrix duschinsky_;
  RVector delta_;
  std::string label_;
};

/// max |U^t U - I|; infinity for non-square input.
double orthogonality_residual(const RMatrix& u);

/// Closest orthogonal matrix in the Frobenius norm (polar factor).
RMatrix nearest_orthogonal(const RMatrix& u);

/// SO2^- -> SO2 photodetachment: omega_initial is the anion, omega_final the
/// neutral. The tabulated Duschinsky matrix is rounded to four decimals and
/// is replaced by its nearest orthogonal matrix.
MolecularSystem so2_photodetachment();

/// J = Omega' U Omega^-1 with Omega = diag(sqrt(omega_initial)) and
/// Omega' = diag(sqrt(omega_final)).
RMatrix build_j_matrix(const MolecularSystem& mol);

/// Doktorov operator D(delta/sqrt2) S(ln Omega') R(U) S(ln Omega)^dagger:
/// X = (J - J^-t)/2, Y = (J + J^-t)/2, z = delta/sqrt2.
/// Throws SingularJ when cond(J) exceeds 1e12.
BogoliubovTransform build_doktorov(const MolecularSystem& mol);

/// 2M-mode zero-temperature transform of U_Dok V(beta) at a single
/// temperature; thermal occupations follow omega_initial.
BogoliubovTransform build_vibronic_transform(const MolecularSystem& mol, double temperature_k);

/// 10 log10(exp(-2 s)).
double squeezing_db(double s);

/// Optical circuit: single-mode squeezed coherent inputs followed by one
/// interferometer. Mode order is system modes then ancilla modes.
struct CircuitSpec {
  CMatrix interferometer;  ///< C_L
  RVector squeezing;       ///< s_k, natural units
  CVector input_amplitudes;  ///< gamma'' = C_R^t gamma'
  double temperature_k = 0.0;
  std::string label;
  /// Audit trail; absent for hand-built circuits.
  std::optional<BogoliubovTransform> source;
  std::optional<GaussianDecomposition> decomposition;

  Eigen::Index modes() const { return squeezing.size(); }
  RVector squeezing_db() const;
  /// Throws DimensionMismatch or NonUnitary.
  void validate(double unitarity_tol = 1e-10) const;
};

/// Circuit from an already decomposed transform.
CircuitSpec circuit_from_decomposition(const GaussianDecomposition& d);

/// build_vibronic_transform followed by decompose.
CircuitSpec compile_circuit(const MolecularSystem& mol, double temperature_k,
                            const Tolerances& tol = {});

}  // namespace vbs
