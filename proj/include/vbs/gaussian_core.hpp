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

#include <Eigen/Dense>

#include "vbs/types.hpp"

namespace vbs {

/// Numerical tolerances shared by the Gaussian-unitary routines.
struct Tolerances {
  double constraint = 1e-10;
  double reconstruction = 1e-9;
};

struct ConstraintResiduals {
  double commutator = 0.0;  ///< max |Y Y^dagger - X X^dagger - I|
  double symmetry = 0.0;    ///< max |X Y^t - Y X^t|
  double max() const { return commutator > symmetry ? commutator : symmetry; }
};

/// Gaussian unitary in Bogoliubov form.
///
/// The unitary O acts on the vector of creation operators as
///
///     O^dagger a^dagger O = X a + Y a^dagger + z
///
/// so the identity is X = 0, Y = I, z = 0. A valid transform preserves the
/// canonical commutators, i.e. Y Y^dagger - X X^dagger = I and X Y^t = Y X^t.
/// The constructor only checks shapes; use residuals() to check the algebra.
class BogoliubovTransform {
 public:
  BogoliubovTransform(CMatrix x, CMatrix y, CVector z);

  static BogoliubovTransform identity(Eigen::Index dim);

  Eigen::Index dim() const { return z_.size(); }
  const CMatrix& x() const { return x_; }
  const CMatrix& y() const { return y_; }
  const CVector& z() const { return z_; }

  ConstraintResiduals residuals() const;
  bool satisfies_constraints(double tol = Tolerances{}.constraint) const {
    return residuals().max() <= tol;
  }

 private:
  CMatrix x_;
  CMatrix y_;
  CVector z_;
};

/// Displacement D_alpha; shifts a^dagger by conj(alpha).
BogoliubovTransform from_displacement(const CVector& alpha);

/// Product of single-mode squeezers S_sigma.
BogoliubovTransform from_squeezing(const RVector& sigma);

/// Passive rotation R_U; maps a^dagger to U a^dagger. Throws NonUnitary.
BogoliubovTransform from_rotation(const CMatrix& u, double tol = Tolerances{}.constraint);

/// Transform of the operator product outer * inner (inner acts on the state
/// first). Throws DimensionMismatch.
BogoliubovTransform compose(const BogoliubovTransform& outer, const BogoliubovTransform& inner);

/// Solves gamma = X gamma' + Y conj(gamma') for gamma' through the real
/// 2n x 2n block system. Throws SingularSystem when the block matrix is
/// numerically singular.
CVector relocate_displacement(const CMatrix& x, const CMatrix& y, const CVector& gamma);

/// Rotation / squeezing / rotation factorisation of a Bogoliubov transform,
///
///     X = C_L sinh(S) C_R^t,   Y = C_L cosh(S) C_R^dagger,
///
/// together with the displacement moved to the right end of the circuit
/// (gamma_prime) and the coherent amplitudes it produces after the right
/// interferometer (gamma_dprime = C_R^t gamma_prime).
struct GaussianDecomposition {
  CMatrix c_left;
  RVector squeezing;  ///< non-negative, sorted descending
  CMatrix c_right;
  CVector gamma;
  CVector gamma_prime;
  CVector gamma_dprime;

  Eigen::Index dim() const { return squeezing.size(); }
  CMatrix x_reconstructed() const;
  CMatrix y_reconstructed() const;

  /// R(C_L) S(S) R(C_R^dagger) D(gamma_prime) as a single transform.
  BogoliubovTransform circuit_transform() const;
};

/// Throws ConstraintViolation when the input is not a valid transform and
/// NumericalFailure when the factors do not reproduce it.
GaussianDecomposition decompose(const BogoliubovTransform& t, const Tolerances& tol = {});

}  // namespace vbs
