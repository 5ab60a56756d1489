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

#include <vector>

#include "vbs/gaussian_core.hpp"
#include "vbs/types.hpp"

namespace vbs {

/// Gaussian state in quadrature form with q = a + a^dagger and
/// p = -i (a - a^dagger), ordered (q_1..q_M, p_1..p_M). The covariance is
/// V_ij = <{dr_i, dr_j}>/2, so the vacuum has V = I.
class GaussianState {
 public:
  /// Throws DimensionMismatch for inconsistent shapes and InvalidArgument
  /// when the covariance is not symmetric within 1e-10.
  GaussianState(RVector mean, RMatrix cov);

  static GaussianState vacuum(Eigen::Index modes);
  /// Product of thermal states, V = diag(2 n + 1, 2 n + 1).
  static GaussianState thermal(const RVector& n_bar);

  Eigen::Index modes() const { return mean_.size() / 2; }
  const RVector& mean() const { return mean_; }
  const RMatrix& cov() const { return cov_; }

 private:
  RVector mean_;
  RMatrix cov_;
};

/// Standard symplectic form [[0, I], [-I, 0]] in (q, p) ordering.
RMatrix symplectic_form(Eigen::Index modes);

/// O rho O^dagger for a product of thermal states rho with occupations n_bar
/// (zeros for vacuum). With O^dagger (a, a^dagger) O = W (a, a^dagger) + c the
/// quadratures transform by S = L W L^-1, L = [[I, I], [-iI, iI]], giving
/// V = S diag(2n+1, 2n+1) S^t and mean (2 Re z, -2 Im z).
/// Throws ConstraintViolation or DimensionMismatch.
GaussianState state_from_transform(const BogoliubovTransform& t, const RVector& occupations,
                                   double tol = 1e-9);

/// <alpha|rho|alpha> / pi^M, evaluated as
/// (2/pi)^M / sqrt(det(V + I)) exp(-d^t (V + I)^-1 d / 2),
/// d = (2 Re alpha, 2 Im alpha) - mean. Throws SingularCovariance.
double husimi_q(const GaussianState& state, const CVector& alpha);

/// Closed form of the Q function for R(U) applied to independent modes with
/// quadrature variances vx, vp (no displacement):
///
///     Q = prod_k sqrt(mu_k^2 - 4 lambda_k^2) / pi^M
///         * exp(a^t [[U lambda U^t, -U mu U^dagger / 2],
///                     [-U* mu U^t / 2, U* lambda U^dagger]] a),
///
/// with a = (alpha, alpha*), lambda_k = (1/(vp_k + 1) - 1/(vx_k + 1)) / 2 and
/// mu_k = 1/(vx_k + 1) + 1/(vp_k + 1).
double husimi_q_rotated(const CMatrix& u, const RVector& vx, const RVector& vp,
                        const CVector& alpha);

/// Partial trace: keeps the listed modes in the given order.
/// Throws InvalidArgument for an empty list, DimensionMismatch for bad indices.
GaussianState reduce(const GaussianState& state, const std::vector<int>& keep);

struct PhotonMoments {
  RVector mean;        ///< <n_k>
  RMatrix covariance;  ///< Cov(n_j, n_k)
};

/// Photon-number means and covariances from Gaussian moment factorisation.
PhotonMoments photon_moments(const GaussianState& state);

/// Symplectic eigenvalues (ascending): the positive eigenvalues of
/// V^1/2 (i Omega) V^1/2. All equal to one for pure states.
RVector symplectic_eigenvalues(const GaussianState& state);

/// V + i Omega >= -tol.
bool is_physical(const GaussianState& state, double tol = 1e-9);

}  // namespace vbs
