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

#include "vbs/phase_space.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "vbs/errors.hpp"

namespace vbs {

GaussianState::GaussianState(RVector mean, RMatrix cov)
    : mean_(std::move(mean)), cov_(std::move(cov)) {
  if (mean_.size() == 0 || mean_.size() % 2 != 0 || cov_.rows() != mean_.size() ||
      cov_.cols() != mean_.size()) {
    throw DimensionMismatch("Gaussian state needs a 2M mean and a 2M x 2M covariance");
  }
  const double asym = max_abs(RMatrix(cov_ - cov_.transpose()));
  if (!(asym <= 1e-10)) {
    throw InvalidArgument("covariance is not symmetric (residual " + std::to_string(asym) + ")");
  }
}

GaussianState GaussianState::vacuum(Eigen::Index modes) {
  return {RVector::Zero(2 * modes), RMatrix::Identity(2 * modes, 2 * modes)};
}

GaussianState GaussianState::thermal(const RVector& n_bar) {
  RVector nu(2 * n_bar.size());
  nu << 2.0 * n_bar.array() + 1.0, 2.0 * n_bar.array() + 1.0;
  return {RVector::Zero(nu.size()), RMatrix(nu.asDiagonal())};
}

RMatrix symplectic_form(Eigen::Index modes) {
  RMatrix omega = RMatrix::Zero(2 * modes, 2 * modes);
  omega.topRightCorner(modes, modes).setIdentity();
  omega.bottomLeftCorner(modes, modes) = -RMatrix::Identity(modes, modes);
  return omega;
}

GaussianState state_from_transform(const BogoliubovTransform& t, const RVector& occupations,
                                   double tol) {
  const Eigen::Index m = t.dim();
  if (occupations.size() != m) {
    throw DimensionMismatch("expected " + std::to_string(m) + " occupations, got " +
                            std::to_string(occupations.size()));
  }
  const double res = t.residuals().max();
  if (!(res <= tol)) {
    throw ConstraintViolation("transform violates the canonical constraints (residual " +
                              std::to_string(res) + ")");
  }

  // O^dagger a O = Y* a + X* a^dagger + z*.
  CMatrix w(2 * m, 2 * m);
  w << t.y().conjugate(), t.x().conjugate(), t.x(), t.y();
  const Complex i{0.0, 1.0};
  const CMatrix id = CMatrix::Identity(m, m);
  CMatrix l(2 * m, 2 * m);
  l << id, id, -i * id, i * id;
  const CMatrix s_complex = 0.5 * l * w * l.adjoint();
  const RMatrix s = s_complex.real();

  RVector nu(2 * m);
  nu << 2.0 * occupations.array() + 1.0, 2.0 * occupations.array() + 1.0;
  RMatrix cov = s * nu.asDiagonal() * s.transpose();
  cov = 0.5 * (cov + cov.transpose()).eval();

  RVector mean(2 * m);
  mean << 2.0 * t.z().real(), -2.0 * t.z().imag();
  return {std::move(mean), std::move(cov)};
}

double husimi_q(const GaussianState& state, const CVector& alpha) {
  const Eigen::Index m = state.modes();
  if (alpha.size() != m) throw DimensionMismatch("alpha has the wrong length");
  const RMatrix a = state.cov() + RMatrix::Identity(2 * m, 2 * m);
  const Eigen::LLT<RMatrix> llt(a);
  if (llt.info() != Eigen::Success || !(llt.matrixLLT().diagonal().minCoeff() > 1e-150)) {
    throw SingularCovariance("V + I is not positive definite");
  }
  RVector d(2 * m);
  d << 2.0 * alpha.real(), 2.0 * alpha.imag();
  d -= state.mean();
  const double log_det = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  const double quad = d.dot(llt.solve(d));
  return std::exp(static_cast<double>(m) * std::log(2.0 / std::numbers::pi) - 0.5 * log_det -
                  0.5 * quad);
}

double husimi_q_rotated(const CMatrix& u, const RVector& vx, const RVector& vp,
                        const CVector& alpha) {
  const Eigen::Index m = alpha.size();
  if (u.rows() != m || u.cols() != m || vx.size() != m || vp.size() != m) {
    throw DimensionMismatch("inconsistent sizes in husimi_q_rotated");
  }
  const RVector a = (vx.array() + 1.0).inverse();
  const RVector b = (vp.array() + 1.0).inverse();
  const RVector lambda = 0.5 * (b - a);
  const RVector mu = a + b;

  CMatrix form(2 * m, 2 * m);
  form << u * lambda.asDiagonal() * u.transpose(), -0.5 * u * mu.asDiagonal() * u.adjoint(),
      -0.5 * u.conjugate() * mu.asDiagonal() * u.transpose(),
      u.conjugate() * lambda.asDiagonal() * u.adjoint();
  CVector vec(2 * m);
  vec << alpha, alpha.conjugate();
  const Complex exponent = (vec.transpose() * form * vec)(0, 0);

  double prefactor = std::pow(std::numbers::pi, -static_cast<double>(m));
  for (Eigen::Index k = 0; k < m; ++k) prefactor *= std::sqrt(mu(k) * mu(k) - 4.0 * lambda(k) * lambda(k));
  return prefactor * std::exp(exponent.real());
}

GaussianState reduce(const GaussianState& state, const std::vector<int>& keep) {
  if (keep.empty()) throw InvalidArgument("reduce needs at least one mode");
  const Eigen::Index m = state.modes();
  std::vector<Eigen::Index> rows;
  for (int k : keep) {
    if (k < 0 || k >= m) throw DimensionMismatch("mode index " + std::to_string(k) + " out of range");
  }
  for (int k : keep) rows.push_back(k);
  for (int k : keep) rows.push_back(k + m);
  const auto n = static_cast<Eigen::Index>(rows.size());
  RVector mean(n);
  RMatrix cov(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    mean(i) = state.mean()(rows[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < n; ++j) {
      cov(i, j) = state.cov()(rows[static_cast<std::size_t>(i)], rows[static_cast<std::size_t>(j)]);
    }
  }
  return {std::move(mean), std::move(cov)};
}

PhotonMoments photon_moments(const GaussianState& state) {
  const Eigen::Index m = state.modes();
  const RMatrix& v = state.cov();
  const auto qq = v.topLeftCorner(m, m);
  const auto qp = v.topRightCorner(m, m);
  const auto pq = v.bottomLeftCorner(m, m);
  const auto pp = v.bottomRightCorner(m, m);
  const Complex i{0.0, 1.0};

  // N_jk = <da_j^dagger da_k>, M_jk = <da_j da_k>, mu_k = <a_k>.
  const CMatrix n = 0.25 * ((qq + pp).cast<Complex>() + i * (qp - pq).cast<Complex>()) -
                    0.5 * CMatrix::Identity(m, m);
  const CMatrix mm = 0.25 * ((qq - pp).cast<Complex>() + i * (qp + pq).cast<Complex>());
  const CVector mu =
      0.5 * (state.mean().head(m).cast<Complex>() + i * state.mean().tail(m).cast<Complex>());

  PhotonMoments out;
  out.mean = n.diagonal().real() + mu.cwiseAbs2();
  out.covariance.resize(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index k = 0; k < m; ++k) {
      double c = std::norm(mm(j, k)) + std::norm(n(j, k)) +
                 2.0 * (std::conj(mu(j)) * std::conj(mu(k)) * mm(j, k)).real() +
                 2.0 * (mu(j) * std::conj(mu(k)) * n(j, k)).real();
      if (j == k) c += n(j, j).real() + std::norm(mu(j));
      out.covariance(j, k) = c;
    }
  }
  return out;
}

RVector symplectic_eigenvalues(const GaussianState& state) {
  const Eigen::Index m = state.modes();
  const Eigen::SelfAdjointEigenSolver<RMatrix> es(state.cov());
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0) {
    throw SingularCovariance("covariance is not positive definite");
  }
  const RMatrix root = es.operatorSqrt();
  const CMatrix h = Complex{0.0, 1.0} * (root * symplectic_form(m) * root).cast<Complex>();
  const Eigen::SelfAdjointEigenSolver<CMatrix> hs(h, Eigen::EigenvaluesOnly);
  return hs.eigenvalues().tail(m);
}

bool is_physical(const GaussianState& state, double tol) {
  const Eigen::Index m = state.modes();
  const CMatrix h =
      state.cov().cast<Complex>() + Complex{0.0, 1.0} * symplectic_form(m).cast<Complex>();
  const Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.info() == Eigen::Success && es.eigenvalues().minCoeff() >= -tol;
}

}  // namespace vbs
