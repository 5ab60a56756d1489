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

#include "vbs/gaussian_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "vbs/errors.hpp"

namespace vbs {

namespace {

std::string shape(const CMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

// Takagi vectors of a complex symmetric block B: a unitary W with
// W^dagger B conj(W) = diag(values), values >= 0 and descending.
//
// Uses the real symmetric embedding [[Re B, Im B], [Im B, -Re B]], whose
// eigenvector (x; y) for a positive eigenvalue s gives the Takagi vector
// x + iy for value s. Vectors for vanishing values are completed by complex
// Gram-Schmidt; any orthonormal completion is valid there.
void takagi(const CMatrix& b, CMatrix& w, RVector& values) {
  const Eigen::Index k = b.rows();
  const CMatrix sym = 0.5 * (b + b.transpose());
  RMatrix emb(2 * k, 2 * k);
  emb << sym.real(), sym.imag(), sym.imag(), -sym.real();
  Eigen::SelfAdjointEigenSolver<RMatrix> eig(emb);
  if (eig.info() != Eigen::Success) {
    throw NumericalFailure("eigen-decomposition failed while aligning singular vectors");
  }
  const double floor = 1e-14 + 1e-12 * max_abs(sym);

  w = CMatrix::Zero(k, k);
  values = RVector::Zero(k);
  Eigen::Index found = 0;
  for (Eigen::Index i = 2 * k - 1; i >= 0 && found < k; --i) {
    if (eig.eigenvalues()(i) <= floor) break;
    const auto v = eig.eigenvectors().col(i);
    CVector col(k);
    for (Eigen::Index r = 0; r < k; ++r) col(r) = Complex(v(r), v(k + r));
    w.col(found) = col.normalized();
    values(found) = eig.eigenvalues()(i);
    ++found;
  }
  for (Eigen::Index e = 0; e < k && found < k; ++e) {
    CVector cand = CVector::Unit(k, e);
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index j = 0; j < found; ++j) cand -= w.col(j).dot(cand) * w.col(j);
    }
    const double norm = cand.norm();
    if (norm > 1e-6) w.col(found++) = cand / norm;
  }
  if (found != k) throw NumericalFailure("could not complete Takagi basis");
}

}  // namespace

BogoliubovTransform::BogoliubovTransform(CMatrix x, CMatrix y, CVector z)
    : x_(std::move(x)), y_(std::move(y)), z_(std::move(z)) {
  const Eigen::Index n = z_.size();
  if (n == 0) throw DimensionMismatch("transform must have at least one mode");
  if (x_.rows() != n || x_.cols() != n || y_.rows() != n || y_.cols() != n) {
    throw DimensionMismatch("X is " + shape(x_) + ", Y is " + shape(y_) + ", z has " +
                            std::to_string(n) + " entries");
  }
}

BogoliubovTransform BogoliubovTransform::identity(Eigen::Index dim) {
  return {CMatrix::Zero(dim, dim), CMatrix::Identity(dim, dim), CVector::Zero(dim)};
}

ConstraintResiduals BogoliubovTransform::residuals() const {
  const Eigen::Index n = dim();
  ConstraintResiduals r;
  r.commutator = max_abs(y_ * y_.adjoint() - x_ * x_.adjoint() - CMatrix::Identity(n, n));
  r.symmetry = max_abs(x_ * y_.transpose() - y_ * x_.transpose());
  return r;
}

BogoliubovTransform from_displacement(const CVector& alpha) {
  const Eigen::Index n = alpha.size();
  return {CMatrix::Zero(n, n), CMatrix::Identity(n, n), alpha.conjugate()};
}

BogoliubovTransform from_squeezing(const RVector& sigma) {
  const Eigen::Index n = sigma.size();
  if (!sigma.allFinite()) throw InvalidArgument("squeezing parameters must be finite");
  CMatrix x = CMatrix::Zero(n, n);
  CMatrix y = CMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    x(k, k) = std::sinh(sigma(k));
    y(k, k) = std::cosh(sigma(k));
  }
  return {std::move(x), std::move(y), CVector::Zero(n)};
}

BogoliubovTransform from_rotation(const CMatrix& u, double tol) {
  const double res = unitarity_residual(u);
  if (!(res <= tol)) {
    throw NonUnitary("rotation matrix is not unitary (residual " + std::to_string(res) + ")");
  }
  const Eigen::Index n = u.rows();
  return {CMatrix::Zero(n, n), u, CVector::Zero(n)};
}

BogoliubovTransform compose(const BogoliubovTransform& outer, const BogoliubovTransform& inner) {
  if (outer.dim() != inner.dim()) {
    throw DimensionMismatch("cannot compose transforms on " + std::to_string(outer.dim()) +
                            " and " + std::to_string(inner.dim()) + " modes");
  }
  // inner^dagger (X_o a + Y_o a^dagger + z_o) inner, with
  // inner^dagger a inner = conj(X_i) a^dagger + conj(Y_i) a + conj(z_i).
  CMatrix x = outer.x() * inner.y().conjugate() + outer.y() * inner.x();
  CMatrix y = outer.x() * inner.x().conjugate() + outer.y() * inner.y();
  CVector z = outer.x() * inner.z().conjugate() + outer.y() * inner.z() + outer.z();
  return {std::move(x), std::move(y), std::move(z)};
}

CVector relocate_displacement(const CMatrix& x, const CMatrix& y, const CVector& gamma) {
  const Eigen::Index n = gamma.size();
  if (x.rows() != n || x.cols() != n || y.rows() != n || y.cols() != n) {
    throw DimensionMismatch("relocation needs square X, Y matching gamma");
  }
  RMatrix block(2 * n, 2 * n);
  block << x.real() + y.real(), -x.imag() + y.imag(), x.imag() + y.imag(), x.real() - y.real();
  RVector rhs(2 * n);
  rhs << gamma.real(), gamma.imag();

  Eigen::JacobiSVD<RMatrix> svd(block, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& sv = svd.singularValues();
  if (!(sv(2 * n - 1) > 1e-12 * sv(0))) {
    throw SingularSystem("displacement relocation system is singular");
  }
  const RVector sol = svd.solve(rhs);
  CVector out(n);
  for (Eigen::Index k = 0; k < n; ++k) out(k) = Complex(sol(k), sol(n + k));
  return out;
}

CMatrix GaussianDecomposition::x_reconstructed() const {
  return c_left * squeezing.array().sinh().matrix().asDiagonal() * c_right.transpose();
}

CMatrix GaussianDecomposition::y_reconstructed() const {
  return c_left * squeezing.array().cosh().matrix().asDiagonal() * c_right.adjoint();
}

BogoliubovTransform GaussianDecomposition::circuit_transform() const {
  const BogoliubovTransform right = compose(from_rotation(c_right.adjoint(), 1e-8),
                                            from_displacement(gamma_prime));
  return compose(from_rotation(c_left, 1e-8), compose(from_squeezing(squeezing), right));
}

GaussianDecomposition decompose(const BogoliubovTransform& t, const Tolerances& tol) {
  const ConstraintResiduals res = t.residuals();
  if (!(res.max() <= tol.constraint)) {
    throw ConstraintViolation("transform violates the Bogoliubov constraints (residual " +
                              std::to_string(res.max()) + ")");
  }
  const Eigen::Index n = t.dim();
  const CMatrix& x = t.x();
  const CMatrix& y = t.y();

  // Y fixes both interferometers up to a unitary inside every block of equal
  // singular values; X then pins that freedom down.
  Eigen::JacobiSVD<CMatrix> svd(y, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RVector cosh_values = svd.singularValues();
  if (!cosh_values.allFinite() || !svd.matrixU().allFinite() || !svd.matrixV().allFinite()) {
    throw NumericalFailure("singular value decomposition of Y did not converge");
  }
  CMatrix c_left = svd.matrixU();
  CMatrix c_right = svd.matrixV();
  const CMatrix aligned = c_left.adjoint() * x * c_right.conjugate();

  RVector sinh_values(n);
  const double cluster_tol = 1e-11 * std::max(1.0, cosh_values(0));
  for (Eigen::Index start = 0; start < n;) {
    Eigen::Index end = start + 1;
    while (end < n && cosh_values(start) - cosh_values(end) <= cluster_tol) ++end;
    const Eigen::Index k = end - start;
    CMatrix w;
    RVector values;
    takagi(aligned.block(start, start, k, k), w, values);
    c_left.middleCols(start, k) = c_left.middleCols(start, k) * w;
    c_right.middleCols(start, k) = c_right.middleCols(start, k) * w;
    sinh_values.segment(start, k) = values;
    start = end;
  }

  // asinh of the X-side values keeps small squeezing accurate where
  // acosh(cosh_values) would lose half the digits.
  RVector squeezing = sinh_values.array().asinh();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return squeezing(a) > squeezing(b); });

  GaussianDecomposition d;
  d.c_left.resize(n, n);
  d.c_right.resize(n, n);
  d.squeezing.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    d.c_left.col(k) = c_left.col(src);
    d.c_right.col(k) = c_right.col(src);
    d.squeezing(k) = squeezing(src);
  }

  // Column phases. With s_k > 0 only a joint sign flip keeps both X and Y;
  // with s_k = 0 any common phase does. The largest-magnitude entry of each
  // C_L column (first one on ties) is made real-positive where allowed,
  // otherwise given a positive real part.
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index pivot = 0;
    double best = -1.0;
    for (Eigen::Index r = 0; r < n; ++r) {
      const double mag = std::abs(d.c_left(r, k));
      if (mag > best * (1.0 + 1e-12)) {
        best = mag;
        pivot = r;
      }
    }
    const Complex entry = d.c_left(pivot, k);
    Complex phase(1.0, 0.0);
    if (d.squeezing(k) <= 1e-12) {
      phase = std::conj(entry) / std::abs(entry);
    } else if (entry.real() < -1e-12 * best ||
               (std::abs(entry.real()) <= 1e-12 * best && entry.imag() < 0.0)) {
      phase = -1.0;
    }
    d.c_left.col(k) *= phase;
    d.c_right.col(k) *= phase;
  }

  const double scale = std::max(1.0, max_abs(y));
  const double x_res = max_abs(d.x_reconstructed() - x);
  const double y_res = max_abs(d.y_reconstructed() - y);
  if (!(x_res <= tol.reconstruction * scale && y_res <= tol.reconstruction * scale)) {
    throw NumericalFailure("decomposition does not reproduce the transform (X residual " +
                           std::to_string(x_res) + ", Y residual " + std::to_string(y_res) +
                           ")");
  }

  d.gamma = t.z();
  d.gamma_prime = relocate_displacement(x, y, d.gamma);
  d.gamma_dprime = d.c_right.transpose() * d.gamma_prime;
  return d;
}

}  // namespace vbs
