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

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "vbs/errors.hpp"
#include "vbs/gaussian_core.hpp"

using namespace vbs;

namespace {

double diff(const CMatrix& a, const CMatrix& b) { return max_abs(CMatrix(a - b)); }
double diff(const CVector& a, const CVector& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_SUITE("gaussian_core") {

TEST_CASE("displacement conjugates alpha") {
  CVector alpha(2);
  alpha << Complex{1, 1}, 0.0;
  const auto t = from_displacement(alpha);
  CHECK(max_abs(t.x()) == 0.0);
  CHECK(diff(t.y(), CMatrix::Identity(2, 2)) == 0.0);
  CHECK(t.z()(0) == Complex(1, -1));
  CHECK(t.z()(1) == Complex(0, 0));
  CHECK(t.residuals().max() == 0.0);

  const auto zero = from_displacement(CVector::Zero(3));
  CHECK(zero.z().norm() == 0.0);
  CHECK(diff(zero.y(), BogoliubovTransform::identity(3).y()) == 0.0);
}

TEST_CASE("squeezing blocks") {
  RVector s(2);
  s << std::log(2.0), 0.0;
  const auto t = from_squeezing(s);
  CHECK(t.x()(0, 0).real() == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(t.y()(0, 0).real() == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(t.x()(1, 1) == Complex(0, 0));
  CHECK(t.y()(1, 1) == Complex(1, 0));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  RVector r(5);
  for (auto& v : r) v = u(rng);
  CHECK(from_squeezing(r).residuals().max() <= 1e-12);

  RVector bad(1);
  bad << std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(from_squeezing(bad), InvalidArgument);
}

TEST_CASE("rotation") {
  const double c = std::cos(std::numbers::pi / 4);
  CMatrix u(2, 2);
  u << c, -c, c, c;
  const auto t = from_rotation(u);
  CHECK(max_abs(t.x()) == 0.0);
  CHECK(diff(t.y(), u) == 0.0);

  RMatrix so2(2, 2);
  so2 << 0.9979, 0.0646, -0.0646, 0.9979;
  // The tabulated four-digit matrix is unitary only to ~2e-5.
  const auto tab = from_rotation(so2.cast<Complex>(), 1e-4);
  CHECK(tab.residuals().max() <= 1e-4);

  CMatrix bad = CMatrix::Identity(2, 2);
  bad(0, 1) = 0.1;
  CHECK_THROWS_AS(from_rotation(bad), NonUnitary);
  CHECK_THROWS_AS(from_rotation(CMatrix::Identity(2, 3)), NonUnitary);
}

TEST_CASE("constructor shape checks") {
  CHECK_THROWS_AS(BogoliubovTransform(CMatrix::Zero(2, 2), CMatrix::Identity(3, 3), CVector::Zero(2)),
                  DimensionMismatch);
  CHECK_THROWS_AS(BogoliubovTransform(CMatrix(0, 0), CMatrix(0, 0), CVector(0)), DimensionMismatch);
}

TEST_CASE("compose identities") {
  std::mt19937_64 rng(11);
  const auto t = testing::random_transform(3, rng);
  const auto id = BogoliubovTransform::identity(3);
  const auto left = compose(t, id);
  const auto right = compose(id, t);
  CHECK(diff(left.x(), t.x()) <= 1e-15);
  CHECK(diff(right.y(), t.y()) <= 1e-15);
  CHECK(diff(left.z(), t.z()) <= 1e-15);

  RVector s(3);
  s << 0.3, -0.7, 1.1;
  const auto undo = compose(from_squeezing(s), from_squeezing(-s));
  CHECK(max_abs(undo.x()) <= 1e-12);
  CHECK(diff(undo.y(), CMatrix::Identity(3, 3)) <= 1e-12);

  CHECK_THROWS_AS(compose(t, BogoliubovTransform::identity(2)), DimensionMismatch);
}

TEST_CASE("rotation-squeezing-rotation chain matches the SVD form") {
  std::mt19937_64 rng(3);
  for (int n = 1; n <= 5; ++n) {
    const CMatrix ul = testing::random_unitary(n, rng);
    const CMatrix ur = testing::random_unitary(n, rng);
    RVector s = RVector::LinSpaced(n, 0.1, 1.3);
    const CVector a = testing::random_cvector(n, rng);
    const auto t = compose(from_displacement(a),
                           compose(from_rotation(ul),
                                   compose(from_squeezing(s), from_rotation(ur.adjoint()))));
    const CMatrix x = ul * s.array().sinh().matrix().asDiagonal() * ur.transpose();
    const CMatrix y = ul * s.array().cosh().matrix().asDiagonal() * ur.adjoint();
    CHECK(diff(t.x(), x) <= 1e-12);
    CHECK(diff(t.y(), y) <= 1e-12);
    CHECK(diff(t.z(), a.conjugate()) <= 1e-12);
  }
}

TEST_CASE("decompose rotation gives zero squeezing") {
  std::mt19937_64 rng(5);
  const CMatrix u = testing::random_unitary(4, rng);
  const auto d = decompose(from_rotation(u));
  CHECK(d.squeezing.cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(diff(d.y_reconstructed(), u) <= 1e-12);
  CHECK(max_abs(d.x_reconstructed()) <= 1e-12);
}

TEST_CASE("decompose random transforms") {
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 20; ++rep) {
    const auto t = testing::random_transform(3, rng);
    const auto d = decompose(t);
    CHECK(diff(d.x_reconstructed(), t.x()) <= 1e-9);
    CHECK(diff(d.y_reconstructed(), t.y()) <= 1e-9);
    CHECK(unitarity_residual(d.c_left) <= 1e-10);
    CHECK(unitarity_residual(d.c_right) <= 1e-10);
    for (Eigen::Index k = 0; k + 1 < d.dim(); ++k) CHECK(d.squeezing(k) >= d.squeezing(k + 1));
    CHECK(d.squeezing.minCoeff() >= 0.0);
    CHECK(diff(d.gamma_dprime, d.c_right.transpose() * d.gamma_prime) == 0.0);
    const auto c = d.circuit_transform();
    CHECK(diff(c.x(), t.x()) <= 1e-9);
    CHECK(diff(c.y(), t.y()) <= 1e-9);
    CHECK(diff(c.z(), t.z()) <= 1e-9);
  }
}

TEST_CASE("decompose degenerate squeezing") {
  std::mt19937_64 rng(23);
  RVector s(4);
  s << 0.5, 0.5, 0.5, 0.0;
  const CMatrix ul = testing::random_unitary(4, rng);
  const CMatrix ur = testing::random_unitary(4, rng);
  const auto t = compose(from_rotation(ul), compose(from_squeezing(s), from_rotation(ur)));
  const auto d = decompose(t);
  CHECK(diff(d.x_reconstructed(), t.x()) <= 1e-9);
  CHECK(diff(d.y_reconstructed(), t.y()) <= 1e-9);
  CHECK(d.squeezing(0) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(d.squeezing(3) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("decompose is deterministic and phase-fixed") {
  std::mt19937_64 rng(29);
  const auto t = testing::random_transform(4, rng);
  const auto a = decompose(t);
  const auto b = decompose(t);
  CHECK(diff(a.c_left, b.c_left) == 0.0);
  for (Eigen::Index k = 0; k < a.dim(); ++k) {
    Eigen::Index i = 0;
    a.c_left.col(k).cwiseAbs().maxCoeff(&i);
    const Complex lead = a.c_left(i, k);
    CHECK((lead.real() > 0.0 || (std::abs(lead.real()) < 1e-12 && lead.imag() > 0.0)));
  }
}

TEST_CASE("decompose rejects invalid input") {
  CMatrix y = CMatrix::Identity(2, 2) * 2.0;
  CHECK_THROWS_AS(decompose(BogoliubovTransform(CMatrix::Zero(2, 2), y, CVector::Zero(2))),
                  ConstraintViolation);
}

TEST_CASE("relocate displacement") {
  std::mt19937_64 rng(31);
  const CVector g = testing::random_cvector(3, rng);
  const CVector p = relocate_displacement(CMatrix::Zero(3, 3), CMatrix::Identity(3, 3), g);
  CHECK(diff(p, g.conjugate()) <= 1e-14);

  // Real data decouples: gamma' = (X + Y)^-1 gamma.
  RVector s(2);
  s << 0.4, 0.9;
  const RMatrix o = testing::random_orthogonal(2, rng);
  const auto t = compose(from_rotation(o.cast<Complex>()), from_squeezing(s));
  RVector gr(2);
  gr << 0.3, -1.2;
  const CVector pr = relocate_displacement(t.x(), t.y(), gr.cast<Complex>());
  const RVector expect = (t.x() + t.y()).real().inverse() * gr;
  CHECK((pr.real() - expect).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(pr.imag().cwiseAbs().maxCoeff() <= 1e-14);

  for (int rep = 0; rep < 10; ++rep) {
    const auto r = testing::random_transform(4, rng);
    const CVector gamma = testing::random_cvector(4, rng);
    const CVector gp = relocate_displacement(r.x(), r.y(), gamma);
    CHECK((gamma - r.x() * gp - r.y() * gp.conjugate()).norm() <= 1e-10);
  }

  // X = Y makes the block system singular.
  CMatrix same = CMatrix::Ones(1, 1);
  CHECK_THROWS_AS(relocate_displacement(same, same, CVector::Ones(1)), SingularSystem);
}

}  // TEST_SUITE
