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

#include "vbs/thermal_ext.hpp"

#include <cmath>
#include <string>

#include "vbs/errors.hpp"

namespace vbs {

namespace {

double reduced_energy(double temperature_k, double omega_cm1) {
  return kSecondRadiationConstant * omega_cm1 / temperature_k;
}

void check_mode(double temperature_k, double omega_cm1) {
  if (!(omega_cm1 > 0.0) || !std::isfinite(omega_cm1)) {
    throw InvalidFrequency("mode frequency must be positive, got " + std::to_string(omega_cm1));
  }
  if (!(temperature_k >= 0.0) || !std::isfinite(temperature_k)) {
    throw InvalidArgument("temperature must be non-negative, got " +
                          std::to_string(temperature_k));
  }
}

}  // namespace

double mean_occupation(double temperature_k, double omega_cm1) {
  check_mode(temperature_k, omega_cm1);
  if (temperature_k == 0.0) return 0.0;
  return 1.0 / std::expm1(reduced_energy(temperature_k, omega_cm1));
}

ThermalExtension::ThermalExtension(const RVector& omega_cm1, double temperature_k)
    : ThermalExtension(omega_cm1, RVector::Constant(omega_cm1.size(), temperature_k)) {}

ThermalExtension::ThermalExtension(const RVector& omega_cm1, const RVector& temperatures_k)
    : omega_(omega_cm1), temperatures_(temperatures_k) {
  const Eigen::Index m = omega_.size();
  if (m == 0) throw DimensionMismatch("thermal extension needs at least one mode");
  if (temperatures_.size() != m) {
    throw DimensionMismatch("got " + std::to_string(temperatures_.size()) +
                            " temperatures for " + std::to_string(m) + " modes");
  }
  n_bar_.resize(m);
  theta_.resize(m);
  f_.resize(m);
  g_.resize(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    check_mode(temperatures_(k), omega_(k));
    if (temperatures_(k) == 0.0) {
      n_bar_(k) = 0.0;
      theta_(k) = 0.0;
      f_(k) = 1.0;
      g_(k) = 0.0;
      continue;
    }
    const double x = reduced_energy(temperatures_(k), omega_(k));
    n_bar_(k) = 1.0 / std::expm1(x);
    theta_(k) = 2.0 * std::atanh(std::exp(-0.5 * x));
    f_(k) = std::sqrt(n_bar_(k) + 1.0);
    g_(k) = std::sqrt(n_bar_(k));
  }
}

RVector purification_angles(const ThermalExtension& ext) { return ext.theta(); }

BogoliubovTransform extend_transform(const BogoliubovTransform& t, const ThermalExtension& ext) {
  const Eigen::Index m = t.dim();
  if (ext.modes() != m) {
    throw DimensionMismatch("transform has " + std::to_string(m) +
                            " modes but thermal extension has " + std::to_string(ext.modes()));
  }
  const auto f = ext.f().cast<Complex>().asDiagonal();
  const auto g = ext.g().cast<Complex>().asDiagonal();

  CMatrix x = CMatrix::Zero(2 * m, 2 * m);
  CMatrix y = CMatrix::Zero(2 * m, 2 * m);
  x.topLeftCorner(m, m) = t.x() * f;
  x.topRightCorner(m, m) = t.y() * g;
  x.bottomLeftCorner(m, m) = ext.g().cast<Complex>().asDiagonal().toDenseMatrix();
  y.topLeftCorner(m, m) = t.y() * f;
  y.topRightCorner(m, m) = t.x() * g;
  y.bottomRightCorner(m, m) = ext.f().cast<Complex>().asDiagonal().toDenseMatrix();

  CVector z = CVector::Zero(2 * m);
  z.head(m) = t.z();
  return {std::move(x), std::move(y), std::move(z)};
}

}  // namespace vbs
