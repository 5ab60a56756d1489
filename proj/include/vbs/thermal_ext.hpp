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

#include "vbs/gaussian_core.hpp"
#include "vbs/types.hpp"

namespace vbs {

/// Second radiation constant hc/k_B in cm K; converts a wavenumber over a
/// temperature into beta * hbar * omega.
inline constexpr double kSecondRadiationConstant = 1.4387769;

/// Bose-Einstein occupation 1/(exp(c2 omega / T) - 1) for a mode of
/// wavenumber omega (cm^-1) at temperature T (K). Exactly zero at T = 0.
/// Throws InvalidFrequency for omega <= 0 and InvalidArgument for T < 0.
double mean_occupation(double temperature_k, double omega_cm1);

/// Purification data for a product of thermal modes.
///
/// Each thermal mode k is the reduction of a two-mode squeezed vacuum with
/// angle theta_k, tanh(theta_k / 2) = sqrt(n_k / (n_k + 1)). F and G hold
/// cosh(theta_k / 2) = sqrt(n_k + 1) and sinh(theta_k / 2) = sqrt(n_k).
class ThermalExtension {
 public:
  /// Single temperature for every mode.
  ThermalExtension(const RVector& omega_cm1, double temperature_k);
  /// One temperature per mode.
  ThermalExtension(const RVector& omega_cm1, const RVector& temperatures_k);

  Eigen::Index modes() const { return omega_.size(); }
  const RVector& omega() const { return omega_; }
  const RVector& temperatures() const { return temperatures_; }
  const RVector& n_bar() const { return n_bar_; }
  const RVector& theta() const { return theta_; }
  const RVector& f() const { return f_; }
  const RVector& g() const { return g_; }

 private:
  RVector omega_;
  RVector temperatures_;
  RVector n_bar_;
  RVector theta_;
  RVector f_;
  RVector g_;
};

/// Two-mode squeezing angles theta_k = 2 artanh(exp(-beta_k hbar omega_k / 2)).
RVector purification_angles(const ThermalExtension& ext);

/// Embeds an M-mode transform and a thermal input into the 2M-mode
/// zero-temperature transform of (T_M (x) I) V(beta): system modes first,
/// ancilla modes second,
///
///     X' = [[X F, Y G], [G, 0]],   Y' = [[Y F, X G], [0, F]],   z' = (z, 0).
///
/// Throws DimensionMismatch.
BogoliubovTransform extend_transform(const BogoliubovTransform& t, const ThermalExtension& ext);

}  // namespace vbs
