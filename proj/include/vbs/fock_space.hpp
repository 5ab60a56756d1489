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
#include <memory>
#include <span>
#include <vector>

#include "vbs/types.hpp"

namespace vbs {

using PhotonCount = std::uint16_t;

/// Fock basis on `modes` modes with total photon number <= cutoff, ordered
/// lexicographically by photon pattern. Passive interferometers conserve the
/// total photon number, so this space is closed under them.
class FockBasis {
 public:
  FockBasis(int modes, int cutoff);

  /// Number of patterns, C(cutoff + modes, modes). Returned as double so
  /// callers can plan memory before building anything.
  static double dimension(int modes, int cutoff);

  int modes() const { return modes_; }
  int cutoff() const { return cutoff_; }
  std::size_t size() const { return size_; }

  std::span<const PhotonCount> pattern(std::size_t index) const {
    return {patterns_.data() + index * static_cast<std::size_t>(modes_),
            static_cast<std::size_t>(modes_)};
  }
  int total(std::size_t index) const;

  /// Position of a pattern; the pattern must lie in the basis.
  std::size_t index(std::span<const PhotonCount> pattern) const;

 private:
  std::size_t offset(int mode, int prefix, int value) const {
    const auto n = static_cast<std::size_t>(cutoff_ + 1);
    return offsets_[(static_cast<std::size_t>(mode) * n + static_cast<std::size_t>(prefix)) * n +
                    static_cast<std::size_t>(value)];
  }

  int modes_;
  int cutoff_;
  std::size_t size_;
  std::vector<PhotonCount> patterns_;
  std::vector<std::size_t> offsets_;
};

/// Amplitudes over a FockBasis.
class FockState {
 public:
  FockState(std::shared_ptr<const FockBasis> basis, CVector amplitudes);

  /// Product state from per-mode amplitude vectors (index = photon number).
  static FockState product(const std::vector<CVector>& modes, int cutoff);

  const FockBasis& basis() const { return *basis_; }
  std::shared_ptr<const FockBasis> shared_basis() const { return basis_; }
  const CVector& amplitudes() const { return amplitudes_; }
  CVector& amplitudes() { return amplitudes_; }

  double norm_squared() const { return amplitudes_.squaredNorm(); }
  /// Probability in each total-photon-number sector 0..cutoff.
  RVector total_photon_distribution() const;

 private:
  std::shared_ptr<const FockBasis> basis_;
  CVector amplitudes_;
};

/// Fock amplitudes <n|S_s D(gamma)|0>, n = 0..n_max, with the exact
/// normalisation of the untruncated state. Uses the recursion that follows
/// from (cosh s a - sinh s a^dagger)|psi> = gamma |psi>.
CVector squeezed_coherent_state(double s, Complex gamma, int n_max);

/// Applies the rotation operator R_U (R_U^dagger a^dagger R_U = U a^dagger),
/// which sends input mode k to sum_j conj(U_jk) a_j^dagger. The unitary is
/// factored into nearest-neighbour two-mode rotations and phases, and each
/// two-mode rotation is applied exactly inside every photon-number sector.
/// Throws NonUnitary or DimensionMismatch.
FockState apply_interferometer(const FockState& state, const CMatrix& u, double tol = 1e-10);

/// Matrix <m|R_U|n> on the sector with exactly `photons` photons, patterns in
/// lexicographic order, entries from permanents of repeated-row/column
/// submatrices (Ryser). Independent of apply_interferometer.
CMatrix interferometer_block(const CMatrix& u, int photons);

/// Patterns with exactly `photons` photons on `modes` modes, lexicographic.
std::vector<std::vector<int>> sector_patterns(int modes, int photons);

}  // namespace vbs
