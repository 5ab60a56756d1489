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
#include <map>
#include <span>
#include <vector>

#include "vbs/fock_space.hpp"
#include "vbs/types.hpp"
#include "vbs/vibronic.hpp"

namespace vbs {

/// How much of the output state to keep.
///
/// n_max bounds the photon number of every output mode that appears in the
/// table. Internally the input is truncated by total photon number, at the
/// smallest total whose input tail is below tail_tolerance (never more than
/// modes * n_max, which is all the table can ever use). memory_limit_bytes
/// caps the size of that internal basis.
struct TruncationPolicy {
  int n_max = 12;
  double target_mass = 0.999;
  std::size_t memory_limit_bytes = std::size_t{2} << 30;
  double tail_tolerance = 1e-14;

  /// Throws InvalidArgument.
  void validate() const;
};

/// Joint output distribution P(m, n) over system modes m and ancilla modes n,
/// restricted to the patterns allowed by the truncation. Entries are in
/// lexicographic order of the joint pattern (m, n).
class TransitionTable {
 public:
  TransitionTable(int modes, int system_modes, std::vector<PhotonCount> patterns,
                  std::vector<double> probabilities, TruncationPolicy policy, int internal_cutoff,
                  bool memory_limited);

  int modes() const { return modes_; }
  int system_modes() const { return system_modes_; }
  int ancilla_modes() const { return modes_ - system_modes_; }
  std::size_t size() const { return probabilities_.size(); }

  std::span<const PhotonCount> pattern(std::size_t i) const {
    return {patterns_.data() + i * static_cast<std::size_t>(modes_),
            static_cast<std::size_t>(modes_)};
  }
  double probability(std::size_t i) const { return probabilities_[i]; }
  const std::vector<double>& probabilities() const { return probabilities_; }

  /// Sum of all entries; the probability the truncation accounts for.
  double captured_mass() const { return captured_mass_; }
  const TruncationPolicy& truncation() const { return policy_; }
  /// Total-photon cutoff of the internal basis.
  int internal_cutoff() const { return internal_cutoff_; }
  /// True when the memory ceiling, not the tail tolerance, set the cutoff.
  bool memory_limited() const { return memory_limited_; }

  /// Probability of a joint pattern; zero when it is not in the table.
  double lookup(std::span<const PhotonCount> pattern) const;

  /// Marginal over the listed modes, keyed by their photon numbers.
  std::map<std::vector<int>, double> marginal(const std::vector<int>& keep) const;

  /// Sum over entries of m_k and m_j m_k (not renormalised).
  RVector mean_photons() const;
  RMatrix photon_covariance() const;

 private:
  int modes_;
  int system_modes_;
  std::vector<PhotonCount> patterns_;
  std::vector<double> probabilities_;
  double captured_mass_;
  TruncationPolicy policy_;
  int internal_cutoff_;
  bool memory_limited_;
};

/// Output distribution of the circuit: product of squeezed coherent inputs,
/// then the interferometer. system_modes < 0 means half the circuit modes
/// (all of them when the count is odd). Throws InsufficientTruncation when
/// the captured mass is below policy.target_mass.
TransitionTable transition_table(const CircuitSpec& circuit, const TruncationPolicy& policy,
                                 int system_modes = -1);

/// Same as transition_table but never throws InsufficientTruncation.
TransitionTable truncated_table(const CircuitSpec& circuit, const TruncationPolicy& policy,
                                int system_modes = -1);

/// Starts at n_max = 8 and doubles until target_mass is reached. Throws
/// InsufficientTruncation when the memory ceiling stops further growth.
TransitionTable adaptive_transition_table(const CircuitSpec& circuit, double target_mass,
                                          std::size_t memory_limit_bytes = std::size_t{2} << 30,
                                          int system_modes = -1);

struct Stick {
  double omega_v;  ///< cm^-1
  double probability;
  std::size_t entry;  ///< index into the table
};

struct SpectrumBin {
  double center;  ///< cm^-1
  double intensity;
};

/// Franck-Condon profile: every table entry (m, n) sits at
/// omega_v = m . omega_final - n . omega_initial.
struct Spectrum {
  double bin_width = 10.0;
  std::vector<SpectrumBin> bins;  ///< contiguous, centres on multiples of bin_width
  std::vector<Stick> sticks;      ///< table order
  double normalization = 0.0;     ///< sum of intensities
};

/// Throws DimensionMismatch when the table does not match the molecule and
/// InvalidArgument for a non-positive bin width.
Spectrum build_fcp(const TransitionTable& table, const MolecularSystem& mol,
                   double bin_width = 10.0);

/// i.i.d. draws (table indices) from the renormalised table by inverse CDF
/// over the table order, driven by a 64-bit Mersenne twister.
/// Throws EmptyTable.
std::vector<std::size_t> sample_indices(const TransitionTable& table, std::size_t count,
                                        std::uint64_t seed);

std::vector<std::vector<int>> sample(const TransitionTable& table, std::size_t count,
                                     std::uint64_t seed);

}  // namespace vbs
