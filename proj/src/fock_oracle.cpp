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

#include "vbs/fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <utility>

#include "vbs/errors.hpp"

namespace vbs {

namespace {

// Rough peak footprint of one internal basis state: the pattern, the input
// and output amplitudes, and the retained table entry.
double bytes_per_state(int modes) { return 48.0 + 4.0 * modes; }

int resolve_system_modes(int modes, int requested) {
  if (requested < 0) return modes % 2 == 0 ? modes / 2 : modes;
  if (requested > modes) {
    throw DimensionMismatch("system mode count " + std::to_string(requested) +
                            " exceeds circuit modes " + std::to_string(modes));
  }
  return requested;
}

bool lex_less(std::span<const PhotonCount> a, std::span<const PhotonCount> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

void TruncationPolicy::validate() const {
  if (n_max < 0) throw InvalidArgument("n_max must be non-negative");
  if (!(target_mass > 0.0 && target_mass <= 1.0)) {
    throw InvalidArgument("target_mass must lie in (0, 1]");
  }
  if (!(tail_tolerance >= 0.0)) throw InvalidArgument("tail_tolerance must be non-negative");
}

TransitionTable::TransitionTable(int modes, int system_modes, std::vector<PhotonCount> patterns,
                                 std::vector<double> probabilities, TruncationPolicy policy,
                                 int internal_cutoff, bool memory_limited)
    : modes_(modes),
      system_modes_(system_modes),
      patterns_(std::move(patterns)),
      probabilities_(std::move(probabilities)),
      captured_mass_(0.0),
      policy_(policy),
      internal_cutoff_(internal_cutoff),
      memory_limited_(memory_limited) {
  if (modes_ < 1 || system_modes_ < 0 || system_modes_ > modes_ ||
      patterns_.size() != probabilities_.size() * static_cast<std::size_t>(modes_)) {
    throw DimensionMismatch("inconsistent transition table layout");
  }
  for (double p : probabilities_) captured_mass_ += p;
}

double TransitionTable::lookup(std::span<const PhotonCount> pattern) const {
  if (pattern.size() != static_cast<std::size_t>(modes_)) {
    throw DimensionMismatch("pattern length does not match the table");
  }
  std::size_t lo = 0;
  std::size_t hi = size();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (lex_less(this->pattern(mid), pattern)) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo < size() && std::ranges::equal(this->pattern(lo), pattern)) return probabilities_[lo];
  return 0.0;
}

std::map<std::vector<int>, double> TransitionTable::marginal(const std::vector<int>& keep) const {
  for (int k : keep) {
    if (k < 0 || k >= modes_) throw DimensionMismatch("marginal mode index out of range");
  }
  std::map<std::vector<int>, double> out;
  std::vector<int> key(keep.size());
  for (std::size_t i = 0; i < size(); ++i) {
    const auto p = pattern(i);
    for (std::size_t j = 0; j < keep.size(); ++j) key[j] = p[static_cast<std::size_t>(keep[j])];
    out[key] += probabilities_[i];
  }
  return out;
}

RVector TransitionTable::mean_photons() const {
  RVector mean = RVector::Zero(modes_);
  for (std::size_t i = 0; i < size(); ++i) {
    const auto p = pattern(i);
    for (int k = 0; k < modes_; ++k) mean(k) += probabilities_[i] * p[static_cast<std::size_t>(k)];
  }
  return mean;
}

RMatrix TransitionTable::photon_covariance() const {
  RMatrix second = RMatrix::Zero(modes_, modes_);
  RVector m(modes_);
  for (std::size_t i = 0; i < size(); ++i) {
    const auto p = pattern(i);
    for (int k = 0; k < modes_; ++k) m(k) = p[static_cast<std::size_t>(k)];
    second.noalias() += probabilities_[i] * m * m.transpose();
  }
  const RVector mean = mean_photons();
  return second - mean * mean.transpose();
}

TransitionTable truncated_table(const CircuitSpec& circuit, const TruncationPolicy& policy,
                                int system_modes) {
  policy.validate();
  circuit.validate(1e-9);
  const auto modes = static_cast<int>(circuit.modes());
  const int sys = resolve_system_modes(modes, system_modes);

  // Nothing above modes * n_max total photons can reach the table.
  const int cap = static_cast<int>(
      std::min<long long>(static_cast<long long>(modes) * policy.n_max, 65535));

  std::vector<CVector> inputs(static_cast<std::size_t>(modes));
  RVector total = RVector::Zero(cap + 1);
  total(0) = 1.0;
  for (int k = 0; k < modes; ++k) {
    inputs[static_cast<std::size_t>(k)] =
        squeezed_coherent_state(circuit.squeezing(k), circuit.input_amplitudes(k), cap);
    const RVector single = inputs[static_cast<std::size_t>(k)].cwiseAbs2();
    RVector next = RVector::Zero(cap + 1);
    for (int a = 0; a <= cap; ++a) {
      if (total(a) == 0.0) continue;
      for (int b = 0; a + b <= cap; ++b) next(a + b) += total(a) * single(b);
    }
    total = std::move(next);
  }

  int cutoff = cap;
  double cumulative = 0.0;
  for (int n = 0; n <= cap; ++n) {
    cumulative += total(n);
    if (1.0 - cumulative <= policy.tail_tolerance) {
      cutoff = n;
      break;
    }
  }
  bool memory_limited = false;
  while (cutoff > 0 && FockBasis::dimension(modes, cutoff) * bytes_per_state(modes) >
                           static_cast<double>(policy.memory_limit_bytes)) {
    --cutoff;
    memory_limited = true;
  }

  for (auto& v : inputs) v.conservativeResize(cutoff + 1);
  const FockState out =
      apply_interferometer(FockState::product(inputs, cutoff), circuit.interferometer, 1e-9);

  const FockBasis& basis = out.basis();
  std::vector<PhotonCount> patterns;
  std::vector<double> probabilities;
  for (std::size_t s = 0; s < basis.size(); ++s) {
    const auto p = basis.pattern(s);
    if (std::ranges::any_of(p, [&](PhotonCount v) { return v > policy.n_max; })) continue;
    patterns.insert(patterns.end(), p.begin(), p.end());
    probabilities.push_back(std::norm(out.amplitudes()(static_cast<Eigen::Index>(s))));
  }
  return {modes, sys, std::move(patterns), std::move(probabilities), policy, cutoff,
          memory_limited};
}

TransitionTable transition_table(const CircuitSpec& circuit, const TruncationPolicy& policy,
                                 int system_modes) {
  TransitionTable table = truncated_table(circuit, policy, system_modes);
  if (table.captured_mass() < policy.target_mass) {
    throw InsufficientTruncation("captured mass " + std::to_string(table.captured_mass()) +
                                     " below target " + std::to_string(policy.target_mass) +
                                     " at n_max " + std::to_string(policy.n_max),
                                 table.captured_mass());
  }
  return table;
}

TransitionTable adaptive_transition_table(const CircuitSpec& circuit, double target_mass,
                                          std::size_t memory_limit_bytes, int system_modes) {
  TruncationPolicy policy;
  policy.n_max = 8;
  policy.target_mass = target_mass;
  policy.memory_limit_bytes = memory_limit_bytes;
  for (;;) {
    TransitionTable table = truncated_table(circuit, policy, system_modes);
    if (table.captured_mass() >= target_mass) return table;
    if (table.memory_limited() || policy.n_max >= 32768) {
      throw InsufficientTruncation("captured mass " + std::to_string(table.captured_mass()) +
                                       " below target " + std::to_string(target_mass) +
                                       " within the memory ceiling",
                                   table.captured_mass());
    }
    policy.n_max *= 2;
  }
}

Spectrum build_fcp(const TransitionTable& table, const MolecularSystem& mol, double bin_width) {
  if (!(bin_width > 0.0) || !std::isfinite(bin_width)) {
    throw InvalidArgument("bin width must be positive");
  }
  const auto m = static_cast<int>(mol.modes());
  if (table.system_modes() != m || (table.ancilla_modes() != 0 && table.ancilla_modes() != m)) {
    throw DimensionMismatch("transition table has " + std::to_string(table.system_modes()) +
                            "+" + std::to_string(table.ancilla_modes()) +
                            " modes but the molecule has " + std::to_string(m));
  }

  Spectrum spec;
  spec.bin_width = bin_width;
  spec.sticks.reserve(table.size());
  long long lo = 0;
  long long hi = -1;
  std::vector<long long> bin_of(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto p = table.pattern(i);
    double w = 0.0;
    for (int k = 0; k < m; ++k) w += p[static_cast<std::size_t>(k)] * mol.omega_final()(k);
    for (int k = 0; k < table.ancilla_modes(); ++k) {
      w -= p[static_cast<std::size_t>(m + k)] * mol.omega_initial()(k);
    }
    spec.sticks.push_back({w, table.probability(i), i});
    bin_of[i] = std::llround(w / bin_width);
    if (hi < lo) {
      lo = hi = bin_of[i];
    } else {
      lo = std::min(lo, bin_of[i]);
      hi = std::max(hi, bin_of[i]);
    }
  }
  if (hi >= lo) {
    spec.bins.resize(static_cast<std::size_t>(hi - lo + 1));
    for (long long b = lo; b <= hi; ++b) {
      spec.bins[static_cast<std::size_t>(b - lo)] = {static_cast<double>(b) * bin_width, 0.0};
    }
    for (std::size_t i = 0; i < table.size(); ++i) {
      spec.bins[static_cast<std::size_t>(bin_of[i] - lo)].intensity += table.probability(i);
    }
  }
  for (const auto& b : spec.bins) spec.normalization += b.intensity;
  return spec;
}

std::vector<std::size_t> sample_indices(const TransitionTable& table, std::size_t count,
                                        std::uint64_t seed) {
  if (table.size() == 0 || !(table.captured_mass() > 0.0)) {
    throw EmptyTable("cannot sample from a table with no probability mass");
  }
  std::vector<double> cdf(table.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    acc += table.probability(i);
    cdf[i] = acc;
  }
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> out;
  out.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u * acc);
    out.push_back(std::min(static_cast<std::size_t>(it - cdf.begin()), table.size() - 1));
  }
  return out;
}

std::vector<std::vector<int>> sample(const TransitionTable& table, std::size_t count,
                                     std::uint64_t seed) {
  std::vector<std::vector<int>> out;
  out.reserve(count);
  for (std::size_t i : sample_indices(table, count, seed)) {
    const auto p = table.pattern(i);
    out.emplace_back(p.begin(), p.end());
  }
  return out;
}

}  // namespace vbs
