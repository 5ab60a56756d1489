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

#include "vbs/fock_space.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "vbs/errors.hpp"
#include "vbs/permanent.hpp"

namespace vbs {

namespace {

// Number of r-tuples of non-negative integers with sum <= b.
std::size_t bounded_compositions(int r, int b) {
  if (b < 0) return 0;
  std::size_t c = 1;
  for (int i = 1; i <= r; ++i) {
    c = c * static_cast<std::size_t>(b + i) / static_cast<std::size_t>(i);
  }
  return c;
}

struct TwoModeGate {
  int first;  // modes (first, first + 1)
  Eigen::Matrix2cd matrix;
};

// Sector matrices of the two-mode rotation with mode matrix g: column q of
// blocks[K] is the image of |q, K - q>. Built column by column from
// |q, K - q> = b1^dagger |q - 1, K - q> / sqrt(q), which only ever applies
// creation operators and so stays well conditioned for large K.
std::vector<CMatrix> two_mode_blocks(const Eigen::Matrix2cd& g, int max_photons) {
  std::vector<CMatrix> blocks;
  blocks.reserve(static_cast<std::size_t>(max_photons) + 1);
  blocks.push_back(CMatrix::Ones(1, 1));
  for (int k = 1; k <= max_photons; ++k) {
    const CMatrix& prev = blocks.back();
    CMatrix cur = CMatrix::Zero(k + 1, k + 1);
    for (int q = 0; q <= k; ++q) {
      // Raise the first input mode when possible, else the second.
      const int src = q > 0 ? q - 1 : 0;
      const Complex ca = q > 0 ? g(0, 0) : g(0, 1);
      const Complex cb = q > 0 ? g(1, 0) : g(1, 1);
      const double norm = 1.0 / std::sqrt(static_cast<double>(q > 0 ? q : k));
      for (int p = 0; p < k; ++p) {
        const Complex v = prev(p, src);
        if (v == Complex{}) continue;
        // a1^dagger: |p, k-1-p> -> sqrt(p+1) |p+1, k-1-p>
        cur(p + 1, q) += norm * ca * std::sqrt(static_cast<double>(p + 1)) * v;
        // a2^dagger: |p, k-1-p> -> sqrt(k-p) |p, k-p>
        cur(p, q) += norm * cb * std::sqrt(static_cast<double>(k - p)) * v;
      }
    }
    blocks.push_back(std::move(cur));
  }
  return blocks;
}

void apply_two_mode(const FockBasis& basis, CVector& amps, int first, int second,
                    const std::vector<CMatrix>& blocks) {
  const auto modes = static_cast<std::size_t>(basis.modes());
  std::vector<PhotonCount> work(modes);
  std::vector<std::size_t> members;
  CVector gathered;
  for (std::size_t s = 0; s < basis.size(); ++s) {
    const auto p = basis.pattern(s);
    if (p[static_cast<std::size_t>(first)] != 0) continue;
    const int k = p[static_cast<std::size_t>(second)];
    std::copy(p.begin(), p.end(), work.begin());
    members.resize(static_cast<std::size_t>(k) + 1);
    gathered.resize(k + 1);
    for (int q = 0; q <= k; ++q) {
      work[static_cast<std::size_t>(first)] = static_cast<PhotonCount>(q);
      work[static_cast<std::size_t>(second)] = static_cast<PhotonCount>(k - q);
      members[static_cast<std::size_t>(q)] = q == 0 ? s : basis.index(work);
      gathered(q) = amps(static_cast<Eigen::Index>(members[static_cast<std::size_t>(q)]));
    }
    const CVector out = blocks[static_cast<std::size_t>(k)] * gathered;
    for (int q = 0; q <= k; ++q) {
      amps(static_cast<Eigen::Index>(members[static_cast<std::size_t>(q)])) = out(q);
    }
  }
}

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

}  // namespace

FockBasis::FockBasis(int modes, int cutoff) : modes_(modes), cutoff_(cutoff), size_(0) {
  if (modes < 1) throw InvalidArgument("Fock basis needs at least one mode");
  if (cutoff < 0 || cutoff > 65535) {
    throw InvalidArgument("photon cutoff out of range: " + std::to_string(cutoff));
  }
  if (dimension(modes, cutoff) > 2e8) {
    throw InvalidArgument("Fock basis with " + std::to_string(modes) + " modes and cutoff " +
                          std::to_string(cutoff) + " is too large");
  }
  size_ = bounded_compositions(modes, cutoff);

  const auto n = static_cast<std::size_t>(cutoff + 1);
  offsets_.assign(static_cast<std::size_t>(modes) * n * n, 0);
  for (int k = 0; k < modes; ++k) {
    const int rest = modes - k - 1;
    for (int prefix = 0; prefix <= cutoff; ++prefix) {
      std::size_t acc = 0;
      for (int v = 0; v <= cutoff - prefix; ++v) {
        offsets_[(static_cast<std::size_t>(k) * n + static_cast<std::size_t>(prefix)) * n +
                 static_cast<std::size_t>(v)] = acc;
        acc += bounded_compositions(rest, cutoff - prefix - v);
      }
    }
  }

  patterns_.reserve(size_ * static_cast<std::size_t>(modes));
  std::vector<PhotonCount> cur(static_cast<std::size_t>(modes), 0);
  auto fill = [&](auto&& self, int k, int budget) -> void {
    if (k == modes) {
      patterns_.insert(patterns_.end(), cur.begin(), cur.end());
      return;
    }
    for (int v = 0; v <= budget; ++v) {
      cur[static_cast<std::size_t>(k)] = static_cast<PhotonCount>(v);
      self(self, k + 1, budget - v);
    }
    cur[static_cast<std::size_t>(k)] = 0;
  };
  fill(fill, 0, cutoff);
}

double FockBasis::dimension(int modes, int cutoff) {
  double c = 1.0;
  for (int i = 1; i <= modes; ++i) c = c * (cutoff + i) / i;
  return c;
}

int FockBasis::total(std::size_t index) const {
  int t = 0;
  for (PhotonCount v : pattern(index)) t += v;
  return t;
}

std::size_t FockBasis::index(std::span<const PhotonCount> pattern) const {
  std::size_t idx = 0;
  int prefix = 0;
  for (int k = 0; k < modes_; ++k) {
    const int v = pattern[static_cast<std::size_t>(k)];
    idx += offset(k, prefix, v);
    prefix += v;
  }
  return idx;
}

FockState::FockState(std::shared_ptr<const FockBasis> basis, CVector amplitudes)
    : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)) {
  if (!basis_ || static_cast<std::size_t>(amplitudes_.size()) != basis_->size()) {
    throw DimensionMismatch("amplitude vector does not match the Fock basis");
  }
}

FockState FockState::product(const std::vector<CVector>& modes, int cutoff) {
  auto basis = std::make_shared<const FockBasis>(static_cast<int>(modes.size()), cutoff);
  CVector amps(static_cast<Eigen::Index>(basis->size()));
  for (std::size_t s = 0; s < basis->size(); ++s) {
    const auto p = basis->pattern(s);
    Complex a{1.0, 0.0};
    for (std::size_t k = 0; k < modes.size() && a != Complex{}; ++k) {
      a = p[k] < modes[k].size() ? a * modes[k](p[k]) : Complex{};
    }
    amps(static_cast<Eigen::Index>(s)) = a;
  }
  return {std::move(basis), std::move(amps)};
}

RVector FockState::total_photon_distribution() const {
  RVector dist = RVector::Zero(basis_->cutoff() + 1);
  for (std::size_t s = 0; s < basis_->size(); ++s) {
    dist(basis_->total(s)) += std::norm(amplitudes_(static_cast<Eigen::Index>(s)));
  }
  return dist;
}

CVector squeezed_coherent_state(double s, Complex gamma, int n_max) {
  if (n_max < 0) throw InvalidArgument("n_max must be non-negative");
  const double ch = std::cosh(s);
  const double sh = std::sinh(s);
  CVector c(n_max + 1);
  c(0) = std::exp(-0.5 * std::norm(gamma) - 0.5 * std::tanh(s) * gamma * gamma) / std::sqrt(ch);
  for (int n = 0; n < n_max; ++n) {
    Complex next = gamma * c(n);
    if (n > 0) next += sh * std::sqrt(static_cast<double>(n)) * c(n - 1);
    c(n + 1) = next / (ch * std::sqrt(static_cast<double>(n + 1)));
  }
  return c;
}

FockState apply_interferometer(const FockState& state, const CMatrix& u, double tol) {
  const int n = state.basis().modes();
  if (u.rows() != n || u.cols() != n) {
    throw DimensionMismatch("interferometer is " + std::to_string(u.rows()) + "x" +
                            std::to_string(u.cols()) + " but the state has " +
                            std::to_string(n) + " modes");
  }
  const double res = unitarity_residual(u);
  if (!(res <= tol)) {
    throw NonUnitary("interferometer is not unitary (residual " + std::to_string(res) + ")");
  }

  // Mode matrix V (input k -> sum_j V_jk a_j^dagger) and its reduction
  // G_L ... G_1 V = D with nearest-neighbour rotations G.
  CMatrix w = u.conjugate();
  std::vector<TwoModeGate> gates;
  for (int col = 0; col + 1 < n; ++col) {
    for (int row = n - 1; row > col; --row) {
      const Complex a = w(row - 1, col);
      const Complex b = w(row, col);
      if (b == Complex{}) continue;
      const double r = std::hypot(std::abs(a), std::abs(b));
      Eigen::Matrix2cd g;
      g << std::conj(a) / r, std::conj(b) / r, -b / r, a / r;
      const CMatrix rows = w.middleRows(row - 1, 2);
      w.middleRows(row - 1, 2) = g * rows;
      gates.push_back({row - 1, g});
    }
  }

  FockState out = state;
  const FockBasis& basis = out.basis();
  CVector& amps = out.amplitudes();
  const int cutoff = basis.cutoff();

  // V = G_1^dagger ... G_L^dagger D: phases act first.
  for (std::size_t s = 0; s < basis.size(); ++s) {
    const auto p = basis.pattern(s);
    Complex phase{1.0, 0.0};
    for (int k = 0; k < n; ++k) {
      const auto m = p[static_cast<std::size_t>(k)];
      if (m != 0) phase *= std::pow(w(k, k) / std::abs(w(k, k)), static_cast<int>(m));
    }
    amps(static_cast<Eigen::Index>(s)) *= phase;
  }
  for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
    const Eigen::Matrix2cd g = it->matrix.adjoint();
    apply_two_mode(basis, amps, it->first, it->first + 1, two_mode_blocks(g, cutoff));
  }
  return out;
}

std::vector<std::vector<int>> sector_patterns(int modes, int photons) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(modes), 0);
  auto fill = [&](auto&& self, int k, int budget) -> void {
    if (k == modes - 1) {
      cur[static_cast<std::size_t>(k)] = budget;
      out.push_back(cur);
      return;
    }
    for (int v = 0; v <= budget; ++v) {
      cur[static_cast<std::size_t>(k)] = v;
      self(self, k + 1, budget - v);
    }
  };
  if (modes > 0 && photons >= 0) fill(fill, 0, photons);
  return out;
}

CMatrix interferometer_block(const CMatrix& u, int photons) {
  const auto n = static_cast<int>(u.rows());
  if (u.cols() != n) throw DimensionMismatch("interferometer must be square");
  const CMatrix v = u.conjugate();
  const auto patterns = sector_patterns(n, photons);
  const auto dim = static_cast<Eigen::Index>(patterns.size());

  auto expand = [](const std::vector<int>& p) {
    std::vector<int> idx;
    for (std::size_t k = 0; k < p.size(); ++k) idx.insert(idx.end(), p[k], static_cast<int>(k));
    return idx;
  };
  auto log_norm = [](const std::vector<int>& p) {
    double acc = 0.0;
    for (int v : p) acc += log_factorial(v);
    return acc;
  };

  CMatrix block(dim, dim);
  CMatrix sub(photons, photons);
  for (Eigen::Index r = 0; r < dim; ++r) {
    const auto rows = expand(patterns[static_cast<std::size_t>(r)]);
    for (Eigen::Index c = 0; c < dim; ++c) {
      const auto cols = expand(patterns[static_cast<std::size_t>(c)]);
      for (int i = 0; i < photons; ++i) {
        for (int j = 0; j < photons; ++j) {
          sub(i, j) = v(rows[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)]);
        }
      }
      const double scale = std::exp(-0.5 * (log_norm(patterns[static_cast<std::size_t>(r)]) +
                                            log_norm(patterns[static_cast<std::size_t>(c)])));
      block(r, c) = ryser_permanent(sub) * scale;
    }
  }
  return block;
}

}  // namespace vbs
