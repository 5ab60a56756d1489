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

// Acceptance checks A1-A8. Prints one line per criterion and exits non-zero
// if any of them fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "vbs/fock_oracle.hpp"
#include "vbs/phase_space.hpp"
#include "vbs/thermal_ext.hpp"
#include "vbs/vibronic.hpp"

using namespace vbs;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double negative_mass(const Spectrum& s) {
  double p = 0.0;
  for (const Stick& st : s.sticks) {
    if (st.omega_v < 0.0) p += st.probability;
  }
  return p;
}

Outcome a1() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto c = compile_circuit(so2_photodetachment(), 650.0);
  const double dt = seconds_since(t0);
  RVector s(4);
  s << 0.7419, 0.6701, 0.3932, 0.3080;
  RMatrix cl(4, 4), cr(4, 4);
  cl << 0.0963, 0.0114, 0.7505, -0.6537, 0.7297, 0.6789, -0.0738, 0.0346, 0.0169, 0.0147, 0.6553,
      0.7550, 0.6767, -0.7340, -0.0435, 0.0369;
  cr << 0.0386, 0.0299, 0.7448, 0.6656, 0.7197, -0.6937, -0.0230, 0.0151, 0.0205, -0.0171, 0.6659,
      -0.7456, 0.6929, 0.7194, -0.0373, -0.0308;
  const double es = (c.squeezing - s).cwiseAbs().maxCoeff();
  const double el = (c.decomposition->c_left.cwiseAbs() - cl.cwiseAbs()).cwiseAbs().maxCoeff();
  const double er = (c.decomposition->c_right.cwiseAbs() - cr.cwiseAbs()).cwiseAbs().maxCoeff();
  return {es <= 1e-3 && el <= 2e-3 && er <= 2e-3 && dt <= 1.0,
          "max|ds|=" + fmt("%.2e", es) + " (tol 1e-3), max||C_L||=" + fmt("%.2e", el) +
              ", max||C_R||=" + fmt("%.2e", er) + " (tol 2e-3), " + fmt("%.3f", dt) + " s (limit 1 s)"};
}

Outcome a2() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto mol = so2_photodetachment();
  double at0 = 0.0, at650 = 0.0;
  for (double t = 0.0; t <= 650.0; t += 50.0) {
    const double m = compile_circuit(mol, t).squeezing_db().cwiseAbs().maxCoeff();
    if (t == 0.0) at0 = m;
    if (t == 650.0) at650 = m;
  }
  const double dt = seconds_since(t0);
  return {at650 <= 6.5 && at0 < 1.0 && dt <= 5.0,
          "max|dB| 650 K=" + fmt("%.4f", at650) + " (<= 6.5), 0 K=" + fmt("%.4f", at0) +
              " (< 1), sweep " + fmt("%.3f", dt) + " s (limit 5 s)"};
}

Outcome a3() {
  const auto mol = so2_photodetachment();
  const auto hot = build_fcp(adaptive_transition_table(compile_circuit(mol, 650.0), 0.999), mol);
  const auto cold = build_fcp(adaptive_transition_table(compile_circuit(mol, 0.0), 0.999), mol);
  const double h = negative_mass(hot);
  const double c = negative_mass(cold);
  return {h > 0.0 && c <= 1e-10,
          "P(omega_v<0) 650 K=" + fmt("%.4e", h) + " (> 0), 0 K=" + fmt("%.2e", c) + " (<= 1e-10)"};
}

Outcome a4() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20260401);
  double cons = 0.0, round = 0.0, reloc = 0.0, assoc = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 1 + rep % 8;
    const auto a = testing::random_transform(n, rng);
    const auto b = testing::random_transform(n, rng);
    const auto c = testing::random_transform(n, rng);
    cons = std::max({cons, a.residuals().max(), compose(a, b).residuals().max()});
    const auto d = decompose(a);
    round = std::max({round, max_abs(CMatrix(d.x_reconstructed() - a.x())),
                      max_abs(CMatrix(d.y_reconstructed() - a.y()))});
    reloc = std::max(reloc, (a.z() - a.x() * d.gamma_prime - a.y() * d.gamma_prime.conjugate()).norm());
    const auto l = compose(compose(a, b), c);
    const auto r = compose(a, compose(b, c));
    const double scale = std::max(1.0, max_abs(l.y()));
    assoc = std::max({assoc, max_abs(CMatrix(l.x() - r.x())) / scale,
                      max_abs(CMatrix(l.y() - r.y())) / scale,
                      (l.z() - r.z()).cwiseAbs().maxCoeff() / scale});
  }
  const double dt = seconds_since(t0);
  return {cons <= 1e-10 && round <= 1e-9 && reloc <= 1e-10 && assoc <= 1e-9 && dt <= 30.0,
          "200 transforms: constraints " + fmt("%.1e", cons) + ", round trip " + fmt("%.1e", round) +
              ", relocation " + fmt("%.1e", reloc) + ", associativity " + fmt("%.1e", assoc) + ", " +
              fmt("%.2f", dt) + " s"};
}

Outcome a5() {
  const auto mol = so2_photodetachment();
  bool ok = true;
  std::string detail;
  for (double t : {0.0, 300.0, 650.0}) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto c = compile_circuit(mol, t);
    TruncationPolicy p;
    p.n_max = 30;
    const auto table = transition_table(c, p);
    const auto pm = photon_moments(state_from_transform(*c.source, RVector::Zero(4)));
    const double dm = (table.mean_photons() - pm.mean).cwiseAbs().maxCoeff();
    const double dv = (table.photon_covariance().diagonal() - pm.covariance.diagonal()).cwiseAbs().maxCoeff();
    const double dt = seconds_since(t0);
    ok = ok && table.captured_mass() >= 0.999 && dm <= 1e-4 && dv <= 1e-4 && dt <= 120.0;
    detail += fmt("%g K: ", t) + "mass " + fmt("%.12f", table.captured_mass()) + ", dmean " +
              fmt("%.1e", dm) + ", dvar " + fmt("%.1e", dv) + ", " + fmt("%.2f s; ", dt);
  }
  return {ok, detail + "tol 1e-4"};
}

Outcome a6() {
  const auto mol = so2_photodetachment();
  double occ = 0.0, cov = 0.0;
  for (double t : {0.0, 300.0, 650.0}) {
    const auto st = state_from_transform(build_vibronic_transform(mol, t), RVector::Zero(4));
    const ThermalExtension ext(mol.omega_initial(), t);
    RVector oracle(2);
    for (Eigen::Index k = 0; k < 2; ++k) oracle(k) = testing::occupation_ld(t, mol.omega_initial()(k));
    occ = std::max(occ, (photon_moments(reduce(st, {2, 3})).mean - oracle).cwiseAbs().maxCoeff());
    // The system half carries the displaced, squeezed, rotated thermal state.
    const auto direct = state_from_transform(build_doktorov(mol), ext.n_bar());
    cov = std::max(cov, max_abs(RMatrix(reduce(st, {0, 1}).cov() - direct.cov())));
  }
  return {occ <= 1e-8 && cov <= 1e-9,
          "ancilla occupation error " + fmt("%.1e", occ) + " (tol 1e-8), system covariance error " +
              fmt("%.1e", cov) + " (tol 1e-9)"};
}

Outcome a7() {
  const auto so2 = so2_photodetachment();
  TruncationPolicy p;
  p.n_max = 20;
  const auto cold = transition_table(compile_circuit(so2, 0.0), p);
  double excited = 0.0;
  for (const auto& [n, prob] : cold.marginal({2, 3})) {
    if (n[0] != 0 || n[1] != 0) excited += prob;
  }

  const RVector w = (RVector(2) << 450.0, 1000.0).finished();
  const MolecularSystem id(w, w, RMatrix::Identity(2, 2), RVector::Zero(2));
  const double temp = 650.0;
  p.n_max = 40;
  const auto table = transition_table(compile_circuit(id, temp), p);
  const ThermalExtension ext(w, temp);
  double off = 0.0, geo = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto pat = table.pattern(i);
    if (pat[0] != pat[2] || pat[1] != pat[3]) {
      off = std::max(off, table.probability(i));
      continue;
    }
    double expect = 1.0;
    for (int k = 0; k < 2; ++k) {
      const double n = ext.n_bar()(k);
      expect *= std::pow(n / (n + 1), pat[static_cast<std::size_t>(k)]) / (n + 1);
    }
    geo = std::max(geo, std::abs(expect - table.probability(i)));
  }
  return {excited <= 1e-10 && off <= 1e-6 && geo <= 1e-6,
          "0 K ancilla excitation " + fmt("%.1e", excited) + " (tol 1e-10); identity molecule: max P(m!=n) " +
              fmt("%.1e", off) + ", geometric-law error " + fmt("%.1e", geo) + " (tol 1e-6)"};
}

Outcome a8() {
  const auto table = adaptive_transition_table(compile_circuit(so2_photodetachment(), 650.0), 0.999);
  const std::size_t count = 100000;
  const std::uint64_t seed = 20260401;
  const auto first = sample_indices(table, count, seed);
  const auto second = sample_indices(table, count, seed);
  std::vector<double> hist(table.size(), 0.0);
  for (std::size_t i : first) hist[i] += 1.0;
  double tv = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    tv += std::abs(hist[i] / count - table.probability(i) / table.captured_mass());
  }
  tv *= 0.5;
  const bool same = first == second;
  return {tv <= 0.02 && same,
          "TV distance " + fmt("%.4f", tv) + " over " + std::to_string(table.size()) +
              " patterns (tol 0.02), rerun identical: " + (same ? "yes" : "no")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"A1 650 K decomposition", a1},     {"A2 squeezing dB bounds", a2},
      {"A3 hot bands", a3},               {"A4 algebraic invariants", a4},
      {"A5 dual-oracle moments", a5},     {"A6 purification trace-back", a6},
      {"A7 hierarchy reductions", a7},    {"A8 sampler fidelity", a8},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
