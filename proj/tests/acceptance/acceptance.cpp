// Copyright 2026 The bb84sdi Authors
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

// Acceptance run: one PASS/FAIL line per criterion. Library results are
// cross-checked against the Eigen-based reference routines in
// tests/support wherever an independent evaluation exists.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "bb84sdi/attacks.hpp"
#include "bb84sdi/certify.hpp"
#include "bb84sdi/linalg/ops.hpp"
#include "bb84sdi/linalg/random.hpp"
#include "bb84sdi/model.hpp"
#include "bb84sdi/oracles.hpp"
#include "reference.hpp"

namespace {

using namespace bb84sdi;
using model::CorrelationSummary;
using model::MeasurementModel;
using model::Setting;

constexpr std::uint64_t kSeed = 20240531;

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
  std::printf("criterion %d  %-22s %s  %s\n", id, name, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// 1 ------------------------------------------------------------------------
void soundness() {
  const std::vector<std::size_t> dims{2, 3, 4};
  const auto t0 = std::chrono::steady_clock::now();
  const attacks::ScanReport rep = attacks::soundness_scan(2000, kSeed, dims);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  // recompute every sample's Devetak-Winter rate with the reference
  double worst_ref = 1e300;
  std::size_t ref_violations = 0;
  for (const attacks::ScanEntry& e : rep.entries) {
    const attacks::AttackSample s = attacks::random_attack(e.seed, e.bob_dim);
    const double g = std::max(ref::devetak_winter(s.model), 0.0) - e.certified_rate;
    worst_ref = std::min(worst_ref, g);
    if (g < -attacks::kSoundnessTolerance) ++ref_violations;
  }
  const bool ok = rep.count == 2000 && rep.violations.empty() && ref_violations == 0 && secs < 60.0;
  report(1, "soundness_scan", ok,
         fmt("n=2000 min_gap=%.3e (seed %llu, d_B %zu) ref_min_gap=%.3e positive_rate=%zu time=%.2fs", rep.min_gap,
             static_cast<unsigned long long>(rep.argmin_seed), rep.argmin_bob_dim, worst_ref,
             rep.positive_rate_count, secs));
}

// 2 ------------------------------------------------------------------------
void shor_preskill() {
  std::vector<double> grid;
  for (int k = 1; k <= 100; ++k) grid.push_back(k / 100.0);
  const auto records = attacks::noise_sweep(grid);
  double worst = 0.0;
  for (const auto& r : records) {
    const double expected = std::max(0.0, 1.0 - 2.0 * ref::phi(r.visibility));
    worst = std::max(worst, std::abs(r.certificate.rate - expected));
  }
  // root of 1 - 2 h(delta) by bisection on the reference entropy
  double lo = 0.0, hi = 0.5;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (1.0 - 2.0 * ref::h(mid) > 0.0 ? lo : hi) = mid;
  }
  const double threshold = 0.5 * (lo + hi);
  const double lib_threshold = attacks::shor_preskill_threshold();
  const bool ok = records.size() == 100 && worst <= 1e-12 && std::abs(threshold - 0.1100) <= 0.0005 &&
                  std::abs(lib_threshold - threshold) <= 1e-12;
  report(2, "shor_preskill_sweep", ok,
         fmt("max|rate-(1-2phi(v))|=%.3e threshold=%.6f (library %.6f)", worst, threshold, lib_threshold));
}

// 3 ------------------------------------------------------------------------
void counterexample() {
  const attacks::AttackSample s = attacks::counterexample_attack();
  const MeasurementModel& m = s.model;
  // correlators from the reference probabilities
  auto corr = [&](Setting u, Setting v) {
    double e = 0.0;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) e += (a == b ? 1.0 : -1.0) * ref::probability(m, u, a, v, b);
    return e;
  };
  double a_z = 0.0;
  for (int b = 0; b < 2; ++b) a_z += ref::probability(m, Setting::z, 0, Setting::z, b) - ref::probability(m, Setting::z, 1, Setting::z, b);
  const double e_zz = corr(Setting::z, Setting::z), e_xx = corr(Setting::x, Setting::x), e_zx = corr(Setting::z, Setting::x);
  const bool summary_ok = std::abs(a_z - 1) <= 1e-12 && std::abs(e_zz - 1) <= 1e-12 && std::abs(e_xx - 1) <= 1e-12 &&
                          std::abs(e_zx) <= 1e-12 && std::abs(s.summary.a_z - 1) <= 1e-12 &&
                          std::abs(s.summary.e_zz - 1) <= 1e-12 && std::abs(s.summary.e_xx - 1) <= 1e-12 &&
                          std::abs(s.summary.e_zx) <= 1e-12;
  const bool ok = summary_ok && std::abs(s.certificate.lambda) <= 1e-12 && s.certificate.rate == 0.0;
  report(3, "counterexample", ok,
         fmt("(A_z,E_zz,E_xx,E_zx)=(%.3g,%.3g,%.3g,%.3g) lambda=%.3g rate=%.3g", s.summary.a_z, s.summary.e_zz,
             s.summary.e_xx, s.summary.e_zx, s.certificate.lambda, s.certificate.rate));
}

// 4 ------------------------------------------------------------------------
double ref_lemma1(const entropy::CqStatePair& p) {
  const auto r0 = ref::to_eigen(p.rho0().matrix()), r1 = ref::to_eigen(p.rho1().matrix());
  const double hae = ref::entropy(r0) + ref::entropy(r1) - ref::entropy(r0 + r1);
  const double f = ref::fidelity(r0, r1);
  const double a = std::real(r0.trace() - r1.trace());
  return hae - (ref::phi(a) - ref::phi(std::min(1.0, std::sqrt(a * a + 4 * f * f))));
}

double ref_lemma2(const oracles::StateDecomposition& d) {
  auto amat = [&](const linalg::PureStateVector& v) {
    ref::Mat m(static_cast<Eigen::Index>(d.bob_dim), static_cast<Eigen::Index>(d.eve_dim));
    for (std::size_t b = 0; b < d.bob_dim; ++b)
      for (std::size_t e = 0; e < d.eve_dim; ++e)
        m(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(e)) = v.amplitudes()[b * d.eve_dim + e];
    return m;
  };
  const ref::Mat a = amat(d.alpha), ap = amat(d.alpha_prime);
  return 2.0 * ref::fidelity(a.transpose() * a.conjugate(), ap.transpose() * ap.conjugate()) -
         ref::trace_norm_svd(a * ap.adjoint() + ap * a.adjoint());
}

double ref_lemma3(const oracles::MixtureScenario& s) {
  const auto t0 = ref::to_eigen(s.tau0.matrix()), t1 = ref::to_eigen(s.tau1.matrix());
  const double f = ref::fidelity(s.p0 * t0 + s.p1 * t1, s.q0 * t0 + s.q1 * t1);
  const double first = std::sqrt(s.p0 * s.q0) * std::real(t0.trace()) + std::sqrt(s.p1 * s.q1) * std::real(t1.trace());
  const double cross = std::sqrt(s.p0 * s.q1) - std::sqrt(s.p1 * s.q0);
  const double f01 = ref::fidelity(t0, t1);
  return f * f - (first * first + cross * cross * f01 * f01);
}

void lemmas() {
  const std::size_t n = 500;
  const auto r1 = oracles::run_lemma1_suite(n, kSeed);
  const auto r2 = oracles::run_lemma2_suite(n, kSeed);
  const auto r3 = oracles::run_lemma3_suite(n, kSeed);
  double w1 = 1e300, w2 = 1e300, w3 = 1e300;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t s = linalg::mix_seed(kSeed, i);
    w1 = std::min(w1, ref_lemma1(oracles::sample_cq_pair(s)));
    const auto d = oracles::sample_decomposition(s).decomposition;
    if (d.alpha.norm() >= 1e-6 && d.alpha_prime.norm() >= 1e-6) w2 = std::min(w2, ref_lemma2(d));
    w3 = std::min(w3, ref_lemma3(oracles::sample_mixture(s)));
  }
  const double tol = oracles::kGapTolerance;
  const bool ok = r1.passed() && r2.passed() && r3.passed() && r1.instances == n && r3.instances == n &&
                  r2.instances + r2.skipped == n && w1 >= -tol && w2 >= -tol && w3 >= -tol;
  report(4, "lemma_suites", ok,
         fmt("worst gaps lemma1=%.3e lemma2=%.3e (%zu skipped) lemma3=%.3e; reference %.3e %.3e %.3e", r1.worst_gap,
             r2.worst_gap, r2.skipped, r3.worst_gap, w1, w2, w3));
}

// 5 ------------------------------------------------------------------------
void appendix() {
  linalg::Rng rng(kSeed);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const linalg::ComplexMatrix m = linalg::sample_ginibre_matrix(rng, 2, 2);
    worst = std::max(worst, std::abs(linalg::trace_norm_2x2(m) - ref::trace_norm_svd(ref::to_eigen(m))));
  }
  const double y = 0.8;
  const auto grid = oracles::symmetric_grid(y, 0.01);
  const oracles::ConvexityReport rep = oracles::convexity_probe(y, grid);
  // independent midpoint test on the same grid
  auto f = [&](double x) { return ref::phi(x) - ref::phi(std::sqrt(x * x + y * y)); };
  std::size_t mid_fail = 0;
  double argmin = grid.front();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (f(grid[i]) < f(argmin) - 1e-12 || (std::abs(f(grid[i]) - f(argmin)) <= 1e-12 && std::abs(grid[i]) < std::abs(argmin)))
      argmin = grid[i];
    if (i == 0 || i + 1 == grid.size()) continue;
    if (f(grid[i]) > 0.5 * (f(grid[i - 1]) + f(grid[i + 1])) + 1e-12) ++mid_fail;
  }
  const bool ok = worst <= 1e-10 && rep.passed() && rep.worst_residual <= oracles::kConvexityTolerance && mid_fail == 0 &&
                  argmin == 0.0;
  report(5, "appendix_checks", ok,
         fmt("2x2 trace norm max err=%.3e; convexity y=0.8 points=%zu violations=%zu worst=%.3e argmin=%g", worst,
             rep.points, rep.violations + mid_fail, rep.worst_residual, rep.argmin_x));
}

// 6 ------------------------------------------------------------------------
void lambda_solver() {
  linalg::Rng rng(kSeed + 6);
  double worst = 0.0;
  int n = 0;
  while (n < 500) {
    const CorrelationSummary s = ref::random_summary(rng);
    const auto flags = certify::condition_check(s);
    if (!flags.precondition_ok || flags.condition_ok) continue;
    ++n;
    worst = std::max(worst, std::abs(certify::solve_lambda(s) - ref::lambda_by_bisection(s)));
  }
  report(6, "lambda_solver", worst <= 1e-8, fmt("500 failing summaries, max|closed-bisection|=%.3e", worst));
}

// 7 ------------------------------------------------------------------------
void dominance() {
  linalg::Rng rng(kSeed + 7);
  certify::CertifyOptions simplified;
  simplified.variant = certify::Variant::simplified;
  double worst = 1e300;
  int n = 0, rejected = 0;
  while (n < 1000) {
    const CorrelationSummary s = ref::random_summary(rng);
    const auto flags = certify::condition_check(s);
    bool defined = flags.precondition_ok;
    if (defined) {
      const double l = certify::solve_lambda(s);
      defined = s.a_z * s.a_z + l * l * (s.e_xx * s.e_xx - s.e_zx * s.e_zx) <= 1.0;
    }
    if (!defined) {
      ++rejected;
      continue;
    }
    ++n;
    worst = std::min(worst, certify::certified_rate(s).raw_rate - certify::certified_rate(s, simplified).raw_rate);
  }
  report(7, "dominance", worst >= -1e-12,
         fmt("1000 summaries (%d redrawn outside the domain), min(improved-simplified)=%.3e", rejected, worst));
}

// 8 ------------------------------------------------------------------------
void fidelity_chain() {
  linalg::Rng rng(kSeed + 8);
  double worst = 1e300, worst_lib = 1e300;
  int n = 0;
  while (n < 500) {
    const MeasurementModel m = attacks::sample_attack_model(rng, 2 + rng.next_u64() % 3);
    const CorrelationSummary s = model::summarize(model::probabilities_from_model(m));
    const auto flags = certify::condition_check(s);
    if (!flags.precondition_ok || !flags.condition_ok) continue;
    ++n;
    const auto eve = model::eve_states(m);
    const double f = ref::fidelity(ref::to_eigen(eve.rho0_e.matrix()), ref::to_eigen(eve.rho1_e.matrix()));
    worst = std::min(worst, 4 * f * f - (s.e_xx * s.e_xx - s.e_zx * s.e_zx));
    worst_lib = std::min(worst_lib, oracles::fidelity_chain_check(m));
  }
  report(8, "fidelity_chain", worst >= -1e-9 && worst_lib >= -1e-9,
         fmt("500 models, min 4F^2-(Exx^2-Ezx^2)=%.3e (library %.3e)", worst, worst_lib));
}

// 9 ------------------------------------------------------------------------
std::array<double, 3> bloch(const ref::Mat& a) {
  ref::Mat sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sy << 0, ref::cplx(0, -1), ref::cplx(0, 1), 0;
  sz << 1, 0, 0, -1;
  return {0.5 * std::real((a * sx).trace()), 0.5 * std::real((a * sy).trace()), 0.5 * std::real((a * sz).trace())};
}

void w_basis() {
  linalg::Rng rng(kSeed + 9);
  double worst = 0.0, worst_lib = 0.0;
  for (int i = 0; i < 500; ++i) {
    const std::size_t d_b = 2 + i % 4;
    const auto rho = linalg::sample_ginibre_state(rng, 2 * d_b, 1 + rng.next_u64() % (2 * d_b));
    const auto proj = [&] { return model::TwoOutcomePovm::projective(linalg::sample_pure_state(rng, 2)); };
    const auto povm = [&] {
      const auto e = linalg::sample_povm(rng, d_b);
      return model::TwoOutcomePovm(e[0], e[1]);
    };
    const auto alice_z = proj(), alice_x = proj();
    const MeasurementModel m(rho, {alice_z, alice_x}, {povm(), povm()});

    const auto nz = bloch(ref::to_eigen(alice_z.observable())), nx = bloch(ref::to_eigen(alice_x.observable()));
    const double c = std::clamp(nz[0] * nx[0] + nz[1] * nx[1] + nz[2] * nx[2], -1.0, 1.0);
    const double angle = std::acos(c), s = std::sin(angle);
    std::array<double, 3> nw{};
    for (int k = 0; k < 3; ++k) nw[k] = (nx[k] - c * nz[k]) / s;
    ref::Mat aw(2, 2);
    aw << nw[2], ref::cplx(nw[0], -nw[1]), ref::cplx(nw[0], nw[1]), -nw[2];
    const ref::Mat bx = ref::to_eigen(m.bob(Setting::x).observable());
    ref::Mat op(2 * static_cast<Eigen::Index>(d_b), 2 * static_cast<Eigen::Index>(d_b));
    const auto db = static_cast<Eigen::Index>(d_b);
    for (Eigen::Index r = 0; r < 2; ++r)
      for (Eigen::Index q = 0; q < 2; ++q) op.block(r * db, q * db, db, db) = aw(r, q) * bx;
    const double e_wx = std::real((op * ref::to_eigen(m.rho_ab().matrix())).trace());

    auto corr = [&](Setting u, Setting v) {
      double e = 0.0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) e += (a == b ? 1.0 : -1.0) * ref::probability(m, u, a, v, b);
      return e;
    };
    const double e_xx = corr(Setting::x, Setting::x), e_zx = corr(Setting::z, Setting::x);
    worst = std::max(worst, std::abs(e_xx - (c * e_zx + s * e_wx)));

    const auto lib = model::w_basis_correlator(m);
    const auto sum = model::summarize(model::probabilities_from_model(m));
    worst_lib = std::max(worst_lib, std::abs(sum.e_xx - (std::cos(lib.angle) * sum.e_zx + std::sin(lib.angle) * lib.e_wx)));
  }
  report(9, "w_basis_identity", worst <= 1e-9 && worst_lib <= 1e-9,
         fmt("500 projective-Alice models, max residual=%.3e (library %.3e)", worst, worst_lib));
}

}  // namespace

int main() {
  std::printf("seed %llu\n", static_cast<unsigned long long>(kSeed));
  soundness();
  shor_preskill();
  counterexample();
  lemmas();
  appendix();
  lambda_solver();
  dominance();
  fidelity_chain();
  w_basis();
  std::printf("%s: %d of 9 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
