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

#include "bb84sdi/oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include "bb84sdi/error.hpp"
#include "bb84sdi/linalg/ops.hpp"
#include "bb84sdi/linalg/random.hpp"

namespace bb84sdi::oracles {

using entropy::phi;
using linalg::cplx;
using linalg::Rng;

double lemma1_rhs(double a_z, double fidelity) {
  const double arg = std::min(1.0, std::sqrt(a_z * a_z + 4.0 * fidelity * fidelity));
  return phi(a_z) - phi(arg);
}

double lemma1_gap(const entropy::CqStatePair& pair) {
  const double f = linalg::fidelity(pair.rho0(), pair.rho1());
  return entropy::conditional_HAE(pair) - lemma1_rhs(pair.bias(), f);
}

double lemma1_simplified_gap(const entropy::CqStatePair& pair) {
  const double f = linalg::fidelity(pair.rho0(), pair.rho1());
  return entropy::conditional_HAE(pair) - (1.0 - phi(std::min(1.0, 2.0 * f)));
}

namespace {

std::vector<cplx> project_alice(std::span<const cplx> psi, cplx c0, cplx c1, std::size_t rest) {
  // (<v| (x) I) psi with <v| = (c0, c1) already conjugated
  std::vector<cplx> out(rest);
  for (std::size_t j = 0; j < rest; ++j) out[j] = c0 * psi[j] + c1 * psi[rest + j];
  return out;
}

double norm_of(std::span<const cplx> v) {
  double s = 0.0;
  for (const cplx& x : v) s += std::norm(x);
  return std::sqrt(s);
}

}  // namespace

StateDecomposition decompose_state(const PureStateVector& psi, const ComplexMatrix& z_basis,
                                   double angle, std::size_t bob_dim, std::size_t eve_dim) {
  if (bob_dim == 0 || eve_dim == 0 || psi.dim() != 2 * bob_dim * eve_dim) {
    std::ostringstream msg;
    msg << "decompose_state: state dimension " << psi.dim() << " != 2 * " << bob_dim << " * "
        << eve_dim;
    throw ValidationError(msg.str());
  }
  if (z_basis.rows() != 2 || z_basis.cols() != 2)
    throw ValidationError("decompose_state: z basis must be 2x2");
  const ComplexMatrix check = z_basis.adjoint() * z_basis - ComplexMatrix::identity(2);
  if (check.max_abs() > 1e-10) throw ValidationError("decompose_state: z basis is not unitary");
  if (!(std::isfinite(angle) && angle >= 0.0 && angle <= std::numbers::pi))
    throw ValidationError("decompose_state: angle outside [0, pi]");

  const std::size_t rest = bob_dim * eve_dim;
  const auto amp = psi.amplitudes();
  const cplx z00 = z_basis(0, 0), z10 = z_basis(1, 0), z01 = z_basis(0, 1), z11 = z_basis(1, 1);
  // x basis in the computational basis
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  const cplx x00 = c * z00 + s * z01, x10 = c * z10 + s * z11;
  const cplx x01 = -s * z00 + c * z01, x11 = -s * z10 + c * z11;

  auto alpha = project_alice(amp, std::conj(z00), std::conj(z10), rest);
  auto alpha_p = project_alice(amp, std::conj(z01), std::conj(z11), rest);
  auto beta = project_alice(amp, std::conj(x00), std::conj(x10), rest);
  auto beta_p = project_alice(amp, std::conj(x01), std::conj(x11), rest);

  const std::array<std::size_t, 2> dims{bob_dim, eve_dim};
  const std::array<std::size_t, 1> keep_b{0};
  ComplexMatrix w = linalg::partial_trace_outer(alpha, alpha_p, dims, keep_b);
  w += w.adjoint();

  return StateDecomposition{PureStateVector(std::move(alpha)), PureStateVector(std::move(alpha_p)),
                            PureStateVector(std::move(beta)),  PureStateVector(std::move(beta_p)),
                            angle,                             std::move(w),
                            bob_dim,                           eve_dim};
}

double decomposition_residual(const StateDecomposition& d) {
  const double c = std::cos(d.angle / 2.0);
  const double s = std::sin(d.angle / 2.0);
  const auto a = d.alpha.amplitudes();
  const auto ap = d.alpha_prime.amplitudes();
  const auto b = d.beta.amplitudes();
  const auto bp = d.beta_prime.amplitudes();
  std::vector<cplx> r0(a.size()), r1(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    r0[j] = b[j] - (c * a[j] + s * ap[j]);
    r1[j] = bp[j] - (-s * a[j] + c * ap[j]);
  }
  return std::max(norm_of(r0), norm_of(r1));
}

namespace {

ComplexMatrix bob_marginal(const PureStateVector& v, std::size_t bob_dim, std::size_t eve_dim) {
  const std::array<std::size_t, 2> dims{bob_dim, eve_dim};
  const std::array<std::size_t, 1> keep{0};
  return linalg::partial_trace_outer(v.amplitudes(), v.amplitudes(), dims, keep);
}

DensityOperator eve_marginal(const PureStateVector& v, std::size_t bob_dim, std::size_t eve_dim) {
  const std::array<std::size_t, 2> dims{bob_dim, eve_dim};
  const std::array<std::size_t, 1> keep{1};
  return DensityOperator(linalg::partial_trace_outer(v.amplitudes(), v.amplitudes(), dims, keep));
}

double real_trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a * b).trace().real();
}

}  // namespace

PureCorrelators pure_correlators(const StateDecomposition& d, const ComplexMatrix& bob_x_observable) {
  if (bob_x_observable.rows() != d.bob_dim || bob_x_observable.cols() != d.bob_dim)
    throw ValidationError("pure_correlators: observable dimension does not match Bob's system");
  const auto diff = [&](const PureStateVector& u, const PureStateVector& v) {
    return bob_marginal(u, d.bob_dim, d.eve_dim) - bob_marginal(v, d.bob_dim, d.eve_dim);
  };
  PureCorrelators out;
  out.e_zx = real_trace_product(bob_x_observable, diff(d.alpha, d.alpha_prime));
  out.e_xx = real_trace_product(bob_x_observable, diff(d.beta, d.beta_prime));
  out.e_wx = real_trace_product(bob_x_observable, d.w_operator);
  return out;
}

double lemma2_gap(const StateDecomposition& d) {
  const DensityOperator a = eve_marginal(d.alpha, d.bob_dim, d.eve_dim);
  const DensityOperator ap = eve_marginal(d.alpha_prime, d.bob_dim, d.eve_dim);
  return 2.0 * linalg::fidelity(a, ap) - linalg::trace_norm(d.w_operator);
}

DensityOperator MixtureScenario::rho() const {
  return DensityOperator(tau0.matrix() * p0 + tau1.matrix() * p1);
}

DensityOperator MixtureScenario::sigma() const {
  return DensityOperator(tau0.matrix() * q0 + tau1.matrix() * q1);
}

double lemma3_gap(const MixtureScenario& sc) {
  for (double w : {sc.p0, sc.p1, sc.q0, sc.q1}) {
    if (!(w >= 0.0 && std::isfinite(w))) throw ValidationError("lemma3_gap: negative mixture weight");
  }
  if (sc.tau0.dim() != sc.tau1.dim()) throw ValidationError("lemma3_gap: dimension mismatch");
  const double f = linalg::fidelity(sc.rho(), sc.sigma());
  const double f_tau = linalg::fidelity(sc.tau0, sc.tau1);
  const double first = std::sqrt(sc.p0 * sc.q0) * sc.tau0.trace() + std::sqrt(sc.p1 * sc.q1) * sc.tau1.trace();
  const double cross = std::sqrt(sc.p0 * sc.q1) - std::sqrt(sc.p1 * sc.q0);
  return f * f - (first * first + cross * cross * f_tau * f_tau);
}

std::vector<double> symmetric_grid(double y, double step) {
  if (!(y >= 0.0 && y < 1.0)) throw ValidationError("symmetric_grid: y must lie in [0, 1)");
  if (!(step > 0.0 && std::isfinite(step))) throw ValidationError("symmetric_grid: step must be positive");
  const double half = std::sqrt(1.0 - y * y);
  const auto k_max = static_cast<long>(std::floor(half / step + 1e-9));
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(2 * k_max + 1));
  for (long k = -k_max; k <= k_max; ++k) {
    const double x = static_cast<double>(k) * step;
    if (x * x + y * y <= 1.0) grid.push_back(x);
  }
  return grid;
}

ConvexityReport convexity_probe(double y, std::span<const double> grid) {
  if (!(y >= 0.0 && y < 1.0)) throw ValidationError("convexity_probe: y must lie in [0, 1)");
  if (grid.empty()) throw ValidationError("convexity_probe: empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || grid[i] * grid[i] + y * y > 1.0 + 1e-12)
      throw ValidationError("convexity_probe: grid point outside x^2 + y^2 <= 1");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw ValidationError("convexity_probe: grid must be strictly ascending");
  }

  std::vector<double> f(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    f[i] = phi(x) - phi(std::min(1.0, std::sqrt(x * x + y * y)));
  }

  ConvexityReport rep;
  rep.y = y;
  rep.points = grid.size();
  rep.worst_residual = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const double x0 = grid[i - 1], x1 = grid[i], x2 = grid[i + 1];
    const double chord = (f[i - 1] * (x2 - x1) + f[i + 1] * (x1 - x0)) / (x2 - x0);
    const double r = f[i] - chord;
    rep.worst_residual = std::max(rep.worst_residual, r);
    if (r > kConvexityTolerance) ++rep.violations;
  }
  if (grid.size() < 3) rep.worst_residual = 0.0;

  rep.min_value = *std::min_element(f.begin(), f.end());
  rep.argmin_x = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (f[i] <= rep.min_value + 1e-12 && std::abs(grid[i]) < std::abs(rep.argmin_x))
      rep.argmin_x = grid[i];
  }
  return rep;
}

double fidelity_chain_check(const model::MeasurementModel& m) {
  const model::CorrelationSummary s = model::summarize(model::probabilities_from_model(m));
  const certify::ConditionFlags flags = certify::condition_check(s);
  if (!flags.precondition_ok || !flags.condition_ok)
    throw ValidationError("fidelity_chain_check: model violates the correlation condition");
  const model::EveDecomposition eve = model::eve_states(m);
  const double f = linalg::fidelity(eve.rho0_e, eve.rho1_e);
  return 4.0 * f * f - (s.e_xx * s.e_xx - s.e_zx * s.e_zx);
}

double lambda_bisection_oracle(const model::CorrelationSummary& s) {
  if (!(std::abs(s.e_xx) > std::abs(s.b_x)))
    throw ValidationError("lambda_bisection_oracle: precondition fails");
  if (certify::condition_check(s).condition_ok) return 1.0;
  constexpr int kSteps = 4096;
  double hi = 1.0;  // g(hi) < 0
  double lo = 0.0;
  for (int k = kSteps - 1; k >= 0; --k) {
    const double t = static_cast<double>(k) / kSteps;
    if (certify::lambda_residual(s, t) >= 0.0) {
      lo = t;
      break;
    }
    hi = t;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (certify::lambda_residual(s, mid) >= 0.0 ? lo : hi) = mid;
  }
  return std::sqrt(lo);
}

// ---------------------------------------------------------------------------

namespace {

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.next_u64() % (hi - lo + 1));
}

DensityOperator scaled(const DensityOperator& rho, double s) { return DensityOperator(rho.matrix() * s); }

}  // namespace

entropy::CqStatePair sample_cq_pair(std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t d_e = pick(rng, 1, 8);
  const std::size_t mode = pick(rng, 0, 2);
  if (mode == 0) {
    // measure A of a random rho_AE with a random qubit POVM
    const std::size_t dim = 2 * d_e;
    const DensityOperator rho = linalg::sample_ginibre_state(rng, dim, pick(rng, 1, dim));
    const auto povm = linalg::sample_povm(rng, 2);
    const ComplexMatrix id = ComplexMatrix::identity(d_e);
    const std::array<std::size_t, 2> dims{2, d_e};
    const std::array<std::size_t, 1> keep{1};
    auto conditional = [&](int a) {
      const ComplexMatrix m = linalg::tensor_product(povm[a].matrix(), id) * rho.matrix();
      ComplexMatrix r = linalg::partial_trace(m, dims, keep);
      // Hermitian up to roundoff; average out the skew part
      r = (r + r.adjoint()) * 0.5;
      return DensityOperator(r);
    };
    return {conditional(0), conditional(1)};
  }
  const double t = rng.uniform();
  const DensityOperator s0 = linalg::sample_ginibre_state(rng, d_e, pick(rng, 1, d_e));
  if (mode == 1) {
    const DensityOperator s1 = linalg::sample_ginibre_state(rng, d_e, pick(rng, 1, d_e));
    return {scaled(s0, t), scaled(s1, 1.0 - t)};
  }
  // nearly identical conditional states: the bound is close to tight here
  const double eps = 1e-3 * rng.uniform();
  const DensityOperator other = linalg::sample_ginibre_state(rng, d_e, d_e);
  const DensityOperator s1(s0.matrix() * (1.0 - eps) + other.matrix() * eps);
  return {scaled(s0, t), scaled(s1, 1.0 - t)};
}

DecompositionSample sample_decomposition(std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t d_b = pick(rng, 1, 4);
  const std::size_t d_e = pick(rng, 1, std::min<std::size_t>(8, 16 / d_b));
  PureStateVector psi(linalg::sample_pure_state(rng, 2 * d_b * d_e));
  const ComplexMatrix z = linalg::sample_haar_unitary(rng, 2);
  const double angle = std::numbers::pi * rng.uniform();
  const auto povm = linalg::sample_povm(rng, d_b);
  return {decompose_state(psi, z, angle, d_b, d_e), povm[0].matrix() - povm[1].matrix()};
}

MixtureScenario sample_mixture(std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t dim = pick(rng, 2, 3);
  const double s0 = 0.3 + 0.7 * rng.uniform();
  const double s1 = 0.3 + 0.7 * rng.uniform();
  const DensityOperator t0 = scaled(linalg::sample_ginibre_state(rng, dim, pick(rng, 1, dim)), s0);
  const DensityOperator t1 = scaled(linalg::sample_ginibre_state(rng, dim, pick(rng, 1, dim)), s1);
  auto weights = [&]() {
    double w0 = rng.uniform(), w1 = rng.uniform();
    const double total = w0 * s0 + w1 * s1;
    if (total > 1.0) {
      w0 /= total;
      w1 /= total;
    }
    return std::pair{w0, w1};
  };
  const auto [p0, p1] = weights();
  const auto [q0, q1] = weights();
  return MixtureScenario{t0, t1, p0, p1, q0, q1};
}

namespace {

template <typename Gap>
SuiteResult run_suite(std::string name, std::size_t n, std::uint64_t seed, Gap&& gap) {
  SuiteResult res;
  res.name = std::move(name);
  res.worst_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t s = linalg::mix_seed(seed, i);
    const std::optional<double> g = gap(s);
    if (!g) {
      ++res.skipped;
      continue;
    }
    ++res.instances;
    if (*g < res.worst_gap) {
      res.worst_gap = *g;
      res.worst_seed = s;
    }
  }
  if (res.instances == 0) res.worst_gap = 0.0;
  return res;
}

}  // namespace

SuiteResult run_lemma1_suite(std::size_t n, std::uint64_t seed) {
  return run_suite("lemma1", n, seed, [](std::uint64_t s) -> std::optional<double> {
    const entropy::CqStatePair pair = sample_cq_pair(s);
    return std::min(lemma1_gap(pair), lemma1_simplified_gap(pair));
  });
}

SuiteResult run_lemma2_suite(std::size_t n, std::uint64_t seed) {
  return run_suite("lemma2", n, seed, [](std::uint64_t s) -> std::optional<double> {
    const DecompositionSample sample = sample_decomposition(s);
    const StateDecomposition& d = sample.decomposition;
    if (d.alpha.norm() < 1e-6 || d.alpha_prime.norm() < 1e-6) return std::nullopt;
    return lemma2_gap(d);
  });
}

SuiteResult run_lemma3_suite(std::size_t n, std::uint64_t seed) {
  return run_suite("lemma3", n, seed,
                   [](std::uint64_t s) -> std::optional<double> { return lemma3_gap(sample_mixture(s)); });
}

}  // namespace bb84sdi::oracles
