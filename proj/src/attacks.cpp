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

#include "bb84sdi/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <sstream>
#include <thread>

#include "bb84sdi/entropy.hpp"
#include "bb84sdi/error.hpp"
#include "bb84sdi/linalg/ops.hpp"

namespace bb84sdi::attacks {

using linalg::ComplexMatrix;
using linalg::cplx;
using linalg::DensityOperator;
using linalg::HermitianOperator;
using linalg::Rng;
using model::Setting;
using model::TwoOutcomePovm;

AttackSample evaluate(const MeasurementModel& m, std::uint64_t seed, const certify::CertifyOptions& opts) {
  const model::ProbabilityTable probs = model::probabilities_from_model(m);
  const CorrelationSummary summary = model::summarize(probs);
  const entropy::JointTable& zz = probs.at(Setting::z, Setting::z);

  certify::CertifyOptions o = opts;
  if (o.hab_mode == certify::HabMode::exact && !o.zz_table) o.zz_table = zz;
  const RateCertificate cert = certify::certified_rate(summary, o);

  const model::EveDecomposition eve = model::eve_states(m);
  const double dw = entropy::devetak_winter(eve.cq_pair(), zz);
  return AttackSample{seed, m, summary, dw, cert, std::max(dw, 0.0) - cert.rate};
}

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.next_u64() % (hi - lo + 1));
}

ComplexMatrix random_effect(Rng& rng, std::size_t dim) { return linalg::sample_povm(rng, dim)[0].matrix(); }

/// |Phi+> with Bob's qubit in the first two levels.
ComplexMatrix phi_plus(std::size_t bob_dim) {
  std::vector<cplx> psi(2 * bob_dim);
  psi[0] = kInvSqrt2;
  psi[bob_dim + 1] = kInvSqrt2;
  return ComplexMatrix::outer(psi, psi);
}

/// Projector onto cos(t/2)|0> + e^{i p} sin(t/2)|1>, padded with `extra`
/// on the diagonal of levels >= 2.
ComplexMatrix qubit_projector(std::size_t dim, double theta, double phase, std::span<const double> extra = {}) {
  ComplexMatrix p(dim, dim);
  const cplx a = std::cos(theta / 2.0);
  const cplx b = std::polar(std::sin(theta / 2.0), phase);
  p(0, 0) = a * std::conj(a);
  p(0, 1) = a * std::conj(b);
  p(1, 0) = b * std::conj(a);
  p(1, 1) = b * std::conj(b);
  for (std::size_t k = 2; k < dim; ++k) p(k, k) = extra.empty() ? 0.0 : extra[k - 2];
  return p;
}

MeasurementModel unstructured_model(Rng& rng, std::size_t bob_dim) {
  const std::size_t dim = 2 * bob_dim;
  DensityOperator rho = linalg::sample_ginibre_state(rng, dim, pick(rng, 1, dim));
  auto povm = [&](std::size_t d) {
    auto e = linalg::sample_povm(rng, d);
    return TwoOutcomePovm(e[0], e[1]);
  };
  std::array<TwoOutcomePovm, 2> alice{povm(2), povm(2)};
  std::array<TwoOutcomePovm, 2> bob{povm(bob_dim), povm(bob_dim)};
  return MeasurementModel(std::move(rho), std::move(alice), std::move(bob));
}

MeasurementModel near_ideal_model(Rng& rng, std::size_t bob_dim, double degenerate_max) {
  const std::size_t dim = 2 * bob_dim;
  const double noise = 0.15 * rng.uniform();
  const ComplexMatrix mixed = linalg::sample_ginibre_state(rng, dim, dim).matrix();
  DensityOperator rho(phi_plus(bob_dim) * (1.0 - noise) + mixed * noise);

  // Alice: tilted z and x bases, a little random POVM, a degenerate part
  auto alice_povm = [&](double theta0, double degenerate) {
    const double theta = theta0 + 0.2 * (rng.uniform() - 0.5);
    const double phase = 0.4 * (rng.uniform() - 0.5);
    const double eta = 0.1 * rng.uniform();
    const double zeta = degenerate * rng.uniform();
    const double fixed = rng.uniform() < 0.5 ? 1.0 : 0.0;  // {I,0} or {0,I}
    ComplexMatrix e = qubit_projector(2, theta, phase) * (1.0 - eta - zeta) + random_effect(rng, 2) * eta +
                      ComplexMatrix::identity(2) * (zeta * fixed);
    return TwoOutcomePovm::from_effect(e);
  };
  std::array<TwoOutcomePovm, 2> alice{alice_povm(0.0, degenerate_max),
                                      alice_povm(std::acos(0.0), 0.3 * degenerate_max)};

  auto bob_povm = [&](double theta0) {
    std::vector<double> extra(bob_dim > 2 ? bob_dim - 2 : 0);
    for (double& x : extra) x = rng.uniform() < 0.5 ? 1.0 : 0.0;
    const double eta = 0.1 * rng.uniform();
    const double theta = theta0 + 0.2 * (rng.uniform() - 0.5);
    ComplexMatrix e = qubit_projector(bob_dim, theta, 0.0, extra) * (1.0 - eta) + random_effect(rng, bob_dim) * eta;
    return TwoOutcomePovm::from_effect(e);
  };
  std::array<TwoOutcomePovm, 2> bob{bob_povm(0.0), bob_povm(std::acos(0.0))};
  return MeasurementModel(std::move(rho), std::move(alice), std::move(bob));
}

}  // namespace

MeasurementModel sample_attack_model(Rng& rng, std::size_t bob_dim) {
  if (bob_dim < 2 || bob_dim > model::kMaxBobDim) {
    std::ostringstream msg;
    msg << "sample_attack_model: Bob dimension " << bob_dim << " outside [2, " << model::kMaxBobDim << "]";
    throw ValidationError(msg.str());
  }
  const std::size_t family = pick(rng, 0, 2);
  if (family == 0) return unstructured_model(rng, bob_dim);
  return near_ideal_model(rng, bob_dim, family == 1 ? 0.15 : 0.6);
}

AttackSample random_attack(std::uint64_t seed, std::size_t bob_dim) {
  Rng rng(seed);
  return evaluate(sample_attack_model(rng, bob_dim), seed);
}

MeasurementModel ideal_model(std::size_t bob_dim) {
  if (bob_dim < 2 || bob_dim > model::kMaxBobDim) throw ValidationError("ideal_model: Bob dimension must be in [2, 8]");
  const double half_pi = std::acos(0.0);
  std::array<TwoOutcomePovm, 2> alice{TwoOutcomePovm::from_effect(qubit_projector(2, 0.0, 0.0)),
                                      TwoOutcomePovm::from_effect(qubit_projector(2, half_pi, 0.0))};
  std::array<TwoOutcomePovm, 2> bob{TwoOutcomePovm::from_effect(qubit_projector(bob_dim, 0.0, 0.0)),
                                    TwoOutcomePovm::from_effect(qubit_projector(bob_dim, half_pi, 0.0))};
  return MeasurementModel(DensityOperator(phi_plus(bob_dim)), std::move(alice), std::move(bob));
}

MeasurementModel werner_model(double v) {
  if (!(v >= 0.0 && v <= 1.0)) throw ValidationError("werner_model: visibility outside [0, 1]");
  const MeasurementModel ideal = ideal_model(2);
  DensityOperator rho(phi_plus(2) * v + ComplexMatrix::identity(4) * ((1.0 - v) / 4.0));
  return MeasurementModel(std::move(rho), {ideal.alice(Setting::z), ideal.alice(Setting::x)},
                          {ideal.bob(Setting::z), ideal.bob(Setting::x)});
}

MeasurementModel counterexample_model() {
  const MeasurementModel ideal = ideal_model(2);
  const auto always0 = [](std::size_t d) { return TwoOutcomePovm::from_effect(ComplexMatrix::identity(d)); };
  return MeasurementModel(ideal.rho_ab(), {always0(2), ideal.alice(Setting::x)}, {always0(2), ideal.bob(Setting::x)});
}

AttackSample counterexample_attack() { return evaluate(counterexample_model()); }

MeasurementModel degenerate_model(double c) {
  if (!(c >= 0.0 && c <= 1.0)) throw ValidationError("degenerate_model: c outside [0, 1]");
  const MeasurementModel ideal = ideal_model(2);
  return MeasurementModel(ideal.rho_ab(),
                          {TwoOutcomePovm::from_effect(ComplexMatrix::identity(2) * c), ideal.alice(Setting::x)},
                          {ideal.bob(Setting::z), ideal.bob(Setting::x)});
}

CorrelationSummary white_noise_summary(double v) {
  if (!(v >= 0.0 && v <= 1.0)) throw ValidationError("white_noise_summary: visibility outside [0, 1]");
  CorrelationSummary s;
  s.e_zz = v;
  s.e_xx = v;
  return s;
}

ScanReport soundness_scan(std::size_t n, std::uint64_t seed, std::span<const std::size_t> bob_dims,
                          unsigned workers) {
  if (n == 0) throw ValidationError("soundness_scan: n must be at least 1");
  if (bob_dims.empty()) throw ValidationError("soundness_scan: no Bob dimensions given");
  for (std::size_t d : bob_dims) {
    if (d < 2 || d > model::kMaxBobDim) throw ValidationError("soundness_scan: Bob dimension outside [2, 8]");
  }
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));

  std::vector<ScanEntry> outcomes(n);
  std::vector<std::exception_ptr> errors(workers);
  auto seed_of = [&](std::size_t i) { return linalg::mix_seed(seed, i); };
  auto dim_of = [&](std::size_t i) { return bob_dims[i % bob_dims.size()]; };

  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < n; i += workers) {
            const AttackSample s = random_attack(seed_of(i), dim_of(i));
            outcomes[i] = {s.seed, dim_of(i), s.certificate.rate, s.dw_rate, s.gap};
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  ScanReport rep;
  rep.count = n;
  rep.histogram.assign(kHistogramEdges.size() + 1, 0);
  rep.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const ScanEntry& o = outcomes[i];
    if (o.gap < rep.min_gap) {
      rep.min_gap = o.gap;
      rep.argmin_seed = o.seed;
      rep.argmin_bob_dim = o.bob_dim;
    }
    const auto bin = std::upper_bound(kHistogramEdges.begin(), kHistogramEdges.end(), o.gap) - kHistogramEdges.begin();
    ++rep.histogram[static_cast<std::size_t>(bin)];
    if (o.certified_rate > 0.0) ++rep.positive_rate_count;
    if (o.gap < -kSoundnessTolerance) rep.violations.push_back(random_attack(seed_of(i), dim_of(i)));
  }
  rep.entries = std::move(outcomes);
  return rep;
}

namespace {

ComplexMatrix random_hermitian_direction(Rng& rng, std::size_t dim) {
  ComplexMatrix g = linalg::sample_ginibre_matrix(rng, dim, dim);
  ComplexMatrix h = (g + g.adjoint()) * 0.5;
  return h * (1.0 / h.frobenius_norm());
}

/// Eigenvalues clipped to [0, 1].
ComplexMatrix clip_effect(const ComplexMatrix& e) {
  const linalg::Eigensystem es = linalg::hermitian_eig(HermitianOperator((e + e.adjoint()) * 0.5));
  std::vector<double> vals(es.values);
  for (double& v : vals) v = std::clamp(v, 0.0, 1.0);
  return es.vectors * ComplexMatrix::diagonal(vals) * es.vectors.adjoint();
}

MeasurementModel propose(const MeasurementModel& m, Rng& rng, double step) {
  std::array<TwoOutcomePovm, 2> alice{m.alice(Setting::z), m.alice(Setting::x)};
  std::array<TwoOutcomePovm, 2> bob{m.bob(Setting::z), m.bob(Setting::x)};
  const std::size_t target = pick(rng, 0, 4);
  if (target == 0) {
    const std::size_t dim = m.rho_ab().dim();
    ComplexMatrix g = linalg::sample_ginibre_matrix(rng, dim, dim);
    const ComplexMatrix k = ComplexMatrix::identity(dim) + g * (step / g.frobenius_norm());
    ComplexMatrix r = k * m.rho_ab().matrix() * k.adjoint();
    r *= cplx(1.0 / r.trace().real());
    return MeasurementModel(DensityOperator((r + r.adjoint()) * 0.5), std::move(alice), std::move(bob));
  }
  auto& povm = target <= 2 ? alice[target - 1] : bob[target - 3];
  const ComplexMatrix e = povm.effect(0).matrix() + random_hermitian_direction(rng, povm.dim()) * step;
  povm = TwoOutcomePovm::from_effect(clip_effect(e));
  return MeasurementModel(m.rho_ab(), std::move(alice), std::move(bob));
}

}  // namespace

RefineResult refine_attack(const AttackSample& start, std::size_t iterations) {
  Rng rng(linalg::mix_seed(start.seed, 0x7265666eULL));
  RefineResult res{start, 0, 0, {}, start.gap < -kSoundnessTolerance};
  double step = 0.05;
  for (std::size_t it = 0; it < iterations; ++it) {
    ++res.iterations;
    std::optional<AttackSample> cand;
    try {
      cand = evaluate(propose(res.best.model, rng, step), start.seed);
    } catch (const ValidationError&) {
      // clipping can leave an effect a hair outside tolerance; just reject
    }
    if (!cand) {
      step = std::max(1e-4, step * 0.9);
      continue;
    }
    if (cand->gap < -kSoundnessTolerance) res.violation_found = true;
    if (cand->gap < res.best.gap) {
      res.best = std::move(*cand);
      res.trajectory.push_back(res.best.gap);
      ++res.accepted;
      step = std::min(0.5, step * 1.2);
    } else {
      step = std::max(1e-4, step * 0.9);
    }
  }
  return res;
}

std::vector<SweepRecord> noise_sweep(std::span<const double> visibilities) {
  std::vector<SweepRecord> out;
  out.reserve(visibilities.size());
  for (double v : visibilities) {
    SweepRecord r;
    r.visibility = v;
    r.summary = white_noise_summary(v);
    r.certificate = certify::certified_rate(r.summary);
    const double delta = (1.0 - v) / 2.0;
    r.shor_preskill = certify::shor_preskill(delta, delta);
    out.push_back(r);
  }
  return out;
}

std::vector<double> linear_grid(double from, double to, double step) {
  if (!(std::isfinite(from) && std::isfinite(to) && step > 0.0 && std::isfinite(step)) || to < from)
    throw ValidationError("linear_grid: need finite from <= to and step > 0");
  const auto n = static_cast<std::size_t>(std::floor((to - from) / step + 0.5));
  std::vector<double> grid(n + 1);
  for (std::size_t k = 0; k <= n; ++k) grid[k] = std::min(to, from + static_cast<double>(k) * step);
  return grid;
}

double shor_preskill_threshold() {
  double lo = 0.0, hi = 0.5;  // 1 - 2h > 0 at lo, < 0 at hi
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (1.0 - 2.0 * entropy::binary_entropy(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace bb84sdi::attacks
