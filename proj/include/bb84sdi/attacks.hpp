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

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bb84sdi/certify.hpp"
#include "bb84sdi/linalg/random.hpp"
#include "bb84sdi/model.hpp"

// Brute-force search for collective attacks that beat the certified rate.
namespace bb84sdi::attacks {

using certify::RateCertificate;
using model::CorrelationSummary;
using model::MeasurementModel;

/// A gap below -kSoundnessTolerance is a soundness violation.
inline constexpr double kSoundnessTolerance = 1e-7;

/// One evaluated model. gap = max(dw_rate, 0) - certificate.rate, where
/// dw_rate is the Devetak-Winter rate H(A|E) - H(A|B) of the model itself.
struct AttackSample {
  std::uint64_t seed = 0;
  MeasurementModel model;
  CorrelationSummary summary;
  double dw_rate = 0.0;
  RateCertificate certificate;
  double gap = 0.0;

  std::size_t bob_dim() const { return model.bob_dim(); }
};

/// Certifies `m` with `opts` and computes its Devetak-Winter rate.
AttackSample evaluate(const MeasurementModel& m, std::uint64_t seed = 0,
                      const certify::CertifyOptions& opts = {});

/// Random model on C^2 (x) C^{d_B}, d_B in [2, 8]. A third of the draws are unstructured
/// (Ginibre state, random POVMs); the rest perturb the ideal protocol with
/// white noise, rotated and degenerate measurements so that the certified
/// rate is often positive.
MeasurementModel sample_attack_model(linalg::Rng& rng, std::size_t bob_dim);

AttackSample random_attack(std::uint64_t seed, std::size_t bob_dim);

/// Phi+ with z/x projective measurements on both sides, Bob's qubit embedded
/// in the first two levels of C^{d_B}.
MeasurementModel ideal_model(std::size_t bob_dim = 2);

/// Isotropic two-qubit state v Phi+ + (1 - v) I/4 with ideal measurements.
MeasurementModel werner_model(double visibility);

/// Phi+ with the degenerate z measurement {I, 0} on both sides and ideal x
/// measurements: a = b = 0 always, yet E_xx = E_zz = 1 and E_zx = 0, so the
/// projective formula would claim rate 1.
MeasurementModel counterexample_model();
AttackSample counterexample_attack();

/// Ideal model except Alice's z effects are {c I, (1 - c) I}.
MeasurementModel degenerate_model(double c);

/// Correlations of the Werner model in closed form: A_u = B_v = 0,
/// E_zz = E_xx = v, E_zx = E_xz = 0.
CorrelationSummary white_noise_summary(double visibility);

struct ScanEntry {
  std::uint64_t seed = 0;
  std::size_t bob_dim = 0;
  double certified_rate = 0.0;
  double dw_rate = 0.0;
  double gap = 0.0;
};

struct ScanReport {
  std::size_t count = 0;
  /// One entry per sample, in sample order.
  std::vector<ScanEntry> entries;
  double min_gap = 0.0;
  std::uint64_t argmin_seed = 0;
  std::size_t argmin_bob_dim = 0;
  /// Gap histogram over kHistogramEdges; bin i is [edge_i, edge_{i+1}),
  /// plus an underflow bin at the front and an overflow bin at the back.
  std::vector<std::size_t> histogram;
  std::size_t positive_rate_count = 0;
  std::vector<AttackSample> violations;

  bool passed() const { return count > 0 && violations.empty(); }
};

inline constexpr std::array<double, 7> kHistogramEdges{-1e-7, 1e-6, 1e-3, 1e-2, 0.1, 0.5, 1.0};

/// Sample i uses seed mix_seed(seed, i) and Bob dimension
/// bob_dims[i % bob_dims.size()]. The result does not depend on `workers`
/// (0 picks the hardware concurrency).
ScanReport soundness_scan(std::size_t n, std::uint64_t seed, std::span<const std::size_t> bob_dims,
                          unsigned workers = 0);

struct RefineResult {
  AttackSample best;
  std::size_t iterations = 0;
  std::size_t accepted = 0;
  /// Gap after each accepted step (non-increasing).
  std::vector<double> trajectory;
  /// True if any evaluated point had gap < -kSoundnessTolerance.
  bool violation_found = false;
};

/// Local search that tries to drive the gap negative by perturbing the
/// state (K rho K^dagger / Tr, K = I + s G) and each POVM effect (Hermitian
/// step clipped back into [0, I]). Deterministic for a given start sample.
RefineResult refine_attack(const AttackSample& start, std::size_t iterations);

struct SweepRecord {
  double visibility = 0.0;
  CorrelationSummary summary;
  RateCertificate certificate;
  double shor_preskill = 0.0;
};

std::vector<SweepRecord> noise_sweep(std::span<const double> visibilities);

/// Evenly spaced grid from..to (inclusive, within half a step).
std::vector<double> linear_grid(double from, double to, double step);

/// Error rate delta at which 1 - 2 h(delta) vanishes (about 0.110028).
double shor_preskill_threshold();

}  // namespace bb84sdi::attacks
