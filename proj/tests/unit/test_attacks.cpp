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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "bb84sdi/attacks.hpp"
#include "bb84sdi/error.hpp"
#include "bb84sdi/linalg/random.hpp"
#include "reference.hpp"

using namespace bb84sdi::attacks;
using bb84sdi::ValidationError;

namespace {

void expect_same(const AttackSample& a, const AttackSample& b) {
  EXPECT_EQ(a.seed, b.seed);
  EXPECT_EQ(a.summary, b.summary);
  EXPECT_EQ(a.dw_rate, b.dw_rate);
  EXPECT_EQ(a.certificate.rate, b.certificate.rate);
  EXPECT_EQ(a.gap, b.gap);
  EXPECT_EQ(a.model.rho_ab().matrix().max_abs(), b.model.rho_ab().matrix().max_abs());
  EXPECT_EQ((a.model.rho_ab().matrix() - b.model.rho_ab().matrix()).max_abs(), 0.0);
}

}  // namespace

TEST(RandomAttack, Deterministic) {
  for (std::uint64_t seed : {0ull, 1ull, 99ull}) expect_same(random_attack(seed, 3), random_attack(seed, 3));
}

TEST(RandomAttack, RejectsBobDimension) {
  EXPECT_THROW(random_attack(1, 1), ValidationError);
  EXPECT_THROW(random_attack(1, 9), ValidationError);
  EXPECT_NO_THROW(random_attack(1, 8));
}

TEST(RandomAttack, RateMatchesComposedCalls) {
  using namespace bb84sdi::model;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const AttackSample s = random_attack(seed, 2 + seed % 7);
    const ProbabilityTable t = probabilities_from_model(s.model);
    const double composed = bb84sdi::entropy::conditional_HAE(eve_states(s.model).cq_pair()) -
                            bb84sdi::entropy::shannon_conditional(t.at(Setting::z, Setting::z));
    EXPECT_NEAR(s.dw_rate, composed, 1e-12);
    // and against the Eigen reference
    EXPECT_NEAR(s.dw_rate, ref::devetak_winter(s.model), 1e-9);
    EXPECT_GE(s.gap, -kSoundnessTolerance) << seed;
    EXPECT_EQ(s.gap, std::max(s.dw_rate, 0.0) - s.certificate.rate);
  }
}

TEST(Counterexample, ForcedValues) {
  const AttackSample s = counterexample_attack();
  EXPECT_NEAR(s.summary.a_z, 1.0, 1e-12);
  EXPECT_NEAR(s.summary.b_x, 0.0, 1e-12);
  EXPECT_NEAR(s.summary.e_zz, 1.0, 1e-12);
  EXPECT_NEAR(s.summary.e_xx, 1.0, 1e-12);
  EXPECT_NEAR(s.summary.e_zx, 0.0, 1e-12);
  EXPECT_NEAR(s.certificate.lambda, 0.0, 1e-12);
  EXPECT_EQ(s.certificate.rate, 0.0);
  EXPECT_NEAR(s.dw_rate, 0.0, 1e-12);
  EXPECT_NEAR(s.gap, 0.0, 1e-12);
}

TEST(Ideal, TightAtNoiselessPoint) {
  for (std::size_t d_b : {2u, 3u, 8u}) {
    const AttackSample s = evaluate(ideal_model(d_b));
    EXPECT_NEAR(s.certificate.rate, 1.0, 1e-9);
    EXPECT_NEAR(s.dw_rate, 1.0, 1e-9);
    EXPECT_NEAR(s.gap, 0.0, 1e-9);
  }
}

TEST(Werner, CertifiedBelowTrueRate) {
  for (double v : {0.8, 0.85, 0.9, 0.95}) {
    const AttackSample s = evaluate(werner_model(v));
    EXPECT_NEAR(s.certificate.rate, std::max(0.0, 1.0 - 2.0 * ref::phi(v)), 1e-10);
    EXPECT_GE(s.gap, -kSoundnessTolerance);
    EXPECT_NEAR(s.summary.e_zz, white_noise_summary(v).e_zz, 1e-12);
    EXPECT_NEAR(s.summary.e_xx, white_noise_summary(v).e_xx, 1e-12);
  }
}

TEST(Degenerate, AlwaysZero) {
  for (int k = 0; k <= 20; ++k) {
    const double c = k / 20.0;
    const AttackSample s = evaluate(degenerate_model(c));
    EXPECT_EQ(s.certificate.rate, 0.0) << c;
    EXPECT_GE(s.gap, -kSoundnessTolerance);
  }
}

TEST(ExactMode, FillsTableFromModel) {
  bb84sdi::certify::CertifyOptions opts;
  opts.hab_mode = bb84sdi::certify::HabMode::exact;
  const AttackSample s = evaluate(werner_model(0.9), 0, opts);
  EXPECT_NEAR(s.certificate.rate, 1.0 - 2.0 * ref::phi(0.9), 1e-10);
  EXPECT_EQ(s.certificate.hab_mode, bb84sdi::certify::HabMode::exact);
}

// ---------------------------------------------------------------------------
// Scans

TEST(Scan, SingleSample) {
  const std::vector<std::size_t> dims{3};
  const ScanReport r = soundness_scan(1, 5, dims);
  EXPECT_EQ(r.count, 1u);
  ASSERT_EQ(r.entries.size(), 1u);
  EXPECT_EQ(r.entries[0].bob_dim, 3u);
  EXPECT_EQ(r.min_gap, r.entries[0].gap);
  EXPECT_EQ(std::accumulate(r.histogram.begin(), r.histogram.end(), std::size_t{0}), 1u);
}

TEST(Scan, RejectsBadArguments) {
  const std::vector<std::size_t> dims{2};
  EXPECT_THROW(soundness_scan(0, 1, dims), ValidationError);
  const std::vector<std::size_t> none;
  EXPECT_THROW(soundness_scan(5, 1, none), ValidationError);
  const std::vector<std::size_t> bad{2, 9};
  EXPECT_THROW(soundness_scan(5, 1, bad), ValidationError);
}

TEST(Scan, ReportIsConsistentAndReplayable) {
  const std::vector<std::size_t> dims{2, 3, 4};
  const ScanReport r = soundness_scan(300, 7, dims);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.entries.size(), 300u);
  EXPECT_EQ(std::accumulate(r.histogram.begin(), r.histogram.end(), std::size_t{0}), 300u);
  EXPECT_EQ(r.histogram.size(), kHistogramEdges.size() + 1);
  EXPECT_GT(r.positive_rate_count, 0u);
  double min_gap = 1e300;
  std::size_t positive = 0;
  for (std::size_t i = 0; i < r.entries.size(); ++i) {
    EXPECT_EQ(r.entries[i].seed, bb84sdi::linalg::mix_seed(7, i));
    EXPECT_EQ(r.entries[i].bob_dim, dims[i % dims.size()]);
    min_gap = std::min(min_gap, r.entries[i].gap);
    positive += r.entries[i].certified_rate > 0.0 ? 1 : 0;
  }
  EXPECT_EQ(r.min_gap, min_gap);
  EXPECT_EQ(r.positive_rate_count, positive);
  const AttackSample replay = random_attack(r.argmin_seed, r.argmin_bob_dim);
  EXPECT_EQ(replay.gap, r.min_gap);
}

TEST(Scan, IndependentOfWorkerCount) {
  const std::vector<std::size_t> dims{2, 4};
  const ScanReport one = soundness_scan(120, 11, dims, 1);
  const ScanReport many = soundness_scan(120, 11, dims, 5);
  ASSERT_EQ(one.entries.size(), many.entries.size());
  for (std::size_t i = 0; i < one.entries.size(); ++i) {
    EXPECT_EQ(one.entries[i].seed, many.entries[i].seed);
    EXPECT_EQ(one.entries[i].gap, many.entries[i].gap);
  }
  EXPECT_EQ(one.min_gap, many.min_gap);
  EXPECT_EQ(one.argmin_seed, many.argmin_seed);
  EXPECT_EQ(one.histogram, many.histogram);
}

// ---------------------------------------------------------------------------
// Refinement

TEST(Refine, ZeroIterationsReturnsStart) {
  const AttackSample start = random_attack(4, 2);
  const RefineResult r = refine_attack(start, 0);
  EXPECT_EQ(r.iterations, 0u);
  EXPECT_EQ(r.accepted, 0u);
  EXPECT_TRUE(r.trajectory.empty());
  expect_same(r.best, start);
}

TEST(Refine, IdealPointStaysTight) {
  const AttackSample start = evaluate(ideal_model(2), 17);
  const RefineResult r = refine_attack(start, 200);
  EXPECT_LE(r.best.gap, start.gap);
  EXPECT_GE(r.best.gap, -kSoundnessTolerance);
  EXPECT_NEAR(r.best.gap, 0.0, 1e-7);
  EXPECT_FALSE(r.violation_found);
}

TEST(Refine, TrajectoryIsNonIncreasing) {
  // start from a sample with a positive certified rate so there is room to move
  AttackSample start = random_attack(0, 2);
  for (std::uint64_t seed = 1; start.certificate.rate <= 0.0; ++seed) start = random_attack(seed, 2);
  const RefineResult r = refine_attack(start, 500);
  EXPECT_EQ(r.iterations, 500u);
  EXPECT_EQ(r.trajectory.size(), r.accepted);
  EXPECT_GT(r.accepted, 0u);
  double prev = start.gap;
  for (double g : r.trajectory) {
    EXPECT_LE(g, prev);
    prev = g;
  }
  EXPECT_EQ(r.best.gap, r.trajectory.empty() ? start.gap : r.trajectory.back());
  EXPECT_GE(r.best.gap, -kSoundnessTolerance);
  EXPECT_FALSE(r.violation_found);
  // the refined model is still valid and its gap replays
  EXPECT_EQ(evaluate(r.best.model, r.best.seed).gap, r.best.gap);
  // deterministic
  EXPECT_EQ(refine_attack(start, 500).best.gap, r.best.gap);
}

// ---------------------------------------------------------------------------
// Sweep

TEST(Sweep, Grid) {
  const auto grid = linear_grid(0.0, 1.0, 0.01);
  ASSERT_EQ(grid.size(), 101u);
  EXPECT_EQ(grid.front(), 0.0);
  EXPECT_EQ(grid.back(), 1.0);
  EXPECT_THROW(linear_grid(1.0, 0.0, 0.1), ValidationError);
  EXPECT_THROW(linear_grid(0.0, 1.0, 0.0), ValidationError);
}

TEST(Sweep, MatchesShorPreskill) {
  const auto grid = linear_grid(0.0, 1.0, 0.01);
  const auto records = noise_sweep(grid);
  ASSERT_EQ(records.size(), 101u);
  EXPECT_EQ(records[0].certificate.rate, 0.0);
  EXPECT_FALSE(records[0].certificate.precondition_ok);
  for (std::size_t i = 1; i < records.size(); ++i) {
    const double v = records[i].visibility;
    const double delta = (1.0 - v) / 2.0;
    EXPECT_NEAR(records[i].certificate.rate, std::max(0.0, 1.0 - 2.0 * ref::h(delta)), 1e-12) << v;
    EXPECT_NEAR(records[i].certificate.rate, std::max(0.0, records[i].shor_preskill), 1e-12) << v;
  }
  EXPECT_NEAR(records.back().certificate.rate, 1.0, 1e-15);
  EXPECT_NEAR(records[90].certificate.rate, 0.4272061, 1e-7);
}

TEST(Sweep, Threshold) {
  const double t = shor_preskill_threshold();
  EXPECT_NEAR(t, 0.1100, 0.0005);
  EXPECT_NEAR(1.0 - 2.0 * ref::h(t), 0.0, 1e-12);
}

TEST(Sweep, SummaryShape) {
  const auto s = white_noise_summary(0.37);
  EXPECT_EQ(s.e_zz, 0.37);
  EXPECT_EQ(s.e_xx, 0.37);
  EXPECT_EQ(s.a_z, 0.0);
  EXPECT_EQ(s.b_x, 0.0);
  EXPECT_EQ(s.e_zx, 0.0);
  EXPECT_EQ(s.e_xz, 0.0);
  EXPECT_THROW(white_noise_summary(1.2), ValidationError);
  EXPECT_THROW(white_noise_summary(-0.1), ValidationError);
}
