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

#include <array>
#include <cmath>

#include "bb84sdi/entropy.hpp"
#include "bb84sdi/error.hpp"
#include "bb84sdi/linalg/ops.hpp"
#include "bb84sdi/linalg/random.hpp"
#include "reference.hpp"

using namespace bb84sdi::entropy;
using bb84sdi::ValidationError;
using bb84sdi::linalg::ComplexMatrix;
using bb84sdi::linalg::DensityOperator;
using bb84sdi::linalg::Rng;

namespace {

DensityOperator diag(std::initializer_list<double> d) {
  std::vector<double> v(d);
  return DensityOperator(ComplexMatrix::diagonal(v));
}

DensityOperator scaled(const DensityOperator& r, double c) { return DensityOperator(r.matrix() * c); }

}  // namespace

TEST(BinaryEntropy, Values) {
  EXPECT_EQ(binary_entropy(0.0), 0.0);
  EXPECT_EQ(binary_entropy(1.0), 0.0);
  EXPECT_DOUBLE_EQ(binary_entropy(0.5), 1.0);
  EXPECT_NEAR(binary_entropy(0.11), 0.49991596, 1e-8);
  EXPECT_NEAR(binary_entropy(0.11), ref::h(0.11), 1e-15);
  EXPECT_NEAR(binary_entropy(0.3), binary_entropy(0.7), 1e-15);
}

TEST(BinaryEntropy, DomainChecks) {
  EXPECT_NO_THROW(binary_entropy(-5e-13));
  EXPECT_NO_THROW(binary_entropy(1.0 + 5e-13));
  EXPECT_THROW(binary_entropy(-1e-9), ValidationError);
  EXPECT_THROW(binary_entropy(1.1), ValidationError);
  EXPECT_THROW(binary_entropy(std::nan("")), ValidationError);
}

TEST(BinaryEntropy, MidpointConcave) {
  for (int i = 0; i <= 1000; ++i) {
    const double x = i / 1000.0;
    for (double d : {0.001, 0.01, 0.1}) {
      if (x - d < 0.0 || x + d > 1.0) continue;
      EXPECT_GE(binary_entropy(x) + 1e-12, 0.5 * (binary_entropy(x - d) + binary_entropy(x + d)));
    }
  }
}

TEST(Phi, Values) {
  EXPECT_DOUBLE_EQ(phi(0.0), 1.0);
  EXPECT_EQ(phi(1.0), 0.0);
  EXPECT_EQ(phi(-1.0), 0.0);
  EXPECT_NEAR(phi(0.9), 0.28639695711595625, 1e-14);
  EXPECT_NO_THROW(phi(1.0 + 5e-13));
  EXPECT_THROW(phi(1.0 + 1e-9), ValidationError);
}

TEST(Phi, MatchesBinaryEntropyAndIsEvenDecreasing) {
  for (int i = -90; i <= 90; ++i) {
    const double x = i / 100.0;
    EXPECT_NEAR(phi(x), binary_entropy((1.0 + x) / 2.0), 1e-12);
    EXPECT_NEAR(phi(x), ref::phi(x), 1e-12);
    EXPECT_NEAR(phi(x), phi(-x), 1e-15);
    if (i > 0) {
      EXPECT_LT(phi(x), phi((i - 1) / 100.0));
    }
  }
}

TEST(JointTableTest, Validation) {
  JointTable ok{{{{0.25, 0.25}, {0.25, 0.25}}}};
  EXPECT_NO_THROW(ok.validate());
  JointTable neg{{{{0.5, -0.1}, {0.3, 0.3}}}};
  EXPECT_THROW(neg.validate(), ValidationError);
  JointTable unnorm{{{{0.5, 0.1}, {0.3, 0.3}}}};
  EXPECT_THROW(unnorm.validate(), ValidationError);
}

TEST(ShannonConditional, Examples) {
  EXPECT_NEAR(shannon_conditional(JointTable{{{{0.5, 0.0}, {0.0, 0.5}}}}), 0.0, 1e-15);
  EXPECT_NEAR(shannon_conditional(JointTable{{{{0.25, 0.25}, {0.25, 0.25}}}}), 1.0, 1e-15);
  // E_zz = 0.9 with uniform marginals
  const JointTable t{{{{0.475, 0.025}, {0.025, 0.475}}}};
  EXPECT_NEAR(shannon_conditional(t), ref::h(0.05), 1e-14);
  EXPECT_NEAR(shannon_conditional(t), phi(0.9), 1e-14);
  EXPECT_NEAR(shannon_conditional(t), 0.28640, 1e-5);
}

TEST(ShannonConditional, RandomTablesMatchReference) {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    std::array<double, 4> w{};
    double s = 0.0;
    for (double& x : w) s += (x = rng.uniform());
    JointTable t{{{{w[0] / s, w[1] / s}, {w[2] / s, w[3] / s}}}};
    EXPECT_NEAR(shannon_conditional(t), ref::shannon_conditional(t.probs), 1e-13);
  }
}

TEST(VonNeumann, Examples) {
  EXPECT_NEAR(von_neumann(diag({0.5, 0.5})), 1.0, 1e-15);
  EXPECT_NEAR(von_neumann(diag({1.0, 0.0})), 0.0, 1e-15);
  EXPECT_NEAR(von_neumann(diag({0.3, 0.7})), 0.88129089923069, 1e-12);
}

TEST(VonNeumann, RandomStatesMatchReference) {
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    const std::size_t dim = 1 + i % 16;
    const DensityOperator rho = bb84sdi::linalg::sample_ginibre_state(rng, dim, 1 + i % dim);
    EXPECT_NEAR(von_neumann(rho), ref::entropy(ref::to_eigen(rho.matrix())), 1e-10);
  }
}

TEST(VonNeumann, ScalingIdentityForUnnormalisedStates) {
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const DensityOperator rho = bb84sdi::linalg::sample_ginibre_state(rng, 4, 1 + i % 4);
    const double c = 0.01 + 0.99 * rng.uniform();
    EXPECT_NEAR(von_neumann(scaled(rho, c)), c * von_neumann(rho) - c * std::log2(c) * rho.trace(), 1e-9);
  }
}

TEST(CqPair, Validation) {
  EXPECT_THROW(CqStatePair(diag({0.5, 0.0}), diag({0.2, 0.0})), ValidationError);
  EXPECT_THROW(CqStatePair(diag({0.5}), diag({0.25, 0.25})), ValidationError);
  const CqStatePair ok(diag({0.6, 0.0}), diag({0.0, 0.4}));
  EXPECT_NEAR(ok.bias(), 0.2, 1e-15);
}

TEST(ConditionalHAE, EveIgnorantAndEveReading) {
  Rng rng(6);
  const DensityOperator rho_e = bb84sdi::linalg::sample_ginibre_state(rng, 3, 2);
  EXPECT_NEAR(conditional_HAE(CqStatePair(scaled(rho_e, 0.5), scaled(rho_e, 0.5))), 1.0, 1e-10);
  EXPECT_NEAR(conditional_HAE(CqStatePair(diag({0.5, 0.0}), diag({0.0, 0.5}))), 0.0, 1e-15);
}

TEST(ConditionalHAE, BoundedByClassicalEntropy) {
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const std::size_t d = 1 + i % 8;
    const double t = rng.uniform();
    const CqStatePair pair(scaled(bb84sdi::linalg::sample_ginibre_state(rng, d, 1 + i % d), t),
                           scaled(bb84sdi::linalg::sample_ginibre_state(rng, d, d), 1.0 - t));
    const double v = conditional_HAE(pair);
    EXPECT_GE(v, -1e-9);
    EXPECT_LE(v, ref::h(t) + 1e-9);
  }
}

TEST(DevetakWinter, Examples) {
  const JointTable perfect{{{{0.5, 0.0}, {0.0, 0.5}}}};
  EXPECT_NEAR(devetak_winter(CqStatePair(diag({0.25, 0.25}), diag({0.25, 0.25})), perfect), 1.0, 1e-12);
  EXPECT_NEAR(devetak_winter(CqStatePair(diag({0.5, 0.0}), diag({0.0, 0.5})), perfect), 0.0, 1e-12);
  // negative values are reported as is
  const JointTable noisy{{{{0.25, 0.25}, {0.25, 0.25}}}};
  EXPECT_NEAR(devetak_winter(CqStatePair(diag({0.5, 0.0}), diag({0.0, 0.5})), noisy), -1.0, 1e-12);
}

TEST(DevetakWinter, RejectsInconsistentMarginal) {
  const JointTable skew{{{{0.7, 0.0}, {0.0, 0.3}}}};
  EXPECT_THROW(devetak_winter(CqStatePair(diag({0.25, 0.25}), diag({0.25, 0.25})), skew), ValidationError);
}
