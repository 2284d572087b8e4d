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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bb84sdi/certify.hpp"
#include "bb84sdi/entropy.hpp"
#include "bb84sdi/linalg/operators.hpp"
#include "bb84sdi/model.hpp"

// Numerical checks of the inequalities behind the key-rate bound. Every
// *_gap function returns (larger side) - (smaller side), so a correct bound
// never yields a gap below -kGapTolerance.
namespace bb84sdi::oracles {

using linalg::ComplexMatrix;
using linalg::DensityOperator;
using linalg::PureStateVector;

/// Single tolerance for fidelity-based inequalities (fidelity carries
/// eigensolver error around 1e-10).
inline constexpr double kGapTolerance = 1e-9;

// ---------------------------------------------------------------------------
// Entropy vs fidelity

/// H(A|E) - [phi(A_z) - phi(sqrt(A_z^2 + 4 F^2))], F = F(rho0, rho1),
/// A_z = Tr rho0 - Tr rho1.
double lemma1_gap(const entropy::CqStatePair& pair);

/// H(A|E) - [1 - phi(2F)], the A_z-free form.
double lemma1_simplified_gap(const entropy::CqStatePair& pair);

/// phi(A_z) - phi(sqrt(A_z^2 + 4 F^2)) as a function of A_z at fixed F.
double lemma1_rhs(double a_z, double fidelity);

// ---------------------------------------------------------------------------
// Pure-state decomposition of the shared state along Alice's bases

/// |Psi> = |0_z>|alpha> + |1_z>|alpha'> = |0_x>|beta> + |1_x>|beta'> on
/// A (x) B (x) E, with the x basis tied to the z basis through the Bloch
/// angle:
///   |0_z> = cos(angle/2)|0_x> - sin(angle/2)|1_x>
///   |1_z> = sin(angle/2)|0_x> + cos(angle/2)|1_x>
struct StateDecomposition {
  PureStateVector alpha;
  PureStateVector alpha_prime;
  PureStateVector beta;
  PureStateVector beta_prime;
  double angle = 0.0;
  ComplexMatrix w_operator;  // W_B = Tr_E(|alpha><alpha'| + |alpha'><alpha|)
  std::size_t bob_dim = 0;
  std::size_t eve_dim = 0;
};

/// `z_basis` columns are |0_z>, |1_z>. beta and beta' are obtained by
/// projecting psi onto the x basis, not from the angle relations, so
/// decomposition_residual() is a genuine check.
StateDecomposition decompose_state(const PureStateVector& psi, const ComplexMatrix& z_basis,
                                   double angle, std::size_t bob_dim, std::size_t eve_dim);

/// max norm residual of beta = cos alpha + sin alpha' and
/// beta' = -sin alpha + cos alpha' (half angles).
double decomposition_residual(const StateDecomposition& d);

struct PureCorrelators {
  double e_zx = 0.0;  // Tr[B_x (alpha_B - alpha'_B)]
  double e_xx = 0.0;  // Tr[B_x (beta_B - beta'_B)]
  double e_wx = 0.0;  // Tr[B_x W_B]
};

PureCorrelators pure_correlators(const StateDecomposition& d, const ComplexMatrix& bob_x_observable);

/// 2 F(Tr_B alpha, Tr_B alpha') - ||W_B||_1
double lemma2_gap(const StateDecomposition& d);

// ---------------------------------------------------------------------------
// Fidelity of two mixtures of the same pair of states

struct MixtureScenario {
  DensityOperator tau0;
  DensityOperator tau1;
  double p0 = 0.0;
  double p1 = 0.0;
  double q0 = 0.0;
  double q1 = 0.0;

  /// p0 tau0 + p1 tau1 (validated as a density operator)
  DensityOperator rho() const;
  /// q0 tau0 + q1 tau1
  DensityOperator sigma() const;
};

/// F(rho, sigma)^2 - [(sqrt(p0 q0)||tau0||_1 + sqrt(p1 q1)||tau1||_1)^2
///                   + (sqrt(p0 q1) - sqrt(p1 q0))^2 F(tau0, tau1)^2]
double lemma3_gap(const MixtureScenario& s);

// ---------------------------------------------------------------------------
// Convexity of f(x) = phi(x) - phi(sqrt(x^2 + y^2))

struct ConvexityReport {
  double y = 0.0;
  std::size_t points = 0;
  std::size_t violations = 0;
  /// max over interior points of f(x_i) - chord(x_i); <= 1e-12 passes
  double worst_residual = 0.0;
  double argmin_x = 0.0;
  double min_value = 0.0;

  bool passed() const { return violations == 0 && argmin_x == 0.0; }
};

inline constexpr double kConvexityTolerance = 1e-12;

/// Symmetric grid {k * step : (k step)^2 + y^2 <= 1}, always containing 0.
std::vector<double> symmetric_grid(double y, double step);

/// Throws unless 0 <= y < 1, the grid is sorted ascending with at least one
/// point, and every x satisfies x^2 + y^2 <= 1. The argmin is the smallest
/// |x| among points within 1e-12 of the minimum.
ConvexityReport convexity_probe(double y, std::span<const double> grid);

// ---------------------------------------------------------------------------
// End-to-end fidelity bound and the lambda cross-check

/// 4 F(rho0_E, rho1_E)^2 - (E_xx^2 - E_zx^2). Throws unless the model's
/// summary satisfies both the precondition and the condition.
double fidelity_chain_check(const model::MeasurementModel& m);

/// Independent lambda solver: scans t = 1, 1 - 1/4096, ... downward for the
/// first t with g(t) >= 0, then bisects 200 times. Returns sqrt(t).
double lambda_bisection_oracle(const model::CorrelationSummary& s);

// ---------------------------------------------------------------------------
// Seeded randomized suites

struct SuiteResult {
  std::string name;
  std::size_t instances = 0;
  std::size_t skipped = 0;
  double worst_gap = 0.0;
  std::uint64_t worst_seed = 0;
  double tolerance = kGapTolerance;

  bool passed() const { return instances > 0 && worst_gap >= -tolerance; }
};

/// Random cq pairs, Eve dimension 1..8.
entropy::CqStatePair sample_cq_pair(std::uint64_t seed);
/// Random decomposition with d_B <= 4, d_E <= 8, d_B d_E <= 16. Also returns
/// a random Bob x observable for the pure correlators.
struct DecompositionSample {
  StateDecomposition decomposition;
  ComplexMatrix bob_x_observable;
};
DecompositionSample sample_decomposition(std::uint64_t seed);
/// Qubit or qutrit tau's, mixture weights keeping both traces <= 1.
MixtureScenario sample_mixture(std::uint64_t seed);

SuiteResult run_lemma1_suite(std::size_t n, std::uint64_t seed);
/// Skips instances where |alpha| or |alpha'| < 1e-6 (angle ill-conditioned).
SuiteResult run_lemma2_suite(std::size_t n, std::uint64_t seed);
SuiteResult run_lemma3_suite(std::size_t n, std::uint64_t seed);

}  // namespace bb84sdi::oracles
