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
#include <map>
#include <optional>
#include <span>
#include <string>

#include "bb84sdi/entropy.hpp"
#include "bb84sdi/linalg/matrix.hpp"
#include "bb84sdi/linalg/operators.hpp"

namespace bb84sdi::model {

using linalg::ComplexMatrix;
using linalg::DensityOperator;
using linalg::HermitianOperator;
using linalg::PureStateVector;

/// Measurement choice u (Alice) or v (Bob).
enum class Setting { z = 0, x = 1 };

inline constexpr std::array<Setting, 2> kSettings{Setting::z, Setting::x};
inline constexpr std::size_t kMaxBobDim = 8;
/// Completeness tolerance ||M0 + M1 - I||_max and PSD slack for effects.
inline constexpr double kPovmTolerance = 1e-10;

const char* to_string(Setting s);

/// Two-outcome POVM {M0, M1}. Effects are PSD and sum to the identity
/// within kPovmTolerance.
class TwoOutcomePovm {
 public:
  TwoOutcomePovm(HermitianOperator effect0, HermitianOperator effect1);
  /// {M0, I - M0}
  static TwoOutcomePovm from_effect(const ComplexMatrix& effect0);
  /// Projective measurement {|v><v|, I - |v><v|} for a unit vector v.
  static TwoOutcomePovm projective(std::span<const linalg::cplx> ket);

  std::size_t dim() const { return effect0_.dim(); }
  const HermitianOperator& effect(int outcome) const { return outcome == 0 ? effect0_ : effect1_; }
  /// M0 - M1
  ComplexMatrix observable() const;

 private:
  HermitianOperator effect0_;
  HermitianOperator effect1_;
};

/// rho_AB on C^2 (x) C^{d_B} plus Alice's and Bob's two-outcome POVMs,
/// indexed by Setting.
class MeasurementModel {
 public:
  MeasurementModel(DensityOperator rho_ab, std::array<TwoOutcomePovm, 2> alice,
                   std::array<TwoOutcomePovm, 2> bob);

  std::size_t bob_dim() const { return bob_[0].dim(); }
  const DensityOperator& rho_ab() const { return rho_ab_; }
  const TwoOutcomePovm& alice(Setting u) const { return alice_[static_cast<int>(u)]; }
  const TwoOutcomePovm& bob(Setting v) const { return bob_[static_cast<int>(v)]; }

 private:
  DensityOperator rho_ab_;
  std::array<TwoOutcomePovm, 2> alice_;
  std::array<TwoOutcomePovm, 2> bob_;
};

/// One JointTable per (u, v). `no_signaling_tolerance` is how far Alice's
/// (Bob's) marginal may drift across Bob's (Alice's) setting before
/// summarize() rejects the table; ingest_counts() sets it from the sample
/// size.
struct ProbabilityTable {
  std::array<std::array<entropy::JointTable, 2>, 2> tables{};
  double no_signaling_tolerance = 1e-6;

  const entropy::JointTable& at(Setting u, Setting v) const {
    return tables[static_cast<int>(u)][static_cast<int>(v)];
  }
  entropy::JointTable& at(Setting u, Setting v) {
    return tables[static_cast<int>(u)][static_cast<int>(v)];
  }
};

struct CorrelationSummary {
  double a_z = 0.0;
  double a_x = 0.0;
  double b_z = 0.0;
  double b_x = 0.0;
  double e_zz = 0.0;
  double e_zx = 0.0;
  double e_xz = 0.0;
  double e_xx = 0.0;

  /// |each| <= 1 + 1e-9 and finite.
  void validate() const;
  /// delta_u = (1 - E_uu) / 2
  double error_rate(Setting u) const;
  bool operator==(const CorrelationSummary&) const = default;
};

/// P(ab|uv) = Tr[(M^u_a (x) N^v_b) rho_AB].
ProbabilityTable probabilities_from_model(const MeasurementModel& m);

/// Correlators E_uv and marginals A_u, B_v. Alice's marginal for u is the
/// average over both v tables (and Bob's likewise); a disagreement beyond the
/// table's tolerance is a ValidationError naming the marginal.
CorrelationSummary summarize(const ProbabilityTable& t);

/// Experimental statistics as read from a request file: a 2x2 matrix per
/// setting key "zz", "zx", "xz", "xx" (row = Alice's outcome).
struct RawRecord {
  enum class Kind { counts, probabilities };
  Kind kind = Kind::counts;
  std::map<std::string, std::array<std::array<double, 2>, 2>> settings;
};

/// Normalises each setting and checks no-signalling at 3/sqrt(N) for counts
/// (N the smaller of the two sample sizes compared) or 1e-6 for
/// probabilities.
ProbabilityTable ingest_counts(const RawRecord& raw);

/// Convex decomposition of a qubit effect into the four projective
/// measurements {0_u,1_u}, {1_u,0_u}, {I,0}, {0,I}.
struct PovmDecomposition {
  ComplexMatrix basis;  // columns |0_u>, |1_u>
  double m1 = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;

  /// m1 |0_u><0_u| + m2 |1_u><1_u| + m3 I
  ComplexMatrix reconstruct_effect0() const;
};

PovmDecomposition povm_decompose(const HermitianOperator& m0);

/// Purification of rho_AB on A (x) B (x) E with dim E = 2 d_B, and Eve's
/// unnormalised conditional states for Alice's z outcome.
struct EveDecomposition {
  PureStateVector psi;
  DensityOperator rho0_e;
  DensityOperator rho1_e;

  entropy::CqStatePair cq_pair() const { return {rho0_e, rho1_e}; }
};

EveDecomposition eve_states(const MeasurementModel& m);

/// Eve's conditional states for an arbitrary purification |psi> of rho_AB
/// with Eve's dimension `eve_dim`.
EveDecomposition eve_states_from_purification(const MeasurementModel& m, const PureStateVector& psi,
                                              std::size_t eve_dim);

struct WBasisCorrelation {
  double angle = 0.0;  // Bloch angle between A_z and A_x, in [0, pi]
  double e_wx = 0.0;   // <A_w (x) B_x>
  ComplexMatrix a_w;   // n_w . sigma
};

/// Requires both of Alice's POVMs to be rank-one projective. A_w is the unit
/// Bloch direction orthogonal to A_z in the plane of A_z and A_x with
/// A_x = cos(angle) A_z + sin(angle) A_w and sin(angle) >= 0.
WBasisCorrelation w_basis_correlator(const MeasurementModel& m);

}  // namespace bb84sdi::model
