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

#include "bb84sdi/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bb84sdi/error.hpp"
#include "bb84sdi/linalg/ops.hpp"

namespace bb84sdi::model {

using linalg::cplx;

const char* to_string(Setting s) { return s == Setting::z ? "z" : "x"; }

namespace {

void require_effect(const HermitianOperator& e, const char* which) {
  const linalg::Eigensystem eig = linalg::hermitian_eig(e);
  if (eig.values.back() < -kPovmTolerance || eig.values.front() > 1.0 + kPovmTolerance) {
    std::ostringstream msg;
    msg << "POVM effect " << which << " has eigenvalues outside [0, 1]: ["
        << eig.values.back() << ", " << eig.values.front() << "]";
    throw ValidationError(msg.str());
  }
}

// Tr(x y) without forming the product
cplx trace_of_product(const ComplexMatrix& x, const ComplexMatrix& y) {
  cplx t = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) t += x(i, j) * y(j, i);
  return t;
}

const std::array<ComplexMatrix, 3>& paulis() {
  static const std::array<ComplexMatrix, 3> p{
      ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}},
      ComplexMatrix{{0.0, cplx(0.0, -1.0)}, {cplx(0.0, 1.0), 0.0}},
      ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}},
  };
  return p;
}

std::array<double, 3> bloch_vector(const ComplexMatrix& observable) {
  std::array<double, 3> n{};
  for (int i = 0; i < 3; ++i) n[i] = 0.5 * trace_of_product(observable, paulis()[i]).real();
  return n;
}

ComplexMatrix bloch_observable(const std::array<double, 3>& n) {
  ComplexMatrix out(2, 2);
  for (int i = 0; i < 3; ++i) out += paulis()[i] * n[i];
  return out;
}

}  // namespace

TwoOutcomePovm::TwoOutcomePovm(HermitianOperator effect0, HermitianOperator effect1)
    : effect0_(std::move(effect0)), effect1_(std::move(effect1)) {
  if (effect0_.dim() != effect1_.dim())
    throw ValidationError("TwoOutcomePovm: effects have different dimensions");
  require_effect(effect0_, "0");
  require_effect(effect1_, "1");
  const double gap =
      (effect0_.matrix() + effect1_.matrix() - ComplexMatrix::identity(effect0_.dim())).max_abs();
  if (gap > kPovmTolerance) {
    std::ostringstream msg;
    msg << "TwoOutcomePovm: ||M0 + M1 - I||_max = " << gap << " (completeness violated)";
    throw ValidationError(msg.str());
  }
}

TwoOutcomePovm TwoOutcomePovm::from_effect(const ComplexMatrix& effect0) {
  HermitianOperator e0(effect0);
  HermitianOperator e1(ComplexMatrix::identity(e0.dim()) - e0.matrix());
  return {std::move(e0), std::move(e1)};
}

TwoOutcomePovm TwoOutcomePovm::projective(std::span<const cplx> ket) {
  const double norm = std::sqrt(linalg::inner(ket, ket).real());
  if (std::abs(norm - 1.0) > 1e-10) throw ValidationError("TwoOutcomePovm: ket is not normalised");
  return from_effect(ComplexMatrix::outer(ket, ket));
}

ComplexMatrix TwoOutcomePovm::observable() const { return effect0_.matrix() - effect1_.matrix(); }

MeasurementModel::MeasurementModel(DensityOperator rho_ab, std::array<TwoOutcomePovm, 2> alice,
                                   std::array<TwoOutcomePovm, 2> bob)
    : rho_ab_(std::move(rho_ab)), alice_(std::move(alice)), bob_(std::move(bob)) {
  for (const auto& a : alice_)
    if (a.dim() != 2) throw ValidationError("MeasurementModel: Alice's POVMs must act on a qubit");
  const std::size_t d_b = bob_[0].dim();
  if (bob_[1].dim() != d_b)
    throw ValidationError("MeasurementModel: Bob's two POVMs act on different dimensions");
  if (d_b < 1 || d_b > kMaxBobDim)
    throw ValidationError("MeasurementModel: Bob's dimension must be in [1, 8]");
  if (rho_ab_.dim() != 2 * d_b) {
    throw ValidationError("MeasurementModel: rho_AB has dimension " +
                          std::to_string(rho_ab_.dim()) + ", expected 2 * d_B = " +
                          std::to_string(2 * d_b));
  }
  if (std::abs(rho_ab_.trace() - 1.0) > 1e-10) {
    std::ostringstream msg;
    msg << "MeasurementModel: Tr rho_AB = " << rho_ab_.trace() << ", expected 1";
    throw ValidationError(msg.str());
  }
}

ProbabilityTable probabilities_from_model(const MeasurementModel& m) {
  ProbabilityTable t;
  t.no_signaling_tolerance = 1e-6;
  for (Setting u : kSettings)
    for (Setting v : kSettings)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const ComplexMatrix op = linalg::tensor_product(m.alice(u).effect(a).matrix(),
                                                          m.bob(v).effect(b).matrix());
          const cplx p = trace_of_product(op, m.rho_ab().matrix());
          if (std::abs(p.imag()) > 1e-8) {
            std::ostringstream msg;
            msg << "probabilities_from_model: P(" << a << b << "|" << to_string(u)
                << to_string(v) << ") has imaginary part " << p.imag();
            throw ValidationError(msg.str());
          }
          t.at(u, v).probs[a][b] = std::clamp(p.real(), 0.0, 1.0);
        }
  return t;
}

void CorrelationSummary::validate() const {
  const std::array<std::pair<const char*, double>, 8> fields{{{"A_z", a_z},
                                                              {"A_x", a_x},
                                                              {"B_z", b_z},
                                                              {"B_x", b_x},
                                                              {"E_zz", e_zz},
                                                              {"E_zx", e_zx},
                                                              {"E_xz", e_xz},
                                                              {"E_xx", e_xx}}};
  for (const auto& [name, value] : fields) {
    if (!std::isfinite(value) || std::abs(value) > 1.0 + 1e-9) {
      std::ostringstream msg;
      msg << "CorrelationSummary: " << name << " = " << value << " outside [-1, 1]";
      throw ValidationError(msg.str());
    }
  }
}

double CorrelationSummary::error_rate(Setting u) const {
  const double e = u == Setting::z ? e_zz : e_xx;
  return std::clamp((1.0 - e) / 2.0, 0.0, 1.0);
}

CorrelationSummary summarize(const ProbabilityTable& t) {
  for (const auto& row : t.tables)
    for (const auto& table : row) table.validate();

  const double tol = t.no_signaling_tolerance;
  auto correlator = [&](Setting u, Setting v) {
    const auto& p = t.at(u, v).probs;
    return p[0][0] + p[1][1] - p[0][1] - p[1][0];
  };
  auto alice_bias = [&](Setting u) {
    const double with_z = t.at(u, Setting::z).alice_marginal(0) - t.at(u, Setting::z).alice_marginal(1);
    const double with_x = t.at(u, Setting::x).alice_marginal(0) - t.at(u, Setting::x).alice_marginal(1);
    // compare P_A(0|u) across Bob's settings; the bias differs by twice that
    if (std::abs(with_z - with_x) / 2.0 > tol) {
      std::ostringstream msg;
      msg << "summarize: Alice's marginal P_A(0|" << to_string(u) << ") differs between Bob's z ("
          << (1.0 + with_z) / 2.0 << ") and x (" << (1.0 + with_x) / 2.0
          << ") settings beyond tolerance " << tol;
      throw ValidationError(msg.str());
    }
    return (with_z + with_x) / 2.0;
  };
  auto bob_bias = [&](Setting v) {
    const double with_z = t.at(Setting::z, v).bob_marginal(0) - t.at(Setting::z, v).bob_marginal(1);
    const double with_x = t.at(Setting::x, v).bob_marginal(0) - t.at(Setting::x, v).bob_marginal(1);
    if (std::abs(with_z - with_x) / 2.0 > tol) {
      std::ostringstream msg;
      msg << "summarize: Bob's marginal P_B(0|" << to_string(v) << ") differs between Alice's z ("
          << (1.0 + with_z) / 2.0 << ") and x (" << (1.0 + with_x) / 2.0
          << ") settings beyond tolerance " << tol;
      throw ValidationError(msg.str());
    }
    return (with_z + with_x) / 2.0;
  };

  CorrelationSummary s;
  s.a_z = alice_bias(Setting::z);
  s.a_x = alice_bias(Setting::x);
  s.b_z = bob_bias(Setting::z);
  s.b_x = bob_bias(Setting::x);
  s.e_zz = correlator(Setting::z, Setting::z);
  s.e_zx = correlator(Setting::z, Setting::x);
  s.e_xz = correlator(Setting::x, Setting::z);
  s.e_xx = correlator(Setting::x, Setting::x);
  s.validate();
  return s;
}

ProbabilityTable ingest_counts(const RawRecord& raw) {
  static const std::array<std::pair<const char*, std::pair<Setting, Setting>>, 4> keys{{
      {"zz", {Setting::z, Setting::z}},
      {"zx", {Setting::z, Setting::x}},
      {"xz", {Setting::x, Setting::z}},
      {"xx", {Setting::x, Setting::x}},
  }};
  const bool counts = raw.kind == RawRecord::Kind::counts;
  ProbabilityTable t;
  std::array<std::array<double, 2>, 2> totals{};
  for (const auto& [key, uv] : keys) {
    const auto it = raw.settings.find(key);
    if (it == raw.settings.end())
      throw ValidationError(std::string("ingest: missing setting \"") + key + "\"");
    double total = 0.0;
    for (const auto& row : it->second)
      for (double c : row) {
        if (!std::isfinite(c) || c < 0.0) {
          std::ostringstream msg;
          msg << "ingest: setting \"" << key << "\" has a negative or non-finite entry " << c;
          throw ValidationError(msg.str());
        }
        total += c;
      }
    if (!(total > 0.0))
      throw ValidationError(std::string("ingest: setting \"") + key + "\" has no events");
    if (!counts && std::abs(total - 1.0) > 1e-6) {
      std::ostringstream msg;
      msg << "ingest: probabilities for setting \"" << key << "\" sum to " << total;
      throw ValidationError(msg.str());
    }
    auto& table = t.at(uv.first, uv.second);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) table.probs[a][b] = it->second[a][b] / total;
    totals[static_cast<int>(uv.first)][static_cast<int>(uv.second)] = total;
  }

  if (counts) {
    double smallest = totals[0][0];
    for (const auto& row : totals)
      for (double n : row) smallest = std::min(smallest, n);
    t.no_signaling_tolerance = 3.0 / std::sqrt(smallest);
  } else {
    t.no_signaling_tolerance = 1e-6;
  }
  // surfaces marginal mismatches now rather than at certification time
  (void)summarize(t);
  return t;
}

ComplexMatrix PovmDecomposition::reconstruct_effect0() const {
  ComplexMatrix out = ComplexMatrix::identity(2) * m3;
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c)
      out(r, c) += m1 * basis(r, 0) * std::conj(basis(c, 0)) +
                   m2 * basis(r, 1) * std::conj(basis(c, 1));
  return out;
}

PovmDecomposition povm_decompose(const HermitianOperator& m0) {
  if (m0.dim() != 2) throw ValidationError("povm_decompose: effect must act on a qubit");
  const linalg::Eigensystem eig = linalg::hermitian_eig(m0);
  if (eig.values[1] < -kPovmTolerance || eig.values[0] > 1.0 + kPovmTolerance) {
    std::ostringstream msg;
    msg << "povm_decompose: effect eigenvalues [" << eig.values[1] << ", " << eig.values[0]
        << "] outside [0, 1]";
    throw ValidationError(msg.str());
  }
  const double mu1 = std::clamp(eig.values[0], 0.0, 1.0);
  const double mu2 = std::clamp(eig.values[1], 0.0, 1.0);
  PovmDecomposition d;
  d.basis = eig.vectors;
  if (mu1 + mu2 <= 1.0) {
    d.m1 = mu1;
    d.m2 = mu2;
    d.m3 = 0.0;
    d.m4 = std::max(0.0, 1.0 - mu1 - mu2);
  } else {
    d.m1 = 1.0 - mu2;
    d.m2 = 1.0 - mu1;
    d.m3 = mu1 + mu2 - 1.0;
    d.m4 = 0.0;
  }
  return d;
}

EveDecomposition eve_states_from_purification(const MeasurementModel& m, const PureStateVector& psi,
                                              std::size_t eve_dim) {
  const std::size_t ab = m.rho_ab().dim();
  if (psi.dim() != ab * eve_dim)
    throw ValidationError("eve_states: purification has the wrong dimension");
  // psi as an (AB) x E matrix
  const ComplexMatrix p(ab, eve_dim, std::vector<cplx>(psi.amplitudes().begin(), psi.amplitudes().end()));
  const ComplexMatrix id_b = ComplexMatrix::identity(m.bob_dim());
  auto conditional = [&](int a) {
    const ComplexMatrix lifted = linalg::tensor_product(m.alice(Setting::z).effect(a).matrix(), id_b);
    // rho^a_E = (P^dagger (M_a (x) I) P)^T
    return DensityOperator((p.adjoint() * lifted * p).transpose());
  };
  return EveDecomposition{psi, conditional(0), conditional(1)};
}

EveDecomposition eve_states(const MeasurementModel& m) {
  const PureStateVector psi = linalg::purify(m.rho_ab());
  return eve_states_from_purification(m, psi, m.rho_ab().dim());
}

WBasisCorrelation w_basis_correlator(const MeasurementModel& m) {
  for (Setting u : kSettings) {
    const linalg::Eigensystem eig = linalg::hermitian_eig(m.alice(u).effect(0));
    if (std::abs(eig.values[0] - 1.0) > 1e-9 || std::abs(eig.values[1]) > 1e-9) {
      std::ostringstream msg;
      msg << "w_basis_correlator: Alice's " << to_string(u)
          << " POVM is not rank-one projective (eigenvalues " << eig.values[0] << ", "
          << eig.values[1] << ")";
      throw ValidationError(msg.str());
    }
  }
  const auto nz = bloch_vector(m.alice(Setting::z).observable());
  const auto nx = bloch_vector(m.alice(Setting::x).observable());
  double cos_angle = 0.0;
  for (int i = 0; i < 3; ++i) cos_angle += nz[i] * nx[i];
  cos_angle = std::clamp(cos_angle, -1.0, 1.0);
  const double angle = std::acos(cos_angle);
  const double sin_angle = std::sin(angle);

  std::array<double, 3> nw{};
  if (sin_angle > 1e-12) {
    for (int i = 0; i < 3; ++i) nw[i] = (nx[i] - cos_angle * nz[i]) / sin_angle;
  } else {
    // collinear axes: any direction orthogonal to n_z works since sin = 0
    int axis = 0;
    for (int i = 1; i < 3; ++i)
      if (std::abs(nz[i]) < std::abs(nz[axis])) axis = i;
    nw[axis] = 1.0;
    for (int i = 0; i < 3; ++i) nw[i] -= nz[axis] * nz[i];
  }
  const double norm = std::sqrt(nw[0] * nw[0] + nw[1] * nw[1] + nw[2] * nw[2]);
  for (double& c : nw) c /= norm;

  WBasisCorrelation out;
  out.angle = angle;
  out.a_w = bloch_observable(nw);
  const ComplexMatrix op = linalg::tensor_product(out.a_w, m.bob(Setting::x).observable());
  out.e_wx = trace_of_product(op, m.rho_ab().matrix()).real();
  return out;
}

}  // namespace bb84sdi::model
