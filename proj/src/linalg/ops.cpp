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

#include "bb84sdi/linalg/ops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "bb84sdi/error.hpp"

namespace bb84sdi::linalg {

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx s = a(i, j);
      if (s == cplx(0.0, 0.0)) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = s * b(k, l);
    }
  return out;
}

std::vector<cplx> tensor_product(std::span<const cplx> a, std::span<const cplx> b) {
  std::vector<cplx> out(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k) out[i * b.size() + k] = a[i] * b[k];
  return out;
}

namespace {

// Splits every flat index of the composite space into (kept index,
// discarded index).
struct IndexSplit {
  std::size_t kept_dim = 1;
  std::size_t discarded_dim = 1;
  std::vector<std::size_t> kept;
  std::vector<std::size_t> discarded;
};

IndexSplit split_indices(std::span<const std::size_t> dims, std::span<const std::size_t> keep) {
  std::vector<bool> is_kept(dims.size(), false);
  for (std::size_t k : keep) {
    if (k >= dims.size())
      throw ValidationError("partial_trace: subsystem index " + std::to_string(k) +
                            " out of range");
    if (is_kept[k]) throw ValidationError("partial_trace: duplicate subsystem index");
    is_kept[k] = true;
  }
  IndexSplit s;
  std::size_t total = 1;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (dims[i] == 0) throw ValidationError("partial_trace: zero subsystem dimension");
    total *= dims[i];
    (is_kept[i] ? s.kept_dim : s.discarded_dim) *= dims[i];
  }
  s.kept.resize(total);
  s.discarded.resize(total);
  std::vector<std::size_t> digit(dims.size(), 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t kf = 0;
    std::size_t df = 0;
    for (std::size_t i = 0; i < dims.size(); ++i) {
      if (is_kept[i])
        kf = kf * dims[i] + digit[i];
      else
        df = df * dims[i] + digit[i];
    }
    s.kept[flat] = kf;
    s.discarded[flat] = df;
    // odometer increment, last subsystem fastest
    for (std::size_t i = dims.size(); i-- > 0;) {
      if (++digit[i] < dims[i]) break;
      digit[i] = 0;
    }
  }
  return s;
}

ComplexMatrix reshape_kept_by_discarded(std::span<const cplx> v, const IndexSplit& s) {
  ComplexMatrix out(s.kept_dim, s.discarded_dim);
  for (std::size_t i = 0; i < v.size(); ++i) out(s.kept[i], s.discarded[i]) = v[i];
  return out;
}

}  // namespace

ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep) {
  const IndexSplit s = split_indices(dims, keep);
  if (!m.is_square() || m.rows() != s.kept.size()) {
    throw ValidationError("partial_trace: subsystem dimensions multiply to " +
                          std::to_string(s.kept.size()) + " but the matrix is " +
                          std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  ComplexMatrix out(s.kept_dim, s.kept_dim);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (s.discarded[i] == s.discarded[j]) out(s.kept[i], s.kept[j]) += m(i, j);
  return out;
}

ComplexMatrix partial_trace_outer(std::span<const cplx> ket, std::span<const cplx> bra,
                                  std::span<const std::size_t> dims,
                                  std::span<const std::size_t> keep) {
  const IndexSplit s = split_indices(dims, keep);
  if (ket.size() != s.kept.size() || bra.size() != s.kept.size())
    throw ValidationError("partial_trace_outer: vector length does not match subsystem dims");
  const ComplexMatrix k = reshape_kept_by_discarded(ket, s);
  const ComplexMatrix b = reshape_kept_by_discarded(bra, s);
  return k * b.adjoint();
}

Eigensystem hermitian_eig(const HermitianOperator& h) {
  const std::size_t n = h.dim();
  ComplexMatrix a = h.matrix();
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double scale = std::max(a.frobenius_norm(), 1e-300);
  // off-diagonal entries below this are dropped rather than rotated away
  const double negligible = 1e-16 * scale;
  for (int sweep = 0; sweep < 64; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double g = std::abs(apq);
        if (g <= negligible) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        rotated = true;
        const cplx phase = apq / g;  // e^{i theta}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        // real Jacobi rotation on the phase-rotated block [[app, g], [g, aqq]]
        const double theta = (aqq - app) / (2.0 * g);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::hypot(1.0, theta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = t * c;
        // R = [[c, s], [-s e^{-i theta}, c e^{-i theta}]] on (p, q);
        // a <- R^dagger a R, v <- v R.
        const cplx ph_conj = std::conj(phase);
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p);
          const cplx akq = a(k, q);
          a(k, p) = c * akp - s * ph_conj * akq;
          a(k, q) = s * akp + c * ph_conj * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k);
          const cplx aqk = a(q, k);
          a(p, k) = c * apk - s * phase * aqk;
          a(q, k) = s * apk + c * phase * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = app - t * g;
        a(q, q) = aqq + t * g;
        for (std::size_t k = 0; k < n; ++k) {
          const cplx vkp = v(k, p);
          const cplx vkq = v(k, q);
          v(k, p) = c * vkp - s * ph_conj * vkq;
          v(k, q) = s * vkp + c * ph_conj * vkq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });
  Eigensystem out{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t c = 0; c < n; ++c) {
    out.values[c] = a(order[c], order[c]).real();
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, c) = v(r, order[c]);
  }
  return out;
}

namespace {

// V diag(f(lambda)) V^dagger
ComplexMatrix spectral_map(const Eigensystem& e, const std::vector<double>& mapped) {
  ComplexMatrix scaled = e.vectors;
  for (std::size_t r = 0; r < scaled.rows(); ++r)
    for (std::size_t c = 0; c < scaled.cols(); ++c) scaled(r, c) *= mapped[c];
  return scaled * e.vectors.adjoint();
}

}  // namespace

HermitianOperator psd_sqrt(const DensityOperator& rho) {
  const Eigensystem& e = rho.eigensystem();
  std::vector<double> roots(e.values.size());
  const double floor = e.values.empty() ? 0.0 : kSqrtFloor * std::max(e.values.front(), 0.0);
  std::transform(e.values.begin(), e.values.end(), roots.begin(),
                 [floor](double v) { return v > floor ? std::sqrt(v) : 0.0; });
  return HermitianOperator(spectral_map(e, roots));
}

double trace_norm(const ComplexMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  const Eigensystem e = hermitian_eig(HermitianOperator(m.adjoint() * m));
  const ComplexMatrix mv = m * e.vectors;
  double total = 0.0;
  for (std::size_t c = 0; c < mv.cols(); ++c) {
    double col = 0.0;
    for (std::size_t r = 0; r < mv.rows(); ++r) col += std::norm(mv(r, c));
    total += std::sqrt(col);
  }
  return total;
}

double trace_norm_2x2(const ComplexMatrix& m) {
  if (m.rows() != 2 || m.cols() != 2)
    throw ValidationError("trace_norm_2x2: expected a 2x2 matrix, got " +
                          std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  const double t = std::norm(m(0, 0)) + std::norm(m(0, 1)) + std::norm(m(1, 0)) + std::norm(m(1, 1));
  const double root_d = std::abs(m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0));
  return std::sqrt(t + 2.0 * root_d);
}

double fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim())
    throw ValidationError("fidelity: dimension mismatch (" + std::to_string(rho.dim()) + " vs " +
                          std::to_string(sigma.dim()) + ")");
  return trace_norm(psd_sqrt(rho).matrix() * psd_sqrt(sigma).matrix());
}

PureStateVector purify(const DensityOperator& rho) {
  const Eigensystem& e = rho.eigensystem();
  const std::size_t d = rho.dim();
  std::vector<cplx> psi(d * d, cplx(0.0, 0.0));
  for (std::size_t i = 0; i < d; ++i) {
    const double w = std::sqrt(e.values[i]);
    if (w == 0.0) continue;
    for (std::size_t s = 0; s < d; ++s) psi[s * d + i] = w * e.vectors(s, i);
  }
  return PureStateVector(std::move(psi));
}

}  // namespace bb84sdi::linalg
