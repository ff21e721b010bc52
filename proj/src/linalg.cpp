// Copyright 2026 The smc Authors.
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

#include "smc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "smc/errors.hpp"

namespace smc {

DenseMatrix clamp(const DenseMatrix& a, double lo, double hi) {
  if (lo > hi) throw InvalidArgumentError("clamp: lo > hi");
  DenseMatrix out = a;
  for (double& v : out.data) v = std::min(hi, std::max(lo, v));
  return out;
}

namespace {

double col_dot(const DenseMatrix& m, std::size_t a, std::size_t b) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows; ++i) s += m.at(i, a) * m.at(i, b);
  return s;
}

// One modified Gram-Schmidt sweep of column j against columns [0, j) of q,
// accumulating the projection coefficients into r.
void mgs_project(DenseMatrix& q, DenseMatrix& r, std::size_t j) {
  for (std::size_t p = 0; p < j; ++p) {
    double c = col_dot(q, p, j);
    r.at(p, j) += c;
    for (std::size_t i = 0; i < q.rows; ++i) q.at(i, j) -= c * q.at(i, p);
  }
}

}  // namespace

QrResult qr_decompose(const DenseMatrix& a) {
  const std::size_t m = a.rows, k = a.cols;
  if (m < k) throw InvalidArgumentError("qr_decompose: requires rows >= cols");
  if (k == 0) throw InvalidArgumentError("qr_decompose: empty input");
  const double tol = 1e-12 * max_abs(a);

  DenseMatrix q = a;
  DenseMatrix r(k, k);
  for (std::size_t j = 0; j < k; ++j) {
    // Two projection passes: classical MGS loses orthogonality near 1e-8
    // on ill-conditioned inputs; a second pass restores it to roundoff.
    mgs_project(q, r, j);
    mgs_project(q, r, j);
    double nrm = std::sqrt(col_dot(q, j, j));
    if (!(nrm > tol))
      throw RankDeficiencyError("qr_decompose: rank-deficient input", j);
    r.at(j, j) = nrm;
    for (std::size_t i = 0; i < m; ++i) q.at(i, j) /= nrm;
  }
  return {std::move(q), std::move(r)};
}

DenseMatrix upper_tri_inverse(const DenseMatrix& r) {
  const std::size_t k = r.rows;
  if (r.cols != k) throw InvalidArgumentError("upper_tri_inverse: not square");
  const double tol = 1e-12 * max_abs(r);
  for (std::size_t i = 0; i < k; ++i)
    if (!(std::fabs(r.at(i, i)) > tol))
      throw SingularMatrixError("upper_tri_inverse: near-zero diagonal", i);

  // Back substitution on R X = I, column by column.
  DenseMatrix x(k, k);
  for (std::size_t j = 0; j < k; ++j) {
    x.at(j, j) = 1.0 / r.at(j, j);
    for (std::size_t ii = j; ii-- > 0;) {
      double s = 0.0;
      for (std::size_t p = ii + 1; p <= j; ++p) s += r.at(ii, p) * x.at(p, j);
      x.at(ii, j) = -s / r.at(ii, ii);
    }
  }
  return x;
}

namespace {

void check_orthonormal(const DenseMatrix& v, double tol, const char* name) {
  for (std::size_t i = 0; i < v.cols; ++i) {
    for (std::size_t j = i; j < v.cols; ++j) {
      double g = col_dot(v, i, j);
      double want = (i == j) ? 1.0 : 0.0;
      if (std::fabs(g - want) > tol)
        throw InvalidArgumentError(std::string(name) +
                                   ": columns are not orthonormal");
    }
  }
}

}  // namespace

DenseMatrix power_qr(const DenseMatrix& phi, std::size_t k,
                     std::size_t iterations, Rng& rng, bool* degenerate) {
  const std::size_t ell = phi.rows;
  if (phi.cols != ell) throw InvalidArgumentError("power_qr: not square");
  if (k == 0 || k > ell) throw InvalidArgumentError("power_qr: k out of range");
  if (iterations < 1) throw InvalidArgumentError("power_qr: iterations < 1");
  const double sym_tol = 1e-10 * std::max(1.0, max_abs(phi));
  for (std::size_t i = 0; i < ell; ++i)
    for (std::size_t j = i + 1; j < ell; ++j)
      if (std::fabs(phi.at(i, j) - phi.at(j, i)) > sym_tol)
        throw InvalidArgumentError("power_qr: phi is not symmetric");
  if (degenerate) *degenerate = false;

  // Orthonormalize z in place, refilling any degenerate column with fresh
  // random entries until QR succeeds.
  auto orthonormalize = [&](DenseMatrix& z) -> DenseMatrix {
    for (int attempt = 0; attempt < 100; ++attempt) {
      try {
        return qr_decompose(z).q;
      } catch (const RankDeficiencyError& e) {
        if (degenerate) *degenerate = true;
        for (std::size_t i = 0; i < ell; ++i)
          z.at(i, e.column()) = rng.normal();
      }
    }
    throw NumericalError("power_qr: could not restore full rank");
  };

  DenseMatrix z(ell, k);
  for (double& v : z.data) v = rng.normal();
  DenseMatrix q = orthonormalize(z);

  for (std::size_t t = 0; t < iterations; ++t) {
    DenseMatrix next = matmul(phi, q);
    q = orthonormalize(next);
  }
  return q;
}

double subspace_distance(const DenseMatrix& v, const DenseMatrix& vhat) {
  if (v.rows != vhat.rows || v.cols != vhat.cols)
    throw InvalidArgumentError("subspace_distance: shape mismatch");
  if (v.cols == 0 || v.cols > v.rows)
    throw InvalidArgumentError("subspace_distance: bad subspace dimension");
  check_orthonormal(v, 1e-8, "subspace_distance(v)");
  check_orthonormal(vhat, 1e-8, "subspace_distance(vhat)");

  // B = vhat - v (v^T vhat) = (I - v v^T) vhat; sigma_max(B) = sin(theta_max).
  // This form stays accurate for small angles, where computing
  // sqrt(1 - sigma_min(v^T vhat)^2) would cancel.
  DenseMatrix c = matmul_at_b(v, vhat);
  DenseMatrix b = vhat;
  for (std::size_t i = 0; i < v.rows; ++i)
    for (std::size_t j = 0; j < v.cols; ++j) {
      double s = 0.0;
      for (std::size_t p = 0; p < v.cols; ++p) s += v.at(i, p) * c.at(p, j);
      b.at(i, j) -= s;
    }
  DenseMatrix g = matmul_at_b(b, b);
  EighResult e = symmetric_eigh(g);
  double lam = e.values.empty() ? 0.0 : std::max(0.0, e.values.front());
  return std::min(1.0, std::sqrt(lam));
}

EighResult symmetric_eigh(const DenseMatrix& a) {
  const std::size_t n = a.rows;
  if (a.cols != n) throw InvalidArgumentError("symmetric_eigh: not square");
  DenseMatrix d = a;
  DenseMatrix v = identity(n);

  // Cyclic Jacobi: rotate away each off-diagonal pair per sweep until the
  // off-diagonal mass is at roundoff.
  const double base = std::max(max_abs(a), 1e-300);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q)
        off = std::max(off, std::fabs(d.at(p, q)));
    if (off <= 1e-15 * base) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = d.at(p, q);
        if (std::fabs(apq) <= 1e-18 * base) continue;
        double theta = 0.5 * (d.at(q, q) - d.at(p, p)) / apq;
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (std::size_t i = 0; i < n; ++i) {
          double dip = d.at(i, p), diq = d.at(i, q);
          d.at(i, p) = c * dip - s * diq;
          d.at(i, q) = s * dip + c * diq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          double dpi = d.at(p, i), dqi = d.at(q, i);
          d.at(p, i) = c * dpi - s * dqi;
          d.at(q, i) = s * dpi + c * dqi;
        }
        for (std::size_t i = 0; i < n; ++i) {
          double vip = v.at(i, p), viq = v.at(i, q);
          v.at(i, p) = c * vip - s * viq;
          v.at(i, q) = s * vip + c * viq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return d.at(x, x) > d.at(y, y);
  });
  EighResult res;
  res.values.resize(n);
  res.vectors = DenseMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    res.values[j] = d.at(order[j], order[j]);
    for (std::size_t i = 0; i < n; ++i)
      res.vectors.at(i, j) = v.at(i, order[j]);
  }
  return res;
}

}  // namespace smc
