// Copyright 2026 The scipnn Authors
// Licensed under the Apache License, Version 2.0

#include "scipnn/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "scipnn/error.hpp"
#include "scipnn/rng.hpp"

namespace scipnn {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kConvergedAngle = 1e-12;
constexpr double kRankTolerance = 1e-12;

std::string shape_str(const ComplexMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

// Orthonormalize column `col` of `q` against columns [0, col), two passes.
// Returns the residual norm before normalization.
double orthogonalize_column(ComplexMatrix& q, std::size_t col) {
  const std::size_t n = q.rows();
  double norm = 0.0;
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t k = 0; k < col; ++k) {
      cplx dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += std::conj(q(i, k)) * q(i, col);
      for (std::size_t i = 0; i < n; ++i) q(i, col) -= dot * q(i, k);
    }
    norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += std::norm(q(i, col));
    norm = std::sqrt(norm);
  }
  if (norm > 0.0) {
    for (std::size_t i = 0; i < n; ++i) q(i, col) /= norm;
  }
  return norm;
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {
  if (rows == 0 || cols == 0) fail(ErrorKind::Shape, "matrix dimensions must be positive");
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (rows == 0 || cols == 0) fail(ErrorKind::Shape, "matrix dimensions must be positive");
  if (data_.size() != rows * cols) {
    fail(ErrorKind::Shape, "matrix entries length " + std::to_string(data_.size()) +
                               " != " + std::to_string(rows) + "*" + std::to_string(cols));
  }
  for (const cplx& z : data_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      fail(ErrorKind::Numerical, "matrix entry is not finite");
    }
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> d) {
  ComplexMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    fail(ErrorKind::Shape, "matmul: " + shape_str(a) + " * " + shape_str(b));
  }
  ComplexMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

CVector matvec(const ComplexMatrix& a, std::span<const cplx> x) {
  if (a.cols() != x.size()) {
    fail(ErrorKind::Shape, "matvec: " + shape_str(a) + " * vector of length " +
                               std::to_string(x.size()));
  }
  CVector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    cplx acc = 0.0;
    for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * x[k];
    y[i] = acc;
  }
  return y;
}

ComplexMatrix hermitian(const ComplexMatrix& a) {
  ComplexMatrix h(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) h(j, i) = std::conj(a(i, j));
  return h;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    fail(ErrorKind::Shape, "subtract: " + shape_str(a) + " - " + shape_str(b));
  }
  ComplexMatrix c = a;
  auto ce = c.entries();
  auto be = b.entries();
  for (std::size_t i = 0; i < ce.size(); ++i) ce[i] -= be[i];
  return c;
}

ComplexMatrix operator*(cplx s, const ComplexMatrix& a) {
  ComplexMatrix c = a;
  for (cplx& z : c.entries()) z *= s;
  return c;
}

double frobenius_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (const cplx& z : a.entries()) s += std::norm(z);
  return std::sqrt(s);
}

double vector_norm(std::span<const cplx> x) {
  double s = 0.0;
  for (const cplx& z : x) s += std::norm(z);
  return std::sqrt(s);
}

double unitarity_error(const ComplexMatrix& a) {
  if (!a.square()) fail(ErrorKind::Shape, "unitarity_error: non-square " + shape_str(a));
  return frobenius_norm(matmul(a, hermitian(a)) - ComplexMatrix::identity(a.rows()));
}

SvdResult svd(const ComplexMatrix& w) {
  if (!w.square()) fail(ErrorKind::Shape, "svd: non-square " + shape_str(w));
  const std::size_t n = w.rows();
  ComplexMatrix a = w;
  ComplexMatrix v = ComplexMatrix::identity(n);

  int sweep = 0;
  double worst = 0.0;
  for (; sweep < kMaxSweeps; ++sweep) {
    worst = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0;
        cplx gamma = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          alpha += std::norm(a(i, p));
          beta += std::norm(a(i, q));
          gamma += std::conj(a(i, p)) * a(i, q);
        }
        const double mag = std::abs(gamma);
        if (alpha == 0.0 || beta == 0.0 || mag == 0.0) continue;
        const double cosine = mag / std::sqrt(alpha * beta);
        worst = std::max(worst, cosine);
        if (cosine < 1e-15) continue;
        // Rotate a_q by the phase of gamma so the pair is a real problem.
        const cplx ph = gamma / mag;
        const double zeta = (beta - alpha) / (2.0 * mag);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < n; ++i) {
          const cplx ap = a(i, p);
          const cplx aq = a(i, q) * std::conj(ph);
          a(i, p) = c * ap - s * aq;
          a(i, q) = (s * ap + c * aq) * ph;
          const cplx vp = v(i, p);
          const cplx vq = v(i, q) * std::conj(ph);
          v(i, p) = c * vp - s * vq;
          v(i, q) = (s * vp + c * vq) * ph;
        }
      }
    }
    if (worst < kConvergedAngle) break;
  }
  if (sweep == kMaxSweeps) {
    std::ostringstream os;
    os << "svd: no convergence after " << kMaxSweeps << " sweeps; residual column cosine " << worst;
    fail(ErrorKind::Numerical, os.str());
  }

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::norm(a(i, j));
    sigma[j] = std::sqrt(s);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  const double cutoff = kRankTolerance * frobenius_norm(w);
  SvdResult out{ComplexMatrix(n, n), std::vector<double>(n), ComplexMatrix(n, n)};
  std::vector<std::size_t> missing;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    const double s = sigma[src] <= cutoff ? 0.0 : sigma[src];
    out.singular_values[j] = s;
    for (std::size_t i = 0; i < n; ++i) {
      out.v_h(j, i) = std::conj(v(i, src));
      if (s > 0.0) out.u(i, j) = a(i, src) / s;
    }
    if (s == 0.0) missing.push_back(j);
  }
  // Complete the null-space columns of u by Gram-Schmidt: try each basis
  // vector against the filled columns and keep the largest residual.
  std::vector<bool> filled(n, true);
  for (std::size_t j : missing) filled[j] = false;
  for (std::size_t j : missing) {
    double best_norm = -1.0;
    CVector best(n);
    for (std::size_t e = 0; e < n; ++e) {
      CVector cand(n, 0.0);
      cand[e] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t k = 0; k < n; ++k) {
          if (!filled[k]) continue;
          cplx dot = 0.0;
          for (std::size_t i = 0; i < n; ++i) dot += std::conj(out.u(i, k)) * cand[i];
          for (std::size_t i = 0; i < n; ++i) cand[i] -= dot * out.u(i, k);
        }
      }
      const double norm = vector_norm(cand);
      if (norm > best_norm) {
        best_norm = norm;
        best = cand;
      }
    }
    for (std::size_t i = 0; i < n; ++i) out.u(i, j) = best[i] / best_norm;
    filled[j] = true;
  }
  return out;
}

ComplexMatrix haar_unitary(std::size_t n, std::uint64_t seed) {
  if (n == 0) fail(ErrorKind::Shape, "haar_unitary: n must be >= 1");
  Rng rng(derive_seed(seed, 0x4841415255ULL));
  ComplexMatrix z(n, n);
  const double scale = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) z(i, j) = cplx(rng.normal(), rng.normal()) * scale;

  // QR by Gram-Schmidt with re-orthogonalization; R's diagonal is the
  // projection of each column onto its normalized self.
  ComplexMatrix q = z;
  for (std::size_t j = 0; j < n; ++j) orthogonalize_column(q, j);
  // Mezzadri correction: multiply column j by the phase of R_jj, where
  // R_jj = <q_j, z_j>.
  for (std::size_t j = 0; j < n; ++j) {
    cplx r = 0.0;
    for (std::size_t i = 0; i < n; ++i) r += std::conj(q(i, j)) * z(i, j);
    const cplx ph = std::abs(r) > 0.0 ? r / std::abs(r) : cplx(1.0);
    for (std::size_t i = 0; i < n; ++i) q(i, j) *= ph;
  }
  return q;
}

}  // namespace scipnn
