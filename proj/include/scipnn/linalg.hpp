// Copyright 2026 The scipnn Authors
// Licensed under the Apache License, Version 2.0

#ifndef SCIPNN_LINALG_HPP
#define SCIPNN_LINALG_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace scipnn {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

/// Dense row-major complex matrix. Sized for the small (N <= 64) unitaries
/// that appear in MZI meshes; no expression templates, no views.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  /// Zero matrix. Throws a shape error for a zero dimension.
  ComplexMatrix(std::size_t rows, std::size_t cols);
  /// Takes ownership of row-major entries; validates length and finiteness.
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const cplx> d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<const cplx> entries() const { return data_; }
  std::span<cplx> entries() { return data_; }

  bool operator==(const ComplexMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
CVector matvec(const ComplexMatrix& a, std::span<const cplx> x);
ComplexMatrix hermitian(const ComplexMatrix& a);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx s, const ComplexMatrix& a);

double frobenius_norm(const ComplexMatrix& a);
double vector_norm(std::span<const cplx> x);
/// ||A A^H - I||_F; a shape error for non-square input.
double unitarity_error(const ComplexMatrix& a);

struct SvdResult {
  ComplexMatrix u;
  std::vector<double> singular_values;  // descending, >= 0
  ComplexMatrix v_h;
};

/// One-sided (Hestenes) Jacobi SVD of a square complex matrix.
/// Deterministic; throws a numerical error if 100 sweeps do not converge.
SvdResult svd(const ComplexMatrix& w);

/// Haar-distributed n x n unitary, deterministic per seed.
ComplexMatrix haar_unitary(std::size_t n, std::uint64_t seed);

}  // namespace scipnn

#endif  // SCIPNN_LINALG_HPP
