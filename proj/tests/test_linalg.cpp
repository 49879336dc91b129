// Copyright 2026 The scipnn Authors
// Licensed under the Apache License, Version 2.0

#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "scipnn/error.hpp"
#include "scipnn/linalg.hpp"

using namespace scipnn;
using scipnn::testing::max_abs_diff;
using scipnn::testing::random_matrix;

namespace {

ComplexMatrix triple_loop(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      cplx s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

}  // namespace

TEST_CASE("matmul") {
  const ComplexMatrix a = random_matrix(3, 3, 1);
  CHECK(matmul(ComplexMatrix::identity(3), a) == a);

  const ComplexMatrix swap(2, 2, {0.0, 1.0, 1.0, 0.0});
  const ComplexMatrix abcd(2, 2, {cplx(1, 2), cplx(3, 4), cplx(5, 6), cplx(7, 8)});
  const ComplexMatrix expected(2, 2, {cplx(5, 6), cplx(7, 8), cplx(1, 2), cplx(3, 4)});
  CHECK(matmul(swap, abcd) == expected);

  const ComplexMatrix x = random_matrix(4, 4, 2), y = random_matrix(4, 4, 3);
  CHECK(max_abs_diff(matmul(x, y), triple_loop(x, y)) < 1e-13);

  CHECK_THROWS_AS(matmul(random_matrix(2, 3, 4), random_matrix(2, 3, 5)), Error);
}

TEST_CASE("hermitian") {
  const ComplexMatrix sym(2, 2, {1.0, 2.0, 2.0, 5.0});
  CHECK(hermitian(sym) == sym);
  const ComplexMatrix i1(1, 1, {cplx(0, 1)});
  CHECK(hermitian(i1)(0, 0) == cplx(0, -1));
  const ComplexMatrix r = random_matrix(3, 5, 7);
  CHECK(hermitian(hermitian(r)) == r);
}

TEST_CASE("hermitian reverses products") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t m = 1 + seed % 5, k = 1 + (seed / 5) % 4, n = 2 + seed % 3;
    const ComplexMatrix a = random_matrix(m, k, 100 + seed), b = random_matrix(k, n, 200 + seed);
    CHECK(max_abs_diff(hermitian(matmul(a, b)), matmul(hermitian(b), hermitian(a))) <= 1e-12);
  }
}

TEST_CASE("matrix construction validates") {
  CHECK_THROWS_AS(ComplexMatrix(0, 3), Error);
  CHECK_THROWS_AS(ComplexMatrix(2, 2, {1.0, 2.0}), Error);
  CHECK_THROWS_AS(ComplexMatrix(1, 1, {cplx(std::nan(""), 0.0)}), Error);
}

TEST_CASE("svd of a diagonal matrix") {
  const ComplexMatrix w(2, 2, {3.0, 0.0, 0.0, 1.0});
  const SvdResult r = svd(w);
  CHECK(r.singular_values[0] == doctest::Approx(3.0));
  CHECK(r.singular_values[1] == doctest::Approx(1.0));
  CHECK(max_abs_diff(r.u, ComplexMatrix::identity(2)) < 1e-14);
  CHECK(max_abs_diff(r.v_h, ComplexMatrix::identity(2)) < 1e-14);
}

TEST_CASE("svd of a unitary has unit singular values") {
  const SvdResult r = svd(haar_unitary(6, 11));
  for (double s : r.singular_values) CHECK(std::abs(s - 1.0) < 1e-9);
}

TEST_CASE("svd invariants on random matrices") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t n = 2 + seed % 31;
    const ComplexMatrix w = random_matrix(n, n, 1000 + seed);
    const SvdResult r = svd(w);
    CHECK(unitarity_error(r.u) <= 1e-10);
    CHECK(unitarity_error(r.v_h) <= 1e-10);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(r.singular_values[i] >= 0.0);
      if (i > 0) CHECK(r.singular_values[i] <= r.singular_values[i - 1]);
    }
    const ComplexMatrix rebuilt = matmul(
        matmul(r.u, ComplexMatrix::diagonal(CVector(r.singular_values.begin(), r.singular_values.end()))),
        r.v_h);
    CHECK(frobenius_norm(rebuilt - w) <= 1e-9 * frobenius_norm(w));
  }
}

TEST_CASE("svd of rank-deficient input completes u") {
  // Rank one: outer product; also the zero matrix.
  ComplexMatrix w(4, 4);
  const CVector x = scipnn::testing::random_vector(4, 3), y = scipnn::testing::random_vector(4, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) w(i, j) = x[i] * std::conj(y[j]);
  const SvdResult r = svd(w);
  CHECK(r.singular_values[1] == 0.0);
  CHECK(r.singular_values[3] == 0.0);
  CHECK(unitarity_error(r.u) <= 1e-10);
  const ComplexMatrix rebuilt = matmul(
      matmul(r.u, ComplexMatrix::diagonal(CVector(r.singular_values.begin(), r.singular_values.end()))),
      r.v_h);
  CHECK(frobenius_norm(rebuilt - w) <= 1e-9 * frobenius_norm(w));

  const SvdResult z = svd(ComplexMatrix(3, 3));
  CHECK(unitarity_error(z.u) <= 1e-12);
  CHECK(unitarity_error(z.v_h) <= 1e-12);
}

TEST_CASE("haar unitary") {
  const ComplexMatrix one = haar_unitary(1, 5);
  CHECK(std::abs(std::abs(one(0, 0)) - 1.0) < 1e-14);
  for (std::size_t n = 1; n <= 32; ++n) CHECK(unitarity_error(haar_unitary(n, 77 + n)) <= 1e-10);
  CHECK(haar_unitary(16, 3) == haar_unitary(16, 3));
  CHECK(!(haar_unitary(16, 3) == haar_unitary(16, 4)));
}

TEST_CASE("haar second moment") {
  // E|U_00|^2 = 1/n for Haar measure.
  double mean = 0.0;
  for (std::uint64_t s = 0; s < 1000; ++s) mean += std::norm(haar_unitary(2, s)(0, 0));
  mean /= 1000.0;
  CHECK(std::abs(mean - 0.5) < 0.02);

  // Invariance spot check: the phase of U_00 is uniform, so its mean vector
  // vanishes; after a fixed left rotation the moment is unchanged.
  const ComplexMatrix fixed = haar_unitary(2, 999);
  double rotated = 0.0;
  cplx phase_mean = 0.0;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const ComplexMatrix u = haar_unitary(2, s);
    rotated += std::norm(matmul(fixed, u)(0, 0));
    phase_mean += u(0, 0) / std::abs(u(0, 0));
  }
  CHECK(std::abs(rotated / 1000.0 - 0.5) < 0.02);
  CHECK(std::abs(phase_mean / 1000.0) < 0.1);
}
