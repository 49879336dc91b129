// Copyright 2026 The scipnn Authors
// Licensed under the Apache License, Version 2.0

// Shared fixtures for the unit suites: seeded random matrices and vectors.

#ifndef SCIPNN_TESTS_HELPERS_HPP
#define SCIPNN_TESTS_HELPERS_HPP

#include <cstdint>

#include "scipnn/linalg.hpp"
#include "scipnn/model.hpp"
#include "scipnn/rng.hpp"
#include "scipnn/sample.hpp"

namespace scipnn::testing {

inline ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  ComplexMatrix m(rows, cols);
  for (cplx& z : m.entries()) z = cplx(rng.normal(), rng.normal());
  return m;
}

inline CVector random_vector(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  CVector v(n);
  for (cplx& z : v) z = cplx(rng.normal(), rng.normal());
  return v;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i)
    m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
  return m;
}

inline CVector unit_power(CVector v) {
  const double n = vector_norm(v);
  for (cplx& z : v) z /= n;
  return v;
}

inline Dataset random_batch(std::size_t count, std::size_t width, std::size_t classes,
                            std::uint64_t seed) {
  Rng rng(seed);
  Dataset d;
  for (std::size_t i = 0; i < count; ++i) {
    CVector f(width);
    for (cplx& z : f) z = cplx(rng.normal(), rng.normal());
    d.push_back({unit_power(std::move(f)), rng.below(classes)});
  }
  return d;
}

}  // namespace scipnn::testing

#endif  // SCIPNN_TESTS_HELPERS_HPP
