// Copyright 2026 The scipnn Authors
// Licensed under the Apache License, Version 2.0

#include "scipnn/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "scipnn/error.hpp"

namespace scipnn {

namespace {

// Magnitudes below this are treated as exact zeros while nulling; the
// corresponding phi is then undetermined and set to 0.
constexpr double kNullTolerance = 1e-14;

constexpr cplx kI{0.0, 1.0};

struct Rotation {
  std::size_t top_port;
  double theta;
  double phi;
};

// Left-multiplies rows (p, p+1) of m by the MZI transfer.
void apply_left(ComplexMatrix& m, std::size_t p, double theta, double phi) {
  const ComplexMatrix t = mzi_transfer({theta, phi});
  for (std::size_t c = 0; c < m.cols(); ++c) {
    const cplx a = m(p, c), b = m(p + 1, c);
    m(p, c) = t(0, 0) * a + t(0, 1) * b;
    m(p + 1, c) = t(1, 0) * a + t(1, 1) * b;
  }
}

// Right-multiplies columns (p, p+1) of m by the inverse MZI transfer.
void apply_right_inverse(ComplexMatrix& m, std::size_t p, double theta, double phi) {
  const ComplexMatrix t = hermitian(mzi_transfer({theta, phi}));
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const cplx a = m(r, p), b = m(r, p + 1);
    m(r, p) = a * t(0, 0) + b * t(1, 0);
    m(r, p + 1) = a * t(0, 1) + b * t(1, 1);
  }
}

}  // namespace

double canonical_phase(double x) {
  if (!std::isfinite(x)) fail(ErrorKind::Validation, "phase is not finite");
  double r = std::fmod(x, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double circular_magnitude(double x) {
  const double c = canonical_phase(x);
  return std::min(c, kTwoPi - c);
}

double wrapped_phase(double x) {
  const double c = canonical_phase(x);
  return c > kTwoPi / 2.0 ? c - kTwoPi : c;
}

ComplexMatrix mzi_transfer(const MziPhases& p) {
  const double s = std::sin(p.theta / 2.0);
  const double c = std::cos(p.theta / 2.0);
  const cplx g = kI * std::polar(1.0, p.theta / 2.0);
  const cplx e = std::polar(1.0, p.phi);
  return ComplexMatrix(2, 2, {g * e * s, g * c, g * e * c, -g * s});
}

std::vector<std::pair<std::size_t, std::size_t>> clements_layout(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> sites;
  for (std::size_t col = 0; col < n; ++col)
    for (std::size_t p = col % 2; p + 1 < n; p += 2) sites.emplace_back(col, p);
  return sites;
}

MeshProgram::MeshProgram(std::size_t n) : n_(n), output_phases_(n, 0.0) {
  if (n == 0) fail(ErrorKind::Shape, "mesh needs at least one port");
  for (auto [col, p] : clements_layout(n)) mzis_.push_back({col, p, {}});
}

MeshProgram::MeshProgram(std::size_t n, std::vector<MziSite> mzis, std::vector<double> output_phases)
    : n_(n), mzis_(std::move(mzis)), output_phases_(std::move(output_phases)) {
  if (n == 0) fail(ErrorKind::Shape, "mesh needs at least one port");
  if (output_phases_.size() != n) {
    fail(ErrorKind::Shape, "mesh output phase screen has " + std::to_string(output_phases_.size()) +
                               " entries for " + std::to_string(n) + " ports");
  }
  const auto layout = clements_layout(n);
  if (mzis_.size() != layout.size()) {
    fail(ErrorKind::Validation, "mesh has " + std::to_string(mzis_.size()) + " MZIs, expected " +
                                    std::to_string(layout.size()));
  }
  for (std::size_t i = 0; i < layout.size(); ++i) {
    if (mzis_[i].column != layout[i].first || mzis_[i].top_port != layout[i].second) {
      fail(ErrorKind::Validation, "MZI " + std::to_string(i) + " is not in rectangular column order");
    }
    mzis_[i].phases.theta = canonical_phase(mzis_[i].phases.theta);
    mzis_[i].phases.phi = canonical_phase(mzis_[i].phases.phi);
  }
  for (double& w : output_phases_) w = canonical_phase(w);
}

std::vector<double> MeshProgram::phase_vector() const {
  std::vector<double> v;
  v.reserve(phase_count());
  for (const MziSite& s : mzis_) {
    v.push_back(s.phases.theta);
    v.push_back(s.phases.phi);
  }
  v.insert(v.end(), output_phases_.begin(), output_phases_.end());
  return v;
}

void MeshProgram::set_phase_vector(std::span<const double> phases) {
  if (phases.size() != phase_count()) {
    fail(ErrorKind::Shape, "phase vector length " + std::to_string(phases.size()) + " != " +
                               std::to_string(phase_count()));
  }
  std::size_t k = 0;
  for (MziSite& s : mzis_) {
    s.phases.theta = canonical_phase(phases[k++]);
    s.phases.phi = canonical_phase(phases[k++]);
  }
  for (double& w : output_phases_) w = canonical_phase(phases[k++]);
}

ComplexMatrix mesh_unitary(const MeshProgram& m) {
  ComplexMatrix u = ComplexMatrix::identity(m.ports());
  for (const MziSite& s : m.mzis()) apply_left(u, s.top_port, s.phases.theta, s.phases.phi);
  const auto screen = m.output_phases();
  for (std::size_t r = 0; r < u.rows(); ++r) {
    const cplx e = std::polar(1.0, screen[r]);
    for (std::size_t c = 0; c < u.cols(); ++c) u(r, c) *= e;
  }
  return u;
}

void apply_mesh(const MeshProgram& m, std::span<cplx> field) {
  if (field.size() != m.ports()) {
    fail(ErrorKind::Shape, "field length " + std::to_string(field.size()) + " != mesh ports " +
                               std::to_string(m.ports()));
  }
  for (const MziSite& s : m.mzis()) {
    const ComplexMatrix t = mzi_transfer(s.phases);
    const cplx a = field[s.top_port], b = field[s.top_port + 1];
    field[s.top_port] = t(0, 0) * a + t(0, 1) * b;
    field[s.top_port + 1] = t(1, 0) * a + t(1, 1) * b;
  }
  const auto screen = m.output_phases();
  for (std::size_t i = 0; i < field.size(); ++i) field[i] *= std::polar(1.0, screen[i]);
}

MeshProgram clements_decompose(const ComplexMatrix& u, double tol) {
  if (!u.square()) fail(ErrorKind::Shape, "clements_decompose: matrix is not square");
  const double residual = unitarity_error(u);
  if (!(residual <= 1e-8)) {
    std::ostringstream os;
    os << "clements_decompose: input is not unitary (||UU^H - I||_F = " << residual << ")";
    fail(ErrorKind::Validation, os.str());
  }
  const std::size_t n = u.rows();
  ComplexMatrix work = u;
  std::vector<Rotation> right_ops;  // in application order on the light
  std::vector<Rotation> left_ops;   // in the order they were applied to `work`

  for (std::size_t diag = 0; diag + 1 < n; ++diag) {
    if (diag % 2 == 0) {
      for (std::size_t j = 0; j <= diag; ++j) {
        const std::size_t col = diag - j;
        const std::size_t row = n - 1 - j;
        const cplx a = work(row, col), b = work(row, col + 1);
        double theta, phi = 0.0;
        if (std::abs(a) < kNullTolerance) {
          theta = std::numbers::pi;
        } else if (std::abs(b) < kNullTolerance) {
          theta = 0.0;
        } else {
          theta = 2.0 * std::atan2(std::abs(b), std::abs(a));
          phi = canonical_phase(std::arg(a) - std::arg(b) + std::numbers::pi);
        }
        apply_right_inverse(work, col, theta, phi);
        right_ops.push_back({col, theta, phi});
      }
    } else {
      for (std::size_t j = 1; j <= diag + 1; ++j) {
        const std::size_t top = n + j - diag - 3;
        const std::size_t col = j - 1;
        const cplx a = work(top, col), b = work(top + 1, col);
        double theta, phi = 0.0;
        if (std::abs(a) < kNullTolerance) {
          theta = 0.0;
        } else if (std::abs(b) < kNullTolerance) {
          theta = std::numbers::pi;
        } else {
          theta = 2.0 * std::atan2(std::abs(a), std::abs(b));
          phi = canonical_phase(std::arg(b) - std::arg(a));
        }
        apply_left(work, top, theta, phi);
        left_ops.push_back({top, theta, phi});
      }
    }
  }

  // work is now diagonal D with U = L_1^-1 ... L_M^-1 D R_K ... R_1. Push each
  // inverse left rotation through D: T^-1 diag(d1, d2) = diag(e1, e2) T' with
  // theta' = theta, phi' = arg d1 - arg d2.
  std::vector<cplx> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = work(i, i);
  std::vector<Rotation> pushed;
  for (auto it = left_ops.rbegin(); it != left_ops.rend(); ++it) {
    const std::size_t p = it->top_port;
    const cplx d1 = d[p], d2 = d[p + 1];
    const double phi_new = canonical_phase(std::arg(d1) - std::arg(d2));
    const cplx rot = -std::polar(1.0, -it->theta);
    d[p] = rot * std::polar(1.0, -it->phi) * d2;
    d[p + 1] = rot * d2;
    pushed.push_back({p, it->theta, phi_new});
  }

  // Light order: R_1..R_K, then T'_M..T'_1 (pushed is already T'_M first).
  std::vector<Rotation> sequence = right_ops;
  sequence.insert(sequence.end(), pushed.begin(), pushed.end());

  // As-soon-as-possible column assignment, then a stable sort into column order.
  std::vector<std::size_t> next_free(n, 0);
  std::vector<MziSite> sites;
  sites.reserve(sequence.size());
  for (const Rotation& r : sequence) {
    const std::size_t col = std::max(next_free[r.top_port], next_free[r.top_port + 1]);
    next_free[r.top_port] = next_free[r.top_port + 1] = col + 1;
    sites.push_back({col, r.top_port, {canonical_phase(r.theta), canonical_phase(r.phi)}});
  }
  std::stable_sort(sites.begin(), sites.end(), [](const MziSite& x, const MziSite& y) {
    return x.column != y.column ? x.column < y.column : x.top_port < y.top_port;
  });

  std::vector<double> screen(n);
  for (std::size_t i = 0; i < n; ++i) screen[i] = canonical_phase(std::arg(d[i]));
  MeshProgram program(n, std::move(sites), std::move(screen));

  const double err = frobenius_norm(mesh_unitary(program) - u);
  if (!(err <= std::max(tol, 1e-9))) {
    std::ostringstream os;
    os << "clements_decompose: reconstruction error " << err << " exceeds " << std::max(tol, 1e-9);
    fail(ErrorKind::Numerical, os.str());
  }
  return program;
}

}  // namespace scipnn
