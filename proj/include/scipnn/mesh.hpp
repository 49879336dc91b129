// Copyright 2026 The scipnn Authors
// Licensed under the Apache License, Version 2.0

#ifndef SCIPNN_MESH_HPP
#define SCIPNN_MESH_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "scipnn/linalg.hpp"

namespace scipnn {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Maps any finite angle into [0, 2pi). Throws a validation error otherwise.
double canonical_phase(double x);

/// min(x, 2pi - x) of the canonical angle: the physical size of a phase.
double circular_magnitude(double x);

/// The canonical angle moved into (-pi, pi]. Its absolute value equals
/// circular_magnitude(x).
double wrapped_phase(double x);

/// Phases of one Mach-Zehnder interferometer: theta between the couplers,
/// phi on the top input arm. Both canonical in [0, 2pi).
struct MziPhases {
  double theta = 0.0;
  double phi = 0.0;
  bool operator==(const MziPhases&) const = default;
};

struct MziSite {
  std::size_t column = 0;
  std::size_t top_port = 0;  // acts on ports (top_port, top_port + 1)
  MziPhases phases;
  bool operator==(const MziSite&) const = default;
};

/// 2x2 transfer matrix
///   i e^{i theta/2} [[e^{i phi} sin(theta/2),  cos(theta/2)],
///                    [e^{i phi} cos(theta/2), -sin(theta/2)]].
/// theta = pi is the bar state, theta = 0 the cross state.
ComplexMatrix mzi_transfer(const MziPhases& p);

/// Rectangular (Clements) mesh: n(n-1)/2 MZIs in column order followed by a
/// screen of n output phases.
class MeshProgram {
 public:
  MeshProgram() = default;
  /// Rectangular layout for n ports with every phase zero.
  explicit MeshProgram(std::size_t n);
  /// Validates the layout and canonicalizes every phase.
  MeshProgram(std::size_t n, std::vector<MziSite> mzis, std::vector<double> output_phases);

  std::size_t ports() const { return n_; }
  std::span<const MziSite> mzis() const { return mzis_; }
  std::span<const double> output_phases() const { return output_phases_; }

  /// Flat view: for each MZI in column order theta then phi, then the output
  /// phases. Length n(n-1) + n.
  std::vector<double> phase_vector() const;
  std::size_t phase_count() const { return mzis_.size() * 2 + n_; }
  /// Inverse of phase_vector; values are canonicalized. Shape error on a
  /// length mismatch.
  void set_phase_vector(std::span<const double> phases);

  bool operator==(const MeshProgram&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<MziSite> mzis_;
  std::vector<double> output_phases_;
};

/// (column, top_port) of every MZI of the rectangular layout, in column order.
std::vector<std::pair<std::size_t, std::size_t>> clements_layout(std::size_t n);

/// Product of the embedded MZI blocks in column order, then the output screen.
ComplexMatrix mesh_unitary(const MeshProgram& m);

/// Applies the mesh to a field vector in place.
void apply_mesh(const MeshProgram& m, std::span<cplx> field);

/// Clements decomposition of a unitary. Throws a validation error carrying the
/// unitarity residual if ||UU^H - I||_F > 1e-8, and a numerical error if the
/// reconstruction misses max(tol, 1e-9).
MeshProgram clements_decompose(const ComplexMatrix& u, double tol = 1e-9);

}  // namespace scipnn

#endif  // SCIPNN_MESH_HPP
