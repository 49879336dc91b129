// Copyright 2026 The scipnn Authors
// Licensed under the Apache License, Version 2.0

#ifndef SCIPNN_ANALYSIS_HPP
#define SCIPNN_ANALYSIS_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "scipnn/autograd.hpp"
#include "scipnn/linalg.hpp"
#include "scipnn/model.hpp"
#include "scipnn/sample.hpp"

namespace scipnn {

struct PowerModel {
  double p_pi_mw = 25.0;
  double ps_length_um = 135.0;
  double wavelength_nm = 1550.0;
  double dn_dT = 1.8e-4;

  void validate() const;
};

// Fraction of all phase shifters that are masked or exactly zero.
double ps_sparsity(const Network& net, const MaskSet& masks);
double ps_sparsity(const Network& net);

// Fraction of entries with modulus below eps.
double matrix_sparsity(const ComplexMatrix& w, double eps = 1e-3);

// Mean circular magnitude over all phase shifters; pruned ones count as 0.
double mean_phase(const Network& net, const MaskSet& masks);

// Sum over active shifters of p_pi * magnitude / pi, in mW.
double static_power(const Network& net, const MaskSet& masks, const PowerModel& pm = {});

// Temperature rise that produces `phase` radians in one shifter, in kelvin.
double delta_T(double phase, const PowerModel& pm = {});

struct KindCount {
  std::size_t total = 0;
  std::size_t zero = 0;
};

struct LayerBreakdown {
  KindCount theta, phi, sigma, screen;
  std::size_t total() const { return theta.total + phi.total + sigma.total + screen.total; }
  std::size_t zero() const { return theta.zero + phi.zero + sigma.zero + screen.zero; }
};

std::vector<LayerBreakdown> sparsity_breakdown(const Network& net, const MaskSet& masks);

struct NoiseConfig {
  double sigma_ps = 0.0;  // standard deviation in units of pi radians
  std::size_t iterations = 1000;
  std::uint64_t seed = 0;
  bool perturb_pruned = false;  // also perturb masked (zero-drive) shifters

  void validate() const;
};

struct NoiseResult {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation across iterations
  std::vector<double> accuracies;
};

// Perturbs every active phase by N(0, (sigma_ps*pi)^2) per iteration and
// evaluates a copy. The input network is not modified.
NoiseResult noise_monte_carlo(const Network& net, const MaskSet& masks, std::span<const Sample> data,
                              const NoiseConfig& nc);

struct StudyPoint {
  double matrix_sparsity = 0.0;
  double ps_sparsity = 0.0;
  std::size_t rotations = 0;
};

// Builds unitaries from a random permutation followed by m random Givens
// rotations on random port pairs, with m swept geometrically from 0 to 4n^2
// across the samples (m + 1 evenly spaced in log scale), and decomposes each.
std::vector<StudyPoint> unitary_sparsity_study(std::size_t samples, std::size_t n, double eps,
                                               std::uint64_t seed, bool identity_first = false);

// Matrix and mesh-phase sparsity of one unitary. Phases count as zero when
// their canonical value is below 1e-9 or within 1e-9 of 2*pi.
StudyPoint unitary_sparsity(const ComplexMatrix& u, double eps);

// Counts of circular magnitudes of active phases in `bins` uniform bins
// over [0, pi].
std::vector<std::size_t> phase_histogram(const Network& net, const MaskSet& masks,
                                         std::size_t bins = 50);

}  // namespace scipnn

#endif  // SCIPNN_ANALYSIS_HPP
