// Copyright 2026 The scipnn Authors
// Licensed under the Apache License, Version 2.0

#include "scipnn/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "scipnn/engine.hpp"
#include "scipnn/error.hpp"
#include "scipnn/mesh.hpp"
#include "scipnn/parallel.hpp"
#include "scipnn/rng.hpp"

namespace scipnn {

namespace {

constexpr std::uint64_t kNoiseStream = 0x4E4F495345;  // "NOISE"
constexpr std::uint64_t kStudyStream = 0x5354554459;  // "STUDY"
constexpr double kStudyZero = 1e-9;

template <typename F>
void for_each_phase(const Network& net, const MaskSet& masks, F&& f) {
  masks.check(net);
  for (std::size_t l = 0; l < net.depth(); ++l) {
    const auto p = net.layer(l).phase_vector();
    for (std::size_t i = 0; i < p.size(); ++i) f(l, i, masks.active(l, i), p[i]);
  }
}

std::size_t correct_count(const Engine& engine, std::span<const Sample> data) {
  std::size_t c = 0;
  for (const Sample& s : data) c += engine.predict(s.features) == s.label;
  return c;
}

}  // namespace

void PowerModel::validate() const {
  if (!(p_pi_mw > 0 && ps_length_um > 0 && wavelength_nm > 0 && dn_dT > 0))
    fail(ErrorKind::Config, "power model parameters must be positive");
}

double ps_sparsity(const Network& net, const MaskSet& masks) {
  std::size_t zero = 0, total = 0;
  for_each_phase(net, masks, [&](std::size_t, std::size_t, bool active, double v) {
    ++total;
    zero += !active || v == 0.0;
  });
  return total == 0 ? 0.0 : static_cast<double>(zero) / static_cast<double>(total);
}

double ps_sparsity(const Network& net) { return ps_sparsity(net, MaskSet::all_active(net)); }

double matrix_sparsity(const ComplexMatrix& w, double eps) {
  if (!(eps > 0.0)) fail(ErrorKind::Validation, "eps must be positive");
  const auto& e = w.entries();
  if (e.empty()) return 0.0;
  const auto small = std::count_if(e.begin(), e.end(), [&](const cplx& z) { return std::abs(z) < eps; });
  return static_cast<double>(small) / static_cast<double>(e.size());
}

double mean_phase(const Network& net, const MaskSet& masks) {
  double sum = 0.0;
  std::size_t total = 0;
  for_each_phase(net, masks, [&](std::size_t, std::size_t, bool active, double v) {
    ++total;
    if (active) sum += circular_magnitude(v);
  });
  return total == 0 ? 0.0 : sum / static_cast<double>(total);
}

double static_power(const Network& net, const MaskSet& masks, const PowerModel& pm) {
  pm.validate();
  double sum = 0.0;
  for_each_phase(net, masks, [&](std::size_t, std::size_t, bool active, double v) {
    if (active) sum += circular_magnitude(v);
  });
  return pm.p_pi_mw * sum / std::numbers::pi;
}

double delta_T(double phase, const PowerModel& pm) {
  pm.validate();
  if (!(phase >= 0.0)) fail(ErrorKind::Validation, "phase must be non-negative");
  const double lambda = pm.wavelength_nm * 1e-9;
  const double length = pm.ps_length_um * 1e-6;
  return phase * lambda / (2.0 * std::numbers::pi * length * pm.dn_dT);
}

std::vector<LayerBreakdown> sparsity_breakdown(const Network& net, const MaskSet& masks) {
  std::vector<LayerBreakdown> out(net.depth());
  const auto kinds = layer_phase_kinds(net.width());
  for_each_phase(net, masks, [&](std::size_t l, std::size_t i, bool active, double v) {
    KindCount* k = nullptr;
    switch (kinds[i]) {
      case PhaseKind::Theta: k = &out[l].theta; break;
      case PhaseKind::Phi: k = &out[l].phi; break;
      case PhaseKind::Sigma: k = &out[l].sigma; break;
      case PhaseKind::Screen: k = &out[l].screen; break;
    }
    ++k->total;
    k->zero += !active || v == 0.0;
  });
  return out;
}

void NoiseConfig::validate() const {
  if (!(sigma_ps >= 0.0) || !std::isfinite(sigma_ps)) fail(ErrorKind::Config, "sigma_ps must be non-negative");
  if (iterations == 0) fail(ErrorKind::Config, "iterations must be at least 1");
}

NoiseResult noise_monte_carlo(const Network& net, const MaskSet& masks, std::span<const Sample> data,
                              const NoiseConfig& nc) {
  nc.validate();
  masks.check(net);
  NoiseResult r;
  r.accuracies.assign(nc.iterations, 0.0);
  if (data.empty()) return r;
  const auto base = net.phases();
  const double sd = nc.sigma_ps * std::numbers::pi;
  const double n = static_cast<double>(data.size());
  parallel_for(nc.iterations, [&](std::size_t it) {
    Rng rng(derive_seed(nc.seed, kNoiseStream, it));
    auto phases = base;
    for (std::size_t l = 0; l < phases.size(); ++l)
      for (std::size_t i = 0; i < phases[l].size(); ++i)
        if (nc.perturb_pruned || masks.active(l, i)) phases[l][i] += sd * rng.normal();
    Network noisy = net;
    noisy.set_phases(phases);
    r.accuracies[it] = static_cast<double>(correct_count(Engine(noisy), data)) / n;
  });
  double sum = 0.0;
  for (double a : r.accuracies) sum += a;
  r.mean = sum / static_cast<double>(nc.iterations);
  if (nc.iterations > 1) {
    double ss = 0.0;
    for (double a : r.accuracies) ss += (a - r.mean) * (a - r.mean);
    r.std = std::sqrt(ss / static_cast<double>(nc.iterations - 1));
  }
  return r;
}

StudyPoint unitary_sparsity(const ComplexMatrix& u, double eps) {
  StudyPoint p;
  p.matrix_sparsity = matrix_sparsity(u, eps);
  const auto phases = clements_decompose(u).phase_vector();
  const auto zeros = std::count_if(phases.begin(), phases.end(), [](double v) {
    return v < kStudyZero || kTwoPi - v < kStudyZero;
  });
  p.ps_sparsity = phases.empty() ? 0.0 : static_cast<double>(zeros) / static_cast<double>(phases.size());
  return p;
}

std::vector<StudyPoint> unitary_sparsity_study(std::size_t samples, std::size_t n, double eps,
                                               std::uint64_t seed, bool identity_first) {
  if (samples == 0) fail(ErrorKind::Validation, "samples must be at least 1");
  if (n < 2) fail(ErrorKind::Validation, "study needs at least 2 ports");
  const std::size_t max_rot = 4 * n * n;
  std::vector<StudyPoint> out(samples);
  parallel_for(samples, [&](std::size_t s) {
    if (identity_first && s == 0) {
      out[s] = unitary_sparsity(ComplexMatrix::identity(n), eps);
      return;
    }
    Rng rng(derive_seed(seed, kStudyStream, s));
    // Geometric spacing of the rotation count: sparsity decays within a few
    // rotations, so a linear sweep would leave the sparse end nearly empty.
    const double frac = samples == 1 ? 0.0 : static_cast<double>(s) / static_cast<double>(samples - 1);
    const auto m = static_cast<std::size_t>(
        std::llround(std::pow(static_cast<double>(max_rot + 1), frac)) - 1);
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    ComplexMatrix u(n, n);
    for (std::size_t i = 0; i < n; ++i) u(i, perm[i]) = 1.0;
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t a = rng.below(n);
      std::size_t b = rng.below(n - 1);
      if (b >= a) ++b;
      const double angle = rng.uniform(0.0, kTwoPi);
      const double c = std::cos(angle), sn = std::sin(angle);
      for (std::size_t col = 0; col < n; ++col) {
        const cplx ua = u(a, col), ub = u(b, col);
        u(a, col) = c * ua - sn * ub;
        u(b, col) = sn * ua + c * ub;
      }
    }
    out[s] = unitary_sparsity(u, eps);
    out[s].rotations = m;
  });
  return out;
}

std::vector<std::size_t> phase_histogram(const Network& net, const MaskSet& masks, std::size_t bins) {
  if (bins == 0) fail(ErrorKind::Validation, "bins must be positive");
  std::vector<std::size_t> h(bins, 0);
  for_each_phase(net, masks, [&](std::size_t, std::size_t, bool active, double v) {
    if (!active) return;
    const double m = circular_magnitude(v);
    const auto b = std::min(bins - 1, static_cast<std::size_t>(m / std::numbers::pi * static_cast<double>(bins)));
    ++h[b];
  });
  return h;
}

}  // namespace scipnn
