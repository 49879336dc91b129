// Copyright 2026 The scipnn Authors
// Licensed under the Apache License, Version 2.0

#include "scipnn/autograd.hpp"

#include <cmath>

#include "scipnn/engine.hpp"
#include "scipnn/error.hpp"
#include "scipnn/parallel.hpp"

namespace scipnn {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kOriginGuard = 1e-12;
// Samples per accumulation chunk. Partial sums are formed per chunk in sample
// order and then combined in chunk order, so the result does not depend on
// the worker count.
constexpr std::size_t kChunk = 16;

double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

// Adjoint of the modulus-softplus activation at z given the output adjoint.
cplx activation_adjoint(cplx z, cplx g_out) {
  const double r = std::abs(z);
  if (r <= kOriginGuard) {
    // Only the radial direction of the smooth extension is kept at the origin.
    return sigmoid(0.0) * g_out.real();
  }
  const cplx u = z / r;
  const cplx q = std::conj(g_out) * u;
  const double radial = q.real();
  const double tangential = -q.imag();
  return sigmoid(r) * radial * u + (softplus(r) / r) * tangential * (kI * u);
}

// Backpropagates through one mesh. `g` holds the adjoint of the mesh output
// on entry and of its input on return; `grad` receives the theta/phi pairs
// followed by the screen phases.
void mesh_adjoint(const CompiledMesh& mesh, std::span<const cplx> inputs, std::span<const cplx> out,
                  std::span<cplx> g, std::span<double> grad) {
  const std::size_t k_count = mesh.mzis.size();
  for (std::size_t k = 0; k < mesh.screen.size(); ++k) {
    grad[2 * k_count + k] += (std::conj(g[k]) * kI * out[k]).real();
    g[k] *= std::conj(mesh.screen[k]);
  }
  for (std::size_t j = k_count; j-- > 0;) {
    const CompiledMzi& z = mesh.mzis[j];
    const cplx x0 = inputs[2 * j], x1 = inputs[2 * j + 1];
    const cplx g0 = g[z.port], g1 = g[z.port + 1];
    const cplx y0 = z.t00 * x0 + z.t01 * x1;
    const cplx y1 = z.t10 * x0 + z.t11 * x1;
    const cplx dy0_dtheta = 0.5 * kI * y0 + z.g * (z.e * (0.5 * z.c) * x0 - (0.5 * z.s) * x1);
    const cplx dy1_dtheta = 0.5 * kI * y1 + z.g * (-z.e * (0.5 * z.s) * x0 - (0.5 * z.c) * x1);
    grad[2 * j] += (std::conj(g0) * dy0_dtheta + std::conj(g1) * dy1_dtheta).real();
    grad[2 * j + 1] += (kI * x0 * (std::conj(g0) * z.t00 + std::conj(g1) * z.t10)).real();
    g[z.port] = std::conj(z.t00) * g0 + std::conj(z.t10) * g1;
    g[z.port + 1] = std::conj(z.t01) * g0 + std::conj(z.t11) * g1;
  }
}

struct Accumulator {
  double loss = 0.0;
  GradientSet grad;
};

Accumulator zero_like(const Network& net) {
  Accumulator a;
  for (const PhotonicLayer& l : net.layers()) a.grad.phases.emplace_back(l.phase_count(), 0.0);
  a.grad.beta.assign(net.depth(), 0.0);
  return a;
}

void accumulate_sample(const Engine& engine, const Sample& sample, double weight, Accumulator& acc) {
  std::vector<LayerCache> caches;
  const CVector out = engine.forward(sample.features, &caches);
  const std::size_t classes = engine.class_count();
  const std::vector<double> logp = readout(out, classes);
  const double l = loss(logp, sample.label);
  if (!std::isfinite(l)) {
    fail(ErrorKind::Numerical, "non-finite loss at the output of layer " +
                                   std::to_string(engine.layers().size() - 1));
  }
  acc.loss += weight * l;

  const std::size_t width = engine.width();
  CVector g(width, 0.0);
  for (std::size_t k = 0; k < classes; ++k) {
    const double p = std::exp(logp[k]) - (k == sample.label ? 1.0 : 0.0);
    g[k] = 2.0 * weight * p * out[k];
  }

  const auto layers = engine.layers();
  for (std::size_t li = layers.size(); li-- > 0;) {
    const CompiledLayer& layer = layers[li];
    const LayerCache& c = caches[li];
    std::span<double> grad = acc.grad.phases[li];
    if (li + 1 != layers.size()) {
      for (std::size_t i = 0; i < width; ++i) g[i] = activation_adjoint(c.pre[i], g[i]);
    }
    double dbeta = 0.0;
    for (std::size_t i = 0; i < width; ++i) dbeta += (std::conj(g[i]) * c.u_out[i]).real();
    acc.grad.beta[li] += dbeta;
    for (cplx& z : g) z *= layer.beta;

    const std::size_t nv = 2 * layer.v.mzis.size() + width;
    mesh_adjoint(layer.u, c.u_inputs, c.u_out, g, grad.subspan(nv + width));
    for (std::size_t i = 0; i < width; ++i) {
      grad[nv + i] += (std::conj(g[i]) * c.v_out[i]).real() * layer.slope[i];
      g[i] *= layer.amp[i];
    }
    mesh_adjoint(layer.v, c.v_inputs, c.v_out, g, grad.subspan(0, nv));
  }
}

}  // namespace

MaskSet MaskSet::all_active(const Network& net) {
  MaskSet m;
  for (const PhotonicLayer& l : net.layers()) m.bits.emplace_back(l.phase_count(), 1);
  return m;
}

std::size_t MaskSet::active_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < bits.size(); ++l) n += active_count(l);
  return n;
}

std::size_t MaskSet::active_count(std::size_t layer) const {
  std::size_t n = 0;
  for (std::uint8_t b : bits.at(layer)) n += b != 0;
  return n;
}

std::size_t MaskSet::total_count() const {
  std::size_t n = 0;
  for (const auto& b : bits) n += b.size();
  return n;
}

void MaskSet::check(const Network& net) const {
  if (bits.size() != net.depth()) fail(ErrorKind::Shape, "mask set has the wrong layer count");
  for (std::size_t l = 0; l < bits.size(); ++l) {
    if (bits[l].size() != net.layer(l).phase_count()) {
      fail(ErrorKind::Shape, "mask for layer " + std::to_string(l) + " has length " +
                                 std::to_string(bits[l].size()) + ", expected " +
                                 std::to_string(net.layer(l).phase_count()));
    }
  }
}

void apply_masks(Network& net, const MaskSet& masks) {
  masks.check(net);
  auto phases = net.phases();
  for (std::size_t l = 0; l < phases.size(); ++l)
    for (std::size_t i = 0; i < phases[l].size(); ++i)
      if (!masks.bits[l][i]) phases[l][i] = 0.0;
  net.set_phases(phases);
}

BackwardResult backward(const Network& net, const MaskSet& masks, std::span<const Sample> batch) {
  if (batch.empty()) fail(ErrorKind::Shape, "backward needs a non-empty batch");
  masks.check(net);
  const Engine engine(net);
  const double weight = 1.0 / static_cast<double>(batch.size());
  const std::size_t chunks = (batch.size() + kChunk - 1) / kChunk;
  std::vector<Accumulator> partial(chunks, zero_like(net));
  parallel_for(chunks, [&](std::size_t ci) {
    const std::size_t end = std::min(batch.size(), (ci + 1) * kChunk);
    for (std::size_t s = ci * kChunk; s < end; ++s) accumulate_sample(engine, batch[s], weight, partial[ci]);
  });

  Accumulator total = std::move(partial.front());
  for (std::size_t ci = 1; ci < chunks; ++ci) {
    total.loss += partial[ci].loss;
    for (std::size_t l = 0; l < net.depth(); ++l) {
      total.grad.beta[l] += partial[ci].grad.beta[l];
      auto& dst = total.grad.phases[l];
      const auto& src = partial[ci].grad.phases[l];
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
    }
  }
  for (std::size_t l = 0; l < net.depth(); ++l)
    for (std::size_t i = 0; i < total.grad.phases[l].size(); ++i)
      total.grad.phases[l][i] *= static_cast<double>(masks.bits[l][i]);
  return {total.loss, std::move(total.grad)};
}

double mean_loss(const Network& net, std::span<const Sample> batch) {
  if (batch.empty()) fail(ErrorKind::Shape, "mean_loss needs a non-empty batch");
  const Engine engine(net);
  double total = 0.0;
  for (const Sample& s : batch) total += loss(readout(engine.forward(s.features), net.class_count()), s.label);
  return total / static_cast<double>(batch.size());
}

std::vector<double> finite_diff_gradient(const Network& net, const MaskSet& masks,
                                         std::span<const Sample> batch, double h,
                                         std::span<const PhaseIndex> indices) {
  if (!(h > 0.0)) fail(ErrorKind::Validation, "finite difference step must be positive");
  masks.check(net);
  std::vector<double> out;
  out.reserve(indices.size());
  for (const PhaseIndex& idx : indices) {
    if (!masks.active(idx.layer, idx.index)) {
      out.push_back(0.0);
      continue;
    }
    Network probe = net;
    std::vector<double> phases = net.layer(idx.layer).phase_vector();
    const double base = phases[idx.index];
    phases[idx.index] = base + h;
    probe.layer(idx.layer).set_phase_vector(phases);
    const double up = mean_loss(probe, batch);
    phases[idx.index] = base - h;
    probe.layer(idx.layer).set_phase_vector(phases);
    const double down = mean_loss(probe, batch);
    out.push_back((up - down) / (2.0 * h));
  }
  return out;
}

}  // namespace scipnn
