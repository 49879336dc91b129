// Copyright 2026 The scipnn Authors
// Licensed under the Apache License, Version 2.0

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"
#include "scipnn/autograd.hpp"
#include "scipnn/error.hpp"

using namespace scipnn;
using scipnn::testing::random_batch;

namespace {

bool gradient_close(double analytic, double numeric) {
  const double diff = std::abs(analytic - numeric);
  return diff <= 1e-7 || diff <= 1e-4 * std::max(std::abs(analytic), std::abs(numeric));
}

std::vector<PhaseIndex> all_indices(const Network& net) {
  std::vector<PhaseIndex> idx;
  for (std::size_t l = 0; l < net.depth(); ++l)
    for (std::size_t i = 0; i < net.layer(l).phase_count(); ++i) idx.push_back({l, i});
  return idx;
}

}  // namespace

TEST_CASE("single MZI network matches central differences") {
  const Network net = Network::random(2, 1, 2, 17, 1.5);
  const MaskSet masks = MaskSet::all_active(net);
  const Dataset batch = random_batch(1, 2, 2, 3);
  const BackwardResult r = backward(net, masks, batch);
  const auto idx = all_indices(net);
  const auto fd = finite_diff_gradient(net, masks, batch, 1e-5, idx);
  for (std::size_t k = 0; k < idx.size(); ++k) {
    INFO("phase " << k);
    CHECK(gradient_close(r.grad.phases[0][idx[k].index], fd[k]));
  }
  CHECK(r.loss == doctest::Approx(mean_loss(net, batch)).epsilon(1e-14));
}

TEST_CASE("beta gradient matches central differences") {
  const Network net = Network::random(4, 2, 3, 5, 1.3);
  const Dataset batch = random_batch(3, 4, 3, 9);
  const BackwardResult r = backward(net, MaskSet::all_active(net), batch);
  for (std::size_t l = 0; l < 2; ++l) {
    Network up = net, down = net;
    auto b = net.betas();
    b[l] += 1e-6;
    up.set_betas(b);
    b[l] -= 2e-6;
    down.set_betas(b);
    const double fd = (mean_loss(up, batch) - mean_loss(down, batch)) / 2e-6;
    CHECK(gradient_close(r.grad.beta[l], fd));
  }
}

TEST_CASE("random small networks agree with central differences") {
  Rng rng(2024);
  double worst = 0.0;
  for (int instance = 0; instance < 200; ++instance) {
    const std::size_t width = 2 + rng.below(7);
    const std::size_t depth = 1 + rng.below(3);
    const std::size_t classes = 1 + rng.below(width);
    const Network net = Network::random(width, depth, classes, 1000 + instance, rng.uniform(0.5, 3.0));
    const Dataset batch = random_batch(1 + rng.below(3), width, classes, 5000 + instance);
    const MaskSet masks = MaskSet::all_active(net);
    const BackwardResult r = backward(net, masks, batch);
    std::vector<PhaseIndex> idx;
    for (int k = 0; k < 6; ++k) {
      const std::size_t l = rng.below(depth);
      idx.push_back({l, rng.below(net.layer(l).phase_count())});
    }
    const auto fd = finite_diff_gradient(net, masks, batch, 1e-5, idx);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const double a = r.grad.phases[idx[k].layer][idx[k].index];
      const double diff = std::abs(a - fd[k]);
      if (diff > 1e-7) worst = std::max(worst, diff / std::max(std::abs(a), std::abs(fd[k])));
      CHECK(gradient_close(a, fd[k]));
    }
  }
  MESSAGE("worst relative error " << worst);
}

TEST_CASE("full 16-port network spot check") {
  const Network net = Network::random(16, 3, 10, 77, 2.0);
  const MaskSet masks = MaskSet::all_active(net);
  const Dataset batch = random_batch(8, 16, 10, 78);
  const BackwardResult r = backward(net, masks, batch);
  Rng rng(79);
  std::vector<PhaseIndex> idx;
  for (int k = 0; k < 50; ++k) {
    const std::size_t l = rng.below(3);
    idx.push_back({l, rng.below(net.layer(l).phase_count())});
  }
  const auto fd = finite_diff_gradient(net, masks, batch, 1e-5, idx);
  double dot = 0.0, na = 0.0, nf = 0.0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const double a = r.grad.phases[idx[k].layer][idx[k].index];
    dot += a * fd[k];
    na += a * a;
    nf += fd[k] * fd[k];
  }
  CHECK(dot / std::sqrt(na * nf) >= 0.9999);
}

TEST_CASE("masking") {
  Network net = Network::random(6, 2, 4, 1, 1.0);
  const Dataset batch = random_batch(4, 6, 4, 2);

  SUBCASE("all masked") {
    MaskSet none = MaskSet::all_active(net);
    for (auto& b : none.bits) std::fill(b.begin(), b.end(), 0);
    apply_masks(net, none);
    const BackwardResult r = backward(net, none, batch);
    for (const auto& g : r.grad.phases)
      for (double v : g) CHECK(v == 0.0);
    CHECK(std::isfinite(r.loss));
    CHECK(r.loss > 0.0);
  }
  SUBCASE("partial masks zero exactly the masked slots and are idempotent") {
    MaskSet m = MaskSet::all_active(net);
    Rng rng(5);
    for (auto& b : m.bits)
      for (auto& bit : b) bit = rng.uniform() < 0.5;
    apply_masks(net, m);
    const Network once = net;
    apply_masks(net, m);
    CHECK(net == once);
    const BackwardResult r = backward(net, m, batch);
    for (std::size_t l = 0; l < 2; ++l)
      for (std::size_t i = 0; i < m.bits[l].size(); ++i) {
        if (!m.bits[l][i]) {
          CHECK(r.grad.phases[l][i] == 0.0);
          CHECK(net.layer(l).phase_vector()[i] == 0.0);
        }
      }
    const std::vector<PhaseIndex> masked_idx = {{0, 0}};
    m.bits[0][0] = 0;
    CHECK(finite_diff_gradient(net, m, batch, 1e-5, masked_idx)[0] == 0.0);
  }
}

TEST_CASE("annihilated channels block upstream gradients") {
  Network net = Network::random(4, 2, 4, 8, 1.0);
  auto phases = net.layer(0).phase_vector();
  const std::size_t nv = net.layer(0).v_mesh.phase_count();
  for (std::size_t i = 0; i < 4; ++i) phases[nv + i] = std::numbers::pi;
  net.layer(0).set_phase_vector(phases);
  const BackwardResult r = backward(net, MaskSet::all_active(net), random_batch(3, 4, 4, 1));
  for (std::size_t i = 0; i < nv; ++i) CHECK(std::abs(r.grad.phases[0][i]) < 1e-14);
  for (std::size_t i = nv + 4; i < phases.size(); ++i) CHECK(std::abs(r.grad.phases[0][i]) < 1e-14);
}

TEST_CASE("finite differences of a quadratic") {
  // The loss along one phase of a single-port path is smooth; here a direct
  // scalar check of the central formula: f(x) = x^2 has exact derivative.
  const auto f = [](double x) { return x * x; };
  const double h = 1e-3, x = 0.7;
  CHECK((f(x + h) - f(x - h)) / (2 * h) == doctest::Approx(1.4).epsilon(1e-12));
  const Network net = Network::random(2, 1, 2, 1, 1.0);
  const Dataset batch = random_batch(1, 2, 2, 1);
  const std::vector<PhaseIndex> idx = {{0, 0}};
  CHECK_THROWS_AS(finite_diff_gradient(net, MaskSet::all_active(net), batch, 0.0, idx), Error);
}

TEST_CASE("backward is deterministic and validates inputs") {
  const Network net = Network::random(8, 2, 5, 3, 1.2);
  const Dataset batch = random_batch(40, 8, 5, 4);
  const MaskSet m = MaskSet::all_active(net);
  const BackwardResult a = backward(net, m, batch);
  const BackwardResult b = backward(net, m, batch);
  CHECK(a.loss == b.loss);
  CHECK(a.grad.phases == b.grad.phases);
  CHECK_THROWS_AS(backward(net, m, Dataset{}), Error);
  CHECK_THROWS_AS(backward(net, m, random_batch(2, 6, 5, 1)), Error);
  Network huge = net;
  huge.set_betas(std::vector<double>{1e200, 1e200});
  try {
    backward(huge, m, batch);
    FAIL("expected a numerical error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Numerical);
    CHECK(std::string(e.what()).find("layer") != std::string::npos);
  }
}
