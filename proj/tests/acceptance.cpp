// Copyright 2026 The scipnn Authors
// Licensed under the Apache License, Version 2.0

// Acceptance run: one PASS/FAIL line per criterion. Criteria 1-7 are exact
// property checks; 8-13 train and prune on FFT features of MNIST and read
// their hyperparameters from configs/mnist_*.json. Tolerances are pinned here.
//
// MNIST is read from $SCIPNN_MNIST_DIR, falling back to /root/data/mnist.
//
// The exit status is 0 once every criterion has been evaluated, whatever the
// verdicts; pass --strict to exit 1 when any criterion fails.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "scipnn/analysis.hpp"
#include "scipnn/autograd.hpp"
#include "scipnn/config.hpp"
#include "scipnn/error.hpp"
#include "scipnn/log.hpp"
#include "scipnn/mesh.hpp"
#include "scipnn/model.hpp"
#include "scipnn/pruning.hpp"
#include "scipnn/rng.hpp"
#include "scipnn/training.hpp"

using namespace scipnn;
using scipnn::testing::random_batch;
using scipnn::testing::random_matrix;
using scipnn::testing::random_vector;

namespace {

constexpr double kPi = std::numbers::pi;

// Pinned tolerances.
constexpr double kRoundTripTol = 1e-9;
constexpr double kGradRelTol = 1e-4;
constexpr double kGradFloor = 1e-3;  // relative error denominator floor
constexpr double kSvdTol = 1e-8;
constexpr double kPowerPiMw = 25.0;
constexpr double kPowerTol = 1e-9;
constexpr double kDeltaTPi = 31.9;
constexpr double kDeltaTTol = 0.1;
constexpr double kReadoutTol = 1e-12;
constexpr double kBaselineAcc = 0.88;
constexpr double kIterativeSparsity = 0.45;
constexpr double kLthSparsity = 0.80;
constexpr double kLthReduction = 0.75;
constexpr double kHaarTol = 0.01;
constexpr double kStudySparseCut = 0.9;
constexpr double kStudySpan = 0.3;
constexpr double kNoiseSe = 2.0;
constexpr double kPeakDeltaLo = 0.05;
constexpr double kPeakDeltaHi = 0.15;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

int failures = 0;

void report(int id, const std::string& name, const std::function<Verdict()>& check) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = check();
  } catch (const std::exception& e) {
    v = {false, std::string("error: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!v.pass) ++failures;
  std::printf("%s %2d %s: %s (%.0fs)\n", v.pass ? "PASS" : "FAIL", id, name.c_str(), v.detail.c_str(), secs);
  std::fflush(stdout);
}

// ---- property criteria ----------------------------------------------------

Verdict clements_round_trip() {
  double worst = 0.0;
  for (std::size_t n : {2, 4, 8, 16}) {
    for (std::uint64_t s = 0; s < 50; ++s) {
      const ComplexMatrix u = haar_unitary(n, 100 * n + s);
      worst = std::max(worst, frobenius_norm(mesh_unitary(clements_decompose(u)) - u));
    }
  }
  return {worst < kRoundTripTol, "worst Frobenius residual " + fmt("%.2e", worst)};
}

Verdict gradient_oracle() {
  Rng rng(20260);
  double worst = 0.0;
  for (int instance = 0; instance < 200; ++instance) {
    const std::size_t width = 2 + rng.below(7);
    const std::size_t depth = 1 + rng.below(3);
    const std::size_t classes = 1 + rng.below(width);
    const Network net = Network::random(width, depth, classes, 7000 + instance, rng.uniform(0.5, 3.0));
    const Dataset batch = random_batch(1 + rng.below(3), width, classes, 9000 + instance);
    const MaskSet masks = MaskSet::all_active(net);
    const BackwardResult r = backward(net, masks, batch);
    std::vector<PhaseIndex> idx;
    for (int k = 0; k < 8; ++k) {
      const std::size_t l = rng.below(depth);
      idx.push_back({l, rng.below(net.layer(l).phase_count())});
    }
    const auto fd = finite_diff_gradient(net, masks, batch, 1e-5, idx);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const double a = r.grad.phases[idx[k].layer][idx[k].index];
      worst = std::max(worst, std::abs(a - fd[k]) / std::max({std::abs(a), std::abs(fd[k]), kGradFloor}));
    }
  }
  return {worst <= kGradRelTol, "worst relative error " + fmt("%.2e", worst)};
}

Verdict lth_reset_fidelity() {
  Network net = Network::random(8, 3, 4, 31, 1.5);
  PruneState state = PruneState::snapshot(net);
  Rng rng(32);
  const PowerModel pm;
  bool bit_equal = true, monotone = true;
  for (int round = 0; round < 20; ++round) {
    // Perturb the "trained" network so resets are observable.
    auto phases = net.phases();
    for (auto& layer : phases)
      for (double& p : layer) p += rng.uniform(-0.5, 0.5);
    net.set_phases(phases);
    apply_masks(net, state.masks);
    const MaskSet before = state.masks;
    const double k = rng.uniform(1.0, 30.0);
    const auto scope = rng.below(2) ? PruneScope::Global : PruneScope::Layerwise;
    lth_prune_round(net, state, k, scope, true, pm);
    for (std::size_t l = 0; l < net.depth(); ++l) {
      const auto p = net.layer(l).phase_vector();
      for (std::size_t i = 0; i < p.size(); ++i) {
        if (state.masks.active(l, i)) {
          if (std::bit_cast<std::uint64_t>(p[i]) != std::bit_cast<std::uint64_t>(state.initial_phases[l][i]))
            bit_equal = false;
        } else {
          if (p[i] != 0.0) bit_equal = false;
        }
        if (!before.active(l, i) && state.masks.active(l, i)) monotone = false;
      }
    }
  }
  return {bit_equal && monotone, std::string("survivors bit-equal: ") + (bit_equal ? "yes" : "no") +
                                     ", masks monotone: " + (monotone ? "yes" : "no") + ", sparsity " +
                                     fmt("%.3f", 1.0 - static_cast<double>(state.masks.active_count()) /
                                                          static_cast<double>(state.masks.total_count()))};
}

Verdict mask_suppression() {
  Network net = Network::random(8, 2, 4, 41, 1.5);
  PruneState state = PruneState::snapshot(net);
  lth_prune_round(net, state, 40.0, PruneScope::Layerwise, true, {});
  SplitDataset data;
  data.train = random_batch(100, 8, 4, 42);
  data.test = random_batch(20, 8, 4, 43);
  TrainConfig cfg;
  cfg.learning_rate = 0.05;
  cfg.batch_size = 10;
  cfg.epochs = 10;  // 10 steps per epoch: 100 steps
  const TrainReport rep = train(net, state.masks, data, cfg);
  std::size_t nonzero = 0;
  for (std::size_t l = 0; l < net.depth(); ++l) {
    const auto p = net.layer(l).phase_vector();
    for (std::size_t i = 0; i < p.size(); ++i)
      if (!state.masks.active(l, i) && p[i] != 0.0) ++nonzero;
  }
  return {nonzero == 0 && rep.steps == 100,
          std::to_string(rep.steps) + " steps, " + std::to_string(nonzero) + " pruned phases moved"};
}

Verdict svd_layer_oracle() {
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const ComplexMatrix w = random_matrix(8, 8, 500 + s);
    const PhotonicLayer layer = from_weight_matrix(w, 8);
    for (std::uint64_t t = 0; t < 5; ++t) {
      const CVector x = random_vector(8, 900 + 10 * s + t);
      const CVector want = matvec(w, x);
      const CVector got = layer_forward(layer, x);
      for (std::size_t i = 0; i < 8; ++i) worst = std::max(worst, std::abs(got[i] - want[i]));
    }
  }
  return {worst <= kSvdTol, "worst |Wx - layer(x)| " + fmt("%.2e", worst)};
}

Verdict power_thermal() {
  const PowerModel pm;  // 25 mW per pi, 135 um shifter, 1550 nm, dn/dT 1.8e-4
  Network net = Network::random(2, 1, 2, 1, 1.0);
  MaskSet masks = MaskSet::all_active(net);
  // One active phase at pi, everything else zero.
  auto p = net.layer(0).phase_vector();
  std::fill(p.begin(), p.end(), 0.0);
  p[0] = kPi;
  net.layer(0).set_phase_vector(p);
  const double power = static_power(net, masks, pm);
  const double dt = delta_T(kPi, pm);
  const bool ok = std::abs(power - kPowerPiMw) <= kPowerTol && std::abs(dt - kDeltaTPi) <= kDeltaTTol;
  return {ok, "P(pi) " + fmt("%.4f", power) + " mW, dT(pi) " + fmt("%.3f", dt) + " K"};
}

Verdict readout_and_norm() {
  double worst_sum = 0.0;
  bool norm_ok = true;
  for (std::uint64_t s = 0; s < 200; ++s) {
    CVector y = random_vector(16, 3000 + s);
    const double scale = std::pow(10.0, static_cast<double>(s % 9) - 4.0);
    for (cplx& z : y) z *= scale;
    double sum = 0.0;
    for (double v : readout(y, 10)) sum += std::exp(v);
    worst_sum = std::max(worst_sum, std::abs(sum - 1.0));

    const Network net = Network::random(16, 1, 10, 4000 + s, 0.5 + 0.01 * static_cast<double>(s));
    const CVector x = random_vector(16, 5000 + s);
    const PhotonicLayer& l = net.layer(0);
    if (vector_norm(layer_forward(l, x)) > l.beta * vector_norm(x) * (1.0 + 1e-12)) norm_ok = false;
  }
  return {worst_sum <= kReadoutTol && norm_ok, "worst |sum p - 1| " + fmt("%.1e", worst_sum) +
                                                   ", norm bound " + (norm_ok ? "holds" : "violated")};
}

// ---- MNIST criteria -------------------------------------------------------

std::string source_path(const std::string& rel) { return std::string(SCIPNN_SOURCE_DIR) + "/" + rel; }

std::string mnist_dir() {
  const char* env = std::getenv("SCIPNN_MNIST_DIR");
  return env ? env : "/root/data/mnist";
}

ExperimentConfig mnist_config(const std::string& name) {
  ExperimentConfig c = load_config(source_path("configs/" + name));
  c.dataset.mnist_dir = mnist_dir();
  return c;
}

struct Trained {
  ExperimentConfig cfg;
  SplitDataset data;
  Network net;
  PruneState state;
  double accuracy = 0.0;
};

std::optional<Trained> trained;
std::optional<PruneOutcome> layerwise;

Trained& require_trained() {
  if (!trained) fail(ErrorKind::Validation, "baseline network unavailable");
  return *trained;
}

Verdict baseline_accuracy() {
  Trained t;
  t.cfg = mnist_config("mnist_reference.json");
  t.data = load_dataset(t.cfg.dataset, t.cfg.network.width, t.cfg.network.classes);
  const auto& n = t.cfg.network;
  t.net = Network::random(n.width, n.depth, n.classes, n.seed, n.beta_init);
  t.state = PruneState::snapshot(t.net);
  train(t.net, t.state.masks, t.data, t.cfg.train);
  t.accuracy = evaluate(t.net, t.data.test);
  trained = std::move(t);
  return {trained->accuracy >= kBaselineAcc,
          "test accuracy " + fmt("%.4f", trained->accuracy) + " on " + std::to_string(trained->data.test.size()) +
              " images"};
}

double best_sparsity(const PruneOutcome& o) { return o.state.history[o.best_row].sparsity; }

Verdict baseline_pruning() {
  Trained& t = require_trained();
  PruneConfig pc = mnist_config("mnist_baseline.json").prune;
  pc.method = PruneMethod::BaselineIterative;
  const PruneOutcome it = baseline_prune(t.net, t.state, t.data, pc);
  pc.method = PruneMethod::BaselineOneShot;
  const PruneOutcome os = baseline_prune(t.net, t.state, t.data, pc);
  const double s_it = best_sparsity(it), s_os = best_sparsity(os);
  const double loss_it = t.accuracy - it.state.history[it.best_row].accuracy;
  const bool ok = s_it >= kIterativeSparsity && loss_it < pc.max_accuracy_loss && s_os < s_it;
  return {ok, "iterative " + fmt("%.4f", s_it) + " (loss " + fmt("%.4f", loss_it) + "), one-shot " +
                  fmt("%.4f", s_os) + " (loss " + fmt("%.4f", t.accuracy - os.state.history[os.best_row].accuracy) +
                  ")"};
}

double spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

Verdict layerwise_lth() {
  Trained& t = require_trained();
  const PruneConfig pc = mnist_config("mnist_reference.json").prune;
  if (pc.method != PruneMethod::LthLayerwise) fail(ErrorKind::Config, "reference config must use lth-layerwise");
  layerwise = lth_run(t.net, t.state, t.data, pc);
  const auto& h = layerwise->state.history;
  const HistoryRow& best = h[layerwise->best_row];
  const double mp_red = 1.0 - best.mean_phase / h[0].mean_phase;
  const double pw_red = 1.0 - best.static_power / h[0].static_power;
  const double loss = h[0].accuracy - best.accuracy;
  const bool ok = best.sparsity >= kLthSparsity && loss < pc.max_accuracy_loss && mp_red >= kLthReduction &&
                  pw_red >= kLthReduction;
  return {ok, "round " + std::to_string(best.round) + " sparsity " + fmt("%.4f", best.sparsity) + " loss " +
                  fmt("%.4f", loss) + ", mean phase -" + fmt("%.1f%%", 100 * mp_red) + ", power -" +
                  fmt("%.1f%%", 100 * pw_red)};
}

Verdict global_lth() {
  Trained& t = require_trained();
  if (!layerwise) fail(ErrorKind::Validation, "layer-wise run unavailable");
  const PruneConfig pc = mnist_config("mnist_lth_global.json").prune;
  if (pc.method != PruneMethod::LthGlobal) fail(ErrorKind::Config, "global config must use lth-global");
  const PruneOutcome g = lth_run(t.net, t.state, t.data, pc);
  const double s_g = best_sparsity(g), s_l = best_sparsity(*layerwise);
  const auto f_g = layer_pruned_fractions(g.best_masks);
  const auto f_l = layer_pruned_fractions(layerwise->best_masks);
  const bool ok = s_g < s_l && spread(f_g) > spread(f_l);
  std::string fr;
  for (double f : f_g) fr += (fr.empty() ? "" : "/") + fmt("%.2f", f);
  return {ok, "global " + fmt("%.4f", s_g) + " vs layer-wise " + fmt("%.4f", s_l) + ", per-layer fractions " + fr +
                  " (spread " + fmt("%.3f", spread(f_g)) + " vs " + fmt("%.3f", spread(f_l)) + ")"};
}

Verdict unitary_study() {
  const StudyConfig sc = mnist_config("mnist_reference.json").study;
  double haar_worst = 0.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const StudyPoint p = unitary_sparsity(haar_unitary(16, 70000 + s), sc.eps);
    haar_worst = std::max({haar_worst, p.matrix_sparsity, p.ps_sparsity});
  }
  const auto pts = unitary_sparsity_study(sc.samples, sc.n, sc.eps, sc.seed, sc.identity_first);
  double lo = 1.0, hi = 0.0;
  std::size_t sparse = 0;
  for (const StudyPoint& p : pts) {
    if (p.matrix_sparsity <= kStudySparseCut) continue;
    ++sparse;
    lo = std::min(lo, p.ps_sparsity);
    hi = std::max(hi, p.ps_sparsity);
  }
  const double span = sparse ? hi - lo : 0.0;
  const bool ok = sc.samples == 10000 && sc.n == 16 && haar_worst <= kHaarTol && span >= kStudySpan;
  return {ok, "Haar worst " + fmt("%.4f", haar_worst) + "; " + std::to_string(sparse) + " of " +
                  std::to_string(pts.size()) + " samples above " + fmt("%.1f", kStudySparseCut) +
                  " matrix sparsity, PS sparsity span " + fmt("%.4f", span)};
}

Verdict noise_study() {
  Trained& t = require_trained();
  if (!layerwise) fail(ErrorKind::Validation, "layer-wise run unavailable");
  const NoiseSweepConfig nc = mnist_config("mnist_reference.json").noise;
  std::vector<Sample> test = t.data.test;
  if (nc.eval_limit > 0 && test.size() > nc.eval_limit) test.resize(nc.eval_limit);
  const MaskSet dense = MaskSet::all_active(t.net);

  struct Curve {
    std::vector<double> mean, se;
  } u, p;
  for (double sigma : nc.sigma_ps) {
    const NoiseConfig cfg{sigma, nc.iterations, nc.seed, nc.perturb_pruned};
    const NoiseResult ru = noise_monte_carlo(t.net, dense, test, cfg);
    const NoiseResult rp = noise_monte_carlo(layerwise->best_network, layerwise->best_masks, test, cfg);
    const double n = static_cast<double>(nc.iterations);
    u.mean.push_back(ru.mean);
    u.se.push_back(ru.std / std::sqrt(n));
    p.mean.push_back(rp.mean);
    p.se.push_back(rp.std / std::sqrt(n));
    std::printf("     sigma_ps %.4f  unpruned %.4f +- %.4f  pruned %.4f +- %.4f  delta %.4f\n", sigma, ru.mean,
                ru.std, rp.mean, rp.std, ru.mean - rp.mean);
  }
  auto monotone = [](const Curve& c) {
    for (std::size_t i = 1; i < c.mean.size(); ++i)
      if (c.mean[i] > c.mean[i - 1] + kNoiseSe * std::hypot(c.se[i], c.se[i - 1])) return false;
    return true;
  };
  bool faster = true;
  double peak = -1.0;
  for (std::size_t i = 0; i < u.mean.size(); ++i) {
    const double drop_u = u.mean[0] - u.mean[i], drop_p = p.mean[0] - p.mean[i];
    const double se = std::hypot(std::hypot(u.se[0], u.se[i]), std::hypot(p.se[0], p.se[i]));
    if (drop_p < drop_u - kNoiseSe * se) faster = false;
    peak = std::max(peak, u.mean[i] - p.mean[i]);
  }
  const bool mono = monotone(u) && monotone(p);
  const bool ok = nc.iterations == 1000 && mono && faster && peak >= kPeakDeltaLo && peak <= kPeakDeltaHi;
  return {ok, std::string("monotone: ") + (mono ? "yes" : "no") + ", pruned degrades at least as fast: " +
                  (faster ? "yes" : "no") + ", peak delta " + fmt("%.4f", peak) + " over " +
                  std::to_string(nc.sigma_ps.size()) + " points, " + std::to_string(test.size()) + " test images, " +
                  (nc.perturb_pruned ? "all shifters perturbed" : "active shifters perturbed")};
}

}  // namespace

int main(int argc, char** argv) {
  const bool strict = argc > 1 && std::string(argv[1]) == "--strict";
  set_warning_handler([](const std::string&) {});
  report(1, "Clements round trip", clements_round_trip);
  report(2, "gradient oracle", gradient_oracle);
  report(3, "LTH reset fidelity", lth_reset_fidelity);
  report(4, "mask suppression", mask_suppression);
  report(5, "SVD layer oracle", svd_layer_oracle);
  report(6, "power and thermal formulas", power_thermal);
  report(7, "readout normalization and norm bound", readout_and_norm);
  report(8, "baseline accuracy", baseline_accuracy);
  report(9, "iterative vs one-shot baseline pruning", baseline_pruning);
  report(10, "layer-wise LTH", layerwise_lth);
  report(11, "global LTH", global_lth);
  report(12, "unitary sparsity study", unitary_study);
  report(13, "phase noise Monte Carlo", noise_study);
  std::printf("%d of 13 criteria failed\n", failures);
  return strict && failures > 0 ? 1 : 0;
}
