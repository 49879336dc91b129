// Copyright 2026 The scipnn Authors
// Licensed under the Apache License, Version 2.0

#include "scipnn/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "scipnn/error.hpp"

namespace scipnn {

namespace {

using nlohmann::json;

// Walks one JSON object, checking key names and value types.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(ErrorKind::Config, where("") + " must be an object");
  }

  void finish() const {
    for (const auto& [key, _] : j_.items())
      if (!seen_.count(key)) fail(ErrorKind::Config, "unknown key " + where(key));
  }

  template <typename T>
  void get(const std::string& key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    const json& v = j_.at(key);
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw std::invalid_argument("expected a boolean");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw std::invalid_argument("expected an integer");
        if (std::is_unsigned_v<T> && v.get<long long>() < 0 && !v.is_number_unsigned())
          throw std::invalid_argument("expected a non-negative integer");
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw std::invalid_argument("expected a number");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw std::invalid_argument("expected a string");
      }
      out = v.get<T>();
    } catch (const std::exception& e) {
      fail(ErrorKind::Config, where(key) + ": " + e.what());
    }
  }

  void numbers(const std::string& key, std::vector<double>& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    const json& v = j_.at(key);
    if (!v.is_array()) fail(ErrorKind::Config, where(key) + ": expected an array of numbers");
    out.clear();
    for (const json& x : v) {
      if (!x.is_number()) fail(ErrorKind::Config, where(key) + ": expected an array of numbers");
      out.push_back(x.get<double>());
    }
  }

  template <typename F>
  void section(const std::string& key, F&& f) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    Reader sub(j_.at(key), path_.empty() ? key : path_ + "." + key);
    f(sub);
    sub.finish();
  }

  template <typename E>
  void choice(const std::string& key, E& out, const std::vector<std::pair<std::string, E>>& options) {
    std::string s;
    get(key, s);
    if (s.empty()) return;
    for (const auto& [name, value] : options)
      if (name == s) {
        out = value;
        return;
      }
    std::string names;
    for (const auto& [name, _] : options) names += (names.empty() ? "" : ", ") + name;
    fail(ErrorKind::Config, where(key) + ": unknown value '" + s + "' (expected one of " + names + ")");
  }

 private:
  std::string where(const std::string& key) const {
    if (key.empty()) return path_.empty() ? "config" : "'" + path_ + "'";
    return "'" + (path_.empty() ? key : path_ + "." + key) + "'";
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_train(Reader& r, TrainConfig& t) {
  r.get("learning_rate", t.learning_rate);
  r.get("epochs", t.epochs);
  r.get("batch_size", t.batch_size);
  r.choice("optimizer", t.optimizer, {{"adam", Optimizer::Adam}, {"sgd", Optimizer::Sgd}});
  r.get("beta1", t.beta1);
  r.get("beta2", t.beta2);
  r.get("epsilon", t.epsilon);
  r.get("train_beta", t.train_beta);
  r.get("seed", t.seed);
}

}  // namespace

void ExperimentConfig::override_seed(std::uint64_t seed) {
  dataset.seed = seed;
  network.seed = seed;
  train.seed = seed;
  prune.retrain.seed = seed;
  noise.seed = seed;
  study.seed = seed;
}

void ExperimentConfig::validate() const {
  if (network.width < 2) fail(ErrorKind::Config, "network.width must be at least 2");
  if (network.depth < 1) fail(ErrorKind::Config, "network.depth must be at least 1");
  if (network.classes < 1 || network.classes > network.width)
    fail(ErrorKind::Config, "network.classes must lie in [1, width]");
  if (!(network.beta_init > 0.0)) fail(ErrorKind::Config, "network.beta_init must be positive");
  if (dataset.kind == DatasetConfig::Kind::Mnist) {
    if (dataset.features.dim != network.width)
      fail(ErrorKind::Config, "dataset.feature_dim must equal network.width");
    if (network.classes != 10) fail(ErrorKind::Config, "MNIST needs network.classes = 10");
  }
  if (!(dataset.test_fraction > 0.0 && dataset.test_fraction < 1.0))
    fail(ErrorKind::Config, "dataset.test_fraction must lie in (0, 1)");
  if (!(dataset.noise >= 0.0)) fail(ErrorKind::Config, "dataset.noise must be non-negative");
  if (dataset.n_per_class == 0) fail(ErrorKind::Config, "dataset.n_per_class must be positive");
  train.validate();
  prune.validate();
  power.validate();
  if (noise.iterations == 0) fail(ErrorKind::Config, "noise.iterations must be at least 1");
  if (noise.sigma_ps.empty()) fail(ErrorKind::Config, "noise.sigma_ps must not be empty");
  for (double s : noise.sigma_ps)
    if (!(s >= 0.0)) fail(ErrorKind::Config, "noise.sigma_ps values must be non-negative");
  if (study.samples == 0 || study.n < 2) fail(ErrorKind::Config, "study needs samples >= 1 and n >= 2");
  if (!(study.eps > 0.0)) fail(ErrorKind::Config, "study.eps must be positive");
}

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Config, std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig c;
  {
    Reader r(j, "");
    r.section("dataset", [&](Reader& d) {
      d.choice("kind", c.dataset.kind,
               {{"mnist", DatasetConfig::Kind::Mnist}, {"synthetic", DatasetConfig::Kind::Synthetic}});
      d.get("mnist_dir", c.dataset.mnist_dir);
      d.get("feature_dim", c.dataset.features.dim);
      d.get("block_offset", c.dataset.features.offset);
      d.get("train_limit", c.dataset.features.train_limit);
      d.get("test_limit", c.dataset.features.test_limit);
      d.get("n_per_class", c.dataset.n_per_class);
      d.get("noise", c.dataset.noise);
      d.get("test_fraction", c.dataset.test_fraction);
      d.get("seed", c.dataset.seed);
    });
    r.section("network", [&](Reader& n) {
      n.get("width", c.network.width);
      n.get("depth", c.network.depth);
      n.get("classes", c.network.classes);
      n.get("beta_init", c.network.beta_init);
      n.get("seed", c.network.seed);
    });
    r.section("train", [&](Reader& t) { read_train(t, c.train); });
    c.prune.retrain = c.train;
    r.section("prune", [&](Reader& p) {
      p.choice("method", c.prune.method,
               {{"baseline-oneshot", PruneMethod::BaselineOneShot},
                {"baseline-iterative", PruneMethod::BaselineIterative},
                {"lth-layerwise", PruneMethod::LthLayerwise},
                {"lth-global", PruneMethod::LthGlobal}});
      p.get("alpha", c.prune.alpha);
      p.numbers("k_schedule", c.prune.k_schedule);
      p.get("max_accuracy_loss", c.prune.max_accuracy_loss);
      p.get("min_sparsity", c.prune.min_sparsity);
      p.get("r_max", c.prune.r_max);
      p.get("iterative_steps", c.prune.iterative_steps);
      p.get("reset_beta", c.prune.reset_beta);
      p.section("retrain", [&](Reader& t) { read_train(t, c.prune.retrain); });
    });
    r.section("noise", [&](Reader& n) {
      n.numbers("sigma_ps", c.noise.sigma_ps);
      n.get("iterations", c.noise.iterations);
      n.get("eval_limit", c.noise.eval_limit);
      n.get("seed", c.noise.seed);
      n.get("perturb_pruned", c.noise.perturb_pruned);
    });
    r.section("study", [&](Reader& s) {
      s.get("samples", c.study.samples);
      s.get("n", c.study.n);
      s.get("eps", c.study.eps);
      s.get("identity_first", c.study.identity_first);
      s.get("seed", c.study.seed);
    });
    r.section("power", [&](Reader& p) {
      p.get("p_pi_mw", c.power.p_pi_mw);
      p.get("ps_length_um", c.power.ps_length_um);
      p.get("wavelength_nm", c.power.wavelength_nm);
      p.get("dn_dT", c.power.dn_dT);
    });
    r.get("output_dir", c.output_dir);
    r.finish();
  }
  c.prune.power = c.power;
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

SplitDataset load_dataset(const DatasetConfig& cfg, std::size_t width, std::size_t classes) {
  if (cfg.kind == DatasetConfig::Kind::Synthetic)
    return split(synthetic_blobs(cfg.n_per_class, classes, width, cfg.seed, cfg.noise), cfg.test_fraction);
  std::string dir = cfg.mnist_dir;
  if (dir.empty()) {
    const char* env = std::getenv("SCIPNN_MNIST_DIR");
    if (!env) fail(ErrorKind::Io, "no MNIST directory: set dataset.mnist_dir or SCIPNN_MNIST_DIR");
    dir = env;
  }
  return load_mnist_features(dir, cfg.features);
}

}  // namespace scipnn
