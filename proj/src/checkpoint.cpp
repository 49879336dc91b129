// Copyright 2026 The scipnn Authors
// Licensed under the Apache License, Version 2.0

#include "scipnn/checkpoint.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "scipnn/error.hpp"

namespace scipnn {

namespace {

using nlohmann::json;

void put_le(std::string& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint64_t get_le(const std::string& in, std::size_t& at, int bytes) {
  if (in.size() < at + static_cast<std::size_t>(bytes))
    fail(ErrorKind::Format, "checkpoint truncated at byte " + std::to_string(at));
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= std::uint64_t{static_cast<unsigned char>(in[at + i])} << (8 * i);
  at += bytes;
  return v;
}

struct ArrayWriter {
  json names = json::array();
  std::string payload;
  void add(const std::string& name, const std::vector<double>& values) {
    names.push_back({{"name", name}, {"length", values.size()}});
    for (double d : values) put_le(payload, std::bit_cast<std::uint64_t>(d), 8);
  }
};

std::vector<double> to_doubles(const std::vector<std::uint8_t>& bits) {
  return {bits.begin(), bits.end()};
}

}  // namespace

bool Checkpoint::operator==(const Checkpoint& o) const {
  auto same_history = [](const std::vector<HistoryRow>& a, const std::vector<HistoryRow>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double x[5] = {static_cast<double>(a[i].round), a[i].sparsity, a[i].accuracy, a[i].mean_phase, a[i].static_power};
      const double y[5] = {static_cast<double>(b[i].round), b[i].sparsity, b[i].accuracy, b[i].mean_phase, b[i].static_power};
      if (std::memcmp(x, y, sizeof x) != 0) return false;
    }
    return true;
  };
  return network == o.network && state.initial_phases == o.state.initial_phases &&
         state.initial_betas == o.state.initial_betas && state.masks == o.state.masks &&
         state.round == o.state.round && same_history(state.history, o.state.history) &&
         has_snapshot == o.has_snapshot &&
         std::bit_cast<std::uint64_t>(nominal_accuracy) == std::bit_cast<std::uint64_t>(o.nominal_accuracy) &&
         seeds == o.seeds;
}

std::string serialize_checkpoint(const Checkpoint& c) {
  const Network& net = c.network;
  c.state.check(net);
  ArrayWriter w;
  for (std::size_t l = 0; l < net.depth(); ++l) w.add("phases." + std::to_string(l), net.layer(l).phase_vector());
  w.add("beta", net.betas());
  for (std::size_t l = 0; l < net.depth(); ++l) w.add("mask." + std::to_string(l), to_doubles(c.state.masks.bits[l]));
  for (std::size_t l = 0; l < net.depth(); ++l) w.add("initial_phases." + std::to_string(l), c.state.initial_phases[l]);
  w.add("initial_beta", c.state.initial_betas);
  std::vector<double> hist;
  for (const HistoryRow& r : c.state.history) {
    hist.insert(hist.end(), {static_cast<double>(r.round), r.sparsity, r.accuracy, r.mean_phase, r.static_power});
  }
  w.add("history", hist);
  w.add("nominal_accuracy", {c.nominal_accuracy});

  json header = {
      {"topology", {{"width", net.width()}, {"depth", net.depth()}, {"classes", net.class_count()}}},
      {"round", c.state.round},
      {"has_snapshot", c.has_snapshot},
      {"seeds", c.seeds},
      {"arrays", w.names},
  };
  const std::string h = header.dump();
  std::string out = "SCPN";
  put_le(out, kCheckpointVersion, 2);
  put_le(out, h.size(), 4);
  out += h;
  out += w.payload;
  return out;
}

Checkpoint deserialize_checkpoint(const std::string& in) {
  if (in.size() < 4 || in.compare(0, 4, "SCPN") != 0) fail(ErrorKind::Format, "not a checkpoint (bad magic at byte 0)");
  std::size_t at = 4;
  const auto version = get_le(in, at, 2);
  if (version != kCheckpointVersion)
    fail(ErrorKind::Format, "unsupported checkpoint version " + std::to_string(version) + " (expected " +
                                std::to_string(kCheckpointVersion) + ")");
  const auto hlen = static_cast<std::size_t>(get_le(in, at, 4));
  if (in.size() < at + hlen) fail(ErrorKind::Format, "checkpoint header truncated at byte " + std::to_string(at));
  json header;
  try {
    header = json::parse(in.substr(at, hlen));
  } catch (const json::exception& e) {
    fail(ErrorKind::Format, std::string("checkpoint header is not valid JSON: ") + e.what());
  }
  at += hlen;

  Checkpoint c;
  try {
    const std::size_t width = header.at("topology").at("width");
    const std::size_t depth = header.at("topology").at("depth");
    const std::size_t classes = header.at("topology").at("classes");
    std::map<std::string, std::vector<double>> arrays;
    for (const json& a : header.at("arrays")) {
      const std::string name = a.at("name");
      const std::size_t len = a.at("length");
      if (in.size() < at + 8 * len) fail(ErrorKind::Format, "checkpoint array '" + name + "' truncated at byte " + std::to_string(at));
      std::vector<double> v(len);
      for (double& d : v) d = std::bit_cast<double>(get_le(in, at, 8));
      arrays[name] = std::move(v);
    }
    if (at != in.size()) fail(ErrorKind::Format, "trailing bytes after checkpoint payload at byte " + std::to_string(at));
    auto take = [&](const std::string& name) -> const std::vector<double>& {
      const auto it = arrays.find(name);
      if (it == arrays.end()) fail(ErrorKind::Format, "checkpoint lacks array '" + name + "'");
      return it->second;
    };

    Network net = Network::random(width, depth, classes, 0, 1.0);
    std::vector<std::vector<double>> phases;
    for (std::size_t l = 0; l < depth; ++l) phases.push_back(take("phases." + std::to_string(l)));
    net.set_phases(phases);
    net.set_betas(take("beta"));
    // set_phase_vector canonicalizes; stored phases are already canonical, so
    // verify nothing moved.
    for (std::size_t l = 0; l < depth; ++l)
      if (net.layer(l).phase_vector() != phases[l]) fail(ErrorKind::Format, "checkpoint phases are not canonical");
    c.network = std::move(net);

    c.state.masks = MaskSet::all_active(c.network);
    for (std::size_t l = 0; l < depth; ++l) {
      const auto& m = take("mask." + std::to_string(l));
      if (m.size() != c.state.masks.bits[l].size()) fail(ErrorKind::Format, "mask length mismatch");
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] != 0.0 && m[i] != 1.0) fail(ErrorKind::Format, "mask entries must be 0 or 1");
        c.state.masks.bits[l][i] = static_cast<std::uint8_t>(m[i]);
      }
      c.state.initial_phases.push_back(take("initial_phases." + std::to_string(l)));
    }
    c.state.initial_betas = take("initial_beta");
    const auto& hist = take("history");
    if (hist.size() % 5 != 0) fail(ErrorKind::Format, "history array length is not a multiple of 5");
    for (std::size_t i = 0; i < hist.size(); i += 5)
      c.state.history.push_back({static_cast<std::size_t>(hist[i]), hist[i + 1], hist[i + 2], hist[i + 3], hist[i + 4]});
    const auto& acc = take("nominal_accuracy");
    if (acc.size() != 1) fail(ErrorKind::Format, "nominal_accuracy must hold one value");
    c.nominal_accuracy = acc[0];
    c.state.round = header.at("round");
    c.has_snapshot = header.at("has_snapshot");
    c.seeds = header.at("seeds").get<std::map<std::string, std::uint64_t>>();
    c.state.check(c.network);
  } catch (const json::exception& e) {
    fail(ErrorKind::Format, std::string("malformed checkpoint header: ") + e.what());
  }
  return c;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& c) {
  const std::string bytes = serialize_checkpoint(c);
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write checkpoint " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::Io, "write failed for " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot read checkpoint " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return deserialize_checkpoint(ss.str());
}

}  // namespace scipnn
