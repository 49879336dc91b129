// Copyright 2026 The scipnn Authors
// Licensed under the Apache License, Version 2.0

#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>
#include <string>

#include "doctest.h"
#include "scipnn/checkpoint.hpp"
#include "scipnn/error.hpp"

using namespace scipnn;

namespace {

Checkpoint pruned_checkpoint() {
  Checkpoint c;
  c.network = Network::random(4, 2, 3, 11, 1.7);
  c.state = PruneState::snapshot(c.network);
  c.network = Network::random(4, 2, 3, 12, 1.3);  // "trained" weights differ from the snapshot
  c.state.masks.bits[0][3] = 0;
  c.state.masks.bits[1][0] = 0;
  apply_masks(c.network, c.state.masks);
  c.state.round = 2;
  c.state.history.push_back({0, 0.0, 0.75, 1.5, 100.0});
  c.state.history.push_back({1, 0.1, std::numeric_limits<double>::quiet_NaN(), 1.25, 80.0});
  c.nominal_accuracy = 0.8125;
  c.seeds = {{"network", 11}, {"train", 0xFFFFFFFFFFFFFFFFull}};
  return c;
}

ErrorKind kind_of(const std::string& bytes) {
  try {
    deserialize_checkpoint(bytes);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected a checkpoint error");
  return ErrorKind::Shape;  // unreachable
}

std::size_t payload_offset(const std::string& bytes) {
  std::uint32_t hlen = 0;
  for (int i = 0; i < 4; ++i) hlen |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[6 + i])) << (8 * i);
  return 10 + hlen;
}

}  // namespace

TEST_CASE("round trip is bit exact") {
  const Checkpoint c = pruned_checkpoint();
  const std::string bytes = serialize_checkpoint(c);
  CHECK(bytes.compare(0, 4, "SCPN") == 0);
  const Checkpoint back = deserialize_checkpoint(bytes);
  CHECK(back == c);
  CHECK(std::isnan(back.state.history[1].accuracy));
  CHECK(back.seeds.at("train") == 0xFFFFFFFFFFFFFFFFull);
  CHECK_FALSE(back.state.masks.active(0, 3));
  CHECK(serialize_checkpoint(back) == bytes);
}

TEST_CASE("file round trip") {
  const auto path = std::filesystem::temp_directory_path() / "scipnn_test_checkpoint.scpn";
  const Checkpoint c = pruned_checkpoint();
  save_checkpoint(path, c);
  CHECK(load_checkpoint(path) == c);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_checkpoint(path), Error);
  try {
    load_checkpoint(path);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Io);
  }
}

TEST_CASE("version mismatch is reported before the header is read") {
  std::string bytes = serialize_checkpoint(pruned_checkpoint());
  bytes[4] = 2;
  bytes[10] = '#';  // header garbage must not mask the version error
  try {
    deserialize_checkpoint(bytes);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Format);
    CHECK(std::string(e.what()).find("version") != std::string::npos);
  }
}

TEST_CASE("corruption is detected") {
  const std::string bytes = serialize_checkpoint(pruned_checkpoint());
  CHECK(kind_of("") == ErrorKind::Format);
  CHECK(kind_of("SCPX" + bytes.substr(4)) == ErrorKind::Format);
  CHECK(kind_of(bytes + '\0') == ErrorKind::Format);
  for (std::size_t n = 0; n < bytes.size(); n += 7) CHECK(kind_of(bytes.substr(0, n)) == ErrorKind::Format);

  std::string bad = bytes;
  const double out_of_range = 7.0;
  std::memcpy(bad.data() + payload_offset(bad), &out_of_range, 8);
  CHECK(kind_of(bad) == ErrorKind::Format);

  // A mask entry other than 0 or 1.
  const Checkpoint c = pruned_checkpoint();
  const std::size_t phase_doubles = c.network.layer(0).phase_vector().size() + c.network.layer(1).phase_vector().size();
  bad = bytes;
  const double two = 2.0;
  std::memcpy(bad.data() + payload_offset(bad) + 8 * (phase_doubles + 2), &two, 8);
  CHECK(kind_of(bad) == ErrorKind::Format);
}
