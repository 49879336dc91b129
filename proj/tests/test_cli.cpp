// Copyright 2026 The scipnn Authors
// Licensed under the Apache License, Version 2.0

// Runs the command-line tool as a subprocess and checks exit codes and output.

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result run_cli(const std::string& args) {
  const std::string cmd = std::string(SCIPNN_CLI_PATH) + " " + args + " 2>/dev/null";
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  while (const std::size_t n = fread(buf, 1, sizeof buf, p)) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch_dir() {
  const fs::path p = fs::temp_directory_path() / "scipnn_cli_test";
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("exit codes") {
  const fs::path dir = scratch_dir();
  const fs::path good = dir / "good.json";
  std::ofstream(good) << R"({
    "dataset": {"kind": "synthetic", "n_per_class": 20, "seed": 3},
    "network": {"width": 4, "depth": 1, "classes": 2, "seed": 1},
    "train": {"epochs": 1, "batch_size": 8},
    "study": {"samples": 5, "n": 4}
  })";
  const fs::path unknown = dir / "unknown.json";
  std::ofstream(unknown) << R"({"network": {"widht": 4}})";
  const fs::path nodata = dir / "nodata.json";
  std::ofstream(nodata) << R"({"dataset": {"kind": "mnist", "mnist_dir": "/nonexistent/mnist"}})";

  const Result ok = run_cli("train --config " + good.string() + " --out-dir " + (dir / "o").string());
  CHECK(ok.code == 0);
  CHECK(ok.out.find("accuracy=") != std::string::npos);
  CHECK(fs::exists(dir / "o" / "checkpoint.scpn"));

  const Result study = run_cli("study --config " + good.string() + " --out-dir " + (dir / "s").string() +
                               " --seed-override 9");
  CHECK(study.code == 0);

  CHECK(run_cli("train --config " + (dir / "missing.json").string()).code == 2);
  CHECK(run_cli("train --config " + nodata.string() + " --out-dir " + (dir / "x").string()).code == 2);
  CHECK(run_cli("train --config " + unknown.string()).code == 3);
  CHECK(run_cli("noise --config " + good.string() + " --out-dir " + (dir / "x").string()).code == 3);
  CHECK(run_cli("").code != 0);
  fs::remove_all(dir);
}
