#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "config.hpp"

namespace hardylab::cli {

enum ExitCode : int {
  kOk = 0,
  kInvariantViolated = 1,
  kConfigError = 2,
  kTrendUnverified = 3,
  kInternalError = 4,
};

struct RunOptions {
  std::filesystem::path out;
  int workers = 1;
};

/// Every selected diagnostic at every resolution: one JSON report per pair, results.csv and
/// summary.json. Returns the exit code.
int run(const ExperimentConfig& c, const RunOptions& o);

/// Capacities of the compact family and seminorms of the probe family against h, with
/// successive relative changes: study.json and study.csv.
int study(const ExperimentConfig& c, const RunOptions& o);

int emit_domain(const ExperimentConfig& c, const RunOptions& o);
int emit_whitney(const ExperimentConfig& c, const RunOptions& o);
int emit_energy(const ExperimentConfig& c, const RunOptions& o);
int emit_capacity(const ExperimentConfig& c, const RunOptions& o);

}  // namespace hardylab::cli
