#pragma once

// Pipelines behind the command line: each mode computes its tables in memory,
// then run() writes them together with manifest.json into the output directory.

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "thetaquench/config.hpp"
#include "thetaquench/table_io.hpp"

namespace tq {

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitNumerical = 2 };

struct NamedTable {
  std::string file;
  std::string schema;
  Table table;
};

struct PipelineOutput {
  std::vector<NamedTable> tables;
  std::map<std::string, double> summary;
  std::vector<std::string> warnings;
  std::vector<std::string> errors;  // per-point failures; tables are then partial
};

PipelineOutput free_phase_pipeline(const RunConfig& c);
PipelineOutput free_rate_pipeline(const RunConfig& c);
PipelineOutput free_nu_pipeline(const RunConfig& c);
PipelineOutput ed_run_pipeline(const RunConfig& c);
PipelineOutput ed_scan_pipeline(const RunConfig& c);
PipelineOutput run_pipeline(const RunConfig& c);

struct RunResult {
  int exit_code = kExitOk;
  std::string message;
  std::vector<std::string> files;
};

/// Runs the configured pipeline and writes its outputs. Never throws for
/// pipeline failures: they become exit codes and a manifest with status
/// "failed" or "partial".
RunResult run(const RunConfig& c, std::ostream* log = nullptr);

}  // namespace tq
