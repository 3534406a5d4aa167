#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"
#include "csv.hpp"

namespace nlfe::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitNumeric = 2,
  kExitSelftest = 3,
  kExitNegativeFound = 4,  // scan only
};

/// Tables produced by a run, each with the file name it is written to.
struct NamedTable {
  std::string file;
  CsvTable table;
};

struct RunResult {
  std::vector<NamedTable> tables;
  int exit_code = kExitOk;
};

/// Pure computation of a command; nothing is written.
RunResult run_figure(const RunConfig& config);
RunResult run_sphere(const RunConfig& config);
RunResult run_scan(const RunConfig& config);
/// Prints one line per check to `report`.
RunResult run_selftest(const RunConfig& config, std::ostream& report);

/// Dispatches on config.command, writes the tables below config.out_dir and
/// lists the written paths on `log`. Returns the exit code.
int execute(const RunConfig& config, std::ostream& log);

}  // namespace nlfe::cli
