#pragma once

// Run artifacts: ledger CSV, legacy VTK snapshots, JSON metadata, and
// parameter sweeps that run one simulation per thread.

#include <string>
#include <vector>

#include "viscofrac/driver.hpp"

namespace viscofrac {

/// Legacy VTK ASCII STRUCTURED_POINTS: point data u (3 components) and v,
/// cell data stress_norm.
void write_vtk(const Grid& grid, const Snapshot& snap, const std::string& path);

/// Writes ledger.csv, snapshot_<step>.vtk (if enabled) and run.json into dir.
void write_run_outputs(const SimConfig& config, const ConfigTable& table, const SimOutput& out,
                       const std::string& dir);

std::string metadata_json(const SimConfig& config, const ConfigTable& table, const SimOutput& out);

struct SweepCase {
  std::string key;
  std::string value;
  std::string dir;
  bool ok = false;
  std::string error;
  double final_residual = 0.0;
  double max_strain_norm = 0.0;
  double max_stress_norm = 0.0;
  int law_n = 0;
};

/// Runs the configuration once per value of `key`, concurrently on up to
/// `threads` threads (0 = hardware concurrency). Each case writes its
/// outputs to <output_dir>/<key>_<value>.
std::vector<SweepCase> sweep(const ConfigTable& table, const std::string& key,
                             const std::vector<std::string>& values, unsigned threads = 0,
                             bool write_outputs = true);

}  // namespace viscofrac
