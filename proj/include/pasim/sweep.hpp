#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pasim/config.hpp"
#include "pasim/ensemble.hpp"

namespace pasim::sweep {

struct SweepRow {
  std::vector<double> axis_values;
  double final_population = 0;
  double pop_even = 0, pop_odd = 0;
  double static_alignment = 0;
  double dynamic_amplitude = 0;
  double align_max = 0, align_min = 0;  // trace extremes over the analysis window
  int error_code = 0;                   // 0 ok, 3 numerical failure
  std::string error;
  std::uint64_t config_hash = 0;
};

struct SweepTable {
  std::vector<std::string> axis_names;
  std::vector<SweepRow> rows;
  int failed = 0;
};

// Deterministic parameter scan over the cartesian product of the config's
// sweep axes (row-major, axes in declaration order, values ascending). Grid
// points are independent jobs; the table is assembled in plan order, so the
// result is byte-identical for any worker count. Per-point failures land in
// the row's error column without aborting the scan.
SweepTable run_sweep(const config::RunConfig& cfg, const ensemble::ExperimentSetup& setup,
                     int workers);

// |sum_k exp(i 2 pi binding delay k)|^2 / n^2: the n-slit interference
// comparison curve for population-versus-delay scans.
double nslit_reference(int n, double delay_ns, double binding_MHz);

}  // namespace pasim::sweep
