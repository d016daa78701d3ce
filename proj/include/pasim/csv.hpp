#pragma once

#include <cstdint>
#include <string>

#include "pasim/config.hpp"
#include "pasim/ensemble.hpp"
#include "pasim/sweep.hpp"

namespace pasim::csv {

inline constexpr const char* kVersion = "pasim 1.0.0";

// Comma-separated numeric tables with '#'-prefixed metadata headers and
// 12-significant-digit values; every file embeds the tool version and the
// resolved configuration hash.

void write_trace(const std::string& path, const ensemble::EnsembleResult& result,
                 std::uint64_t config_hash);

struct EigenRow {
  std::string channel;
  int index;
  double energy_GHz;
  double B_v_MHz;
  double R_outer_bohr;
  bool bound;
};

void write_eigen_report(const std::string& path, const std::vector<EigenRow>& rows,
                        std::uint64_t config_hash);

void write_sweep_table(const std::string& path, const sweep::SweepTable& table,
                       std::uint64_t config_hash);

}  // namespace pasim::csv
