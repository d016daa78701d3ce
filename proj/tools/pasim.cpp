// Command-line front end: single propagation runs, parameter sweeps and
// bound-level inspection on the calibrated photoassociation model.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "pasim/csv.hpp"
#include "pasim/errors.hpp"

namespace fs = std::filesystem;
using namespace pasim;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitPartial = 4;

void write_resolved(const config::RunConfig& cfg, const fs::path& dir) {
  std::ofstream out(dir / "resolved.cfg");
  out << cfg.to_text();
}

int cmd_eigen(const config::RunConfig& cfg, const fs::path& dir) {
  const auto ground = config::make_ground_curve(cfg);
  const auto excited = config::make_excited_curve(cfg);
  auto ggrid = radial::build_mapped_grid(ground, cfg.reduced_mass_amu, cfg.grid);
  radial::RadialGridSpec xspec = cfg.grid;
  xspec.R_min_bohr = 0;
  auto xgrid = radial::build_mapped_grid(excited, cfg.reduced_mass_amu, xspec);

  std::vector<csv::EigenRow> rows;
  radial::SolveOptions so;
  so.max_box_count = cfg.box_states;
  so.check_convergence = true;
  for (int J = 0; J <= cfg.j_max; ++J) {
    radial::SolveOptions jso = so;
    jso.check_convergence = J == 0;
    const auto sol = radial::solve_channel(ground, J, 0, ggrid, jso);
    for (int k = 0; k < sol.levels(); ++k)
      rows.push_back({"ground_J" + std::to_string(J), k, sol.energies_GHz[k],
                      sol.B_v_MHz[k], sol.R_outer_bohr[k], k < sol.n_bound});
  }
  radial::SolveOptions xso = so;
  xso.max_box_count = 0;
  const auto xsol = radial::solve_channel(excited, 0, 0, xgrid, xso);
  for (int k = 0; k < xsol.levels(); ++k)
    rows.push_back({"excited_J0", k, xsol.energies_GHz[k], xsol.B_v_MHz[k],
                    xsol.R_outer_bohr[k], k < xsol.n_bound});

  csv::write_eigen_report((dir / "eigen.csv").string(), rows, cfg.hash());
  std::printf("wrote %s (%zu levels)\n", (dir / "eigen.csv").c_str(), rows.size());
  return 0;
}

int cmd_propagate(const config::RunConfig& cfg, const fs::path& dir) {
  const auto setup = config::make_setup(cfg);
  const auto train = config::make_train(cfg);
  const auto result =
      ensemble::run_experiment(setup, train, config::make_experiment_options(cfg));
  csv::write_trace((dir / "trace.csv").string(), result, cfg.hash());
  std::printf("wrote %s\n", (dir / "trace.csv").c_str());
  std::printf("final_population = %.6e\n", result.final_population);
  std::printf("static_alignment = %.6f\n", result.static_alignment);
  std::printf("dynamic_amplitude = %.6f\n", result.dynamic_amplitude);
  return 0;
}

int cmd_sweep(const config::RunConfig& cfg, const fs::path& dir, int workers) {
  const auto setup = config::make_setup(cfg);
  const auto table = sweep::run_sweep(cfg, setup, workers);
  csv::write_sweep_table((dir / "sweep.csv").string(), table, cfg.hash());
  std::printf("wrote %s (%zu points, %d failed)\n", (dir / "sweep.csv").c_str(),
              table.rows.size(), table.failed);
  return table.failed == 0 ? 0 : kExitPartial;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pasim: pulsed photoassociation and molecular alignment simulator"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir = "out";
  int workers = 0;
  bool seedless = false;
  app.add_option("--config", config_path, "run configuration file")->required();
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--workers", workers, "sweep worker threads (default: config value)");
  app.add_flag("--seedless", seedless,
               "deterministic mode (always on; accepted for compatibility)");

  auto* eigen = app.add_subcommand("eigen", "bound-level report per channel");
  auto* prop = app.add_subcommand("propagate", "single pulse-sequence run");
  auto* swp = app.add_subcommand("sweep", "parameter scan");

  CLI11_PARSE(app, argc, argv);

  try {
    const auto cfg = config::RunConfig::load(config_path);
    fs::create_directories(out_dir);
    write_resolved(cfg, out_dir);
    if (eigen->parsed()) return cmd_eigen(cfg, out_dir);
    if (prop->parsed()) return cmd_propagate(cfg, out_dir);
    return cmd_sweep(cfg, out_dir, workers > 0 ? workers : cfg.workers);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const NumericsError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    std::fprintf(stderr,
                 "hint: raise grid points_per_wavelength / energy_cap or loosen "
                 "propagation tolerances\n");
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumeric;
  }
}
