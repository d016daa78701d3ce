#include "pasim/sweep.hpp"

#include <atomic>
#include <cmath>
#include <complex>
#include <thread>

#include "pasim/constants.hpp"
#include "pasim/errors.hpp"

namespace pasim::sweep {

namespace cn = pasim::constants;

double nslit_reference(int n, double delay_ns, double binding_MHz) {
  if (n < 2) throw ValidationError("nslit_reference: need at least two pulses");
  std::complex<double> acc = 0;
  for (int k = 0; k < n; ++k)
    acc += std::polar(1.0, cn::two_pi * binding_MHz * 1e-3 * delay_ns * k);
  return std::norm(acc) / (double(n) * n);
}

SweepTable run_sweep(const config::RunConfig& cfg, const ensemble::ExperimentSetup& setup,
                     int workers) {
  if (cfg.sweep_axes.empty()) throw ConfigError("run_sweep: no sweep axes configured");
  for (const auto& ax : cfg.sweep_axes)
    for (double v : ax.values)
      if (!std::isfinite(v)) throw ConfigError("run_sweep: non-finite axis value");

  SweepTable table;
  size_t total = 1;
  for (const auto& ax : cfg.sweep_axes) {
    table.axis_names.push_back(ax.name);
    total *= ax.values.size();
  }
  table.rows.resize(total);

  std::fprintf(stderr, "[pasim] sweep: %zu points on %d worker(s)\n", total,
               std::max(1, workers));

  auto point_values = [&](size_t idx) {
    std::vector<double> vals(cfg.sweep_axes.size());
    size_t rem = idx;
    for (size_t a = cfg.sweep_axes.size(); a-- > 0;) {
      const auto& vs = cfg.sweep_axes[a].values;
      vals[a] = vs[rem % vs.size()];
      rem /= vs.size();
    }
    return vals;
  };

  auto run_point = [&](size_t idx) {
    SweepRow row;
    row.axis_values = point_values(idx);
    config::RunConfig point = cfg;
    point.sweep_axes.clear();
    try {
      for (size_t a = 0; a < cfg.sweep_axes.size(); ++a)
        config::apply_axis(point, cfg.sweep_axes[a].name, row.axis_values[a]);
      row.config_hash = point.hash();
      const auto train = config::make_train(point);
      const auto result =
          ensemble::run_experiment(setup, train, config::make_experiment_options(point));
      row.final_population = result.final_population;
      row.pop_even = result.pop_even.back();
      row.pop_odd = result.pop_odd.back();
      row.static_alignment = result.static_alignment;
      row.dynamic_amplitude = result.dynamic_amplitude;
      row.align_max = result.static_alignment + result.dynamic_amplitude;
      row.align_min = result.static_alignment - result.dynamic_amplitude;
    } catch (const std::exception& e) {
      row.error_code = 3;
      row.error = e.what();
    }
    table.rows[idx] = std::move(row);
  };

  workers = std::max(1, workers);
  if (workers == 1) {
    for (size_t i = 0; i < total; ++i) run_point(i);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1))
          run_point(i);
      });
    for (auto& th : pool) th.join();
  }

  for (const auto& r : table.rows) table.failed += r.error_code != 0;
  return table;
}

}  // namespace pasim::sweep
