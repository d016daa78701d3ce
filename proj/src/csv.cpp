#include "pasim/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "pasim/errors.hpp"

namespace pasim::csv {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open output file: " + path);
  return out;
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void header(std::ofstream& out, std::uint64_t hash) {
  char h[32];
  std::snprintf(h, sizeof(h), "%016llx", static_cast<unsigned long long>(hash));
  out << "# version = " << kVersion << "\n";
  out << "# config_hash = " << h << "\n";
}

}  // namespace

void write_trace(const std::string& path, const ensemble::EnsembleResult& r,
                 std::uint64_t config_hash) {
  auto out = open_out(path);
  header(out, config_hash);
  out << "# alignment_convention = " << r.alignment_convention << "\n";
  out << "# undefined_alignment_floor = " << num(r.undefined_floor) << "\n";
  out << "# columns = time_ns,pop_even,pop_odd,pop_total,align_even,align_odd,align_total\n";
  for (size_t k = 0; k < r.t_ns.size(); ++k) {
    out << num(r.t_ns[k]) << ',' << num(r.pop_even[k]) << ',' << num(r.pop_odd[k]) << ','
        << num(r.pop_total[k]) << ',' << num(r.align_even[k]) << ','
        << num(r.align_odd[k]) << ',' << num(r.align_total[k]) << "\n";
  }
}

void write_eigen_report(const std::string& path, const std::vector<EigenRow>& rows,
                        std::uint64_t config_hash) {
  auto out = open_out(path);
  header(out, config_hash);
  out << "# columns = channel,index,energy_GHz,B_v_MHz,R_outer_bohr,bound\n";
  for (const auto& r : rows) {
    out << r.channel << ',' << r.index << ',' << num(r.energy_GHz) << ','
        << num(r.B_v_MHz) << ',' << num(r.R_outer_bohr) << ',' << (r.bound ? 1 : 0)
        << "\n";
  }
}

void write_sweep_table(const std::string& path, const sweep::SweepTable& table,
                       std::uint64_t config_hash) {
  auto out = open_out(path);
  header(out, config_hash);
  out << "# columns = ";
  for (const auto& n : table.axis_names) out << n << ',';
  out << "final_population,pop_even,pop_odd,static_alignment,dynamic_amplitude,"
         "align_max,align_min,error_code,point_hash\n";
  for (const auto& r : table.rows) {
    for (double v : r.axis_values) out << num(v) << ',';
    char h[32];
    std::snprintf(h, sizeof(h), "%016llx", static_cast<unsigned long long>(r.config_hash));
    out << num(r.final_population) << ',' << num(r.pop_even) << ',' << num(r.pop_odd)
        << ',' << num(r.static_alignment) << ',' << num(r.dynamic_amplitude) << ','
        << num(r.align_max) << ',' << num(r.align_min) << ',' << r.error_code << ','
        << h << "\n";
  }
}

}  // namespace pasim::csv
