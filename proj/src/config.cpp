#include "pasim/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "pasim/errors.hpp"
#include "pasim/hash.hpp"

namespace pasim::config {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> tokens(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

double parse_number(const std::string& tok, const std::string& key) {
  size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(tok, &pos);
  } catch (...) {
    throw ConfigError(key + ": expected a number, got '" + tok + "'");
  }
  if (pos != tok.size()) throw ConfigError(key + ": malformed number '" + tok + "'");
  if (!std::isfinite(v)) throw ConfigError(key + ": value must be finite");
  return v;
}

// value with a mandatory unit suffix
double parse_unit(const std::vector<std::string>& toks, const std::string& key,
                  const std::string& unit) {
  if (toks.size() != 2 || toks[1] != unit)
    throw ConfigError(key + ": expected '<value> " + unit + "'");
  return parse_number(toks[0], key);
}

double parse_plain(const std::vector<std::string>& toks, const std::string& key) {
  if (toks.size() != 1)
    throw ConfigError(key + ": expected a single dimensionless value");
  return parse_number(toks[0], key);
}

bool parse_bool(const std::vector<std::string>& toks, const std::string& key) {
  if (toks.size() == 1 && (toks[0] == "true" || toks[0] == "false"))
    return toks[0] == "true";
  throw ConfigError(key + ": expected 'true' or 'false'");
}

const std::map<std::string, std::string>& axis_units() {
  static const std::map<std::string, std::string> u = {
      {"intensity", "W/cm2"}, {"sigma", "ns"},     {"chirp", "MHz/ns"},
      {"detuning", "MHz"},    {"delay", "ns"},     {"count", ""},
      {"mu0", "debye"},
  };
  return u;
}

SweepAxis parse_axis(const std::vector<std::string>& toks, const std::string& key) {
  // '<param> list v1 v2 ... [unit]' or '<param> range a b step s [unit]'
  if (toks.size() < 3) throw ConfigError(key + ": malformed axis definition");
  SweepAxis ax;
  ax.name = toks[0];
  const auto it = axis_units().find(ax.name);
  if (it == axis_units().end())
    throw ConfigError(key + ": unknown sweep parameter '" + ax.name + "'");
  const std::string& unit = it->second;

  std::vector<std::string> body(toks.begin() + 1, toks.end());
  if (!unit.empty()) {
    if (body.size() < 2 || body.back() != unit)
      throw ConfigError(key + ": axis '" + ax.name + "' needs unit '" + unit + "'");
    body.pop_back();
  }
  if (body.front() == "list") {
    for (size_t i = 1; i < body.size(); ++i)
      ax.values.push_back(parse_number(body[i], key));
  } else if (body.front() == "range") {
    if (body.size() != 5 || body[3] != "step")
      throw ConfigError(key + ": expected 'range <a> <b> step <s>'");
    const double a = parse_number(body[1], key);
    const double b = parse_number(body[2], key);
    const double s = parse_number(body[4], key);
    if (s <= 0 || b < a) throw ConfigError(key + ": bad range bounds");
    for (double v = a; v <= b + 1e-9 * s; v += s) ax.values.push_back(v);
  } else {
    throw ConfigError(key + ": expected 'list' or 'range'");
  }
  if (ax.values.empty()) throw ConfigError(key + ": axis has no values");
  std::sort(ax.values.begin(), ax.values.end());
  ax.values.erase(std::unique(ax.values.begin(), ax.values.end(),
                              [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                  ax.values.end());
  return ax;
}

}  // namespace

RunConfig RunConfig::parse(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  int axis_count = 0;

  while (std::getline(in, line)) {
    ++lineno;
    const auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) + ": unterminated section");
      section = line.substr(1, line.size() - 2);
      static const std::vector<std::string> known = {
          "system", "potential.ground", "potential.excited", "grid",
          "basis",  "ensemble",         "pulse",             "propagation",
          "sweep"};
      if (std::find(known.begin(), known.end(), section) == known.end())
        throw ConfigError("unknown section [" + section + "]");
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const auto toks = tokens(trim(line.substr(eq + 1)));
    const std::string qual = section + "." + key;
    if (toks.empty()) throw ConfigError(qual + ": missing value");

    auto pot = [&](RunConfig::Potential& p) {
      if (key == "kind") {
        static const std::vector<std::string> kinds = {
            "calibrated", "model-ground", "model-excited", "tabulated", "calibrate"};
        if (toks.size() != 1 ||
            std::find(kinds.begin(), kinds.end(), toks[0]) == kinds.end())
          throw ConfigError(qual + ": unknown potential kind");
        p.kind = toks[0];
      } else if (key == "c12") {
        p.c12 = parse_unit(toks, qual, "GHz_bohr12");
      } else if (key == "c6") {
        p.c6 = parse_unit(toks, qual, "GHz_bohr6");
      } else if (key == "c6x") {
        p.c6x = parse_unit(toks, qual, "GHz_bohr6");
      } else if (key == "c3") {
        p.c3 = parse_unit(toks, qual, "GHz_bohr3");
      } else if (key == "file") {
        if (toks.size() != 1) throw ConfigError(qual + ": expected a path");
        p.file = toks[0];
      } else if (key == "binding") {
        p.binding_MHz = parse_unit(toks, qual, "MHz");
      } else if (key == "B") {
        p.B_MHz = parse_unit(toks, qual, "MHz");
      } else if (key == "level_index") {
        p.level_index = static_cast<int>(parse_plain(toks, qual));
      } else {
        throw ConfigError("unknown key '" + qual + "'");
      }
    };

    if (section == "system") {
      if (key == "reduced_mass")
        cfg.reduced_mass_amu = parse_unit(toks, qual, "amu");
      else if (key == "mu0")
        cfg.mu0_debye = parse_unit(toks, qual, "debye");
      else
        throw ConfigError("unknown key '" + qual + "'");
    } else if (section == "potential.ground") {
      pot(cfg.ground);
    } else if (section == "potential.excited") {
      pot(cfg.excited);
    } else if (section == "grid") {
      if (key == "r_min")
        cfg.grid.R_min_bohr = parse_unit(toks, qual, "bohr");
      else if (key == "r_max")
        cfg.grid.R_max_bohr = parse_unit(toks, qual, "bohr");
      else if (key == "points_per_wavelength")
        cfg.grid.beta = parse_plain(toks, qual);
      else if (key == "energy_cap")
        cfg.grid.E_cap_GHz = parse_unit(toks, qual, "GHz");
      else if (key == "points")
        cfg.grid.N_override = static_cast<int>(parse_plain(toks, qual));
      else
        throw ConfigError("unknown key '" + qual + "'");
    } else if (section == "basis") {
      if (key == "j_max")
        cfg.j_max = static_cast<int>(parse_plain(toks, qual));
      else if (key == "box_states")
        cfg.box_states = static_cast<int>(parse_plain(toks, qual));
      else
        throw ConfigError("unknown key '" + qual + "'");
    } else if (section == "ensemble") {
      if (key == "temperature")
        cfg.ens.temperature_uK = parse_unit(toks, qual, "uK");
      else if (key == "parities") {
        if (toks.size() != 1 ||
            (toks[0] != "even" && toks[0] != "odd" && toks[0] != "both"))
          throw ConfigError(qual + ": expected even, odd or both");
        cfg.include_even = toks[0] != "odd";
        cfg.include_odd = toks[0] != "even";
      } else if (key == "exclude_localized")
        cfg.ens.exclude_localized_initial = parse_bool(toks, qual);
      else if (key == "weight_floor")
        cfg.ens.member_weight_floor = parse_plain(toks, qual);
      else
        throw ConfigError("unknown key '" + qual + "'");
    } else if (section == "pulse") {
      if (key == "intensity")
        cfg.pulse_base.intensity_W_cm2 = parse_unit(toks, qual, "W/cm2");
      else if (key == "sigma")
        cfg.pulse_base.sigma_ns = parse_unit(toks, qual, "ns");
      else if (key == "chirp")
        cfg.pulse_base.chirp_MHz_per_ns = parse_unit(toks, qual, "MHz/ns");
      else if (key == "detuning")
        cfg.pulse_base.detuning_MHz = parse_unit(toks, qual, "MHz");
      else if (key == "count")
        cfg.pulse_count = static_cast<int>(parse_plain(toks, qual));
      else if (key == "delay")
        cfg.pulse_delay_ns = parse_unit(toks, qual, "ns");
      else if (key == "allow_overlap")
        cfg.allow_overlap = parse_bool(toks, qual);
      else
        throw ConfigError("unknown key '" + qual + "'");
    } else if (section == "propagation") {
      if (key == "rtol")
        cfg.prop.rtol = parse_plain(toks, qual);
      else if (key == "atol")
        cfg.prop.atol = parse_plain(toks, qual);
      else if (key == "sample_stride")
        cfg.prop.sample_stride_ns = parse_unit(toks, qual, "ns");
      else if (key == "tail_periods")
        cfg.tail_periods = parse_plain(toks, qual);
      else if (key == "window_sigmas")
        cfg.window_sigmas = parse_plain(toks, qual);
      else
        throw ConfigError("unknown key '" + qual + "'");
    } else if (section == "sweep") {
      if (key == "axis") {
        cfg.sweep_axes.push_back(parse_axis(toks, qual));
        ++axis_count;
      } else if (key == "workers")
        cfg.workers = static_cast<int>(parse_plain(toks, qual));
      else
        throw ConfigError("unknown key '" + qual + "'");
    } else {
      throw ConfigError("key '" + key + "' outside any section");
    }
  }

  // validation
  if (cfg.pulse_base.sigma_ns <= 0) throw ConfigError("pulse.sigma must be positive");
  if (cfg.pulse_base.intensity_W_cm2 < 0)
    throw ConfigError("pulse.intensity must be non-negative");
  if (cfg.pulse_count < 1) throw ConfigError("pulse.count must be at least 1");
  if (cfg.j_max < 0 || cfg.j_max > 20) throw ConfigError("basis.j_max out of range");
  if (cfg.box_states < 1) throw ConfigError("basis.box_states must be positive");
  if (cfg.workers < 1) throw ConfigError("sweep.workers must be positive");
  cfg.pulse_base.mu0_debye = cfg.mu0_debye;
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse(os.str());
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

std::string RunConfig::to_text() const {
  std::ostringstream os;
  os << "[system]\n";
  os << "reduced_mass = " << fmt(reduced_mass_amu) << " amu\n";
  os << "mu0 = " << fmt(mu0_debye) << " debye\n";
  auto pot = [&](const Potential& p, const std::string& name) {
    os << "[potential." << name << "]\n";
    os << "kind = " << p.kind << "\n";
    if (p.c12 > 0) os << "c12 = " << fmt(p.c12) << " GHz_bohr12\n";
    if (p.c6 > 0) os << "c6 = " << fmt(p.c6) << " GHz_bohr6\n";
    if (p.c6x > 0) os << "c6x = " << fmt(p.c6x) << " GHz_bohr6\n";
    if (p.c3 > 0) os << "c3 = " << fmt(p.c3) << " GHz_bohr3\n";
    if (!p.file.empty()) os << "file = " << p.file << "\n";
    if (p.binding_MHz > 0) os << "binding = " << fmt(p.binding_MHz) << " MHz\n";
    if (p.B_MHz > 0) os << "B = " << fmt(p.B_MHz) << " MHz\n";
    if (p.level_index >= 0) os << "level_index = " << p.level_index << "\n";
  };
  pot(ground, "ground");
  pot(excited, "excited");
  os << "[grid]\n";
  if (grid.R_min_bohr > 0) os << "r_min = " << fmt(grid.R_min_bohr) << " bohr\n";
  os << "r_max = " << fmt(grid.R_max_bohr) << " bohr\n";
  os << "points_per_wavelength = " << fmt(grid.beta) << "\n";
  if (grid.E_cap_GHz > 0) os << "energy_cap = " << fmt(grid.E_cap_GHz) << " GHz\n";
  if (grid.N_override > 0) os << "points = " << grid.N_override << "\n";
  os << "[basis]\n";
  os << "j_max = " << j_max << "\n";
  os << "box_states = " << box_states << "\n";
  os << "[ensemble]\n";
  os << "temperature = " << fmt(ens.temperature_uK) << " uK\n";
  os << "parities = "
     << (include_even && include_odd ? "both" : (include_even ? "even" : "odd")) << "\n";
  os << "exclude_localized = " << (ens.exclude_localized_initial ? "true" : "false")
     << "\n";
  os << "weight_floor = " << fmt(ens.member_weight_floor) << "\n";
  os << "[pulse]\n";
  os << "intensity = " << fmt(pulse_base.intensity_W_cm2) << " W/cm2\n";
  os << "sigma = " << fmt(pulse_base.sigma_ns) << " ns\n";
  os << "chirp = " << fmt(pulse_base.chirp_MHz_per_ns) << " MHz/ns\n";
  os << "detuning = " << fmt(pulse_base.detuning_MHz) << " MHz\n";
  os << "count = " << pulse_count << "\n";
  os << "delay = " << fmt(pulse_delay_ns) << " ns\n";
  os << "allow_overlap = " << (allow_overlap ? "true" : "false") << "\n";
  os << "[propagation]\n";
  os << "rtol = " << fmt(prop.rtol) << "\n";
  os << "atol = " << fmt(prop.atol) << "\n";
  os << "sample_stride = " << fmt(prop.sample_stride_ns) << " ns\n";
  os << "tail_periods = " << fmt(tail_periods) << "\n";
  os << "window_sigmas = " << fmt(window_sigmas) << "\n";
  if (!sweep_axes.empty() || workers != 1) {
    os << "[sweep]\n";
    for (const auto& ax : sweep_axes) {
      os << "axis = " << ax.name << " list";
      for (double v : ax.values) os << " " << fmt(v);
      const auto& unit = axis_units().at(ax.name);
      if (!unit.empty()) os << " " << unit;
      os << "\n";
    }
    os << "workers = " << workers << "\n";
  }
  return os.str();
}

std::uint64_t RunConfig::hash() const { return fnv1a(to_text()); }

pulse::PulseTrain make_train(const RunConfig& cfg) {
  pulse::PulseSpec base = cfg.pulse_base;
  base.mu0_debye = cfg.mu0_debye;
  base.center_ns = cfg.window_sigmas * base.sigma_ns;  // t = 0 opens the first window
  auto pulses = pulse::make_train(base, cfg.pulse_count,
                                  cfg.pulse_count > 1 ? cfg.pulse_delay_ns : 0.0,
                                  cfg.allow_overlap);
  return pulse::PulseTrain(std::move(pulses), cfg.window_sigmas);
}

void apply_axis(RunConfig& cfg, const std::string& name, double value) {
  if (name == "intensity")
    cfg.pulse_base.intensity_W_cm2 = value;
  else if (name == "sigma")
    cfg.pulse_base.sigma_ns = value;
  else if (name == "chirp")
    cfg.pulse_base.chirp_MHz_per_ns = value;
  else if (name == "detuning")
    cfg.pulse_base.detuning_MHz = value;
  else if (name == "delay")
    cfg.pulse_delay_ns = value;
  else if (name == "count")
    cfg.pulse_count = static_cast<int>(std::lround(value));
  else if (name == "mu0") {
    cfg.mu0_debye = value;
    cfg.pulse_base.mu0_debye = value;
  } else
    throw ConfigError("unknown sweep parameter '" + name + "'");
}

namespace {

radial::PotentialCurve resolve_curve(const RunConfig::Potential& p, bool excited,
                                     double mass) {
  using radial::PotentialCurve;
  if (p.kind == "calibrated")
    return excited ? radial::calibrated_excited_curve() : radial::calibrated_ground_curve();
  if (p.kind == "model-ground") {
    if (p.c12 <= 0 || p.c6 <= 0)
      throw ConfigError("model-ground potential needs c12 and c6");
    return radial::make_model_ground(p.c12, p.c6);
  }
  if (p.kind == "model-excited") {
    if (p.c6x <= 0 || p.c3 <= 0)
      throw ConfigError("model-excited potential needs c6x and c3");
    return radial::make_model_excited(p.c6x, p.c3);
  }
  if (p.kind == "tabulated") {
    if (p.file.empty()) throw ConfigError("tabulated potential needs a file");
    return radial::load_tabulated_potential(p.file);
  }
  // kind == calibrate
  if (p.binding_MHz <= 0 || p.B_MHz <= 0)
    throw ConfigError("potential calibration needs binding and B targets");
  radial::CalibrationOptions o;
  o.kind = excited ? PotentialCurve::Kind::model_excited
                   : PotentialCurve::Kind::model_ground;
  o.mass_amu = mass;
  o.level_index = p.level_index >= 0
                      ? p.level_index
                      : (excited ? radial::kIntermediateLevelIndex
                                 : radial::kTargetLevelIndex);
  return radial::calibrate_model_potential({p.binding_MHz, p.B_MHz}, o);
}

}  // namespace

radial::PotentialCurve make_ground_curve(const RunConfig& cfg) {
  return resolve_curve(cfg.ground, false, cfg.reduced_mass_amu);
}

radial::PotentialCurve make_excited_curve(const RunConfig& cfg) {
  return resolve_curve(cfg.excited, true, cfg.reduced_mass_amu);
}

int ground_level_index(const RunConfig& cfg) {
  return cfg.ground.level_index >= 0 ? cfg.ground.level_index : radial::kTargetLevelIndex;
}

int excited_level_index(const RunConfig& cfg) {
  return cfg.excited.level_index >= 0 ? cfg.excited.level_index
                                      : radial::kIntermediateLevelIndex;
}

ensemble::ExperimentSetup make_setup(const RunConfig& cfg) {
  basis::BundleOptions bo;
  bo.J_max = cfg.j_max;
  bo.n_box = cfg.box_states;
  bo.grid = cfg.grid;
  bo.target_level_index = ground_level_index(cfg);
  bo.intermediate_level_index = excited_level_index(cfg);
  bo.check_convergence = true;
  return ensemble::make_setup(make_ground_curve(cfg), make_excited_curve(cfg),
                              cfg.reduced_mass_amu, bo);
}

ensemble::ExperimentOptions make_experiment_options(const RunConfig& cfg) {
  ensemble::ExperimentOptions opts;
  opts.ensemble = cfg.ens;
  opts.propagation = cfg.prop;
  opts.tail_periods = cfg.tail_periods;
  opts.include_even = cfg.include_even;
  opts.include_odd = cfg.include_odd;
  return opts;
}

}  // namespace pasim::config
