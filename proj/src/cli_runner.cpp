#include "hybrid/cli_runner.hpp"

#include <CLI11.hpp>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "hybrid/config.hpp"
#include "hybrid/constants.hpp"
#include "hybrid/couplings.hpp"
#include "hybrid/errors.hpp"
#include "hybrid/gaussian.hpp"
#include "hybrid/lindblad.hpp"
#include "hybrid/operators.hpp"
#include "hybrid/scenarios.hpp"

namespace hybrid::cli {

namespace {

namespace cnst = hybrid::constants;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_hz(double omega_rad_s) { return fmt(omega_rad_s / cnst::two_pi); }

using Row = std::vector<std::string>;

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

void write_csv(std::ostream& os, const Row& header, const std::vector<Row>& rows) {
  for (size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << csv_field(header[i]);
  os << "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
    os << "\n";
  }
}

struct Meta {
  std::vector<std::pair<std::string, std::string>> lines;
  void add(const std::string& k, const std::string& v) { lines.emplace_back(k, v); }
};

struct Context {
  config::Config cfg;
  std::string command;
  std::string out_path;  // empty -> stdout
  int workers = 1;
  std::vector<int> dims;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;
  Meta meta;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  void emit(const Row& header, const std::vector<Row>& rows) {
    if (out_path.empty()) {
      write_csv(*out, header, rows);
      return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw config_error("cannot open output file '" + out_path + "'");
    write_csv(f, header, rows);
    write_meta();
  }

  void write_meta() {
    if (out_path.empty()) return;
    std::ofstream f(out_path + ".meta", std::ios::binary);
    if (!f) throw config_error("cannot open metadata file '" + out_path + ".meta'");
    f << "# run metadata\n";
    f << "tool = hybrid 0.1.0\n";
    f << "command = " << command << "\n";
    f << "constants = " << cnst::version << "\n";
    f << "config_origin = " << cfg.origin() << "\n";
    for (const auto& line : cfg.dump()) f << "input = " << line << "\n";
    for (const auto& [k, v] : meta.lines) f << k << " = " << v << "\n";
    auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0);
    f << "wall_time_ms = " << ms.count() << "\n";
  }
};

// ---------------------------------------------------------------------------
// scenario resolution

const std::vector<std::string> kParamSections = {
    "mechanical", "charge", "flux",          "spin",    "deformation",
    "direct",     "cavity", "cavity_mirror", "lattice", "qubit"};

scenarios::Scenario resolve_scenario(const config::Config& cfg) {
  std::string name = cfg.get_string("run", "scenario", "");
  if (name.empty()) name = cfg.get_string("run", "platform", "");
  if (name.empty()) throw config_error("missing 'run.scenario' (or 'run.platform')");
  scenarios::Scenario s;
  try {
    s = scenarios::builtin(name);
  } catch (const std::invalid_argument& ex) {
    int line = cfg.has("run", "scenario") ? cfg.entry("run", "scenario").line : 0;
    throw config_error(ex.what(), line);
  }
  for (const auto& sec : kParamSections) {
    if (!cfg.has_section(sec)) continue;
    for (const auto& key : cfg.keys(sec)) {
      const auto& e = cfg.entry(sec, key);
      double value = config::parse_quantity(e.raw, e.line);
      try {
        scenarios::set_parameter(s, sec + "." + key, value);
      } catch (const std::invalid_argument& ex) {
        // unknown path is a config mistake; validation failures surface
        // later from recompute as physics preconditions
        throw config_error(ex.what(), e.line);
      }
    }
  }
  scenarios::recompute_derived(s);
  return s;
}

// ---------------------------------------------------------------------------
// model plumbing shared by evolve/steady/spectrum/sweep

RealVector time_grid(const config::Config& cfg) {
  double t_end = cfg.get_number("time", "t_end");
  double t_start = cfg.get_number("time", "t_start", 0.0);
  long points = cfg.get_integer("time", "points", 200);
  if (points < 2) throw config_error("time.points must be >= 2");
  if (t_end <= t_start) throw config_error("time.t_end must exceed time.t_start");
  RealVector t(points);
  for (long i = 0; i < points; ++i)
    t(i) = t_start + (t_end - t_start) * static_cast<double>(i) / (points - 1);
  return t;
}

lindblad::MasterOptions integrator_options(const config::Config& cfg) {
  lindblad::MasterOptions opt;
  opt.ode.rtol = cfg.get_number("integrator", "rtol", 1e-9);
  opt.ode.atol = cfg.get_number("integrator", "atol", 1e-12);
  return opt;
}

QuantumState parse_qubit_fock_state(const std::string& spec, int dim, int line) {
  size_t comma = spec.find(',');
  if (comma == std::string::npos)
    throw config_error("initial state must be '<qubit>,<mode>' (e.g. e,0)", line);
  std::string qs = spec.substr(0, comma);
  std::string ms = spec.substr(comma + 1);

  Vector qubit(2);
  if (qs == "g") qubit << 1, 0;
  else if (qs == "e") qubit << 0, 1;
  else if (qs == "+x") qubit << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  else if (qs == "-x") qubit << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  else throw config_error("unknown qubit state '" + qs + "' (use g, e, +x, -x)", line);

  Vector mode;
  if (ms.rfind("coherent:", 0) == 0) {
    double alpha = std::stod(ms.substr(9));
    mode = coherent_vector(dim, alpha);
  } else {
    int n = 0;
    try {
      n = std::stoi(ms);
    } catch (const std::exception&) {
      throw config_error("unknown mode state '" + ms + "' (use an integer or coherent:x)", line);
    }
    if (n < 0 || n >= dim) throw config_error("Fock level out of range in initial state", line);
    mode = fock_vector(dim, n);
  }
  HilbertSpace space({2, dim}, {"qubit", "mode"});
  Vector psi = kron(Matrix(qubit), Matrix(mode));
  return QuantumState::from_vector(space, psi);
}

int model_dim(const Context& ctx, const config::Config& cfg, int which, int fallback) {
  if (!ctx.dims.empty()) {
    if (which < static_cast<int>(ctx.dims.size())) return ctx.dims[which];
    return ctx.dims.back();
  }
  if (which == 1) return (int)cfg.get_integer("model", "dim_at", fallback);
  if (cfg.has("model", "dim")) return (int)cfg.get_integer("model", "dim", fallback);
  return (int)cfg.get_integer("model", "dim_m", fallback);
}

// scenario-aware parameter lookup: [model] key wins, then the scenario's
// derived/parameter value, then the fallback (NaN = required)
struct ParamSource {
  const config::Config& cfg;
  std::optional<scenarios::Scenario> scenario;

  double get(const std::string& key, double fallback = std::nan("")) const {
    if (cfg.has("model", key)) return cfg.get_number("model", key);
    if (scenario) {
      auto fromScenario = scenario_value(key);
      if (fromScenario) return *fromScenario;
    }
    if (std::isnan(fallback)) throw config_error("missing required key 'model." + key + "'");
    return fallback;
  }

  std::optional<double> scenario_value(const std::string& key) const {
    const auto& s = *scenario;
    if (key == "omega_m") return s.mechanical.omega_m;
    if (key == "gamma_m") return couplings::mechanical_damping(s.mechanical);
    if (key == "n_th") {
      auto it = s.derived.find("n_thermal");
      if (it != s.derived.end()) return it->second;
    }
    if (key == "omega_at" && s.direct) return s.direct->omega_at;
    if (key == "lambda_n") {
      auto it = s.derived.find("lambda_n");
      if (it != s.derived.end()) return it->second;
      it = s.derived.find("lambda_collective");
      if (it != s.derived.end()) return it->second;
    }
    if (key == "reflectivity" && s.lattice) return s.lattice->reflectivity;
    if (key == "gamma_cool" && s.lattice) return s.lattice->gamma_cool;
    if (key == "lambda") {
      for (const char* k : {"lambda_el", "lambda_lor", "lambda_mag", "lambda_def",
                            "lambda_collective", "lambda"}) {
        auto it = s.derived.find(k);
        if (it != s.derived.end()) return it->second;
      }
    }
    if (key == "chi") {
      auto it = s.derived.find("chi");
      if (it != s.derived.end()) return it->second;
    }
    if (key == "qubit_splitting" && s.charge) return s.charge->e_j / cnst::hbar;
    if (key == "omega_l" && s.spin) return s.spin->larmor;
    if (s.cavity_mirror) {
      const auto& cm = *s.cavity_mirror;
      if (key == "g") return cm.g;
      if (key == "kappa") return cm.kappa;
      if (key == "delta_f") return cm.delta_f;
      if (key == "g_a") return cm.g_a;
      if (key == "gamma_a") return cm.gamma_a;
      if (key == "delta_a") return cm.delta_a;
    }
    return std::nullopt;
  }
};

gaussian::MembraneAtomParams membrane_params(const ParamSource& ps) {
  gaussian::MembraneAtomParams p;
  p.omega_m = ps.get("omega_m");
  p.omega_at = ps.get("omega_at", p.omega_m);
  p.lambda_n = ps.get("lambda_n");
  p.reflectivity = ps.get("reflectivity", 1.0);
  p.gamma_m = ps.get("gamma_m", 0.0);
  p.gamma_cool = ps.get("gamma_cool", 0.0);
  p.n_th = ps.get("n_th", 0.0);
  p.n_at = ps.get("n_at", 0.0);
  p.radiation_diffusion = (1.0 - p.reflectivity) * std::abs(p.lambda_n);
  return p;
}

gaussian::CavityAtomMirrorParams cavity_params(const ParamSource& ps) {
  gaussian::CavityAtomMirrorParams p;
  p.omega_m = ps.get("omega_m");
  p.gamma_m = ps.get("gamma_m", 0.0);
  p.g = ps.get("g");
  p.kappa = ps.get("kappa");
  p.delta_f = ps.get("delta_f", 0.0);
  p.gamma_a = ps.get("gamma_a");
  if (ps.cfg.has("model", "cooperativity") && !ps.cfg.has("model", "g_a")) {
    double coop = ps.cfg.get_number("model", "cooperativity");
    p.g_a = std::sqrt(coop * p.kappa * p.gamma_a);
  } else {
    p.g_a = ps.get("g_a");
  }
  p.delta_a = ps.get("delta_a", 0.0);
  p.n_th = ps.get("n_th", 0.0);
  return p;
}

RealVector parse_vector(const std::string& raw, int expected, int line) {
  std::vector<double> vals;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) vals.push_back(config::parse_quantity(item, line));
  if (static_cast<int>(vals.size()) != expected)
    throw config_error("expected " + std::to_string(expected) + " comma-separated values", line);
  RealVector v(expected);
  for (int i = 0; i < expected; ++i) v(i) = vals[i];
  return v;
}

// ---------------------------------------------------------------------------
// commands

int cmd_couplings(Context& ctx) {
  auto s = resolve_scenario(ctx.cfg);
  std::vector<Row> rows;
  for (const auto& [key, value] : s.derived) {
    const std::string& unit = s.units.at(key);
    std::string hz = unit == "rad/s" ? fmt_hz(value) : "";
    rows.push_back({key, fmt(value), unit, hz, s.provenance.at(key)});
  }
  ctx.meta.add("scenario", s.name);
  ctx.emit({"quantity", "value_si", "unit", "value_over_2pi_hz", "provenance"}, rows);
  return 0;
}

int cmd_table(Context& ctx) {
  auto table = scenarios::estimate_table();
  std::vector<Row> rows;
  for (const auto& r : table) {
    rows.push_back({r.platform, fmt_hz(r.lambda_lo), fmt_hz(r.lambda_hi), fmt_hz(r.reference_lo),
                    fmt_hz(r.reference_hi), fmt(r.gamma_th), fmt(r.t2),
                    r.strong_coupling ? "true" : "false", r.provenance});
  }
  ctx.meta.add("spans", scenarios::estimate_spans_version());
  ctx.emit({"platform", "lambda_lo_hz", "lambda_hi_hz", "reference_lo_hz", "reference_hi_hz",
            "gamma_th_rad_s", "t2_s", "strong_coupling", "provenance"},
           rows);
  return 0;
}

void emit_series(Context& ctx, const lindblad::TimeSeries& ts) {
  Row header{"t"};
  for (const auto& n : ts.names) header.push_back(n);
  std::vector<Row> rows;
  for (long i = 0; i < ts.t.size(); ++i) {
    Row row{fmt(ts.t(i))};
    for (long j = 0; j < ts.values.cols(); ++j) row.push_back(fmt(ts.values(i, j).real()));
    rows.push_back(std::move(row));
  }
  ctx.meta.add("max_trace_deviation", fmt(ts.diagnostics.max_trace_deviation));
  ctx.meta.add("max_top_fock", fmt(ts.diagnostics.max_top_fock));
  ctx.meta.add("final_min_eigenvalue", fmt(ts.diagnostics.final_min_eigenvalue));
  for (const auto& w : ts.diagnostics.warnings) ctx.meta.add("warning", w);
  ctx.emit(header, rows);
}

void emit_means(Context& ctx, const gaussian::MeanSeries& ms) {
  Row header{"t"};
  for (const auto& n : ms.labels) header.push_back(n);
  std::vector<Row> rows;
  for (long i = 0; i < ms.t.size(); ++i) {
    Row row{fmt(ms.t(i))};
    for (long j = 0; j < ms.x.cols(); ++j) row.push_back(fmt(ms.x(i, j)));
    rows.push_back(std::move(row));
  }
  ctx.emit(header, rows);
}

int cmd_evolve(Context& ctx) {
  const auto& cfg = ctx.cfg;
  std::string type = cfg.get_string("model", "type");
  ParamSource ps{cfg, std::nullopt};
  if (cfg.has("run", "scenario") || cfg.has("run", "platform"))
    ps.scenario = resolve_scenario(cfg);
  RealVector t = time_grid(cfg);
  auto opt = integrator_options(cfg);
  ctx.meta.add("rtol", fmt(opt.ode.rtol));
  ctx.meta.add("atol", fmt(opt.ode.atol));
  int line = cfg.has("model", "initial") ? cfg.entry("model", "initial").line : 0;

  if (type == "jaynes_cummings") {
    int dim = model_dim(ctx, cfg, 0, 6);
    double lambda = ps.get("lambda");
    auto psi0 = parse_qubit_fock_state(cfg.get_string("model", "initial", "e,0"), dim, line);
    auto ts = lindblad::simulate_jaynes_cummings(lambda, ps.get("omega_m", 0.0),
                                                 ps.get("detuning", 0.0), dim, psi0, t, opt);
    emit_series(ctx, ts);
  } else if (type == "spin_resonator") {
    int dim = model_dim(ctx, cfg, 0, 6);
    auto psi0 = parse_qubit_fock_state(cfg.get_string("model", "initial", "e,0"), dim, line);
    auto ts = lindblad::simulate_spin_resonator_full(ps.get("lambda"), ps.get("omega_l"),
                                                     ps.get("omega_m"), dim, psi0, t,
                                                     cfg.get_bool("model", "use_rwa", false), opt);
    emit_series(ctx, ts);
  } else if (type == "dispersive") {
    int dim = model_dim(ctx, cfg, 0, 10);
    auto rho0 = parse_qubit_fock_state(cfg.get_string("model", "initial", "+x,0"), dim, line);
    auto ts = lindblad::simulate_dispersive_qnd(ps.get("chi"), ps.get("qubit_splitting", 0.0),
                                                ps.get("omega_m"), dim, rho0, t, opt);
    emit_series(ctx, ts);
  } else if (type == "sympathetic") {
    lindblad::SympatheticParams p;
    p.omega_m = ps.get("omega_m");
    p.omega_at = ps.get("omega_at", p.omega_m);
    p.lambda_n = ps.get("lambda_n");
    p.reflectivity = ps.get("reflectivity", 1.0);
    p.gamma_m = ps.get("gamma_m", 0.0);
    p.gamma_cool = ps.get("gamma_cool");
    p.n_th = ps.get("n_th", 0.0);
    int dim_m = model_dim(ctx, cfg, 0, 8);
    int dim_at = model_dim(ctx, cfg, 1, 8);
    int n0 = (int)cfg.get_integer("model", "initial_fock", 2);
    auto res = lindblad::simulate_sympathetic_cooling(p, dim_m, dim_at, n0, t, opt);
    ctx.meta.add("fitted_rate", fmt(res.fit.rate));
    ctx.meta.add("fit_r_squared", fmt(res.fit.r_squared));
    ctx.meta.add("fit_ok", res.fit.ok ? "true" : "false");
    ctx.meta.add("gamma_eff_formula", fmt(res.gamma_eff_formula));
    ctx.meta.add("dims_used", std::to_string(res.dim_m) + "," + std::to_string(res.dim_at));
    emit_series(ctx, res.series);
  } else if (type == "membrane_atom") {
    auto model = gaussian::build_membrane_atom_model(membrane_params(ps));
    RealVector x0 = cfg.has("model", "x0")
                        ? parse_vector(cfg.get_string("model", "x0"), 4,
                                       cfg.entry("model", "x0").line)
                        : (RealVector(4) << 1, 0, 0, 0).finished();
    emit_means(ctx, gaussian::evolve_means(model, x0, t, opt.ode));
  } else if (type == "cavity_mirror") {
    auto model = gaussian::build_cavity_atom_mirror_model(cavity_params(ps));
    RealVector x0 = cfg.has("model", "x0")
                        ? parse_vector(cfg.get_string("model", "x0"), 6,
                                       cfg.entry("model", "x0").line)
                        : (RealVector(6) << 1, 0, 0, 0, 0, 0).finished();
    emit_means(ctx, gaussian::evolve_means(model, x0, t, opt.ode));
  } else {
    throw config_error("unknown model.type '" + type + "'", cfg.entry("model", "type").line);
  }
  return 0;
}

gaussian::GaussianModel gaussian_model_from(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  std::string type = cfg.get_string("model", "type");
  ParamSource ps{cfg, std::nullopt};
  if (cfg.has("run", "scenario") || cfg.has("run", "platform"))
    ps.scenario = resolve_scenario(cfg);
  if (type == "membrane_atom") return gaussian::build_membrane_atom_model(membrane_params(ps));
  if (type == "cavity_mirror") return gaussian::build_cavity_atom_mirror_model(cavity_params(ps));
  throw config_error("command needs a gaussian model.type (membrane_atom or cavity_mirror)");
}

int cmd_steady(Context& ctx) {
  auto model = gaussian_model_from(ctx);
  auto rep = gaussian::steady_state_covariance(model);
  std::vector<Row> rows;
  for (size_t k = 0; k < rep.mode_occupation.size(); ++k) {
    std::string label = model.quadrature_labels.size() > 2 * k
                            ? model.quadrature_labels[2 * k]
                            : "mode" + std::to_string(k);
    rows.push_back({"n_" + label, fmt(rep.mode_occupation[k]), "1", "steady-state occupation"});
  }
  rows.push_back({"purity", fmt(rep.purity), "1", "gaussian purity"});
  rows.push_back({"lyapunov_residual", fmt(rep.residual), "1", "max|A S + S A^T + D|"});
  rows.push_back({"physicality_min_eig", fmt(rep.physicality_min_eig), "1",
                  "min eig of Sigma + (i/2) Omega_symp"});
  for (int i = 0; i < rep.covariance.rows(); ++i)
    for (int j = i; j < rep.covariance.cols(); ++j)
      rows.push_back({"sigma_" + model.quadrature_labels[i] + "_" + model.quadrature_labels[j],
                      fmt(rep.covariance(i, j)), "1", "covariance entry"});
  ctx.emit({"quantity", "value", "unit", "provenance"}, rows);
  return 0;
}

int cmd_spectrum(Context& ctx) {
  auto model = gaussian_model_from(ctx);
  const auto& cfg = ctx.cfg;
  double om = model.omega_mech;
  double lo = cfg.get_number("spectrum", "omega_from", -3.0 * om);
  double hi = cfg.get_number("spectrum", "omega_to", 3.0 * om);
  long points = cfg.get_integer("spectrum", "points", 601);
  if (points < 2 || hi <= lo) throw config_error("bad [spectrum] grid");
  RealVector grid(points);
  for (long i = 0; i < points; ++i)
    grid(i) = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
  auto spec = gaussian::langevin_force_spectrum(model, grid);
  auto rates = gaussian::sideband_rates(model, om);
  double gamma_opt = rates.a_antistokes - rates.a_stokes;
  ctx.meta.add("a_antistokes", fmt(rates.a_antistokes));
  ctx.meta.add("a_stokes", fmt(rates.a_stokes));
  ctx.meta.add("gamma_opt", fmt(gamma_opt));
  double gamma_m = model.drift(1, 1) == 0 ? 0.0 : -model.drift(1, 1);
  if (gamma_m + gamma_opt > 0)
    ctx.meta.add("n_res_pred", fmt(rates.a_stokes / (gamma_m + gamma_opt)));
  std::vector<Row> rows;
  for (long i = 0; i < grid.size(); ++i) rows.push_back({fmt(grid(i)), fmt(spec.s_f(i))});
  ctx.emit({"omega_rad_s", "s_f"}, rows);
  return 0;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepSpec {
  std::string section, key;
  double from = 0, to = 0;
  long count = 0;
  bool log_scale = false;
  std::vector<std::string> outputs;
};

SweepSpec parse_sweep(const config::Config& cfg) {
  SweepSpec sw;
  std::string path = cfg.get_string("sweep", "parameter");
  size_t dot = path.find('.');
  if (dot == std::string::npos)
    throw config_error("sweep.parameter must be 'section.key'", cfg.entry("sweep", "parameter").line);
  sw.section = path.substr(0, dot);
  sw.key = path.substr(dot + 1);
  sw.from = cfg.get_number("sweep", "from");
  sw.to = cfg.get_number("sweep", "to");
  sw.count = cfg.get_integer("sweep", "count", 0);
  if (sw.count < 2) throw config_error("sweep.count must be >= 2",
                                       cfg.has("sweep", "count") ? cfg.entry("sweep", "count").line : 0);
  std::string scale = cfg.get_string("sweep", "scale", "linear");
  if (scale == "log") {
    if (sw.from <= 0 || sw.to <= 0) throw config_error("log sweep needs positive endpoints");
    sw.log_scale = true;
  } else if (scale != "linear") {
    throw config_error("sweep.scale must be linear or log", cfg.entry("sweep", "scale").line);
  }
  std::string outs = cfg.get_string("sweep", "outputs");
  std::stringstream ss(outs);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) sw.outputs.push_back(item);
  }
  if (sw.outputs.empty()) throw config_error("sweep.outputs must name at least one quantity");
  return sw;
}

double sweep_value(const SweepSpec& sw, long i) {
  double f = static_cast<double>(i) / (sw.count - 1);
  if (sw.log_scale) return sw.from * std::pow(sw.to / sw.from, f);
  return sw.from + (sw.to - sw.from) * f;
}

// evaluate the named outputs for one point-config
std::vector<double> evaluate_outputs(const config::Config& cfg,
                                     const std::vector<std::string>& outputs) {
  bool has_model = cfg.has_section("model");
  std::optional<scenarios::Scenario> scen;
  if (cfg.has("run", "scenario") || cfg.has("run", "platform")) scen = resolve_scenario(cfg);

  std::map<std::string, double> pool;
  if (scen)
    for (const auto& [k, v] : scen->derived) pool[k] = v;

  if (has_model) {
    std::string type = cfg.get_string("model", "type");
    ParamSource ps{cfg, scen};
    if (type == "membrane_atom") {
      auto p = membrane_params(ps);
      auto model = gaussian::build_membrane_atom_model(p);
      auto rates = gaussian::sympathetic_damping(p.gamma_m, p.reflectivity, p.lambda_n,
                                                 p.gamma_cool);
      pool["lambda_n"] = p.lambda_n;
      pool["gamma_eff_formula"] = rates.gamma_eff;
      pool["delta_gamma_formula"] = rates.delta_gamma;
      double extracted = gaussian::extract_mode_damping(model, 0);
      pool["gamma_eff"] = extracted;
      pool["delta_gamma"] = extracted - p.gamma_m;
    } else if (type == "cavity_mirror") {
      auto p = cavity_params(ps);
      auto model = gaussian::build_cavity_atom_mirror_model(p);
      auto rates = gaussian::sideband_rates(model, p.omega_m);
      double coop = couplings::cooperativity(p.g_a, p.kappa, p.gamma_a);
      pool["a_antistokes"] = rates.a_antistokes;
      pool["a_stokes"] = rates.a_stokes;
      pool["gamma_opt"] = rates.a_antistokes - rates.a_stokes;
      pool["cooperativity"] = coop;
      auto rep = gaussian::steady_state_covariance(model);
      pool["n_res"] = rep.mode_occupation.at(0);
      pool["n_res_times_c"] = rep.mode_occupation.at(0) * coop;
      pool["purity"] = rep.purity;
    } else {
      throw config_error("sweep supports gaussian model types only (membrane_atom, cavity_mirror)");
    }
  }

  std::vector<double> vals;
  for (const auto& name : outputs) {
    auto it = pool.find(name);
    if (it == pool.end()) {
      std::string msg = "unknown sweep output '" + name + "'; available:";
      for (const auto& [k, v] : pool) msg += " " + k;
      throw config_error(msg);
    }
    vals.push_back(it->second);
  }
  return vals;
}

void validate_sweep_path(const config::Config& cfg, const SweepSpec& sw) {
  // the swept key must be consumed by something: a scenario override path or
  // a [model]/[time]/[spectrum] key
  if (cfg.has("run", "scenario") || cfg.has("run", "platform")) {
    auto scen = resolve_scenario(cfg);
    auto keys = scenarios::override_keys(scen);
    std::string path = sw.section + "." + sw.key;
    if (std::find(keys.begin(), keys.end(), path) != keys.end()) return;
  }
  if (sw.section == "model" || sw.section == "time" || sw.section == "spectrum") return;
  throw config_error("sweep.parameter '" + sw.section + "." + sw.key +
                     "' does not resolve to a scenario or model parameter");
}

int cmd_sweep(Context& ctx) {
  const auto& cfg = ctx.cfg;
  SweepSpec sw = parse_sweep(cfg);
  validate_sweep_path(cfg, sw);

  std::vector<std::vector<double>> results(sw.count);
  std::vector<std::string> errors(sw.count);
  std::atomic<long> next{0};
  int workers = std::max(1, ctx.workers);

  auto work = [&]() {
    for (;;) {
      long i = next.fetch_add(1);
      if (i >= sw.count) return;
      try {
        config::Config point = cfg;
        point.set(sw.section, sw.key, fmt(sweep_value(sw, i)));
        results[i] = evaluate_outputs(point, sw.outputs);
      } catch (const std::exception& ex) {
        errors[i] = ex.what();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (long i = 0; i < sw.count; ++i)
    if (!errors[i].empty()) throw config_error("sweep point " + std::to_string(i) + ": " + errors[i]);

  Row header{sw.section + "." + sw.key};
  for (const auto& o : sw.outputs) header.push_back(o);
  std::vector<Row> rows;
  for (long i = 0; i < sw.count; ++i) {
    Row row{fmt(sweep_value(sw, i))};
    for (double v : results[i]) row.push_back(fmt(v));
    rows.push_back(std::move(row));
  }
  ctx.meta.add("sweep_parameter", sw.section + "." + sw.key);
  ctx.meta.add("sweep_points", std::to_string(sw.count));
  ctx.emit(header, rows);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"hybrid mechanical quantum systems toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_path, dims_spec;
  int workers = 0;

  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config", config_path, "run configuration file");
    if (config_required) opt->required();
    sub->add_option("--out", out_path, "output CSV path (default: stdout)");
    sub->add_option("--workers", workers, "concurrent sweep workers");
    sub->add_option("--dims", dims_spec, "override truncation dims, e.g. 8 or 8,6");
  };

  add_common(app.add_subcommand("couplings", "evaluate scenario coupling constants"), true);
  add_common(app.add_subcommand("table", "coupling-range estimate table"), false);
  add_common(app.add_subcommand("evolve", "time evolution of a model"), true);
  add_common(app.add_subcommand("steady", "Lyapunov steady-state covariance"), true);
  add_common(app.add_subcommand("spectrum", "force spectrum seen by the mirror"), true);
  add_common(app.add_subcommand("sweep", "parameter sweep"), true);

  std::vector<const char*> argv;
  argv.push_back("hybrid");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  Context ctx;
  ctx.out = &out;
  ctx.err = &err;
  ctx.out_path = out_path;
  ctx.workers = workers > 0 ? workers : 1;

  try {
    const char* env_constants = std::getenv("HYBRID_CONSTANTS");
    if (env_constants && std::string(env_constants) != cnst::version)
      throw config_error(std::string("unknown constants table '") + env_constants +
                         "' (available: " + cnst::version + ")");

    if (!dims_spec.empty()) {
      std::stringstream ss(dims_spec);
      std::string item;
      while (std::getline(ss, item, ',')) ctx.dims.push_back(std::stoi(item));
    }

    if (!config_path.empty()) ctx.cfg = config::Config::parse_file(config_path);
    if (ctx.cfg.has("run", "workers") && workers == 0)
      ctx.workers = (int)ctx.cfg.get_integer("run", "workers", 1);
    if (ctx.out_path.empty()) ctx.out_path = ctx.cfg.get_string("run", "out", "");

    std::string sub = app.get_subcommands().front()->get_name();
    ctx.command = sub;
    if (ctx.cfg.has("run", "command") && ctx.cfg.get_string("run", "command") != sub)
      throw config_error("config 'run.command' (" + ctx.cfg.get_string("run", "command") +
                             ") does not match the invoked subcommand '" + sub + "'",
                         ctx.cfg.entry("run", "command").line);

    if (sub == "couplings") return cmd_couplings(ctx);
    if (sub == "table") return cmd_table(ctx);
    if (sub == "evolve") return cmd_evolve(ctx);
    if (sub == "steady") return cmd_steady(ctx);
    if (sub == "spectrum") return cmd_spectrum(ctx);
    if (sub == "sweep") return cmd_sweep(ctx);
    err << "error: unknown command\n";
    return 2;
  } catch (const config_error& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const instability_error& e) {
    err << "instability: " << e.what() << "\n";
    return 4;
  } catch (const truncation_error& e) {
    err << "truncation: " << e.what();
    if (e.suggested_dim() > 0) err << " (suggest dim >= " << e.suggested_dim() << ")";
    err << "\n";
    return 5;
  } catch (const precondition_error& e) {
    err << "precondition: " << e.what() << "\n";
    return 3;
  } catch (const integration_error& e) {
    err << "integration: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    err << "precondition: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace hybrid::cli
