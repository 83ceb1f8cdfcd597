#include "ptsim/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>

#include "ptsim/solver1d.hpp"

namespace ptsim {

namespace {

using nlohmann::json;

const json& need(const json& j, const std::string& key, const std::string& ctx) {
  if (!j.is_object() || !j.contains(key))
    throw ConfigError("missing field \"" + key + "\" in " + ctx);
  return j.at(key);
}

double need_num(const json& j, const std::string& key, const std::string& ctx) {
  const json& v = need(j, key, ctx);
  if (!v.is_number())
    throw ConfigError("field \"" + key + "\" in " + ctx + " must be a number");
  return v.get<double>();
}

std::size_t need_uint(const json& j, const std::string& key, const std::string& ctx) {
  const json& v = need(j, key, ctx);
  if (!v.is_number_unsigned() || v.get<std::uint64_t>() == 0)
    throw ConfigError("field \"" + key + "\" in " + ctx +
                      " must be a positive integer");
  return v.get<std::size_t>();
}

double opt_num(const json& j, const std::string& key, double fallback,
               const std::string& ctx) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number())
    throw ConfigError("field \"" + key + "\" in " + ctx + " must be a number");
  return v.get<double>();
}

std::size_t opt_uint(const json& j, const std::string& key, std::size_t fallback,
                     const std::string& ctx) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_unsigned())
    throw ConfigError("field \"" + key + "\" in " + ctx +
                      " must be a non-negative integer");
  return v.get<std::size_t>();
}

bool opt_bool(const json& j, const std::string& key, bool fallback,
              const std::string& ctx) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_boolean())
    throw ConfigError("field \"" + key + "\" in " + ctx + " must be a boolean");
  return v.get<bool>();
}

std::string opt_str(const json& j, const std::string& key, const std::string& fallback,
                    const std::string& ctx) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_string())
    throw ConfigError("field \"" + key + "\" in " + ctx + " must be a string");
  return v.get<std::string>();
}

// Matrices are nested arrays; entries are numbers (real) or [re, im] pairs.
CMat parse_matrix(const json& j, const std::string& ctx) {
  if (!j.is_array() || j.empty())
    throw ConfigError("matrix in " + ctx + " must be a non-empty array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j.at(0).is_array() ? j.at(0).size() : 0;
  if (cols == 0) throw ConfigError("matrix in " + ctx + " has an empty first row");
  CMat m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const json& row = j.at(r);
    if (!row.is_array() || row.size() != cols)
      throw ConfigError("matrix in " + ctx + " has ragged rows");
    for (std::size_t c = 0; c < cols; ++c) {
      const json& e = row.at(c);
      if (e.is_number()) {
        m(r, c) = e.get<double>();
      } else if (e.is_array() && e.size() == 2 && e.at(0).is_number() &&
                 e.at(1).is_number()) {
        m(r, c) = Cplx(e.at(0).get<double>(), e.at(1).get<double>());
      } else {
        throw ConfigError("matrix entry in " + ctx +
                          " must be a number or an [re, im] pair");
      }
    }
  }
  return m;
}

CMat basis_projector(std::size_t dim, std::size_t idx) {
  CMat p = CMat::Zero(dim, dim);
  p(idx, idx) = 1.0;
  return p;
}

CMat named_observable(const std::string& name, std::size_t dim) {
  auto require_dim = [&](std::size_t want) {
    if (dim != want)
      throw ConfigError("observable \"" + name + "\" needs a dimension-" +
                        std::to_string(want) + " system, model has " +
                        std::to_string(dim));
  };
  if (name == "sx" || name == "sy" || name == "sz") {
    require_dim(2);
    CMat s = CMat::Zero(2, 2);
    if (name == "sx") { s(0, 1) = 1.0; s(1, 0) = 1.0; }
    else if (name == "sy") { s(0, 1) = Cplx(0, -1); s(1, 0) = Cplx(0, 1); }
    else { s(0, 0) = 1.0; s(1, 1) = -1.0; }
    return s;
  }
  if (name == "occupation" || name == "population_e") {
    require_dim(2);
    return basis_projector(2, 1);
  }
  if (name == "n_excited") {
    require_dim(4);
    CMat n = CMat::Zero(4, 4);
    n(1, 1) = 1.0;
    n(2, 2) = 1.0;
    n(3, 3) = 2.0;
    return n;
  }
  if (name.rfind("pop:", 0) == 0) {
    const std::size_t idx = std::stoul(name.substr(4));
    if (idx >= dim)
      throw ConfigError("observable \"" + name + "\" out of range for dimension " +
                        std::to_string(dim));
    return basis_projector(dim, idx);
  }
  throw ConfigError("unknown observable \"" + name + "\"");
}

CMat named_state(const std::string& name, std::size_t dim) {
  if (name == "plus_x") {
    if (dim != 2) throw ConfigError("rho0 \"plus_x\" needs a two-level system");
    CMat r(2, 2);
    r << 0.5, 0.5, 0.5, 0.5;
    return r;
  }
  std::size_t idx = 0;
  if (name == "ground" || name == "empty") idx = 0;
  else if (name == "excited" || name == "filled") idx = 1;
  else if (name == "both_excited") idx = 3;
  else if (name.rfind("basis:", 0) == 0) idx = std::stoul(name.substr(6));
  else throw ConfigError("unknown rho0 \"" + name + "\"");
  if (idx >= dim)
    throw ConfigError("rho0 \"" + name + "\" out of range for dimension " +
                      std::to_string(dim));
  return basis_projector(dim, idx);
}

CMat resolve_rho0(const json& model, std::size_t dim, const std::string& fallback) {
  if (!model.contains("rho0")) return named_state(fallback, dim);
  const json& r = model.at("rho0");
  if (r.is_string()) return named_state(r.get<std::string>(), dim);
  CMat rho = parse_matrix(r, "model.rho0");
  if (static_cast<std::size_t>(rho.rows()) != dim ||
      static_cast<std::size_t>(rho.cols()) != dim)
    throw ConfigError("model.rho0 must be " + std::to_string(dim) + "x" +
                      std::to_string(dim));
  return rho;
}

SpectralDensity parse_spectral(const json& j, const std::string& ctx) {
  const std::string kind = opt_str(j, "kind", "", ctx);
  if (kind == "lorentzian") {
    return SpectralDensity::lorentzian(need_num(j, "c", ctx), need_num(j, "gamma", ctx),
                                       need_num(j, "omega_c", ctx));
  }
  if (kind == "flat") {
    return SpectralDensity::flat(need_num(j, "height", ctx), need_num(j, "min", ctx),
                                 need_num(j, "max", ctx));
  }
  if (kind == "gaas") return SpectralDensity::gaas();
  throw ConfigError("field \"kind\" in " + ctx +
                    " must be one of \"lorentzian\", \"flat\", \"gaas\"");
}

// Bound-state environment from an arbitrary tabulated potential (the named
// potentials go through anharmonic_modes).
std::vector<ModeSpec> bound_state_modes_from_file(const std::string& path,
                                                  const Grid1D& grid, std::size_t m_levels,
                                                  const ContinuumDiscretization& disc,
                                                  double k_b_t) {
  if (m_levels < 2) throw ConfigError("file potential: m_levels must be at least 2");
  const BoundStateSet bound = solve_bound_states(potential_from_file(path), grid, m_levels);
  const double gap = bound.energies(1) - bound.energies(0);
  if (gap <= 0) throw NumericalError("file potential: non-positive level gap");
  // Tabulated potentials keep the user's length units (no depth rescale), but
  // share the gap normalization and ladder-sign gauge of the named potentials.
  const auto scaled = morse_scaled_elements(bound, 1.0);
  CMat levels = CMat::Zero(m_levels, m_levels);
  for (std::size_t j = 0; j < m_levels; ++j) levels(j, j) = scaled.first(j);
  const CMat coupling = std::sqrt(2.0) * scaled.second.cast<Cplx>();
  CMat proj_e = CMat::Zero(2, 2);
  proj_e(1, 1) = 1.0;
  std::vector<ModeSpec> modes;
  for (std::size_t k = 0; k < disc.omegas.size(); ++k) {
    const CMat h = disc.omegas[k] * kron(CMat::Identity(2, 2), levels) +
                   disc.couplings[k] * kron(proj_e, coupling);
    ModeSpec m;
    m.sys_dim = 2;
    m.mode_dim = m_levels;
    m.joint_hamiltonian = [h](double) { return h; };
    m.initial_state = thermal_state(disc.omegas[k] * levels, k_b_t);
    modes.push_back(std::move(m));
  }
  return modes;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

SimulationConfig parse_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    j = json::parse(f, nullptr, true, true);  // allow comments
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config " + path + ": top level must be an object");

  SimulationConfig cfg;
  cfg.model = need(j, "model", "config");
  if (!cfg.model.is_object() || !cfg.model.contains("kind"))
    throw ConfigError("config: \"model\" must be an object with a \"kind\"");
  cfg.dt = need_num(j, "dt", "config");
  if (cfg.dt <= 0) throw ConfigError("config: \"dt\" must be positive");
  cfg.n_max = need_uint(j, "n_max", "config");
  cfg.epsilon = need_num(j, "epsilon", "config");
  if (cfg.epsilon < 0) throw ConfigError("config: \"epsilon\" must be >= 0");
  if (j.contains("observables")) {
    const json& obs = j.at("observables");
    if (!obs.is_array()) throw ConfigError("config: \"observables\" must be an array");
    for (const auto& o : obs) cfg.observables.push_back(o);
  }
  cfg.output_path = opt_str(j, "out", cfg.output_path, "config");
  if (j.contains("seed")) {
    const json& s = j.at("seed");
    if (!s.is_number_unsigned())
      throw ConfigError("config: \"seed\" must be a non-negative integer");
    cfg.seed = s.get<std::uint64_t>();
  }
  cfg.pt_cache_path = opt_str(j, "pt_cache", "", "config");
  if (j.contains("sweep")) {
    const json& sw = j.at("sweep");
    SweepLists lists;
    const json& dts = need(sw, "dt", "config.sweep");
    const json& eps = need(sw, "epsilon", "config.sweep");
    if (!dts.is_array() || dts.empty() || !eps.is_array() || eps.empty())
      throw ConfigError("config.sweep: \"dt\" and \"epsilon\" must be non-empty arrays");
    for (const auto& v : dts) lists.dt.push_back(v.get<double>());
    for (const auto& v : eps) lists.epsilon.push_back(v.get<double>());
    if (sw.contains("n_e"))
      for (const auto& v : sw.at("n_e")) lists.n_e.push_back(v.get<std::size_t>());
    for (double d : lists.dt)
      if (d <= 0) throw ConfigError("config.sweep: dt values must be positive");
    for (double e : lists.epsilon)
      if (e < 0) throw ConfigError("config.sweep: epsilon values must be >= 0");
    cfg.sweep = std::move(lists);
  }
  return cfg;
}

BuiltModel build_model(const SimulationConfig& cfg) {
  const json& model = cfg.model;
  const std::string kind = need(model, "kind", "model").get<std::string>();
  BuiltModel out;

  if (kind == "resonant_level") {
    const std::size_t n_e = need_uint(model, "n_e", "model");
    const double bandwidth = opt_num(model, "bandwidth", 0.0, "model");
    double g = 0.0;
    if (model.contains("g")) {
      g = need_num(model, "g", "model");
    } else if (model.contains("gamma")) {
      if (bandwidth <= 0)
        throw ConfigError("model: \"gamma\" needs a positive \"bandwidth\"");
      const double dos = double(n_e) / bandwidth;
      g = std::sqrt(need_num(model, "gamma", "model") / (2.0 * std::numbers::pi * dos));
    } else {
      throw ConfigError("model: resonant_level needs \"g\" or \"gamma\"");
    }
    std::vector<int> occ(n_e, 1);
    if (model.contains("occupations")) {
      const json& o = model.at("occupations");
      if (o.is_string()) {
        const std::string s = o.get<std::string>();
        if (s == "filled") std::fill(occ.begin(), occ.end(), 1);
        else if (s == "empty") std::fill(occ.begin(), occ.end(), 0);
        else throw ConfigError("model.occupations: unknown preset \"" + s + "\"");
      } else if (o.is_array() && o.size() == n_e) {
        for (std::size_t k = 0; k < n_e; ++k) occ[k] = o.at(k).get<int>();
      } else {
        throw ConfigError("model.occupations must be \"filled\", \"empty\" or an "
                          "array of length n_e");
      }
    }
    out.modes = resonant_level_modes(n_e, bandwidth, g, occ);
    out.system.dim = 2;
    out.system.hamiltonian = [](double) { return CMat(CMat::Zero(2, 2)); };
    out.rho0 = resolve_rho0(model, 2, "empty");
  } else if (kind == "qd_phonon_photon") {
    PulseParams pulse;
    if (model.contains("pulse")) {
      const json& p = model.at("pulse");
      pulse.area = opt_num(p, "area_over_pi", 3.0, "model.pulse") * std::numbers::pi;
      pulse.t0 = opt_num(p, "t0", pulse.t0, "model.pulse");
      pulse.tau_fwhm = opt_num(p, "tau_fwhm", pulse.tau_fwhm, "model.pulse");
      pulse.detuning_mev = opt_num(p, "detuning_mev", pulse.detuning_mev, "model.pulse");
    }
    PhotonBathParams photon;
    BosonCutoffs cutoffs;
    if (model.contains("photons")) {
      const json& p = model.at("photons");
      photon.enabled = opt_bool(p, "enabled", true, "model.photons");
      photon.microscopic = opt_bool(p, "microscopic", true, "model.photons");
      photon.kappa = opt_num(p, "kappa", photon.kappa, "model.photons");
      photon.bandwidth = opt_num(p, "bandwidth", photon.bandwidth, "model.photons");
      photon.n_e = opt_uint(p, "n_e", photon.n_e, "model.photons");
      cutoffs.photon = opt_uint(p, "cutoff", cutoffs.photon, "model.photons");
    }
    PhononBathParams phonon;
    if (model.contains("phonons")) {
      const json& p = model.at("phonons");
      phonon.enabled = opt_bool(p, "enabled", true, "model.phonons");
      phonon.omega_max =
          opt_num(p, "omega_max_mev", phonon.omega_max * kHbarMeVps, "model.phonons") /
          kHbarMeVps;
      phonon.n_e = opt_uint(p, "n_e", phonon.n_e, "model.phonons");
      cutoffs.phonon = opt_uint(p, "cutoff", cutoffs.phonon, "model.phonons");
    } else {
      phonon.enabled = false;
    }
    const double temp = opt_num(model, "temperature_k", 4.0, "model");
    auto built = qd_phonon_photon_model(pulse, photon, phonon, temp, cutoffs);
    out.system = std::move(built.first);
    out.modes = std::move(built.second);
    out.rho0 = resolve_rho0(model, 2, "ground");
  } else if (kind == "central_spin") {
    const std::size_t n_spins = need_uint(model, "n_spins", "model");
    const double j_total = opt_num(model, "j_total", 1.0, "model");
    double b = 0.0;
    if (model.contains("b")) {
      const json& bj = model.at("b");
      if (bj.is_string() && bj.get<std::string>() == "inf")
        b = std::numeric_limits<double>::infinity();
      else if (bj.is_number())
        b = bj.get<double>();
      else
        throw ConfigError("model.b must be a number or \"inf\"");
    }
    out.modes = central_spin_modes(n_spins, j_total, b, cfg.seed);
    out.system.dim = 2;
    out.system.hamiltonian = [](double) { return CMat(CMat::Zero(2, 2)); };
    out.rho0 = resolve_rho0(model, 2, "plus_x");
  } else if (kind == "anharmonic") {
    const std::size_t m_levels = need_uint(model, "m_levels", "model");
    const json& range_j = need(model, "range", "model");
    if (!range_j.is_array() || range_j.size() != 2)
      throw ConfigError("model.range must be [min, max]");
    const std::pair<double, double> range{range_j.at(0).get<double>(),
                                          range_j.at(1).get<double>()};
    const auto disc = discretize(parse_spectral(need(model, "spectral", "model"),
                                                "model.spectral"),
                                 range, need_uint(model, "n_e", "model"));
    const double k_b_t = opt_num(model, "k_b_t", 0.0, "model");
    const json& pot = need(model, "potential", "model");
    if (pot.is_string()) {
      const std::string p = pot.get<std::string>();
      if (p == "harmonic") {
        out.modes = anharmonic_modes(AnharmonicPotential::harmonic(), m_levels, disc, k_b_t);
      } else if (p == "morse") {
        out.modes = anharmonic_modes(
            AnharmonicPotential::morse(need_num(model, "lambda", "model")), m_levels,
            disc, k_b_t);
      } else {
        throw ConfigError("model.potential must be \"harmonic\", \"morse\" or "
                          "{\"file\": path}");
      }
    } else if (pot.is_object() && pot.contains("file")) {
      Grid1D grid;
      grid.x0 = opt_num(pot, "x0", -2.0, "model.potential");
      grid.dx = opt_num(pot, "dx", 0.005, "model.potential");
      const double x1 = opt_num(pot, "x1", 20.0, "model.potential");
      grid.n_x = static_cast<std::size_t>(std::llround((x1 - grid.x0) / grid.dx)) + 1;
      out.modes = bound_state_modes_from_file(need(pot, "file", "model.potential")
                                                  .get<std::string>(),
                                              grid, m_levels, disc, k_b_t);
    } else {
      throw ConfigError("model.potential must be \"harmonic\", \"morse\" or "
                        "{\"file\": path}");
    }
    const double omega = opt_num(model, "omega", 1.0, "model");
    out.system.dim = 2;
    CMat hs = CMat::Zero(2, 2);
    hs(0, 1) = omega / 2.0;
    hs(1, 0) = omega / 2.0;
    out.system.hamiltonian = [hs](double) { return hs; };
    out.rho0 = resolve_rho0(model, 2, "excited");
  } else if (kind == "superradiance") {
    const double kappa = need_num(model, "kappa", "model");
    const double bandwidth = need_num(model, "bandwidth", "model");
    const std::size_t n_e = need_uint(model, "n_e", "model");
    const double delta = opt_num(model, "delta", 0.0, "model");
    const std::size_t cutoff = opt_uint(model, "cutoff", 2, "model");
    const auto disc = discretize(
        SpectralDensity::flat(kappa / (2.0 * std::numbers::pi), -bandwidth / 2.0,
                              bandwidth / 2.0),
        {-bandwidth / 2.0, bandwidth / 2.0}, n_e);
    auto built = superradiance_model(delta, disc, cutoff);
    out.system = std::move(built.first);
    out.modes = std::move(built.second);
    out.rho0 = resolve_rho0(model, 4, "both_excited");
  } else if (kind == "dispersive") {
    DispersiveParams p;
    p.omega = opt_num(model, "omega", p.omega, "model");
    if (model.contains("mode_freqs")) {
      p.mode_freqs = model.at("mode_freqs").get<std::vector<double>>();
      p.pulse_times = need(model, "pulse_times", "model").get<std::vector<double>>();
      p.amplitudes = need(model, "amplitudes", "model").get<std::vector<double>>();
    }
    p.tau_fwhm = opt_num(model, "tau_fwhm", p.tau_fwhm, "model");
    p.kappa = opt_num(model, "kappa", 0.0, "model");
    p.cutoff = opt_uint(model, "cutoff", p.cutoff, "model");
    p.fock_insertions = opt_bool(model, "fock_insertions", false, "model");
    auto built = dispersive_model(p, cfg.dt);
    out.system = std::move(built.first);
    out.modes = std::move(built.second);
    out.rho0 = resolve_rho0(model, 2, "ground");
  } else {
    throw ConfigError("unknown model kind \"" + kind + "\"");
  }

  for (const auto& o : cfg.observables) {
    ObservableSpec spec;
    if (o.is_string()) {
      spec.name = o.get<std::string>();
      spec.matrix = named_observable(spec.name, out.system.dim);
    } else if (o.is_object()) {
      spec.name = need(o, "name", "observable").get<std::string>();
      spec.matrix = parse_matrix(need(o, "matrix", "observable"), "observable \"" +
                                 spec.name + "\"");
      if (static_cast<std::size_t>(spec.matrix.rows()) != out.system.dim ||
          static_cast<std::size_t>(spec.matrix.cols()) != out.system.dim)
        throw ConfigError("observable \"" + spec.name + "\" must be " +
                          std::to_string(out.system.dim) + "x" +
                          std::to_string(out.system.dim));
    } else {
      throw ConfigError("observables entries must be names or {name, matrix} objects");
    }
    out.observables.push_back(std::move(spec));
  }
  return out;
}

std::vector<Superoperator> build_m_list(const SystemSpec& sys, std::size_t n, double dt) {
  std::vector<Superoperator> out;
  out.reserve(n);
  Superoperator cached;
  for (std::size_t l = 1; l <= n; ++l) {
    if (!sys.time_dependent && cached.dim != 0) {
      out.push_back(cached);
      continue;
    }
    const double t_mid = (double(l) - 0.5) * dt;
    Superoperator p = free_step_propagator(sys, dt, t_mid);
    if (!sys.time_dependent) cached = p;
    out.push_back(std::move(p));
  }
  return out;
}

ProcessTensor build_pt(const BuiltModel& model, std::size_t n, double dt, double epsilon,
                       const std::string& cache_path) {
  if (!cache_path.empty() && std::filesystem::exists(cache_path)) {
    try {
      ProcessTensor pt = load_pt(cache_path);
      if (pt.n_steps == n && pt.sys_dim == model.system.dim &&
          std::abs(pt.dt - dt) <= 1e-12 * std::max(1.0, std::abs(dt))) {
        return pt;
      }
      std::cerr << "note: cached process tensor " << cache_path
                << " does not match this run; rebuilding\n";
    } catch (const ConfigError& e) {
      std::cerr << "note: " << e.what() << "; rebuilding\n";
    }
  }
  ProcessTensor pt = trivial_pt(n, model.system.dim, dt);
  for (const auto& mode : model.modes) pt = combine_mode(std::move(pt), mode, epsilon);
  if (!cache_path.empty()) save_pt(pt, cache_path);
  return pt;
}

void write_csv(const std::string& path, const std::vector<CMat>& states,
               const std::vector<ObservableSpec>& obs, const ProcessTensor& pt) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot open output file " + path);
  f << "t";
  for (const auto& o : obs) f << "," << o.name;
  f << ",trace,bond\n";
  const auto bonds = bond_profile(pt);
  bool trace_warned = false;
  for (std::size_t l = 0; l < states.size(); ++l) {
    f << fmt17(double(l) * pt.dt);
    for (const auto& o : obs)
      f << "," << fmt17((o.matrix * states[l]).trace().real());
    const double tr = states[l].trace().real();
    if (!trace_warned && std::abs(tr - 1.0) > 5e-7) {
      std::cerr << "warning: trace deviates from 1 by " << std::abs(tr - 1.0)
                << " at step " << l << "\n";
      trace_warned = true;
    }
    f << "," << fmt17(tr) << "," << bonds[l] << "\n";
  }
  if (!f) throw ConfigError("write failed for " + path);
}

RunSummary run_simulation(const SimulationConfig& cfg) {
  const auto t_start = std::chrono::steady_clock::now();
  const BuiltModel model = build_model(cfg);
  ProcessTensor pt = build_pt(model, cfg.n_max, cfg.dt, cfg.epsilon, cfg.pt_cache_path);
  const auto m_list = build_m_list(model.system, cfg.n_max, cfg.dt);
  const auto states = contract(pt, m_list, model.rho0);
  write_csv(cfg.output_path, states, model.observables, pt);

  RunSummary summary;
  summary.bond_profile = bond_profile(pt);
  summary.d_max = *std::max_element(summary.bond_profile.begin(),
                                    summary.bond_profile.end());
  summary.discarded_max = pt.discarded_max;
  summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

  json js;
  js["d_max"] = summary.d_max;
  js["wall_seconds"] = summary.wall_seconds;
  js["discarded_max"] = summary.discarded_max;
  js["bond_profile"] = summary.bond_profile;
  js["n_steps"] = cfg.n_max;
  js["dt"] = cfg.dt;
  js["epsilon"] = cfg.epsilon;
  std::ofstream jf(cfg.output_path + ".summary.json");
  jf << js.dump(2) << "\n";
  return summary;
}

void convergence_sweep(const SimulationConfig& cfg) {
  if (!cfg.sweep)
    throw ConfigError("config: sweep mode needs a \"sweep\" section");
  const SweepLists& lists = *cfg.sweep;
  std::vector<std::size_t> ne_axis = lists.n_e;
  if (ne_axis.empty()) ne_axis.push_back(0);  // 0: keep the model's own value
  if (!lists.n_e.empty() && !cfg.model.contains("n_e"))
    throw ConfigError("config.sweep: this model kind has no top-level \"n_e\" to sweep");

  const double t_end = double(cfg.n_max) * cfg.dt;
  const double eps_min = *std::min_element(lists.epsilon.begin(), lists.epsilon.end());
  const double dt_min = *std::min_element(lists.dt.begin(), lists.dt.end());

  struct Row {
    double dt, eps;
    std::size_t n_e, n_steps, d_max;
    double wall;
    std::vector<double> finals;
  };
  std::vector<Row> rows;

  for (std::size_t ne : ne_axis) {
    SimulationConfig base = cfg;
    if (ne != 0) base.model["n_e"] = ne;
    for (double dt : lists.dt) {
      for (double eps : lists.epsilon) {
        Row row;
        row.dt = dt;
        row.eps = eps;
        row.n_e = ne;
        row.n_steps = std::max<std::size_t>(1, std::llround(t_end / dt));
        const auto t0 = std::chrono::steady_clock::now();
        const BuiltModel model = build_model(base);
        ProcessTensor pt = build_pt(model, row.n_steps, dt, eps);
        const auto states = contract(pt, build_m_list(model.system, row.n_steps, dt),
                                     model.rho0);
        row.wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                       .count();
        const auto bonds = bond_profile(pt);
        row.d_max = *std::max_element(bonds.begin(), bonds.end());
        for (const auto& o : model.observables)
          row.finals.push_back((o.matrix * states.back()).trace().real());
        rows.push_back(std::move(row));
      }
    }
  }

  auto find_row = [&rows](double dt, double eps, std::size_t ne) -> const Row* {
    for (const auto& r : rows)
      if (r.dt == dt && r.eps == eps && r.n_e == ne) return &r;
    return nullptr;
  };
  auto max_diff = [](const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
  };

  std::ofstream f(cfg.output_path);
  if (!f) throw ConfigError("cannot open output file " + cfg.output_path);
  f << "dt,epsilon,n_e,n_steps,d_max,wall_s,err_epsilon,err_dt";
  SimulationConfig probe = cfg;  // observable names for the header
  const BuiltModel m0 = build_model(probe);
  for (const auto& o : m0.observables) f << "," << o.name << "_final";
  f << "\n";
  for (const auto& r : rows) {
    const Row* eps_ref = find_row(r.dt, eps_min, r.n_e);
    const Row* dt_ref = find_row(dt_min, eps_min, r.n_e);
    const double err_eps = (r.eps == eps_min) ? 0.0 : max_diff(r.finals, eps_ref->finals);
    const bool have_dt_err = (r.eps == eps_min);
    f << fmt17(r.dt) << "," << fmt17(r.eps) << "," << r.n_e << "," << r.n_steps << ","
      << r.d_max << "," << fmt17(r.wall) << "," << fmt17(err_eps) << ",";
    if (have_dt_err)
      f << fmt17(max_diff(r.finals, dt_ref->finals));
    else
      f << "nan";
    for (double v : r.finals) f << "," << fmt17(v);
    f << "\n";
  }
  if (!f) throw ConfigError("write failed for " + cfg.output_path);
}

}  // namespace ptsim
