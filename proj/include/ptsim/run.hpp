#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ptsim/common.hpp"
#include "ptsim/models.hpp"
#include "ptsim/process_tensor.hpp"
#include "ptsim/propagators.hpp"

namespace ptsim {

struct ObservableSpec {
  std::string name;
  CMat matrix;  // N_S x N_S
};

struct SweepLists {
  std::vector<double> dt;
  std::vector<double> epsilon;
  std::vector<std::size_t> n_e;  // optional mode-count axis (empty: keep model value)
};

struct SimulationConfig {
  nlohmann::json model;  // model section, dispatched by "kind"
  double dt = 0.0;
  std::size_t n_max = 0;
  double epsilon = 0.0;
  std::vector<nlohmann::json> observables;  // names or inline matrices
  std::string output_path = "ptsim_out.csv";
  std::uint64_t seed = 0;
  std::string pt_cache_path;  // empty: no caching
  std::optional<SweepLists> sweep;
};

// Parse + validate a JSON config file; throws ConfigError with the offending
// field in the message.
SimulationConfig parse_config(const std::string& path);

// A fully instantiated model: free system, environment modes, initial state,
// and the resolved observable matrices.
struct BuiltModel {
  SystemSpec system;
  std::vector<ModeSpec> modes;
  CMat rho0;
  std::vector<ObservableSpec> observables;
};

BuiltModel build_model(const SimulationConfig& cfg);

// Per-run diagnostics mirrored into the summary file.
struct RunSummary {
  std::size_t d_max = 0;
  double wall_seconds = 0.0;
  double discarded_max = 0.0;
  std::vector<std::size_t> bond_profile;
};

// Build (or load) the PT, contract, write the time-series CSV and a JSON
// summary next to it. Returns the summary.
RunSummary run_simulation(const SimulationConfig& cfg);

// Run the (dt, epsilon[, n_e]) grid; per dt, the smallest epsilon is the
// reference for the threshold error; the smallest dt (at minimal epsilon) is
// the reference for the Trotter error. Writes a CSV error table.
void convergence_sweep(const SimulationConfig& cfg);

// Shared helpers (also used by tests).
std::vector<Superoperator> build_m_list(const SystemSpec& sys, std::size_t n, double dt);
ProcessTensor build_pt(const BuiltModel& model, std::size_t n, double dt, double epsilon,
                       const std::string& cache_path = "");
void write_csv(const std::string& path, const std::vector<CMat>& states,
               const std::vector<ObservableSpec>& obs, const ProcessTensor& pt);

}  // namespace ptsim
