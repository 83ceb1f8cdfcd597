#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "ptsim/common.hpp"
#include "ptsim/run.hpp"

namespace {

struct Overrides {
  std::string config_path;
  double dt = 0.0;
  std::uint64_t nmax = 0;
  double epsilon = 0.0;
  std::string out;
  std::uint64_t seed = 0;
  std::string pt_cache;
};

void add_common_options(CLI::App* sub, Overrides* o) {
  sub->add_option("config", o->config_path, "JSON configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--dt", o->dt, "override the time step");
  sub->add_option("--nmax", o->nmax, "override the number of steps");
  sub->add_option("--epsilon", o->epsilon, "override the SVD threshold");
  sub->add_option("--out", o->out, "override the output path");
  sub->add_option("--seed", o->seed, "override the RNG seed");
  sub->add_option("--pt-cache", o->pt_cache, "process-tensor snapshot path");
}

ptsim::SimulationConfig load_with_overrides(const CLI::App* sub, const Overrides& o) {
  ptsim::SimulationConfig cfg = ptsim::parse_config(o.config_path);
  if (sub->count("--dt")) {
    if (o.dt <= 0) throw ptsim::ConfigError("--dt must be positive");
    cfg.dt = o.dt;
  }
  if (sub->count("--nmax")) {
    if (o.nmax == 0) throw ptsim::ConfigError("--nmax must be positive");
    cfg.n_max = o.nmax;
  }
  if (sub->count("--epsilon")) {
    if (o.epsilon < 0) throw ptsim::ConfigError("--epsilon must be >= 0");
    cfg.epsilon = o.epsilon;
  }
  if (sub->count("--out")) cfg.output_path = o.out;
  if (sub->count("--seed")) cfg.seed = o.seed;
  if (sub->count("--pt-cache")) cfg.pt_cache_path = o.pt_cache;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerically exact open-quantum-system dynamics via compressed "
               "process tensors"};
  app.set_version_flag("--version", "ptsim 1.0.0");
  app.require_subcommand(1);

  Overrides run_opts, sweep_opts;
  CLI::App* run_cmd =
      app.add_subcommand("run", "build the process tensor and write a time series");
  add_common_options(run_cmd, &run_opts);
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "run a dt/epsilon convergence grid");
  add_common_options(sweep_cmd, &sweep_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ptsim::kExitOk : ptsim::kExitConfig;
  }

  try {
    if (run_cmd->parsed()) {
      const ptsim::SimulationConfig cfg = load_with_overrides(run_cmd, run_opts);
      const ptsim::RunSummary s = ptsim::run_simulation(cfg);
      std::cerr << "done: d_max=" << s.d_max << " wall=" << s.wall_seconds
                << "s out=" << cfg.output_path << "\n";
    } else {
      const ptsim::SimulationConfig cfg = load_with_overrides(sweep_cmd, sweep_opts);
      ptsim::convergence_sweep(cfg);
      std::cerr << "done: sweep table in " << cfg.output_path << "\n";
    }
    return ptsim::kExitOk;
  } catch (const ptsim::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ptsim::kExitConfig;
  } catch (const ptsim::ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ptsim::kExitConfig;
  } catch (const ptsim::ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ptsim::kExitResource;
  } catch (const ptsim::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ptsim::kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return ptsim::kExitNumerical;
  }
}
