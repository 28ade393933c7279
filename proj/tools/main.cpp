#include <CLI11.hpp>

#include <cstdio>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "coldplasma/error.hpp"
#include "coldplasma/harness/config.hpp"
#include "coldplasma/harness/experiments.hpp"

using namespace coldplasma;
using namespace coldplasma::harness;

namespace {

struct Common {
  std::string config;
  std::string formulation;
  std::string integrator;
  std::optional<int> k;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
  bool dump = false;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "INI configuration file")->check(CLI::ExistingFile);
  app->add_option("--formulation", c.formulation, "fluxfree or dgflux");
  app->add_option("--integrator", c.integrator, "avf, ssprk3 or euler");
  app->add_option("--k", c.k, "degree parameter (0 only)");
  app->add_option("--seed", c.seed, "seed of every random draw");
  app->add_option("--set", c.overrides, "override section.key=value (repeatable)");
  app->add_flag("--print-config", c.dump, "print the resolved configuration before running");
}

RunConfig resolve(const Common& c, RunConfig base) {
  RunConfig cfg = c.config.empty() ? base : load_config(c.config, base);
  if (!c.formulation.empty()) cfg.formulation = formulation_from_string(c.formulation);
  if (!c.integrator.empty()) cfg.integrator = integrator_from_string(c.integrator);
  if (c.k) cfg.k = *c.k;
  if (c.seed) cfg.seed = *c.seed;
  for (const auto& o : c.overrides) apply_override(cfg, o);
  validate(cfg);
  if (c.dump) std::cout << to_ini(cfg) << '\n';
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coldplasma: cold relativistic fluid-particle-Maxwell simulator"};
  app.require_subcommand(1);

  Common converge_opts, conserve_opts, wake_opts, clean_opts, info_opts;
  bool skip_control = false;
  std::string input;

  auto* converge = app.add_subcommand("converge", "manufactured-solution convergence study");
  add_common(converge, converge_opts);
  auto* conserve = app.add_subcommand("conserve", "conservation study, one CSV row per output step");
  add_common(conserve, conserve_opts);
  auto* wake = app.add_subcommand("wake", "scaled plasma wake demo with VTK output");
  add_common(wake, wake_opts);
  wake->add_flag("--no-control", skip_control, "skip the zero-charge control run");
  auto* clean = app.add_subcommand("clean-field", "Gauss-law cleaning of E");
  add_common(clean, clean_opts);
  clean->add_option("--input", input, "coefficient dump to clean")->check(CLI::ExistingFile);
  auto* info = app.add_subcommand("info", "mesh and DOF counts of a configuration");
  add_common(info, info_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (converge->parsed()) {
      const RunConfig cfg = resolve(converge_opts, convergence_defaults());
      const ConvergenceResult r = run_convergence(cfg, &std::cerr);
      std::cout << r.table();
    } else if (conserve->parsed()) {
      const RunConfig cfg = resolve(conserve_opts, conservation_defaults());
      const ConservationResult r = run_conservation(cfg, &std::cerr);
      std::cout << std::setprecision(3) << "max |mass err| " << r.max_mass_err << "\nmax |energy err| "
                << r.max_energy_err << "\nmax gauss residual " << r.max_gauss << "\nmax divB L2 " << r.max_divB
                << "\npicard iterations " << r.stats.picard_iterations << '\n';
      if (!cfg.output_dir.empty()) std::cout << "wrote " << cfg.output_dir << "/conservation.csv\n";
    } else if (wake->parsed()) {
      const RunConfig cfg = resolve(wake_opts, wake_defaults());
      const WakeResult r = run_wake_demo(cfg, &std::cerr);
      std::cout << std::setprecision(4) << "steps " << r.steps << " dt " << r.dt << "\nmax field coefficient "
                << r.max_field << "\ndensity modulation " << r.density_modulation << "\naxis E_z max " << r.ez_max
                << ", sign changes " << r.ez_sign_changes << "\nbeam head z " << r.beam_head << "\nremoved weight "
                << r.removed_weight << '\n';
      for (const auto& f : r.files) std::cout << "wrote " << f << '\n';
      if (!skip_control) {
        RunConfig control = cfg;
        control.beam_density = 0.0;
        control.output_dir.clear();
        const WakeResult c = run_wake_demo(control, nullptr);
        std::cout << "control (zero beam charge): max field coefficient " << c.max_field
                  << ", density modulation " << c.density_modulation << '\n';
      }
    } else if (clean->parsed()) {
      const RunConfig cfg = resolve(clean_opts, conservation_defaults());
      const CleanFieldResult r = run_clean_field(cfg, input);
      std::cout << std::setprecision(3) << "gauss residual before " << r.residual_before << "\ngauss residual after "
                << r.residual_after << "\nmax |dE| " << r.change_inf << "\nmax |C dE| " << r.curl_change_inf << '\n';
    } else if (info->parsed()) {
      std::cout << info_report(resolve(info_opts, RunConfig{}));
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
