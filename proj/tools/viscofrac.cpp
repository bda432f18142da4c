// viscofrac run|validate|sweep --config <file> [--param key=v1,v2,...]

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "viscofrac/output.hpp"

using namespace viscofrac;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

// "n=10" style overrides applied before the run.
void apply_params(ConfigTable& table, const std::vector<std::string>& params) {
  for (const auto& p : params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("--param expects key=value, got '" + p + "'");
    apply_override(table, p.substr(0, eq), p.substr(eq + 1));
  }
}

int cmd_validate(ConfigTable table, const std::vector<std::string>& params) {
  apply_params(table, params);
  const SimConfig cfg = config_from_table(table);
  const ValidationResult r = validate(cfg);
  for (const auto& f : r.findings)
    std::cout << (f.error ? "ERROR " : "NOTE  ") << f.condition << ": " << f.message << '\n';
  if (cfg.section == Section::Three) std::cout << "safety strain C* = " << r.safety_strain << '\n';
  std::cout << (r.ok() ? "valid" : "invalid") << '\n';
  return r.ok() ? 0 : 2;
}

int cmd_run(ConfigTable table, const std::vector<std::string>& params, const std::string& out_dir, bool quiet) {
  apply_params(table, params);
  const SimConfig cfg = config_from_table(table);
  RunOptions opts;
  const int steps = cfg.steps();
  if (!quiet)
    opts.progress = [steps](int m, const EnergyReport& r) {
      if (m % std::max(1, steps / 10) == 0 || m == steps)
        std::cerr << "step " << m << "/" << steps << "  total " << r.total_free_energy << "  residual "
                  << r.inequality_residual << "  newton " << r.newton_iters << '\n';
    };
  const SimOutput out = run(cfg, opts);
  const std::string dir = out_dir.empty() ? cfg.output_dir : out_dir;
  write_run_outputs(cfg, table, out, dir);
  const bool holds = out.ledger.inequality_holds();
  std::cout << "wrote " << dir << " (" << out.snapshots.size() << " snapshots), energy inequality "
            << (holds ? "holds" : "VIOLATED") << '\n';
  return holds ? 0 : 3;
}

int cmd_sweep(ConfigTable table, const std::vector<std::string>& params, unsigned threads) {
  // The one parameter with a comma-separated list (outside brackets) is
  // swept; every other --param is a fixed override.
  std::string key;
  std::vector<std::string> values;
  std::vector<std::string> fixed;
  for (const auto& p : params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("--param expects key=value, got '" + p + "'");
    const std::string value = p.substr(eq + 1);
    if (value.find(',') == std::string::npos || value.front() == '[') {
      fixed.push_back(p);
      continue;
    }
    if (!key.empty()) throw std::invalid_argument("sweep takes a single list parameter key=v1,v2,...");
    key = p.substr(0, eq);
    values = split(value, ',');
  }
  if (key.empty()) throw std::invalid_argument("sweep needs a list parameter key=v1,v2,...");
  apply_params(table, fixed);
  const auto cases = sweep(table, key, values, threads);
  int failures = 0;
  for (const auto& c : cases) {
    if (c.ok)
      std::cout << c.key << '=' << c.value << "  max|eps|=" << c.max_strain_norm << "  max|T|="
                << c.max_stress_norm << "  residual=" << c.final_residual << "  -> " << c.dir << '\n';
    else
      std::cout << c.key << '=' << c.value << "  FAILED: " << c.error << '\n';
    failures += !c.ok;
  }
  return failures ? 4 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-field fracture in nonlinear Kelvin-Voigt solids"};
  app.require_subcommand(1);
  std::string config;
  std::vector<std::string> params;
  std::string out_dir;
  bool quiet = false;
  unsigned threads = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config,-c", config, "configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--param,-p", params, "override key=value (sweep: key=v1,v2,...)");
  };
  CLI::App* run_cmd = app.add_subcommand("run", "run a simulation");
  add_common(run_cmd);
  run_cmd->add_option("--output,-o", out_dir, "output directory (default: [output] dir)");
  run_cmd->add_flag("--quiet,-q", quiet, "no progress output");
  CLI::App* validate_cmd = app.add_subcommand("validate", "check the configuration and initial data");
  add_common(validate_cmd);
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "run one simulation per parameter value");
  add_common(sweep_cmd);
  sweep_cmd->add_option("--threads,-j", threads, "worker threads (default: all cores)");

  CLI11_PARSE(app, argc, argv);
  try {
    const ConfigTable table = load_config_table(config);
    if (run_cmd->parsed()) return cmd_run(table, params, out_dir, quiet);
    if (validate_cmd->parsed()) return cmd_validate(table, params);
    return cmd_sweep(table, params, threads);
  } catch (const StepFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
