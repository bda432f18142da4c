#include "viscofrac/output.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace viscofrac {

namespace {

std::ofstream open_file(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write '" + path + "'");
  os << std::setprecision(17);
  return os;
}

const char* law_name(LawKind k) {
  switch (k) {
    case LawKind::PGrowth: return "p_growth";
    case LawKind::StrainLimiting: return "strain_limiting";
    case LawKind::RegularizedStrainLimiting: return "regularized";
  }
  return "?";
}

}  // namespace

void write_vtk(const Grid& grid, const Snapshot& snap, const std::string& path) {
  std::ofstream os = open_file(path);
  const int nx = grid.nx() + 1;
  const int ny = grid.dim() == 2 ? grid.ny() + 1 : 1;
  const int d = grid.dim();
  os << "# vtk DataFile Version 3.0\n"
     << "viscofrac step " << snap.step << " time " << snap.time << "\n"
     << "ASCII\nDATASET STRUCTURED_POINTS\n"
     << "DIMENSIONS " << nx << ' ' << ny << " 1\n"
     << "ORIGIN 0 0 0\n"
     << "SPACING " << grid.hx() << ' ' << grid.hy() << " 1\n"
     << "POINT_DATA " << grid.node_count() << "\n"
     << "VECTORS u double\n";
  for (int n = 0; n < grid.node_count(); ++n)
    os << snap.u[n * d] << ' ' << (d == 2 ? snap.u[n * d + 1] : 0.0) << " 0\n";
  os << "SCALARS v double 1\nLOOKUP_TABLE default\n";
  for (int n = 0; n < grid.node_count(); ++n) os << snap.v[n] << '\n';
  os << "CELL_DATA " << grid.cell_count() << "\n"
     << "SCALARS stress_norm double 1\nLOOKUP_TABLE default\n";
  for (int c = 0; c < grid.cell_count(); ++c) os << snap.stress_norm[c] << '\n';
}

std::string metadata_json(const SimConfig& c, const ConfigTable& table, const SimOutput& out) {
  nlohmann::json j;
  j["program"] = "viscofrac";
  j["section"] = c.section == Section::Two ? 2 : 3;
  j["law"] = {{"kind", law_name(c.law.kind)}, {"p", c.law.p}, {"a", c.law.a}, {"n", c.law.n}};
  j["model"] = {{"alpha", c.alpha}, {"eta", c.eta}, {"eps_pf", c.eps_pf}, {"k", c.hk_order()}};
  j["grid"] = {{"dim", c.dim}, {"cells", {c.cells[0], c.cells[1]}}, {"length", {c.length[0], c.length[1]}}};
  j["time"] = {{"dt", c.dt}, {"t_final", c.t_final}, {"steps", c.steps()}};
  nlohmann::json cfg = nlohmann::json::object();
  for (const auto& [section, entries] : table)
    for (const auto& [key, value] : entries) cfg[section.empty() ? key : section + "." + key] = value.to_string();
  j["config"] = cfg;

  nlohmann::json findings = nlohmann::json::array();
  for (const auto& f : out.validation.findings)
    findings.push_back({{"condition", f.condition}, {"message", f.message}, {"error", f.error}});
  j["validation"] = {{"findings", findings},
                     {"safety_strain", out.validation.safety_strain},
                     {"compatibility_mismatch", out.validation.compatibility_mismatch}};

  const auto& hist = out.ledger.history();
  double worst_kkt = 0.0, worst_irrev = -std::numeric_limits<double>::infinity();
  int fallbacks = 0;
  for (const auto& s : out.steps) {
    worst_kkt = std::min(worst_kkt, s.kkt.min_directional_derivative);
    worst_irrev = std::max(worst_irrev, s.irreversibility_violation);
    fallbacks += s.phase_fallback;
  }
  j["results"] = {{"initial_energy", out.ledger.initial_energy()},
                  {"final_residual", hist.back().inequality_residual},
                  {"final_budget", hist.back().budget},
                  {"external_statement_form", hist.back().external_statement_form},
                  {"inequality_holds", out.ledger.inequality_holds()},
                  {"max_strain_norm", out.max_strain_norm},
                  {"max_stress_norm", out.max_stress_norm},
                  {"min_kkt_directional_derivative", worst_kkt},
                  {"max_irreversibility_violation", out.steps.empty() ? 0.0 : worst_irrev},
                  {"phase_fallbacks", fallbacks},
                  {"snapshots", out.snapshots.size()},
                  {"wall_seconds", out.wall_seconds}};
  return j.dump(2);
}

void write_run_outputs(const SimConfig& config, const ConfigTable& table, const SimOutput& out,
                       const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  {
    std::ofstream os = open_file((base / "ledger.csv").string());
    out.ledger.write_csv(os);
  }
  if (config.write_vtk) {
    const Grid grid = config.make_grid();
    for (const auto& s : out.snapshots) {
      std::ostringstream name;
      name << "snapshot_" << std::setw(6) << std::setfill('0') << s.step << ".vtk";
      write_vtk(grid, s, (base / name.str()).string());
    }
  }
  std::ofstream os = open_file((base / "run.json").string());
  os << metadata_json(config, table, out) << '\n';
}

std::vector<SweepCase> sweep(const ConfigTable& table, const std::string& key,
                             const std::vector<std::string>& values, unsigned threads, bool write_outputs) {
  std::vector<SweepCase> cases(values.size());
  const std::string base = config_from_table(table).output_dir;
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::string tag = key;
    std::replace(tag.begin(), tag.end(), '.', '_');
    cases[i].key = key;
    cases[i].value = values[i];
    cases[i].dir = (std::filesystem::path(base) / (tag + "_" + values[i])).string();
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < cases.size(); i = next++) {
      SweepCase& sc = cases[i];
      try {
        ConfigTable t = table;
        apply_override(t, sc.key, sc.value);
        const SimConfig cfg = config_from_table(t);
        sc.law_n = cfg.law.n;
        const SimOutput out = run(cfg);
        if (write_outputs) write_run_outputs(cfg, t, out, sc.dir);
        sc.final_residual = out.ledger.last().inequality_residual;
        sc.max_strain_norm = out.max_strain_norm;
        sc.max_stress_norm = out.max_stress_norm;
        sc.ok = true;
      } catch (const std::exception& e) {
        sc.error = e.what();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, cases.size())));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return cases;
}

}  // namespace viscofrac
