#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bfp/acceptance.hpp"
#include "bfp/diagnostics.hpp"
#include "bfp/errors.hpp"
#include "bfp/harness.hpp"
#include "bfp/io.hpp"
#include "bfp/solver.hpp"
#include "bfp/steady.hpp"
#include "bfp/transform.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct EquilibriumArgs {
  double gamma = 0.0;
  double radius = 1.0;
  double theta = -1.0;
  double mass = -1.0;
  int nodes = 513;
  std::string out;
};

int run_equilibrium(const EquilibriumArgs& a) {
  bfp::Mobility mob = bfp::Mobility::bosonic(a.gamma);
  if ((a.theta < 0.0) == (a.mass < 0.0))
    throw bfp::config_error("give exactly one of --theta or --mass");
  double theta, mass;
  if (a.theta >= 0.0) {
    theta = a.theta;
    mass = bfp::steady_mass(mob, a.radius, theta);
  } else {
    mass = a.mass;
    theta = bfp::theta_for_mass(mob, a.radius, mass);
  }
  auto mc = bfp::critical_mass(mob, a.radius);
  std::cout << "gamma " << bfp::canonical(a.gamma) << "\n"
            << "radius " << bfp::canonical(a.radius) << "\n"
            << "theta " << bfp::canonical(theta) << "\n"
            << "mass " << bfp::canonical(mass) << "\n";
  if (mc.finite)
    std::cout << "critical_mass " << bfp::canonical(mc.value) << "\n";
  else
    std::cout << "critical_mass infinite\n";
  double condensate =
      theta == 0.0 && mc.finite && mass > mc.value ? mass - mc.value : 0.0;
  std::cout << "condensate " << bfp::canonical(condensate) << "\n";

  if (!a.out.empty()) {
    fs::create_directories(a.out);
    auto eq = bfp::equilibrium_profile(mob, a.radius, mass, a.nodes);
    bfp::Profile p;
    p.m = mass;
    p.R = a.radius;
    p.gamma = a.gamma;
    p.x = eq.x;
    p.u = eq.u;
    bfp::write_profile_csv(p, fs::path(a.out) / "profile.csv");
    std::ofstream dens(fs::path(a.out) / "density.csv");
    dens << "r,f\n";
    for (int i = 0; i + 1 < a.nodes; ++i) {
      double r = -a.radius +
                 (i + 0.5) * 2.0 * a.radius / double(a.nodes - 1);
      dens << bfp::canonical(r) << ","
           << bfp::canonical(bfp::steady_density(mob, theta, r)) << "\n";
    }
    std::cout << "wrote " << a.out << "/profile.csv and density.csv\n";
  }
  return 0;
}

int run_simulate(const std::string& config, const std::string& out) {
  bfp::Scenario s = bfp::scenario_from_key_values(bfp::read_key_values(config));
  s.out = out;
  bfp::ScenarioRun run = bfp::run_scenario(s);
  const auto& tr = run.trajectory;
  auto d = bfp::decompose(tr.snapshots.back());
  std::cout << "scenario " << s.name << "\n"
            << "snapshots " << tr.snapshots.size() << "\n"
            << "t_end " << bfp::canonical(tr.snapshots.back().t) << "\n"
            << "x_p " << bfp::canonical(d.x_p) << "\n";
  if (!run.records.empty())
    std::cout << "H " << bfp::canonical(run.records.back().H) << "\n";
  if (!run.ladder_radii.empty()) {
    std::cout << "ladder";
    for (double v : run.ladder_diffs) std::cout << " " << bfp::canonical(v);
    std::cout << (run.ladder_converged ? " (converged)" : " (not converged)")
              << "\n";
  }
  std::cout << "wrote " << out << "\n";
  return 0;
}

int run_sweep(const std::string& config, const std::string& out, int jobs) {
  auto cells = bfp::sweep_cells_from_key_values(bfp::read_key_values(config));
  auto rows = bfp::sweep(cells, jobs, out);
  int failed = 0;
  for (const auto& row : rows) {
    if (row.ok) {
      std::cout << row.name << ": "
                << (row.condensed ? "condensed" : "no condensate")
                << ", x_p " << bfp::canonical(row.x_p_end) << "\n";
    } else {
      std::cout << row.name << ": error: " << row.error << "\n";
      ++failed;
    }
  }
  std::cout << rows.size() << " cells, " << failed << " failed; summary in "
            << out << "/summary.csv\n";
  return failed == 0 ? 0 : 1;
}

int run_verify(const std::vector<std::string>& targets,
               const std::string& tol_file, std::vector<int> criteria,
               bool all_criteria, const std::string& out) {
  bfp::KeyValues tols;
  if (!tol_file.empty()) tols = bfp::read_key_values(tol_file);
  if (all_criteria) criteria = bfp::criterion_ids();
  if (targets.empty() && criteria.empty())
    throw bfp::config_error(
        "nothing to verify: give trajectory directories or --criteria");

  bool all_pass = true;
  json report;
  report["targets"] = json::object();
  for (const auto& dir : targets) {
    auto checks = bfp::verify_trajectory(dir, tols);
    json arr = json::array();
    for (const auto& c : checks) {
      all_pass = all_pass && c.pass;
      std::cout << dir << ": " << (c.pass ? "pass" : "FAIL") << " " << c.id
                << " (" << c.detail << ")\n";
      arr.push_back({{"id", c.id}, {"pass", c.pass}, {"detail", c.detail}});
    }
    report["targets"][dir] = arr;
  }

  report["criteria"] = json::array();
  if (!criteria.empty()) {
    bfp::AcceptanceContext ctx;
    for (int id : criteria) {
      auto r = bfp::run_criterion(id, ctx);
      all_pass = all_pass && r.pass;
      std::cout << "criterion " << r.id << " "
                << (r.pass ? "pass" : "FAIL") << ": " << r.title << " ("
                << r.detail << ")\n";
      report["criteria"].push_back({{"id", r.id},
                                    {"title", r.title},
                                    {"pass", r.pass},
                                    {"detail", r.detail}});
    }
  }
  report["pass"] = all_pass;
  if (!out.empty()) {
    std::ofstream(out) << report.dump(2) << "\n";
    std::cout << "report written to " << out << "\n";
  }
  return all_pass ? 0 : 1;
}

int run_profile_fit(const std::string& snapshot, double r_lo, double r_hi,
                    const std::string& out) {
  bfp::Profile p = bfp::load_profile(snapshot);
  auto d = bfp::decompose(p);
  auto fit = bfp::profile_fit(d, p.gamma, r_lo, r_hi);
  std::cout << "t " << bfp::canonical(p.t) << "\n"
            << "x_p " << bfp::canonical(d.x_p) << "\n"
            << "applicable " << (fit.applicable ? "true" : "false") << "\n"
            << "exponent " << bfp::canonical(fit.exponent) << "\n"
            << "prefactor " << bfp::canonical(fit.prefactor) << "\n"
            << "residual " << bfp::canonical(fit.residual) << "\n"
            << "samples " << fit.samples << "\n"
            << "window [" << bfp::canonical(fit.r_lo) << ", "
            << bfp::canonical(fit.r_hi) << "]\n";
  if (!out.empty()) {
    json j{{"t", p.t},           {"x_p", d.x_p},
           {"applicable", fit.applicable}, {"exponent", fit.exponent},
           {"prefactor", fit.prefactor},   {"residual", fit.residual},
           {"samples", fit.samples},       {"r_lo", fit.r_lo},
           {"r_hi", fit.r_hi}};
    std::ofstream(out) << j.dump(2) << "\n";
  }
  return 0;
}

int run_compare(const std::string& a, const std::string& b, double tol,
                const std::string& window, bool require_ordered,
                const std::string& out) {
  bfp::Trajectory ta = bfp::load_trajectory(a);
  bfp::Trajectory tb = bfp::load_trajectory(b);
  auto rep = bfp::comparison_check(ta, tb, tol);
  std::cout << "ordered " << (rep.ordered ? "true" : "false") << "\n"
            << "max_violation " << bfp::canonical(rep.max_violation) << "\n";
  if (!rep.ordered)
    std::cout << "witness t " << bfp::canonical(rep.t_witness) << " r "
              << bfp::canonical(rep.r_witness) << "\n";
  std::cout << "crossings";
  for (int z : rep.crossings) std::cout << " " << z;
  std::cout << "\ncrossings_nonincreasing "
            << (rep.crossings_nonincreasing ? "true" : "false") << "\n";

  bool window_ok = true;
  json jwin;
  if (!window.empty()) {
    auto colon = window.find(':');
    if (colon == std::string::npos)
      throw bfp::config_error("--window wants lo:hi");
    double lo = bfp::parse_double(window.substr(0, colon), "window lo");
    double hi = bfp::parse_double(window.substr(colon + 1), "window hi");
    auto irep = bfp::intersection_check(ta, tb, lo, hi);
    std::cout << "window_applicable "
              << (irep.applicable ? "true" : "false") << "\nwindow_z";
    for (int z : irep.z) std::cout << " " << z;
    std::cout << "\nwindow_nonincreasing "
              << (irep.nonincreasing ? "true" : "false") << "\n";
    window_ok = !irep.applicable || irep.nonincreasing;
    jwin = {{"applicable", irep.applicable},
            {"z", irep.z},
            {"nonincreasing", irep.nonincreasing}};
  }

  bool pass = rep.crossings_nonincreasing && window_ok &&
              (!require_ordered || rep.ordered);
  if (!out.empty()) {
    json j{{"ordered", rep.ordered},
           {"max_violation", rep.max_violation},
           {"crossings", rep.crossings},
           {"crossings_nonincreasing", rep.crossings_nonincreasing},
           {"pass", pass}};
    if (!window.empty()) j["window"] = jwin;
    std::ofstream(out) << j.dump(2) << "\n";
  }
  return pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"1d bosonic Fokker-Planck lab: equilibria, simulation, "
               "verification"};
  app.require_subcommand(1);

  EquilibriumArgs ea;
  auto* eq = app.add_subcommand(
      "equilibrium", "print a steady state's theta, mass and critical mass");
  eq->add_option("--gamma", ea.gamma, "mobility exponent")->required();
  eq->add_option("--radius", ea.radius, "half-width of the value interval");
  eq->add_option("--theta", ea.theta, "chemical potential shift");
  eq->add_option("--mass", ea.mass, "target mass (resolves theta)");
  eq->add_option("--nodes", ea.nodes, "grid nodes for --out files");
  eq->add_option("--out", ea.out, "directory for profile.csv / density.csv");

  std::string sim_config, sim_out;
  auto* sim = app.add_subcommand("simulate", "run one scenario and persist it");
  sim->add_option("--config", sim_config, "scenario key=value file")
      ->required();
  sim->add_option("--out", sim_out, "output trajectory directory")->required();

  std::string sw_config, sw_out;
  int sw_jobs = 1;
  auto* sw = app.add_subcommand("sweep", "run a scenario grid");
  sw->add_option("--config", sw_config, "sweep key=value file")->required();
  sw->add_option("--out", sw_out, "output directory")->required();
  sw->add_option("--jobs", sw_jobs, "parallel scenarios");

  std::vector<std::string> vf_targets;
  std::string vf_tols, vf_out;
  std::vector<int> vf_criteria;
  bool vf_all = false;
  auto* vf = app.add_subcommand(
      "verify", "check persisted trajectories and acceptance criteria");
  vf->add_option("targets", vf_targets, "trajectory directories");
  vf->add_option("--tol-overrides", vf_tols, "key=value tolerance file");
  vf->add_option("--criteria", vf_criteria, "acceptance criterion ids")
      ->delimiter(',');
  vf->add_flag("--all-criteria", vf_all, "run every acceptance criterion");
  vf->add_option("--out", vf_out, "JSON report file");

  std::string pf_snapshot, pf_out;
  double pf_lo = -1.0, pf_hi = -1.0;
  auto* pf = app.add_subcommand("profile-fit",
                                "log-log density fit near the origin");
  pf->add_option("--snapshot", pf_snapshot, "snapshot JSON file")->required();
  pf->add_option("--r-lo", pf_lo, "fit window lower edge");
  pf->add_option("--r-hi", pf_hi, "fit window upper edge");
  pf->add_option("--out", pf_out, "JSON report file");

  std::string cp_a, cp_b, cp_window, cp_out;
  double cp_tol = 0.0;
  bool cp_ordered = false;
  auto* cp = app.add_subcommand("compare",
                                "ordering and sign-change checks on two runs");
  cp->add_option("--a", cp_a, "first trajectory directory")->required();
  cp->add_option("--b", cp_b, "second trajectory directory")->required();
  cp->add_option("--tol", cp_tol, "ordering tolerance");
  cp->add_option("--window", cp_window, "fixed mass window lo:hi");
  cp->add_flag("--require-ordered", cp_ordered,
               "fail when the density ordering breaks");
  cp->add_option("--out", cp_out, "JSON report file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (eq->parsed()) return run_equilibrium(ea);
    if (sim->parsed()) return run_simulate(sim_config, sim_out);
    if (sw->parsed()) return run_sweep(sw_config, sw_out, sw_jobs);
    if (vf->parsed())
      return run_verify(vf_targets, vf_tols, vf_criteria, vf_all, vf_out);
    if (pf->parsed()) return run_profile_fit(pf_snapshot, pf_lo, pf_hi, pf_out);
    if (cp->parsed())
      return run_compare(cp_a, cp_b, cp_tol, cp_window, cp_ordered, cp_out);
  } catch (const bfp::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const bfp::check_error& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return 1;
  } catch (const bfp::numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
