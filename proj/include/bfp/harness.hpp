#pragma once
#include <filesystem>
#include <string>
#include <vector>

#include "bfp/io.hpp"

namespace bfp {

enum class datum_kind { equilibrium, perturbed, table, gaussian };

// Initial-datum descriptor. `equilibrium` builds the steady shape: with
// theta < 0 the exact equilibrium for the configured mass (a level-0
// plateau appears above the limiting mass), with theta >= 0 the f_theta
// shape mass-rescaled to the configured mass. `perturbed` builds
// f_theta (1 + amp cos(k pi r / R)) renormalized to the configured mass.
// `table` reads an r,f csv and renormalizes. `gaussian` (whole-line mode
// only) takes the width field. lambda < 1 concentrates the resolved datum
// by scaling interior u values.
struct DatumSpec {
  datum_kind kind = datum_kind::equilibrium;
  double theta = -1.0;
  double amp = 0.0;
  int wavenumber = 1;
  std::filesystem::path table;
  double width = 1.0;
  double lambda = 1.0;
};

struct Scenario {
  std::string name = "run";
  SolverConfig config;
  DatumSpec datum;
  bool with_diagnostics = true;
  std::filesystem::path out; // empty: nothing persisted
};

Profile resolve_datum(const Scenario& s);

struct ScenarioRun {
  Trajectory trajectory;
  std::vector<DiagnosticsRecord> records;
  // whole-line runs only
  std::vector<double> ladder_radii, ladder_diffs;
  bool ladder_converged = false;
};

// Full pipeline: datum, admissibility, simulate, diagnostics, persistence.
// Errors carry the failing stage in the message and keep their type.
ScenarioRun run_scenario(const Scenario& s);

// Keys on top of the solver set: name, datum
// (equilibrium|perturbed|table|gaussian), theta (number or "auto"), amp,
// wavenumber, table, width, lambda, diagnostics. Unknown keys are rejected.
Scenario scenario_from_key_values(const KeyValues& kv);

struct SweepRow {
  std::string name;
  double gamma = 0.0;
  double mass = 0.0;
  double mass_ratio = 0.0; // m / m_c, 0 when m_c is infinite
  double lambda = 1.0;
  bool ok = false;
  bool condensed = false;
  double x_p_end = 0.0;
  std::string error;
};

// Runs every cell (failures isolated), persists each under out_dir/name,
// writes summary.csv and condensation_map.csv.
std::vector<SweepRow> sweep(const std::vector<Scenario>& cells, int jobs,
                            const std::filesystem::path& out_dir);

// Grid keys: gamma_list plus mass_ratio_list or mass_list, optional
// lambda_list, shared solver and datum keys. theta defaults to 0.25 so the
// same shape family spans both sides of the critical mass.
std::vector<Scenario> sweep_cells_from_key_values(const KeyValues& kv);

struct CheckResult {
  std::string id;
  bool pass = false;
  std::string detail;
};

// Artifact-level checks on a persisted trajectory directory:
// snapshots-consistent, h-monotone, entropy-identity, l2-cap, xp-bracket.
// Tolerance override keys: tol_h_abs, tol_identity_rel, tol_identity_abs,
// tol_l2_cap.
std::vector<CheckResult> verify_trajectory(const std::filesystem::path& dir,
                                           const KeyValues& tol_overrides);

std::string checks_to_json(const std::vector<CheckResult>& checks);

} // namespace bfp
