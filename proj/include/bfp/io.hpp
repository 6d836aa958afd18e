#pragma once
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "bfp/diagnostics.hpp"
#include "bfp/solver.hpp"

namespace bfp {

// 17 significant digits so doubles survive the decimal round trip bit for
// bit; nan and +-inf spelled out.
std::string canonical(double v);

// Versioned snapshot {schema:"cf-1", t, m, R, gamma, x[], u[]}.
std::string profile_to_json(const Profile& p);
Profile profile_from_json(const std::string& text);
void save_profile(const Profile& p, const std::filesystem::path& file);
Profile load_profile(const std::filesystem::path& file);

void write_profile_csv(const Profile& p, const std::filesystem::path& file);
void write_density_csv(const DensityMeasure& d,
                       const std::filesystem::path& file);

extern const char* const kDiagnosticsHeader;
void write_diagnostics_csv(const std::vector<DiagnosticsRecord>& recs,
                           const std::filesystem::path& file);
std::vector<DiagnosticsRecord> read_diagnostics_csv(
    const std::filesystem::path& file);

std::string config_to_json(const SolverConfig& cfg);
SolverConfig config_from_json(const std::string& text);

// Trajectory directory layout: config.json, snapshots/NNNN.json,
// diagnostics.csv. Loading restores config and snapshots; step statistics
// are not persisted.
void save_trajectory(const Trajectory& tr,
                     const std::vector<DiagnosticsRecord>& recs,
                     const std::filesystem::path& dir);
Trajectory load_trajectory(const std::filesystem::path& dir);
std::vector<DiagnosticsRecord> load_trajectory_diagnostics(
    const std::filesystem::path& dir);

// key=value file with '#' comments; duplicate keys rejected.
using KeyValues = std::map<std::string, std::string>;
KeyValues read_key_values(const std::filesystem::path& file);
KeyValues parse_key_values(const std::string& text);

// Recognized keys: gamma, radius, mass, nodes, sigma, dt, adaptive_dt,
// t_end, snapshot_dt, newton_tol, newton_max_iter, barrier_tol,
// allow_zero_level_flat, mode (bounded|whole_line), r_ladder (comma list),
// r_ladder_tol. Unrelated keys are ignored here so scenario files can share
// the map.
SolverConfig config_from_key_values(const KeyValues& kv);

double parse_double(const std::string& s, const std::string& key);
long parse_long(const std::string& s, const std::string& key);
bool parse_bool(const std::string& s, const std::string& key);
std::vector<double> parse_double_list(const std::string& s,
                                      const std::string& key);

} // namespace bfp
