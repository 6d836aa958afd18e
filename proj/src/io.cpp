#include "bfp/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "bfp/errors.hpp"
#include "json.hpp"

namespace bfp {

namespace fs = std::filesystem;
using nlohmann::json;

std::string canonical(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string read_file(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw config_error("cannot open " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw config_error("cannot write " + file.string());
  out << text;
  if (!out) throw config_error("write failed for " + file.string());
}

double field_double(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number())
    throw config_error(std::string("missing numeric field '") + key + "'");
  return j[key].get<double>();
}

} // namespace

std::string profile_to_json(const Profile& p) {
  json j;
  j["schema"] = "cf-1";
  j["t"] = p.t;
  j["m"] = p.m;
  j["R"] = p.R;
  j["gamma"] = p.gamma;
  j["x"] = p.x;
  j["u"] = p.u;
  return j.dump(2) + "\n";
}

Profile profile_from_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw config_error("snapshot is not valid JSON");
  if (!j.contains("schema") || !j["schema"].is_string())
    throw config_error("snapshot has no schema tag");
  if (j["schema"].get<std::string>() != "cf-1")
    throw config_error("snapshot schema '" + j["schema"].get<std::string>() +
                       "' is not cf-1; no migration path");
  Profile p;
  p.t = field_double(j, "t");
  p.m = field_double(j, "m");
  p.R = field_double(j, "R");
  p.gamma = field_double(j, "gamma");
  if (!j.contains("x") || !j["x"].is_array() || !j.contains("u") ||
      !j["u"].is_array())
    throw config_error("snapshot needs x[] and u[] arrays");
  p.x = j["x"].get<std::vector<double>>();
  p.u = j["u"].get<std::vector<double>>();
  if (p.x.size() != p.u.size() || p.x.size() < 2)
    throw config_error("snapshot arrays malformed");
  return p;
}

void save_profile(const Profile& p, const fs::path& file) {
  write_file(file, profile_to_json(p));
}

Profile load_profile(const fs::path& file) {
  return profile_from_json(read_file(file));
}

void write_profile_csv(const Profile& p, const fs::path& file) {
  std::string out = "x,u\n";
  for (size_t i = 0; i < p.x.size(); ++i)
    out += canonical(p.x[i]) + "," + canonical(p.u[i]) + "\n";
  write_file(file, out);
}

void write_density_csv(const DensityMeasure& d, const fs::path& file) {
  std::string out = "r,f\n";
  for (size_t i = 0; i < d.r.size(); ++i)
    out += canonical(d.r[i]) + "," + canonical(d.f[i]) + "\n";
  write_file(file, out);
}

const char* const kDiagnosticsHeader =
    "t,H,D_R,entropy_identity_defect,x_p_lo,x_p,x_p_hi,E,min_slope,sup_f,"
    "flux_left,flux_right,l2_sq,profile_exponent,profile_prefactor";

void write_diagnostics_csv(const std::vector<DiagnosticsRecord>& recs,
                           const fs::path& file) {
  std::string out = std::string(kDiagnosticsHeader) + "\n";
  for (const auto& r : recs) {
    const double cols[] = {r.t,        r.H,         r.D_R,
                           r.entropy_identity_defect,
                           r.x_p_lo,   r.x_p,       r.x_p_hi,
                           r.E,        r.min_slope, r.sup_f,
                           r.flux_left, r.flux_right, r.l2_sq,
                           r.profile_exponent, r.profile_prefactor};
    for (size_t c = 0; c < 15; ++c) {
      out += canonical(cols[c]);
      out += c + 1 < 15 ? ',' : '\n';
    }
  }
  write_file(file, out);
}

std::vector<DiagnosticsRecord> read_diagnostics_csv(const fs::path& file) {
  std::istringstream in(read_file(file));
  std::string line;
  if (!std::getline(in, line) || line != kDiagnosticsHeader)
    throw config_error("diagnostics csv header mismatch in " + file.string());
  std::vector<DiagnosticsRecord> recs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> v;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ','))
      v.push_back(parse_double(cell, "diagnostics csv"));
    if (v.size() != 15)
      throw config_error("diagnostics csv row with " +
                         std::to_string(v.size()) + " columns");
    DiagnosticsRecord r;
    r.t = v[0];
    r.H = v[1];
    r.D_R = v[2];
    r.entropy_identity_defect = v[3];
    r.x_p_lo = v[4];
    r.x_p = v[5];
    r.x_p_hi = v[6];
    r.E = v[7];
    r.min_slope = v[8];
    r.sup_f = v[9];
    r.flux_left = v[10];
    r.flux_right = v[11];
    r.l2_sq = v[12];
    r.profile_exponent = v[13];
    r.profile_prefactor = v[14];
    recs.push_back(r);
  }
  return recs;
}

std::string config_to_json(const SolverConfig& cfg) {
  json j;
  j["gamma"] = cfg.gamma;
  j["radius"] = cfg.R;
  j["mass"] = cfg.m;
  j["nodes"] = cfg.N;
  j["sigma"] = cfg.sigma;
  j["dt"] = cfg.dt;
  j["adaptive_dt"] = cfg.adaptive_dt;
  j["t_end"] = cfg.t_end;
  j["snapshot_dt"] = cfg.snapshot_dt;
  j["newton_tol"] = cfg.newton_tol;
  j["newton_max_iter"] = cfg.newton_max_iter;
  j["barrier_tol"] = cfg.barrier_tol;
  j["allow_zero_level_flat"] = cfg.allow_zero_level_flat;
  j["mode"] = cfg.mode == solver_mode::bounded ? "bounded" : "whole_line";
  j["r_ladder"] = cfg.r_ladder.radii;
  j["r_ladder_tol"] = cfg.r_ladder.tol;
  return j.dump(2) + "\n";
}

SolverConfig config_from_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw config_error("config is not valid JSON");
  SolverConfig cfg;
  cfg.gamma = field_double(j, "gamma");
  cfg.R = field_double(j, "radius");
  cfg.m = field_double(j, "mass");
  cfg.N = int(field_double(j, "nodes"));
  cfg.sigma = field_double(j, "sigma");
  cfg.dt = field_double(j, "dt");
  cfg.adaptive_dt = j.value("adaptive_dt", true);
  cfg.t_end = field_double(j, "t_end");
  cfg.snapshot_dt = field_double(j, "snapshot_dt");
  cfg.newton_tol = field_double(j, "newton_tol");
  cfg.newton_max_iter = int(field_double(j, "newton_max_iter"));
  cfg.barrier_tol = field_double(j, "barrier_tol");
  cfg.allow_zero_level_flat = j.value("allow_zero_level_flat", false);
  std::string mode = j.value("mode", "bounded");
  if (mode == "bounded")
    cfg.mode = solver_mode::bounded;
  else if (mode == "whole_line")
    cfg.mode = solver_mode::whole_line;
  else
    throw config_error("unknown mode '" + mode + "'");
  if (j.contains("r_ladder"))
    cfg.r_ladder.radii = j["r_ladder"].get<std::vector<double>>();
  cfg.r_ladder.tol = j.value("r_ladder_tol", cfg.r_ladder.tol);
  return cfg;
}

void save_trajectory(const Trajectory& tr,
                     const std::vector<DiagnosticsRecord>& recs,
                     const fs::path& dir) {
  fs::create_directories(dir / "snapshots");
  write_file(dir / "config.json", config_to_json(tr.config));
  char name[32];
  for (size_t k = 0; k < tr.snapshots.size(); ++k) {
    std::snprintf(name, sizeof name, "%04zu.json", k);
    save_profile(tr.snapshots[k], dir / "snapshots" / name);
  }
  write_diagnostics_csv(recs, dir / "diagnostics.csv");
}

Trajectory load_trajectory(const fs::path& dir) {
  if (!fs::exists(dir / "config.json"))
    throw config_error("missing " + (dir / "config.json").string());
  Trajectory tr;
  tr.config = config_from_json(read_file(dir / "config.json"));
  fs::path snaps = dir / "snapshots";
  if (!fs::is_directory(snaps))
    throw config_error("missing snapshot directory " + snaps.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(snaps))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) tr.snapshots.push_back(load_profile(f));
  if (tr.snapshots.empty())
    throw config_error("no snapshots under " + snaps.string());
  return tr;
}

std::vector<DiagnosticsRecord> load_trajectory_diagnostics(
    const fs::path& dir) {
  if (!fs::exists(dir / "diagnostics.csv"))
    throw config_error("missing " + (dir / "diagnostics.csv").string());
  return read_diagnostics_csv(dir / "diagnostics.csv");
}

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

} // namespace

KeyValues parse_key_values(const std::string& text) {
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("line " + std::to_string(lineno) +
                         ": expected key=value, got '" + line + "'");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty())
      throw config_error("line " + std::to_string(lineno) + ": empty key");
    if (!kv.emplace(key, val).second)
      throw config_error("duplicate key '" + key + "'");
  }
  return kv;
}

KeyValues read_key_values(const fs::path& file) {
  return parse_key_values(read_file(file));
}

double parse_double(const std::string& s, const std::string& key) {
  const char* c = s.c_str();
  char* end = nullptr;
  double v = std::strtod(c, &end);
  if (end == c || *end != '\0')
    throw config_error("bad number '" + s + "' for " + key);
  return v;
}

long parse_long(const std::string& s, const std::string& key) {
  const char* c = s.c_str();
  char* end = nullptr;
  long v = std::strtol(c, &end, 10);
  if (end == c || *end != '\0')
    throw config_error("bad integer '" + s + "' for " + key);
  return v;
}

bool parse_bool(const std::string& s, const std::string& key) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw config_error("bad boolean '" + s + "' for " + key);
}

std::vector<double> parse_double_list(const std::string& s,
                                      const std::string& key) {
  std::vector<double> out;
  std::istringstream in(s);
  std::string cell;
  while (std::getline(in, cell, ',')) out.push_back(parse_double(cell, key));
  if (out.empty()) throw config_error("empty list for " + key);
  return out;
}

SolverConfig config_from_key_values(const KeyValues& kv) {
  SolverConfig cfg;
  auto get = [&](const char* key) -> const std::string* {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  if (auto* v = get("gamma")) cfg.gamma = parse_double(*v, "gamma");
  if (auto* v = get("radius")) cfg.R = parse_double(*v, "radius");
  if (auto* v = get("mass")) cfg.m = parse_double(*v, "mass");
  if (auto* v = get("nodes")) cfg.N = int(parse_long(*v, "nodes"));
  if (auto* v = get("sigma")) cfg.sigma = parse_double(*v, "sigma");
  if (auto* v = get("dt")) cfg.dt = parse_double(*v, "dt");
  if (auto* v = get("adaptive_dt"))
    cfg.adaptive_dt = parse_bool(*v, "adaptive_dt");
  if (auto* v = get("t_end")) cfg.t_end = parse_double(*v, "t_end");
  if (auto* v = get("snapshot_dt"))
    cfg.snapshot_dt = parse_double(*v, "snapshot_dt");
  if (auto* v = get("newton_tol"))
    cfg.newton_tol = parse_double(*v, "newton_tol");
  if (auto* v = get("newton_max_iter"))
    cfg.newton_max_iter = int(parse_long(*v, "newton_max_iter"));
  if (auto* v = get("barrier_tol"))
    cfg.barrier_tol = parse_double(*v, "barrier_tol");
  if (auto* v = get("allow_zero_level_flat"))
    cfg.allow_zero_level_flat = parse_bool(*v, "allow_zero_level_flat");
  if (auto* v = get("mode")) {
    if (*v == "bounded")
      cfg.mode = solver_mode::bounded;
    else if (*v == "whole_line")
      cfg.mode = solver_mode::whole_line;
    else
      throw config_error("unknown mode '" + *v + "'");
  }
  if (auto* v = get("r_ladder"))
    cfg.r_ladder.radii = parse_double_list(*v, "r_ladder");
  if (auto* v = get("r_ladder_tol"))
    cfg.r_ladder.tol = parse_double(*v, "r_ladder_tol");
  return cfg;
}

} // namespace bfp
