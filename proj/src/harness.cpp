#include "bfp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "bfp/errors.hpp"
#include "bfp/steady.hpp"
#include "json.hpp"

namespace bfp {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

template <class F>
auto stage(const char* name, F&& f) {
  try {
    return f();
  } catch (config_error& e) {
    throw config_error(std::string(name) + ": " + e.what());
  } catch (numerical_error& e) {
    throw numerical_error(std::string(name) + ": " + e.what());
  } catch (check_error& e) {
    throw check_error(std::string(name) + ": " + e.what());
  }
}

// Invert a cumulative table onto a uniform mass grid of n nodes; flat
// stretches of the cumulative (vacuum regions) become jumps of u.
Profile invert_cumulative(const std::vector<double>& r,
                          const std::vector<double>& cum, double m, double R,
                          double gamma, int n) {
  Profile p;
  p.t = 0.0;
  p.m = m;
  p.R = R;
  p.gamma = gamma;
  const double total = cum.back();
  for (int i = 0; i < n; ++i) {
    double xi = total * double(i) / double(n - 1);
    auto it = std::lower_bound(cum.begin(), cum.end(), xi);
    size_t j = size_t(it - cum.begin());
    double v;
    if (j == 0)
      v = r.front();
    else if (cum[j] > cum[j - 1])
      v = r[j - 1] + (xi - cum[j - 1]) / (cum[j] - cum[j - 1]) *
                         (r[j] - r[j - 1]);
    else
      v = r[j];
    p.u.push_back(v);
    p.x.push_back(m * double(i) / double(n - 1));
  }
  p.u.front() = -R;
  p.u.back() = R;
  return p;
}

Profile datum_from_density_samples(const std::vector<double>& r,
                                   const std::vector<double>& f, double m,
                                   double R, double gamma, int n) {
  std::vector<double> cum(r.size(), 0.0);
  for (size_t i = 1; i < r.size(); ++i)
    cum[i] = cum[i - 1] + 0.5 * (f[i] + f[i - 1]) * (r[i] - r[i - 1]);
  if (!(cum.back() > 0.0))
    throw config_error("datum density integrates to zero");
  double scale = m / cum.back();
  for (auto& c : cum) c *= scale;
  return invert_cumulative(r, cum, m, R, gamma, n);
}

Profile equilibrium_shape_datum(const Mobility& mob, const SolverConfig& cfg,
                                double theta) {
  if (theta < 0.0) {
    auto eq = equilibrium_profile(mob, cfg.R, cfg.m, cfg.N);
    Profile p;
    p.t = 0.0;
    p.m = cfg.m;
    p.R = cfg.R;
    p.gamma = cfg.gamma;
    p.x = std::move(eq.x);
    p.u = std::move(eq.u);
    return p;
  }
  SteadyInverse si(mob, cfg.R, theta);
  double c = cfg.m / si.mass();
  Profile p;
  p.t = 0.0;
  p.m = cfg.m;
  p.R = cfg.R;
  p.gamma = cfg.gamma;
  for (int i = 0; i < cfg.N; ++i) {
    double x = cfg.m * double(i) / double(cfg.N - 1);
    p.x.push_back(x);
    p.u.push_back(si.inv_cdf(std::clamp(x / c, 0.0, si.mass())));
  }
  p.x.back() = cfg.m;
  p.u.front() = -cfg.R;
  p.u.back() = cfg.R;
  return p;
}

Profile perturbed_datum(const Mobility& mob, const SolverConfig& cfg,
                        const DatumSpec& d) {
  if (std::fabs(d.amp) > 0.5)
    throw config_error("perturbation amplitude above 0.5");
  if (d.wavenumber < 1) throw config_error("wavenumber must be positive");
  double theta = d.theta;
  if (theta < 0.0) theta = theta_for_mass(mob, cfg.R, cfg.m);
  if (theta == 0.0)
    throw config_error(
        "perturbation family needs a bounded shape; give a positive theta");
  int nr = std::max(4097, 4 * cfg.N + 1);
  std::vector<double> r(nr), f(nr);
  for (int i = 0; i < nr; ++i) {
    r[i] = -cfg.R + 2.0 * cfg.R * double(i) / double(nr - 1);
    f[i] = steady_density(mob, theta, r[i]) *
           (1.0 + d.amp * std::cos(d.wavenumber * M_PI * r[i] / cfg.R));
  }
  return datum_from_density_samples(r, f, cfg.m, cfg.R, cfg.gamma, cfg.N);
}

Profile table_datum(const SolverConfig& cfg, const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw config_error("cannot open density table " + file.string());
  std::vector<double> r, f;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || (lineno == 1 && line.rfind("r,", 0) == 0)) continue;
    std::istringstream ls(line);
    std::string a, b;
    if (!std::getline(ls, a, ',') || !std::getline(ls, b))
      throw config_error("density table line " + std::to_string(lineno) +
                         ": expected r,f");
    r.push_back(parse_double(a, "table r"));
    f.push_back(parse_double(b, "table f"));
  }
  if (r.size() < 3) throw config_error("density table too short");
  for (size_t i = 0; i < r.size(); ++i) {
    if (!std::isfinite(r[i]) || !std::isfinite(f[i]) || f[i] < 0.0)
      throw config_error("density table has a bad row");
    if (i && !(r[i] > r[i - 1]))
      throw config_error("density table r values must increase");
  }
  double tol = 1e-9 * std::max(1.0, cfg.R);
  if (std::fabs(r.front() + cfg.R) > tol || std::fabs(r.back() - cfg.R) > tol)
    throw config_error("density table must span [-radius, radius]");
  return datum_from_density_samples(r, f, cfg.m, cfg.R, cfg.gamma, cfg.N);
}

std::string describe(const SweepRow& row) {
  std::ostringstream os;
  os << row.name << ": "
     << (row.ok ? (row.condensed ? "condensed" : "no condensate")
                : "failed");
  return os.str();
}

} // namespace

Profile resolve_datum(const Scenario& s) {
  const SolverConfig& cfg = s.config;
  Mobility mob = Mobility::bosonic(cfg.gamma);
  Profile p;
  switch (s.datum.kind) {
  case datum_kind::equilibrium:
    p = equilibrium_shape_datum(mob, cfg, s.datum.theta);
    break;
  case datum_kind::perturbed:
    p = perturbed_datum(mob, cfg, s.datum);
    break;
  case datum_kind::table:
    p = table_datum(cfg, s.datum.table);
    break;
  case datum_kind::gaussian:
    throw config_error("gaussian datum only exists in whole-line mode");
  }
  if (s.datum.lambda != 1.0) {
    if (!(s.datum.lambda > 0.0) || s.datum.lambda > 1.0)
      throw config_error("lambda must lie in (0, 1]");
    for (size_t i = 1; i + 1 < p.u.size(); ++i) p.u[i] *= s.datum.lambda;
  }
  return p;
}

ScenarioRun run_scenario(const Scenario& s) {
  ScenarioRun out;
  if (s.config.mode == solver_mode::whole_line) {
    if (s.datum.kind != datum_kind::gaussian)
      throw config_error("datum: whole-line runs take the gaussian datum");
    WholeLineData data = gaussian_whole_line(s.config.m, s.datum.width);
    auto report = stage("admissibility", [&] {
      auto rep = whole_line_admissibility(data, s.config);
      if (!rep.pass) {
        std::string msg = "datum not admissible:";
        for (const auto& w : rep.failures) msg += " [" + w + "]";
        throw config_error(msg);
      }
      return rep;
    });
    (void)report;
    auto ladder =
        stage("simulate", [&] { return whole_line_simulate(s.config, data); });
    out.trajectory = ladder.runs.back();
    out.ladder_radii = ladder.radii;
    out.ladder_diffs = ladder.diffs;
    out.ladder_converged = ladder.converged;
  } else {
    Profile u0 = stage("datum", [&] { return resolve_datum(s); });
    stage("admissibility", [&] {
      auto rep = admissibility_check(u0, s.config);
      if (!rep.pass) {
        std::string msg = "datum not admissible:";
        for (const auto& w : rep.failures) msg += " [" + w + "]";
        throw config_error(msg);
      }
      return 0;
    });
    out.trajectory =
        stage("simulate", [&] { return simulate(s.config, u0); });
  }
  if (s.with_diagnostics)
    out.records =
        stage("diagnostics", [&] { return diagnose(out.trajectory); });
  if (!s.out.empty())
    stage("persist", [&] {
      save_trajectory(out.trajectory, out.records, s.out);
      return 0;
    });
  return out;
}

namespace {

const std::set<std::string> kConfigKeys = {
    "gamma",      "radius",          "mass",
    "nodes",      "sigma",           "dt",
    "adaptive_dt", "t_end",          "snapshot_dt",
    "newton_tol", "newton_max_iter", "barrier_tol",
    "allow_zero_level_flat", "mode", "r_ladder",
    "r_ladder_tol"};

const std::set<std::string> kScenarioKeys = {
    "name", "datum", "theta", "amp", "wavenumber",
    "table", "width", "lambda", "diagnostics"};

const std::set<std::string> kSweepKeys = {
    "gamma_list", "mass_ratio_list", "mass_list", "lambda_list"};

void reject_unknown(const KeyValues& kv, const std::set<std::string>& extra) {
  for (const auto& [key, val] : kv) {
    (void)val;
    if (!kConfigKeys.count(key) && !kScenarioKeys.count(key) &&
        !extra.count(key))
      throw config_error("unknown key '" + key + "'");
  }
}

DatumSpec datum_from_key_values(const KeyValues& kv) {
  DatumSpec d;
  auto get = [&](const char* key) -> const std::string* {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  if (auto* v = get("datum")) {
    if (*v == "equilibrium")
      d.kind = datum_kind::equilibrium;
    else if (*v == "perturbed")
      d.kind = datum_kind::perturbed;
    else if (*v == "table")
      d.kind = datum_kind::table;
    else if (*v == "gaussian")
      d.kind = datum_kind::gaussian;
    else
      throw config_error("unknown datum '" + *v + "'");
  }
  if (auto* v = get("theta"))
    d.theta = *v == "auto" ? -1.0 : parse_double(*v, "theta");
  if (auto* v = get("amp")) d.amp = parse_double(*v, "amp");
  if (auto* v = get("wavenumber"))
    d.wavenumber = int(parse_long(*v, "wavenumber"));
  if (auto* v = get("table")) d.table = *v;
  if (auto* v = get("width")) d.width = parse_double(*v, "width");
  if (auto* v = get("lambda")) d.lambda = parse_double(*v, "lambda");
  return d;
}

} // namespace

Scenario scenario_from_key_values(const KeyValues& kv) {
  reject_unknown(kv, {});
  Scenario s;
  s.config = config_from_key_values(kv);
  s.datum = datum_from_key_values(kv);
  if (auto it = kv.find("name"); it != kv.end()) s.name = it->second;
  if (auto it = kv.find("diagnostics"); it != kv.end())
    s.with_diagnostics = parse_bool(it->second, "diagnostics");
  if (s.name.empty() || s.name.find('/') != std::string::npos)
    throw config_error("scenario name must be a nonempty path component");
  return s;
}

std::vector<Scenario> sweep_cells_from_key_values(const KeyValues& kv) {
  reject_unknown(kv, kSweepKeys);
  if (kv.count("mass") || kv.count("gamma"))
    throw config_error("sweeps take gamma_list and mass lists, not scalars");
  auto it_g = kv.find("gamma_list");
  if (it_g == kv.end()) throw config_error("sweep needs gamma_list");
  std::vector<double> gammas = parse_double_list(it_g->second, "gamma_list");

  std::vector<double> ratios, masses, lambdas = {1.0};
  if (auto it = kv.find("mass_ratio_list"); it != kv.end())
    ratios = parse_double_list(it->second, "mass_ratio_list");
  if (auto it = kv.find("mass_list"); it != kv.end())
    masses = parse_double_list(it->second, "mass_list");
  if (ratios.empty() == masses.empty())
    throw config_error("sweep needs exactly one of mass_ratio_list/mass_list");
  if (auto it = kv.find("lambda_list"); it != kv.end())
    lambdas = parse_double_list(it->second, "lambda_list");

  KeyValues shared = kv;
  for (const auto& key : kSweepKeys) shared.erase(key);
  SolverConfig base = config_from_key_values(shared);
  DatumSpec datum = datum_from_key_values(shared);
  if (!shared.count("theta")) datum.theta = 0.25;
  bool diag = true;
  if (auto it = shared.find("diagnostics"); it != shared.end())
    diag = parse_bool(it->second, "diagnostics");

  char buf[64];
  std::vector<Scenario> cells;
  for (double g : gammas) {
    Mobility mob = Mobility::bosonic(g);
    double mc = 0.0;
    if (!ratios.empty()) {
      auto rep = critical_mass(mob, base.R);
      if (!rep.finite)
        throw config_error("mass_ratio_list needs a finite critical mass; "
                           "gamma must exceed 2");
      mc = rep.value;
    }
    const auto& mlist = ratios.empty() ? masses : ratios;
    for (double mv : mlist) {
      for (double lam : lambdas) {
        Scenario s;
        s.config = base;
        s.config.gamma = g;
        s.config.m = ratios.empty() ? mv : mv * mc;
        s.datum = datum;
        s.datum.lambda = lam;
        s.with_diagnostics = diag;
        std::snprintf(buf, sizeof buf, "g%g-%s%g", g,
                      ratios.empty() ? "m" : "mr", mv);
        s.name = buf;
        if (lambdas.size() > 1 || lam != 1.0) {
          std::snprintf(buf, sizeof buf, "-lam%g", lam);
          s.name += buf;
        }
        cells.push_back(std::move(s));
      }
    }
  }
  return cells;
}

std::vector<SweepRow> sweep(const std::vector<Scenario>& cells, int jobs,
                            const fs::path& out_dir) {
  std::set<std::string> names;
  for (const auto& c : cells)
    if (!names.insert(c.name).second)
      throw config_error("duplicate scenario name '" + c.name + "'");
  fs::create_directories(out_dir);

  // ratios reported in the summary; computed once per (gamma, radius)
  std::map<std::pair<double, double>, double> mc_cache;
  for (const auto& c : cells) {
    auto key = std::make_pair(c.config.gamma, c.config.R);
    if (!mc_cache.count(key)) {
      auto rep = critical_mass(Mobility::bosonic(c.config.gamma), c.config.R);
      mc_cache[key] = rep.finite ? rep.value : 0.0;
    }
  }

  std::vector<SweepRow> rows(cells.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      Scenario s = cells[i];
      s.out = out_dir / s.name;
      SweepRow& row = rows[i];
      row.name = s.name;
      row.gamma = s.config.gamma;
      row.mass = s.config.m;
      row.lambda = s.datum.lambda;
      double mc = mc_cache[{s.config.gamma, s.config.R}];
      row.mass_ratio = mc > 0.0 ? s.config.m / mc : 0.0;
      try {
        ScenarioRun run = run_scenario(s);
        auto d = decompose(run.trajectory.snapshots.back());
        row.x_p_end = d.x_p;
        row.condensed =
            d.x_p > s.config.m / double(std::max(2, s.config.N) - 1);
        row.ok = true;
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
  };
  int nw = std::max(1, jobs);
  if (nw == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < nw; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::string summary = "name,gamma,mass,mass_ratio,lambda,ok,condensed,"
                        "x_p_end,error\n";
  std::string map = "gamma,mass_ratio,condensed\n";
  for (const auto& row : rows) {
    summary += row.name + "," + canonical(row.gamma) + "," +
               canonical(row.mass) + "," + canonical(row.mass_ratio) + "," +
               canonical(row.lambda) + "," + (row.ok ? "1" : "0") + "," +
               (row.condensed ? "1" : "0") + "," + canonical(row.x_p_end) +
               ",\"" + row.error + "\"\n";
    if (row.ok && row.mass_ratio > 0.0)
      map += canonical(row.gamma) + "," + canonical(row.mass_ratio) + "," +
             (row.condensed ? "1" : "0") + "\n";
  }
  std::ofstream(out_dir / "summary.csv") << summary;
  std::ofstream(out_dir / "condensation_map.csv") << map;
  (void)describe;
  return rows;
}

namespace {

double override_tol(const KeyValues& kv, const char* key, double dflt) {
  auto it = kv.find(key);
  return it == kv.end() ? dflt : parse_double(it->second, key);
}

} // namespace

std::vector<CheckResult> verify_trajectory(const fs::path& dir,
                                           const KeyValues& tol_overrides) {
  static const std::set<std::string> known = {
      "tol_h_abs", "tol_identity_rel", "tol_identity_abs", "tol_l2_cap"};
  for (const auto& [key, val] : tol_overrides) {
    (void)val;
    if (!known.count(key))
      throw config_error("unknown tolerance key '" + key + "'");
  }
  double tol_h_abs = override_tol(tol_overrides, "tol_h_abs", 0.0);
  double tol_id_rel = override_tol(tol_overrides, "tol_identity_rel", 5e-2);
  double tol_id_abs = override_tol(tol_overrides, "tol_identity_abs", 1e-8);
  double tol_l2 = override_tol(tol_overrides, "tol_l2_cap", 1e-8);

  Trajectory tr = load_trajectory(dir);
  auto recs = load_trajectory_diagnostics(dir);
  std::vector<CheckResult> out;
  std::ostringstream os;

  {
    CheckResult c{"snapshots-consistent", true, ""};
    if (recs.size() != tr.snapshots.size()) {
      c.pass = false;
      c.detail = "snapshot/record count mismatch";
    }
    for (size_t k = 0; c.pass && k < tr.snapshots.size(); ++k) {
      const Profile& p = tr.snapshots[k];
      if (std::fabs(p.gamma - tr.config.gamma) > 1e-12 ||
          std::fabs(p.m - tr.config.m) > 1e-9 * std::max(1.0, tr.config.m) ||
          std::fabs(p.R - tr.config.R) > 1e-12) {
        c.pass = false;
        c.detail = "snapshot " + std::to_string(k) + " disagrees with config";
      } else if (k && !(p.t > tr.snapshots[k - 1].t)) {
        c.pass = false;
        c.detail = "snapshot times not increasing at index " +
                   std::to_string(k);
      } else if (std::fabs(recs[k].t - p.t) > 1e-12 * std::max(1.0, p.t)) {
        c.pass = false;
        c.detail = "record time disagrees at index " + std::to_string(k);
      }
    }
    if (c.pass)
      c.detail = std::to_string(tr.snapshots.size()) + " snapshots";
    out.push_back(c);
  }

  {
    CheckResult c{"h-monotone", true, ""};
    double allow = 1e-10 * std::fabs(recs.front().H) + tol_h_abs;
    for (size_t k = 1; k < recs.size(); ++k) {
      if (recs[k].H > recs[k - 1].H + allow) {
        c.pass = false;
        os.str("");
        os << "H rises by " << canonical(recs[k].H - recs[k - 1].H)
           << " at t = " << canonical(recs[k].t);
        c.detail = os.str();
        break;
      }
    }
    if (c.pass) c.detail = "nonincreasing within " + canonical(allow);
    out.push_back(c);
  }

  {
    CheckResult c{"entropy-identity", true, ""};
    double dH = recs.front().H - recs.back().H;
    double worst = 0.0, t_at = 0.0;
    for (const auto& r : recs)
      if (r.entropy_identity_defect > worst) {
        worst = r.entropy_identity_defect;
        t_at = r.t;
      }
    double bound = std::max(tol_id_rel * std::fabs(dH), tol_id_abs);
    c.pass = worst <= bound;
    os.str("");
    os << "max defect " << canonical(worst) << " at t = " << canonical(t_at)
       << ", bound " << canonical(bound);
    c.detail = os.str();
    out.push_back(c);
  }

  {
    CheckResult c{"l2-cap", true, ""};
    double cap = std::max(tr.config.m, recs.front().l2_sq) + tol_l2;
    for (const auto& r : recs)
      if (r.l2_sq > cap) {
        c.pass = false;
        os.str("");
        os << "l2_sq " << canonical(r.l2_sq) << " above cap " << canonical(cap)
           << " at t = " << canonical(r.t);
        c.detail = os.str();
        break;
      }
    if (c.pass) c.detail = "all snapshots below " + canonical(cap);
    out.push_back(c);
  }

  {
    CheckResult c{"xp-bracket", true, ""};
    for (const auto& r : recs) {
      bool ok = 0.0 <= r.x_p_lo && r.x_p_lo <= r.x_p + 1e-12 &&
                r.x_p <= r.x_p_hi + 1e-12 &&
                r.x_p_hi <= tr.config.m + 1e-12;
      if (!ok) {
        c.pass = false;
        os.str("");
        os << "bracket violated at t = " << canonical(r.t);
        c.detail = os.str();
        break;
      }
    }
    if (c.pass) c.detail = "bracket ordered on all snapshots";
    out.push_back(c);
  }
  return out;
}

std::string checks_to_json(const std::vector<CheckResult>& checks) {
  json arr = json::array();
  bool all = true;
  for (const auto& c : checks) {
    arr.push_back({{"id", c.id}, {"pass", c.pass}, {"detail", c.detail}});
    all = all && c.pass;
  }
  json j{{"pass", all}, {"checks", arr}};
  return j.dump(2) + "\n";
}

} // namespace bfp
