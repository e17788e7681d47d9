// kinklab: command-line front end.
//
// Exit status: 0 success, 1 numerical or assertion failure, 2 usage or
// configuration error. Every numerical option can also come from a
// key = value config file (--config); flags given on the command line win.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kinklab/acceptance.hpp"
#include "kinklab/config.hpp"
#include "kinklab/error.hpp"
#include "kinklab/evolution.hpp"
#include "kinklab/forge.hpp"
#include "kinklab/io.hpp"
#include "kinklab/modulation.hpp"
#include "kinklab/potential.hpp"
#include "kinklab/toda.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace kinklab;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

// Command-line values destined for config keys; only those actually given
// override the config file.
struct Overrides {
  std::string config_path;
  std::map<std::string, std::string> storage;

  void bind(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    auto* opt = app->add_option(flag, storage[key], help);
    options.emplace_back(opt, key);
  }
  ExperimentConfig resolve() {
    ExperimentConfig c = config_path.empty() ? ExperimentConfig{} : ExperimentConfig::load(config_path);
    for (auto& [opt, key] : options) {
      if (opt->count() > 0) c.set(key, storage[key]);
    }
    return c;
  }
  std::vector<std::pair<CLI::Option*, std::string>> options;
};

void add_config_option(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config_path, "key = value experiment file")->check(CLI::ExistingFile);
}

fs::path output_dir(const ExperimentConfig& c, const std::string& fallback) {
  return fs::path(c.text("output", fallback));
}

void write_json(const fs::path& path, const json& j) { write_file_atomic(path, j.dump(2) + "\n"); }

// Manifest of a run: the resolved config and the files written. No clock
// values, so identical configs give identical bytes.
void write_manifest(const fs::path& dir, const std::string& command, const ExperimentConfig& c,
                    const std::vector<std::string>& files) {
  json j;
  j["command"] = command;
  j["config"] = c.serialize();
  j["files"] = files;
  write_json(dir / "manifest.json", j);
}

std::string joined(const std::vector<double>& v, const char* sep = " ") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + format_number(v[i] + 0.0);
  return s;
}

// --- profile ---------------------------------------------------------------

int cmd_profile(const ExperimentConfig& c) {
  const auto potential = potential_from_config(c);
  const auto profile = compute_kink_profile(potential);
  // compute_kink_profile already rejects disagreeing mass quadratures.
  const fs::path dir = output_dir(c, "profile_out");
  CsvTable t{{"x", "H", "H_x"}, {}};
  for (std::size_t i = 0; i < profile.grid.size; ++i) {
    t.rows.push_back({profile.grid.x(i), profile.h[i], profile.dh[i]});
  }
  write_csv(dir / "profile.csv", t);
  json j;
  j["potential"] = potential.name();
  j["kappa"] = profile.kappa;
  j["mass"] = profile.mass;
  j["bogomolny_residual"] = profile.bogomolny_residual;
  write_json(dir / "constants.json", j);
  write_manifest(dir, "profile", c, {"profile.csv", "constants.json"});
  std::cout << j.dump(2) << "\n";
  return kOk;
}

// --- evolve ----------------------------------------------------------------

int cmd_evolve(ExperimentConfig c, const std::string& checkpoint, bool backward) {
  const auto potential = potential_from_config(c);
  const auto profile = compute_kink_profile(potential);
  const double dx = c.real("dx", 0.02);

  FieldSnapshot initial;
  std::optional<Positions> seed;
  double t_start = c.real("t_start", 0.0);
  if (!checkpoint.empty()) {
    const auto cp = read_checkpoint(checkpoint);
    initial = cp.snapshot;
    t_start = c.has("t_start") ? t_start : cp.t;
  } else if (c.has("positions")) {
    const Positions a = positions_from_config(c);
    const double span = std::abs(c.real("t_end", t_start + 10.0) - t_start);
    initial = multikink_configuration(profile, a, evolution_grid(a, span, dx));
    seed = a;
  } else {
    throw KinkError(ErrorCode::ConfigError, "evolve needs --multikink or --checkpoint");
  }

  EvolutionConfig cfg;
  cfg.dt = c.real("dt", cfg.dt);
  cfg.t_start = t_start;
  cfg.t_end = c.real("t_end", t_start + 10.0);
  if (backward) cfg.t_end = t_start - std::abs(cfg.t_end - t_start);
  cfg.snapshot_stride = static_cast<std::size_t>(c.integer("stride", 10));
  cfg.store_snapshots = false;

  const bool track = c.flag("track");
  std::optional<ModulationTracker> tracker;
  if (track) {
    if (!seed) {
      const auto z = zero_crossings(initial);
      if (z.empty()) throw KinkError(ErrorCode::NoSeed, "no kink to track in the checkpoint");
      seed = Positions(z);
    }
    tracker.emplace(profile, potential, *seed);
  }
  FieldSnapshot last = initial;
  double t_last = t_start;
  const auto traj = evolve(initial, potential, cfg, [&](double t, const FieldSnapshot& s) {
    last = s;
    t_last = t;
    if (tracker) tracker->observe(t, s);
    return true;
  });

  const fs::path dir = output_dir(c, "evolve_out");
  std::vector<std::string> files = {"energies.csv", "final.csv", "final.json", "final.klck"};
  write_csv(dir / "energies.csv", energy_table(traj));
  write_snapshot(dir / "final", last, t_last);
  write_checkpoint(dir / "final.klck", last, t_last);
  if (tracker) {
    write_csv(dir / "modulation.csv", modulation_table(tracker->series()));
    files.push_back("modulation.csv");
  }
  write_manifest(dir, "evolve", c, files);

  double drift = 0.0;
  for (const auto& e : traj.energies) {
    drift = std::max(drift, std::abs(e.total - traj.energies.front().total));
  }
  std::cout << "t " << format_number(t_start) << " -> " << format_number(t_last) << "\n";
  std::cout << "energy drift " << format_number(drift) << "\n";
  std::cout << "zero crossings at end: " << joined(zero_crossings(last)) << "\n";
  if (tracker && tracker->series().lost) {
    std::cerr << "TrackingLost: " << tracker->series().lost_reason << "\n";
    return kFailure;
  }
  return kOk;
}

// --- construct -------------------------------------------------------------

int cmd_construct(const ExperimentConfig& c) {
  if (!c.has("positions")) throw KinkError(ErrorCode::ConfigError, "construct needs --positions");
  const Positions target = positions_from_config(c);
  const double L = c.real("L", target.size() > 1 ? target.min_gap() : 12.0);
  const double T = c.real("T", 40.0);
  const double L0 = c.real("L0", kDefaultL0);
  if (target.size() > 1 && target.min_gap() < L - 1e-12) {
    throw KinkError(ErrorCode::ConfigError, "positions are closer than L");
  }
  try {
    ShootSpec::with_defaults(target.gaps(), L, T, L0).validate();
  } catch (const KinkError& e) {
    throw KinkError(ErrorCode::ConfigError, e.what());
  }
  ShotNumerics numerics;
  numerics.dx = c.real("dx", numerics.dx);
  numerics.dt = c.real("dt", numerics.dt);
  numerics.stride = static_cast<std::size_t>(c.integer("stride", 10));

  const auto profile = compute_kink_profile(potential_from_config(c));
  const auto built = construct_cluster(target, L, T, profile, L0, numerics);
  const auto& cert = built.certificate;

  const fs::path dir = output_dir(c, "construct_out");
  write_snapshot(dir / "initial", built.initial, 0.0);
  write_checkpoint(dir / "initial.klck", built.initial, 0.0);
  write_csv(dir / "forward_modulation.csv", modulation_table(cert.forward));
  CsvTable delta{{"t", "delta_hat", "scaled"}, {}};
  for (const auto& d : cert.forward_delta) delta.rows.push_back({d.t, d.delta_hat, d.scaled});
  write_csv(dir / "delta.csv", delta);

  json j;
  j["passed"] = cert.passed();
  j["target"] = target.values();
  j["L"] = L;
  j["T"] = T;
  j["L0"] = L0;
  j["gaps_at_T"] = cert.search.gaps_T;
  j["search_method"] = cert.search.method;
  j["shots"] = cert.search.shots;
  j["fitted_positions_at_zero"] = cert.fit0.a.values();
  j["g0_energy"] = cert.g0_energy;
  j["g0_energy_over_exp_minus_L"] = cert.g0_energy / std::exp(-L);
  j["sup_scaled_delta"] = cert.sup_scaled_delta;
  j["reversibility_error"] = cert.reversibility_error;
  for (const auto& check : cert.checks) {
    j["checks"].push_back({{"name", check.name}, {"value", check.value}, {"bound", check.bound},
                           {"pass", check.pass}});
  }
  write_json(dir / "certificate.json", j);
  write_manifest(dir, "construct", c,
                 {"initial.csv", "initial.json", "initial.klck", "forward_modulation.csv",
                  "delta.csv", "certificate.json"});

  std::cout << "gaps at T: " << joined(cert.search.gaps_T) << " (" << cert.search.method << ", "
            << cert.search.shots << " shots)\n";
  int status = kOk;
  for (const auto& check : cert.checks) {
    std::cout << (check.pass ? "  ok   " : "  FAIL ") << check.name << " " << format_number(check.value)
              << "\n";
    if (!check.pass) {
      std::cerr << "certificate invariant failed: " << check.name << "\n";
      status = kFailure;
    }
  }
  return status;
}

// --- verify-asymptotics ----------------------------------------------------

struct Series {
  std::vector<double> t;
  std::vector<std::vector<double>> a, p;
};

// Reads t, a_1..a_n, p_1..p_n from a modulation or Toda CSV.
Series read_series(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw KinkError(ErrorCode::IoError, "cannot read " + path.string());
  std::string line;
  std::getline(in, line);
  std::vector<std::string> header;
  {
    std::istringstream h(line);
    std::string col;
    while (std::getline(h, col, ',')) header.push_back(col);
  }
  std::vector<std::size_t> ia, ip;
  std::optional<std::size_t> it;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "t") it = i;
    if (header[i].rfind("a_", 0) == 0) ia.push_back(i);
    if (header[i].rfind("p_", 0) == 0) ip.push_back(i);
  }
  if (!it || ia.size() < 2 || ia.size() != ip.size()) {
    throw KinkError(ErrorCode::IoError, path.string() + " lacks t, a_k and p_k columns");
  }
  Series s;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream r(line);
    std::string cell;
    while (std::getline(r, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != header.size()) throw KinkError(ErrorCode::IoError, "ragged row in " + path.string());
    s.t.push_back(row[*it]);
    std::vector<double> a, p;
    for (auto i : ia) a.push_back(row[i]);
    for (auto i : ip) p.push_back(row[i]);
    s.a.push_back(std::move(a));
    s.p.push_back(std::move(p));
  }
  return s;
}

int cmd_verify(const ExperimentConfig& c, const std::string& series_path) {
  const auto profile = compute_kink_profile(potential_from_config(c));
  const Series s = read_series(series_path);
  const std::size_t n = s.a.front().size();
  const auto tc = toda_constants(profile, n);
  const double offset = c.real("time_offset", 0.0);
  const auto window = c.has("window") ? c.reals("window") : std::vector<double>{-INFINITY, INFINITY};

  CsvTable table{{"t", "gap_residual", "velocity_residual", "tq_residual"}, {}};
  for (std::size_t i = 0; i < s.t.size(); ++i) {
    const double t = s.t[i] + offset;
    if (t < window[0] || t > window[1] || t <= 0.0) continue;
    const auto law = asymptotic_law(tc, t);
    double gap = 0.0, vel = 0.0, tq = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      gap = std::max(gap, std::abs(s.a[i][k + 1] - s.a[i][k] - law.gaps[k]));
      tq = std::max(tq, std::abs(t * (s.p[i][k + 1] - s.p[i][k]) / tc.mass - 2.0));
    }
    for (std::size_t k = 0; k < n; ++k) {
      vel = std::max(vel, std::abs(t * s.p[i][k] / tc.mass - t * law.velocities[k]));
    }
    table.rows.push_back({t, gap, vel, tq});
  }
  if (table.rows.size() < 2) throw KinkError(ErrorCode::ConfigError, "fewer than two samples in the window");

  const fs::path dir = output_dir(c, "verify_out");
  write_csv(dir / "residuals.csv", table);
  write_manifest(dir, "verify-asymptotics", c, {"residuals.csv"});

  // Residuals that are already at roundoff count as not growing.
  constexpr double kFloor = 1e-9;
  const auto& first = table.rows.front();
  const auto& last = table.rows.back();
  bool ok = true;
  for (std::size_t col = 1; col < 4; ++col) {
    const bool shrinks = last[col] <= std::max(first[col], kFloor);
    std::cout << table.header[col] << ": " << format_number(first[col]) << " at t = "
              << format_number(first[0]) << ", " << format_number(last[col]) << " at t = "
              << format_number(last[0]) << (shrinks ? "" : "  (grows)") << "\n";
    ok &= shrinks;
  }
  if (!ok) std::cerr << "residuals grow over the window\n";
  return ok ? kOk : kFailure;
}

// --- toda ------------------------------------------------------------------

int cmd_toda_zcr(const ExperimentConfig& c) {
  const auto tc = toda_constants(compute_kink_profile(potential_from_config(c)),
                                 static_cast<std::size_t>(c.integer("n")));
  std::cout << joined(critical_profile_zcr(tc)) << "\n";
  return kOk;
}

int cmd_toda_parabolic(const ExperimentConfig& c, double t) {
  const auto tc = toda_constants(compute_kink_profile(potential_from_config(c)),
                                 static_cast<std::size_t>(c.integer("n")));
  const auto table = toda_table({parabolic_solution(tc, t)}, tc);
  std::cout << table.render();
  if (c.has("output")) write_csv(output_dir(c, "") / "parabolic.csv", table);
  return kOk;
}

int cmd_toda_integrate(const ExperimentConfig& c, const std::string& method, double perturbation,
                       double sample_dt) {
  const auto tc = toda_constants(compute_kink_profile(potential_from_config(c)),
                                 static_cast<std::size_t>(c.integer("n")));
  const double t0 = c.real("t_start", 10.0), t1 = c.real("t_end", 100.0);
  TodaState initial = parabolic_solution(tc, t0);
  if (perturbation != 0.0 && tc.n >= 2) {
    // Relative gap perturbation, reproducible from the seed.
    std::mt19937_64 rng(static_cast<std::uint64_t>(c.integer("seed", 1)));
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto gaps = initial.gaps();
    for (double& y : gaps) y += perturbation * u(rng);
    initial.a = Positions::from_gaps(gaps, initial.a.mean());
  }
  TodaOptions options;
  options.tol = c.real("tol", options.tol);
  options.sample_dt = sample_dt;
  if (method == "leapfrog") {
    options.method = TodaMethod::Leapfrog;
    options.leapfrog_step = c.real("dt", options.leapfrog_step);
  } else if (method != "dopri5") {
    throw KinkError(ErrorCode::ConfigError, "method must be dopri5 or leapfrog");
  }
  const auto states = integrate(initial, tc, t1, options);
  const fs::path dir = output_dir(c, "toda_out");
  write_csv(dir / "toda.csv", toda_table(states, tc));
  write_manifest(dir, "toda integrate", c, {"toda.csv"});
  double drift = 0.0;
  for (const auto& s : states) drift = std::max(drift, std::abs(hamiltonian(s, tc) - hamiltonian(initial, tc)));
  std::cout << states.size() << " states, Hamiltonian drift " << format_number(drift) << "\n";
  return kOk;
}

int cmd_toda_cluster(const ExperimentConfig& c, double perturbation, double sample_dt) {
  const auto tc = toda_constants(compute_kink_profile(potential_from_config(c)),
                                 static_cast<std::size_t>(c.integer("n")));
  if (tc.n < 2) throw KinkError(ErrorCode::ConfigError, "a cluster needs n >= 2");
  const double t0 = c.real("t_start", 100.0), t1 = c.real("t_end", 10000.0);
  std::mt19937_64 rng(static_cast<std::uint64_t>(c.integer("seed", 1)));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> dz(tc.n - 1);
  for (double& v : dz) v = perturbation * u(rng);
  TodaOptions options;
  options.tol = c.real("tol", options.tol);
  const TodaState initial = cluster_state(tc, t1, dz, t0, options);
  options.sample_dt = sample_dt;
  const auto states = integrate(initial, tc, t1, options);
  const fs::path dir = output_dir(c, "toda_out");
  write_csv(dir / "toda.csv", toda_table(states, tc));
  write_manifest(dir, "toda cluster", c, {"toda.csv"});
  std::cout << states.size() << " states from t = " << format_number(t0) << " to "
            << format_number(t1) << "\n";
  return kOk;
}

// --- accept ----------------------------------------------------------------

int cmd_accept(const std::string& name, const std::string& config_path) {
  const std::vector<std::string> names =
      name == "all" ? criterion_names() : std::vector<std::string>{name};
  bool ok = true;
  for (const auto& n : names) {
    const ExperimentConfig config =
        config_path.empty() ? default_config(n) : ExperimentConfig::load(config_path);
    const auto report = run_criterion(n, config);
    std::cout << format_report(report) << std::flush;
    ok &= report.passed();
  }
  return ok ? kOk : kFailure;
}

int exit_code_for(const KinkError& e) {
  switch (e.code()) {
    case ErrorCode::ConfigError:
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidPotential:
      return kUsage;
    default:
      return kFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kinklab: kink clusters of scalar fields on the line"};
  app.require_subcommand(1);
  int status = kOk;
  std::function<int()> action;

  // profile
  Overrides prof;
  auto* profile = app.add_subcommand("profile", "kink profile and its constants");
  add_config_option(profile, prof);
  prof.bind(profile, "--potential", "potential", "phi4, sine-gordon or custom");
  prof.bind(profile, "--out", "output", "output directory");
  profile->callback([&] { action = [&] { return cmd_profile(prof.resolve()); }; });

  // evolve
  Overrides evo;
  std::string checkpoint;
  bool backward = false, track = false;
  auto* evolve_cmd = app.add_subcommand("evolve", "evolve a multi-kink ansatz or a checkpoint");
  add_config_option(evolve_cmd, evo);
  evo.bind(evolve_cmd, "--potential", "potential", "potential name");
  evo.bind(evolve_cmd, "--multikink", "positions", "kink centres, e.g. -6,6");
  evolve_cmd->add_option("--checkpoint", checkpoint, "binary checkpoint to start from")
      ->check(CLI::ExistingFile);
  evo.bind(evolve_cmd, "--dx", "dx", "grid spacing");
  evo.bind(evolve_cmd, "--dt", "dt", "time step");
  evo.bind(evolve_cmd, "--t-start", "t_start", "initial time");
  evo.bind(evolve_cmd, "--t-end", "t_end", "final time");
  evo.bind(evolve_cmd, "--stride", "stride", "steps between samples");
  evo.bind(evolve_cmd, "--out", "output", "output directory");
  evolve_cmd->add_flag("--backward", backward, "run backward in time");
  evolve_cmd->add_flag("--track", track, "write the modulation series");
  evolve_cmd->callback([&] {
    action = [&] {
      auto c = evo.resolve();
      if (track) c.set("track", "true");
      if (backward) c.set("backward", "true");
      return cmd_evolve(c, checkpoint, c.flag("backward"));
    };
  });

  // construct
  Overrides con;
  auto* construct = app.add_subcommand("construct", "build n-cluster initial data by backward shooting");
  add_config_option(construct, con);
  con.bind(construct, "--potential", "potential", "potential name");
  con.bind(construct, "--positions", "positions", "target positions at t = 0");
  con.bind(construct, "--L", "L", "minimal separation");
  con.bind(construct, "--L0", "L0", "admissibility floor for L");
  con.bind(construct, "--T", "T", "shooting time");
  con.bind(construct, "--dx", "dx", "grid spacing");
  con.bind(construct, "--dt", "dt", "time step");
  con.bind(construct, "--stride", "stride", "steps between tracked samples");
  con.bind(construct, "--out", "output", "output directory");
  construct->callback([&] { action = [&] { return cmd_construct(con.resolve()); }; });

  // verify-asymptotics
  Overrides ver;
  std::string series_path;
  auto* verify = app.add_subcommand("verify-asymptotics", "compare a tracked run with the asymptotic law");
  add_config_option(verify, ver);
  verify->add_option("--series", series_path, "modulation or Toda CSV")->required()->check(CLI::ExistingFile);
  ver.bind(verify, "--potential", "potential", "potential name");
  ver.bind(verify, "--time-offset", "time_offset", "added to the series times");
  ver.bind(verify, "--window", "window", "lo,hi of the compared times");
  ver.bind(verify, "--out", "output", "output directory");
  verify->callback([&] { action = [&] { return cmd_verify(ver.resolve(), series_path); }; });

  // toda
  auto* toda = app.add_subcommand("toda", "reduced n-body dynamics");
  toda->require_subcommand(1);
  Overrides tz, tp, ti;
  double t_parabolic = 10.0, perturbation = 0.0, sample_dt = 0.0;
  std::string method = "dopri5";
  auto* zcr = toda->add_subcommand("zcr", "critical profile z_cr");
  add_config_option(zcr, tz);
  tz.bind(zcr, "--n", "n", "number of kinks");
  tz.bind(zcr, "--potential", "potential", "potential name");
  zcr->callback([&] { action = [&] { return cmd_toda_zcr(tz.resolve()); }; });
  auto* parabolic = toda->add_subcommand("parabolic", "explicit parabolic solution");
  add_config_option(parabolic, tp);
  tp.bind(parabolic, "--n", "n", "number of kinks");
  tp.bind(parabolic, "--potential", "potential", "potential name");
  tp.bind(parabolic, "--out", "output", "also write parabolic.csv here");
  parabolic->add_option("--t", t_parabolic, "time");
  parabolic->callback([&] { action = [&] { return cmd_toda_parabolic(tp.resolve(), t_parabolic); }; });
  auto* integ = toda->add_subcommand("integrate", "integrate from the parabolic solution");
  add_config_option(integ, ti);
  ti.bind(integ, "--n", "n", "number of kinks");
  ti.bind(integ, "--potential", "potential", "potential name");
  ti.bind(integ, "--t-start", "t_start", "initial time");
  ti.bind(integ, "--t-end", "t_end", "final time (may be earlier)");
  ti.bind(integ, "--tol", "tol", "per-step tolerance");
  ti.bind(integ, "--dt", "dt", "leapfrog step");
  ti.bind(integ, "--seed", "seed", "perturbation seed");
  ti.bind(integ, "--out", "output", "output directory");
  integ->add_option("--method", method, "dopri5 or leapfrog");
  integ->add_option("--perturb", perturbation, "amplitude of a random gap perturbation");
  integ->add_option("--sample-dt", sample_dt, "output spacing (0: every step)");
  integ->callback([&] {
    action = [&] { return cmd_toda_integrate(ti.resolve(), method, perturbation, sample_dt); };
  });

  Overrides tc;
  auto* cluster = toda->add_subcommand(
      "cluster", "cluster trajectory through a shape-perturbed parabolic state at t_end");
  add_config_option(cluster, tc);
  tc.bind(cluster, "--n", "n", "number of kinks");
  tc.bind(cluster, "--potential", "potential", "potential name");
  tc.bind(cluster, "--t-start", "t_start", "first output time");
  tc.bind(cluster, "--t-end", "t_end", "time of the perturbed parabolic state");
  tc.bind(cluster, "--tol", "tol", "per-step tolerance");
  tc.bind(cluster, "--seed", "seed", "perturbation seed");
  tc.bind(cluster, "--out", "output", "output directory");
  cluster->add_option("--perturb", perturbation, "amplitude of the shape perturbation");
  cluster->add_option("--sample-dt", sample_dt, "output spacing (0: every step)");
  cluster->callback([&] { action = [&] { return cmd_toda_cluster(tc.resolve(), perturbation, sample_dt); }; });

  // accept
  std::string criterion, accept_config;
  auto* accept = app.add_subcommand("accept", "run an acceptance criterion");
  accept->add_option("name", criterion, "criterion name or 'all'")->required();
  accept->add_option("--config", accept_config, "config overriding the built-in one")
      ->check(CLI::ExistingFile);
  accept->callback([&] { action = [&] { return cmd_accept(criterion, accept_config); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  try {
    status = action();
  } catch (const KinkError& e) {
    std::cerr << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return status;
}
