#pragma once

// Experiment orchestration: run directories hold manifest.json, snapshots/
// (one KGPS file per recorded time), report.csv and report.json.

#include "nlkg/cli/initial_data.hpp"
#include "nlkg/diagnostics/scattering.hpp"
#include "nlkg/evolve/picard.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

namespace nlkg {

inline constexpr const char* kCodeVersion = "0.1.0";

enum class RunMode { simulate, picard };

enum class RunStatus { ok, blowup, noncontractive, horizon_refused, numeric_failure };

inline const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::ok: return "OK";
    case RunStatus::blowup: return "BLOWUP";
    case RunStatus::noncontractive: return "NONCONTRACTIVE";
    case RunStatus::horizon_refused: return "HORIZON_REFUSED";
    case RunStatus::numeric_failure: return "NUMERIC_FAILURE";
  }
  return "?";
}

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitHorizon = 2, kExitNumeric = 3 };

struct RunManifest {
  RunStatus status = RunStatus::ok;
  int exit_code = kExitOk;
  std::string message;
  std::string grid_hash;
  double wall_seconds = 0.0;
  std::size_t snapshots = 0;
  nlohmann::json json;
};

/// FNV-1a over the encoded domain header.
inline std::string grid_hash(const DomainSpec& spec) {
  std::ostringstream os;
  os << spec.d << ';' << spec.k;
  os << std::setprecision(17);
  for (int n : spec.nx) os << ";nx" << n;
  for (int n : spec.ny) os << ";ny" << n;
  for (double l : spec.box_lengths) os << ";L" << l;
  for (double l : spec.torus_lengths) os << ";l" << l;
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : os.str()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream hex;
  hex << std::hex << std::setw(16) << std::setfill('0') << h;
  return hex.str();
}

inline nlohmann::json verdict_json(const Verdict& v) {
  nlohmann::json j;
  j["applicable"] = v.applicable;
  j["route"] = to_string(v.route);
  j["failed_conditions"] = v.failed_conditions;
  auto range = [](const std::optional<PRange>& r) -> nlohmann::json {
    if (!r) return nullptr;
    return {{"lo", to_string(r->lo)}, {"hi", to_string(r->hi)}};
  };
  j["theorem_range"] = range(v.theorem_range);
  j["proposition_range"] = range(v.proposition_range);
  return j;
}

inline nlohmann::json config_json(const RunConfig& c) {
  nlohmann::json j;
  j["d"] = c.domain.d;
  j["k"] = c.domain.k;
  j["p"] = to_string(c.p_exact);
  j["sign"] = sign_name(c.evolve.sign);
  j["box_lengths"] = c.domain.box_lengths;
  j["torus_lengths"] = c.domain.torus_lengths;
  j["nx"] = c.domain.nx;
  j["ny"] = c.domain.ny;
  j["dt"] = c.evolve.dt;
  j["T"] = c.evolve.T;
  j["snapshot_stride"] = c.evolve.snapshot_stride;
  j["blowup_ceiling"] = c.evolve.blowup_ceiling;
  j["data_kind"] = to_string(c.data_kind);
  j["data_amplitude"] = c.data_amplitude;
  j["data_radius"] = c.data_radius;
  j["data_file"] = c.data_file;
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  j["tol"] = c.tol;
  j["max_iter"] = c.max_iter;
  j["unsafe_horizon"] = c.unsafe_horizon;
  j["gamma"] = c.gamma ? nlohmann::json(*c.gamma) : nlohmann::json(nullptr);
  return j;
}

inline std::string snapshot_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snap_%06zu.kgps", i);
  return buf;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << text;
  if (!os) throw std::runtime_error("write failed for " + path.string());
}

inline std::string report_csv(const ScatteringReport& r) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "t,energy,energy_norm,strichartz_partial,tail_norm,v_increment\n";
  for (std::size_t i = 0; i < r.times.size(); ++i)
    os << r.times[i] << ',' << r.energy[i] << ',' << r.energy_norm[i] << ',' << r.strichartz_partials[i] << ','
       << r.tail_norms[i] << ',' << r.v_increments[i] << '\n';
  return os.str();
}

inline nlohmann::json report_json(const Grid& g, const ScatteringReport& r) {
  nlohmann::json j;
  j["p"] = r.p;
  j["weighted"] = r.weighted;
  j["T"] = r.times.back();
  j["strichartz_norm"] = r.total_norm();
  j["scatter_state"] = {{"energy_norm", r.scatter_state_norm},
                        {"u_l2", l2_norm(g, r.scatter_state.u)},
                        {"v_l2", l2_norm(g, r.scatter_state.v)},
                        {"extrapolation", "V at the final recorded time"}};
  j["max_energy_drift"] = r.max_energy_drift;
  j["section_factor"] = r.section_factor;
  j["energy_inequality"] = {{"holds", r.energy_inequality_holds}, {"margin", r.energy_inequality_margin}};
  j["window_increments"] = r.window_increments;
  std::vector<double> starts;
  for (double t = 2.0; t <= r.times.back() / 2.0 + 1e-9; t *= 2.0) starts.push_back(t);
  if (starts.size() >= 2) {
    const auto c = decay_check(r, starts);
    j["decay"] = {{"starts", c.starts},
                  {"tails", c.tails},
                  {"factors", c.factors},
                  {"tails_halve", c.tails_ok},
                  {"worst_window_growth", c.worst_window_growth},
                  {"windows_monotone", c.windows_monotone}};
  }
  return j;
}

inline void write_reports(const std::filesystem::path& dir, const Grid& g, const ScatteringReport& r,
                          const nlohmann::json& extra = nlohmann::json::object()) {
  write_text(dir / "report.csv", report_csv(r));
  nlohmann::json j = report_json(g, r);
  for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
  write_text(dir / "report.json", j.dump(2) + "\n");
}

inline RunManifest run_experiment(const RunConfig& c, RunMode mode) {
  const auto start = std::chrono::steady_clock::now();
  namespace fs = std::filesystem;
  const fs::path dir(c.output_dir);
  RunManifest man;
  man.grid_hash = grid_hash(c.domain);
  man.json["mode"] = mode == RunMode::simulate ? "simulate" : "picard";
  man.json["config"] = config_json(c);
  man.json["code_version"] = kCodeVersion;
  man.json["seed"] = c.seed;
  man.json["grid_hash"] = man.grid_hash;
  man.json["verdicts"] = {{"thm1", verdict_json(c.verdicts.thm1)}, {"thm2", verdict_json(c.verdicts.thm2)}};
  man.json["warnings"] = c.warnings;

  auto finish = [&]() {
    man.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    man.json["status"] = to_string(man.status);
    man.json["message"] = man.message;
    man.json["wall_seconds"] = man.wall_seconds;
    man.json["snapshots"] = man.snapshots;
    man.json["exit_code"] = man.exit_code;
    fs::create_directories(dir);
    write_text(dir / "manifest.json", man.json.dump(2) + "\n");
    return man;
  };

  const Grid g = make_grid(c.domain);
  InitialData data = make_initial_data(g, c);
  try {
    check_horizon(c, data.support_radius);
  } catch (const HorizonError& e) {
    man.status = RunStatus::horizon_refused;
    man.exit_code = kExitHorizon;
    man.message = e.what();
    return finish();
  }
  man.json["support_radius"] = data.support_radius;
  man.json["horizon"] = validity_horizon(c.domain, data.support_radius);

  const fs::path snaps = dir / "snapshots";
  fs::create_directories(snaps);
  for (const auto& entry : fs::directory_iterator(snaps))
    if (entry.path().extension() == ".kgps") fs::remove(entry.path());

  ScatteringConfig scfg = scattering_config_for(c.evolve);
  scfg.gamma = c.gamma;
  try {
    if (mode == RunMode::simulate) {
      ScatteringAccumulator acc(g, scfg);
      auto observer = [&](const StepView& s) {
        acc.add(s);
        ComplexField v(s.v_hat.begin(), s.v_hat.end());
        to_physical_inplace(g, v);
        write_snapshot((snaps / snapshot_name(man.snapshots)).string(), c.domain,
                       FieldState{s.time, ComplexField(s.u.begin(), s.u.end()), std::move(v)});
        ++man.snapshots;
      };
      const EvolveResult res = evolve(g, data.state, c.evolve, observer, false);
      const ScatteringReport rep = acc.finish();
      if (res.status == EvolveStatus::blowup) {
        man.status = RunStatus::blowup;
        man.message = "||u||_inf exceeded the blow-up ceiling at t = " + std::to_string(res.stop_time);
      }
      const nlohmann::json extra = {{"max_spectral_tail", res.max_spectral_tail}, {"status", to_string(res.status)}};
      write_reports(dir, g, rep, extra);
      man.json["max_spectral_tail"] = res.max_spectral_tail;
      man.json["energy_drift"] = rep.max_energy_drift;
    } else {
      const PicardResult res = picard_solve(g, data.state, c.evolve, c.tol, c.max_iter);
      for (const auto& s : res.trajectory.snapshots)
        write_snapshot((snaps / snapshot_name(man.snapshots++)).string(), c.domain, s);
      const ScatteringReport rep = scattering_profile(g, res.trajectory, scfg);
      double max_ratio = 0.0;
      for (double r : res.ratios) max_ratio = std::max(max_ratio, r);
      nlohmann::json picard = {{"status", to_string(res.status)},
                               {"iterations", res.iterations},
                               {"differences", res.differences},
                               {"ratios", res.ratios},
                               {"max_ratio", max_ratio},
                               {"tol", res.tol},
                               {"quadrature_error", res.quadrature_error},
                               {"tol_exceeds_quadrature_error", res.tol > res.quadrature_error}};
      if (res.status == PicardStatus::converged)
        picard["fixed_point_residual"] = fixed_point_residual(g, data.state, res.trajectory, c.evolve);
      write_reports(dir, g, rep, {{"picard", picard}});
      man.json["picard"] = picard;
      if (res.status == PicardStatus::noncontractive) {
        man.status = RunStatus::noncontractive;
        man.message = "contraction ratios exceeded 1 for 3 consecutive iterations";
      } else if (res.status == PicardStatus::max_iter) {
        man.message = "max_iter reached before tol";
      }
    }
  } catch (const NumericFailure& e) {
    man.status = RunStatus::numeric_failure;
    man.exit_code = kExitNumeric;
    man.message = e.what();
  }
  return finish();
}

/// Recomputes the scattering report from a run directory's snapshots.
inline ScatteringReport scatter_report(const std::filesystem::path& run_dir, const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  std::ifstream is(run_dir / "manifest.json");
  if (!is) throw std::runtime_error("no manifest.json in " + run_dir.string());
  const nlohmann::json man = nlohmann::json::parse(is);
  const auto& cfg = man.at("config");
  ScatteringConfig scfg;
  scfg.p = to_double(parse_rational(cfg.at("p").get<std::string>()));
  scfg.sign = detail::as_sign(cfg.at("sign").get<std::string>());
  if (cfg.contains("gamma") && !cfg.at("gamma").is_null()) scfg.gamma = cfg.at("gamma").get<double>();

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(run_dir / "snapshots"))
    if (entry.path().extension() == ".kgps") files.push_back(entry.path());
  if (files.empty()) throw std::runtime_error("no snapshots in " + (run_dir / "snapshots").string());
  std::sort(files.begin(), files.end());

  const Snapshot first = read_snapshot(files.front().string());
  const Grid g = make_grid(first.spec);
  ScatteringAccumulator acc(g, scfg);
  for (const auto& f : files) {
    const Snapshot s = read_snapshot(f.string());
    if (!(s.spec == first.spec)) throw SnapshotError("snapshot grid changes within the run: " + f.string());
    const ModalState m = forward_transform(g, s.state);
    acc.add(s.state.time, s.state.u, m.u_hat, m.v_hat);
  }
  const ScatteringReport rep = acc.finish();
  fs::create_directories(out_dir);
  write_reports(out_dir, g, rep);
  return rep;
}

}  // namespace nlkg
