// nlkg: exponent calculator, simulation runner and report generator.

#include "nlkg/cli/run.hpp"
#include "nlkg/exponents/restriction_table.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

namespace {

using nlohmann::json;

json exponents_json(int d, int k, const nlkg::Rational& p, const std::optional<nlkg::Rational>& gamma) {
  json j;
  j["d"] = d;
  j["k"] = k;
  j["p"] = nlkg::to_string(p);
  if (d + k > 2) {
    const auto ce = nlkg::critical_exponents(d, k);
    j["p0"] = nlkg::to_string(ce.p0);
    j["pc"] = nlkg::to_string(ce.pc);
    j["p_sob"] = nlkg::to_string(ce.p_sob);
  }
  if (d >= 3) j["thm2_cap"] = nlkg::to_string(nlkg::euclidean_embedding_cap(d));
  if (nlkg::Rational(d) * p > 4) {
    const auto e = nlkg::derived_profile(d, k, p);
    j["profile"] = {{"q", nlkg::to_string(e.q)},         {"r", nlkg::to_string(e.r)},
                    {"s", nlkg::to_string(e.s)},         {"gamma", nlkg::to_string(e.gamma)},
                    {"rho", nlkg::to_string(e.rho)},     {"r_star", nlkg::to_string(e.r_star)}};
  }
  const auto v = nlkg::theorem_applicability(d, k, p, gamma);
  j["thm1"] = nlkg::verdict_json(v.thm1);
  j["thm2"] = nlkg::verdict_json(v.thm2);
  return j;
}

// Flags mirror config keys and override the config file.
struct RunFlags {
  std::string config;
  std::string output;
  bool unsafe = false;
  std::map<std::string, std::string> values;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--config", f.config, "config file (key = value lines)");
  cmd->add_option("--output", f.output, "output directory");
  cmd->add_flag("--unsafe", f.unsafe, "run past the finite-speed horizon");
  for (const auto& key : nlkg::config_keys()) {
    if (key == "output_dir") continue;
    cmd->add_option("--" + key, f.values[key], "config key " + key);
  }
}

nlkg::RunConfig resolve_config(RunFlags& f) {
  nlkg::ConfigMap m;
  if (!f.config.empty()) m = nlkg::read_config_file(f.config);
  for (const auto& [key, value] : f.values)
    if (!value.empty()) m[key] = value;
  if (!f.output.empty()) m["output_dir"] = f.output;
  if (f.unsafe) m["unsafe_horizon"] = "true";
  return nlkg::build_config(m);
}

int run(RunFlags& f, nlkg::RunMode mode) {
  const nlkg::RunConfig c = resolve_config(f);
  for (const auto& w : c.warnings) std::cerr << "warning: " << w << "\n";
  const nlkg::RunManifest man = nlkg::run_experiment(c, mode);
  std::cout << "status: " << nlkg::to_string(man.status) << "\n";
  if (!man.message.empty()) std::cout << man.message << "\n";
  std::cout << "output: " << c.output_dir << "\n";
  return man.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlinear Klein-Gordon on R^d x T^k: exponents, simulation, scattering reports"};
  app.require_subcommand(1);

  auto* exp = app.add_subcommand("exponents", "critical exponents and theorem verdicts");
  int d = 0, k = 0;
  std::string p_text, gamma_text, exp_output;
  bool table_flag = false;
  exp->add_option("--d", d, "Euclidean dimension");
  exp->add_option("--k", k, "torus dimension");
  exp->add_option("--p", p_text, "nonlinearity exponent (N, N/D or decimal)");
  exp->add_option("--gamma", gamma_text, "extra y-regularity for the anisotropic theorem");
  exp->add_flag("--table", table_flag, "print the full restriction table as CSV");
  exp->add_option("--output", exp_output, "write the result into this directory");

  auto* table = app.add_subcommand("table", "restriction table as CSV");
  std::string table_output;
  table->add_option("--output", table_output, "write table.csv into this directory");

  RunFlags sim_flags, pic_flags;
  auto* sim = app.add_subcommand("simulate", "Strang-split evolution with scattering report");
  add_run_flags(sim, sim_flags);
  auto* pic = app.add_subcommand("picard", "Picard iteration of the Duhamel map");
  add_run_flags(pic, pic_flags);

  auto* rep = app.add_subcommand("scatter-report", "recompute report.csv/report.json from a run directory");
  std::string run_dir, rep_output;
  rep->add_option("--run", run_dir, "run directory")->required();
  rep->add_option("--output", rep_output, "output directory (default: the run directory)");

  CLI11_PARSE(app, argc, argv);

  auto emit = [](const std::string& text, const std::string& out_dir, const char* name) {
    std::cout << text;
    if (!out_dir.empty()) {
      std::filesystem::create_directories(out_dir);
      nlkg::write_text(std::filesystem::path(out_dir) / name, text);
    }
  };

  try {
    if (exp->parsed()) {
      if (table_flag) {
        emit(nlkg::restriction_table_csv(nlkg::restriction_table()), exp_output, "table.csv");
        return nlkg::kExitOk;
      }
      if (d == 0 || k == 0 || p_text.empty()) {
        std::cerr << "exponents: --d, --k and --p are required (or --table)\n";
        return nlkg::kExitValidation;
      }
      std::optional<nlkg::Rational> gamma;
      if (!gamma_text.empty()) gamma = nlkg::parse_rational(gamma_text);
      emit(exponents_json(d, k, nlkg::parse_rational(p_text), gamma).dump(2) + "\n", exp_output, "exponents.json");
      return nlkg::kExitOk;
    }
    if (table->parsed()) {
      emit(nlkg::restriction_table_csv(nlkg::restriction_table()), table_output, "table.csv");
      return nlkg::kExitOk;
    }
    if (sim->parsed()) return run(sim_flags, nlkg::RunMode::simulate);
    if (pic->parsed()) return run(pic_flags, nlkg::RunMode::picard);
    if (rep->parsed()) {
      const auto out = rep_output.empty() ? run_dir : rep_output;
      const auto r = nlkg::scatter_report(run_dir, out);
      std::cout << "report: " << (std::filesystem::path(out) / "report.csv").string() << " (" << r.times.size()
                << " times)\n";
      return nlkg::kExitOk;
    }
  } catch (const nlkg::NumericFailure& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return nlkg::kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return nlkg::kExitValidation;
  }
  return nlkg::kExitValidation;
}
