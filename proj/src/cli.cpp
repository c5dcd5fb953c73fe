#include "filament/cli.hpp"

#include <fftw3.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "filament/config.hpp"
#include "filament/experiments.hpp"
#include "filament/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace filament {
namespace {

// Thrown for problems the user can fix by changing the invocation.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json versions() {
  return {{"filament", std::string(kVersion)},
          {"fftw", std::string(fftw_version)},
          {"compiler", std::string(__VERSION__)},
          {"spdlog", std::to_string(SPDLOG_VER_MAJOR) + "." + std::to_string(SPDLOG_VER_MINOR) + "." +
                         std::to_string(SPDLOG_VER_PATCH)}};
}

json echo_json(const ConfigEcho& echo) {
  json j = json::object();
  for (const auto& [k, v] : echo) j[k] = v;
  return j;
}

json base_manifest(const std::string& command, const std::vector<std::string>& args) {
  return {{"command", command}, {"arguments", args}, {"versions", versions()}};
}

void write_manifest(const fs::path& path, json manifest, double wall) {
  manifest["wall_seconds"] = wall;
  write_text(path, manifest.dump(2) + "\n");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string eps_tag(double eps) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", eps);
  return buf;
}

void prepare_dir(const fs::path& dir, bool force) {
  if (fs::exists(dir) && fs::is_directory(dir) && !fs::is_empty(dir) && !force)
    throw ValidationError("output directory is not empty (use --force to overwrite): " + dir.string());
  prepare_output_dir(dir, force);
}

// ---------------------------------------------------------------------------

int cmd_simulate(const std::string& config_path, const fs::path& out_dir, bool force,
                 const std::vector<std::string>& args, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  RunConfig cfg = parse_config(read_text(config_path));
  cfg.output_dir = out_dir.string();
  prepare_dir(out_dir, force);

  json manifest = base_manifest("simulate", args);
  manifest["config"] = echo_json(cfg.echo());
  manifest["initial_curve"] = describe(cfg.initial);

  const PeriodicCurve initial = make_initial_curve(cfg.initial, cfg.n);
  const int kmax = cfg.n / 2;
  const Mobility mobility =
      cfg.model == Model::leps ? Mobility::slender_body(build_table(cfg.epsilon, kmax)) : Mobility::resistive(cfg.epsilon, kmax);

  DiagnosticsWriter diag(out_dir / "diagnostics.csv");
  long flags = 0;
  const Trajectory traj = run(mobility, initial, cfg.run_options(), [&](const EvolutionState& s) {
    diag.write(s.diagnostics);
    flags += s.diagnostics.energy_flag ? 1 : 0;
    if (s.step % 1000 == 0) spdlog::debug("step {} t = {:.6e} E = {:.12e}", s.step, s.time, s.diagnostics.energy);
  });

  fs::create_directories(out_dir / "snapshots");
  for (const auto& s : traj.snapshots) {
    char name[32];
    std::snprintf(name, sizeof name, "curve_%08ld", s.step);
    write_curve_csv(out_dir / "snapshots" / (std::string(name) + ".csv"), s.curve);
    write_curve_sidecar(out_dir / "snapshots" / (std::string(name) + ".json"), cfg.n, cfg.epsilon, s.time,
                        model_name(cfg.model));
  }
  const EvolutionState& last = traj.snapshots.back();
  write_tension_csv(out_dir / "tension_final.csv", last.curve.grid(), last.tension.tau);

  manifest["status"] = traj.completed ? "ok" : "failed";
  if (!traj.completed) manifest["error"] = traj.error;
  manifest["steps"] = last.step;
  manifest["final_time"] = last.time;
  manifest["final_energy"] = last.diagnostics.energy;
  manifest["energy_flags"] = flags;
  manifest["fitted_constants"] = json::object();
  write_manifest(out_dir / "manifest.json", manifest, seconds_since(t0));

  out << "simulate: " << last.step << " steps, t = " << format_double(last.time)
      << ", E = " << format_double(last.diagnostics.energy) << ", energy flags = " << flags << "\n";
  if (!traj.completed) throw std::runtime_error("run aborted: " + traj.error);
  return kExitOk;
}

int cmd_sweep(const std::string& config_path, const fs::path& out_dir, int jobs, bool force,
              const std::vector<std::string>& args, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  SweepConfig cfg = parse_sweep_config(read_text(config_path));
  if (jobs > 0) cfg.jobs = jobs;
  cfg.output_dir = out_dir.string();
  validate(cfg);
  prepare_dir(out_dir, force);

  const StudyResult res = convergence_study(cfg);

  std::ofstream summary(out_dir / "summary.csv");
  summary << "eps,log_eps,sup_h2_err,compensated_err,l2t_h72_err,max_EW,int_DW\n";
  auto row = [&](const DiscrepancyRecord& r) {
    summary << format_double(r.epsilon) << ',' << format_double(r.log_eps) << ',' << format_double(r.sup_h2) << ','
            << format_double(r.compensated) << ',' << format_double(r.l2t_h72) << ',' << format_double(r.max_EW)
            << ',' << format_double(r.int_DW) << '\n';
  };
  json rows = json::array();
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    const auto& r = res.rows[i];
    const std::string tag = eps_tag(r.epsilon);
    if (r.ok) {
      row(r);
      write_diagnostics_csv(out_dir / ("diagnostics_eps" + tag + "_leps.csv"), res.runs[i].diag_x);
      write_diagnostics_csv(out_dir / ("diagnostics_eps" + tag + "_rft.csv"), res.runs[i].diag_y);
      std::ofstream tr(out_dir / ("discrepancy_eps" + tag + ".csv"));
      tr << "time,EW,DW,mean_sq\n";
      for (std::size_t j = 0; j < r.time.size(); ++j)
        tr << format_double(r.time[j]) << ',' << format_double(r.EW[j]) << ',' << format_double(r.DW[j]) << ','
           << format_double(r.mean_sq[j]) << '\n';
    }
    rows.push_back({{"eps", r.epsilon}, {"ok", r.ok}, {"error", r.error}, {"sup_h2", r.sup_h2},
                    {"compensated", r.compensated}, {"max_EW_log", r.max_EW * r.log_eps},
                    {"int_DW_log", r.int_DW * r.log_eps}, {"max_mean_sq_log", r.max_mean_sq * r.log_eps}});
  }
  summary.close();

  json manifest = base_manifest("sweep", args);
  manifest["config"] = echo_json(cfg.echo());
  manifest["rows"] = rows;
  if (res.confirmation) {
    const auto& c = *res.confirmation;
    manifest["confirmation"] = {{"eps", c.epsilon}, {"n", c.n}, {"ok", c.ok}, {"error", c.error},
                                {"sup_h2", c.sup_h2}, {"compensated", c.compensated}};
  }
  manifest["checks"] = {{"monotone", res.monotone},
                        {"band_ratio", res.band_ratio},
                        {"band_center", res.band_center},
                        {"band_worst", res.band_worst},
                        {"band_ok", res.band_ok},
                        {"EW_bounded", res.EW_bounded},
                        {"DW_bounded", res.DW_bounded}};
  manifest["fitted_constants"] = {{"C_EW", res.fitted_EW}, {"C_DW", res.fitted_DW}};
  manifest["status"] = "ok";
  write_manifest(out_dir / "manifest.json", manifest, seconds_since(t0));

  out << "sweep: " << res.rows.size() << " rows, monotone = " << (res.monotone ? "yes" : "no")
      << ", compensated error within " << format_double(res.band_worst) << "x of "
      << format_double(res.band_center) << " (max/min " << format_double(res.band_ratio) << ")\n";
  for (const auto& r : res.rows)
    if (!r.ok) throw std::runtime_error("sweep row eps = " + eps_tag(r.epsilon) + " failed: " + r.error);
  return kExitOk;
}

int cmd_multiplier_dump(double eps, int kmax, const std::string& out_path, const std::vector<std::string>& args,
                        std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("--epsilon must lie in (0, 1)");
  if (kmax < 1) throw ValidationError("--kmax must be >= 1");
  if (out_path.empty()) {
    write_multiplier_csv(out, eps, kmax);
    return kExitOk;
  }
  std::ofstream f(out_path);
  if (!f) throw std::runtime_error("cannot open for writing: " + out_path);
  write_multiplier_csv(f, eps, kmax);
  json manifest = base_manifest("multiplier-dump", args);
  manifest["config"] = {{"epsilon", eps}, {"kmax", kmax}};
  manifest["status"] = "ok";
  write_manifest(out_path + ".manifest.json", manifest, seconds_since(t0));
  return kExitOk;
}

int cmd_tension_check(const std::string& curve_path, double eps, const std::string& model_str,
                      const std::string& out_path, const std::vector<std::string>& args, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("--epsilon must lie in (0, 1)");
  Model model;
  try {
    model = parse_model(model_str);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
  PeriodicCurve curve = read_curve_csv(curve_path);
  const double residual = inextensibility_residual(curve);
  if (residual > 1e-6) {
    spdlog::info("tension-check: residual {:.3e} above 1e-6, reparameterizing by arclength", residual);
    curve = reparameterize_arclength(curve);
  }
  const int kmax = curve.n() / 2;
  const Mobility mob = model == Model::leps ? Mobility::slender_body(build_table(eps, kmax)) : Mobility::resistive(eps, kmax);
  const TensionField tau = TensionProblem(curve, mob).solve();
  write_tension_csv(out_path, curve.grid(), tau.tau);

  json manifest = base_manifest("tension-check", args);
  manifest["config"] = {{"curve", curve_path}, {"epsilon", eps}, {"model", model_name(model)}};
  manifest["status"] = "ok";
  manifest["cg_iterations"] = tau.solve.iterations;
  manifest["relative_residual"] = tau.solve.relative_residual;
  manifest["tension_mean"] = tau.mean;
  write_manifest(out_path + ".manifest.json", manifest, seconds_since(t0));
  out << "tension-check: mean tension " << format_double(tau.mean) << " after " << tau.solve.iterations
      << " CG iterations\n";
  return kExitOk;
}

int cmd_lemma_suite(const std::vector<double>& epsilons, int kmax, const std::string& out_path,
                    const std::vector<std::string>& args, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  if (kmax < 1) throw ValidationError("--kmax must be >= 1");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0 && epsilons[i] < 1.0)) throw ValidationError("--epsilons values must lie in (0, 1)");
    if (i > 0 && !(epsilons[i] < epsilons[i - 1])) throw ValidationError("--epsilons must be strictly decreasing");
  }
  LemmaSuiteOptions opt;
  opt.kmax = kmax;
  const LemmaReport rep = lemma_suite(epsilons, opt);
  json checks = json::array();
  json fitted = json::object();
  for (const auto& c : rep.checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << " fitted=" << format_double(c.fitted)
        << " worst=" << format_double(c.worst) << "  " << c.detail << "\n";
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"fitted", c.fitted}, {"worst", c.worst},
                      {"detail", c.detail}});
    fitted[c.name] = c.fitted;
  }
  if (!out_path.empty()) {
    json manifest = base_manifest("lemma-suite", args);
    manifest["config"] = {{"epsilons", epsilons}, {"kmax", kmax}};
    manifest["checks"] = checks;
    manifest["fitted_constants"] = fitted;
    manifest["status"] = rep.all_passed() ? "all checks passed" : "some checks failed";
    write_manifest(out_path, manifest, seconds_since(t0));
  }
  return kExitOk;
}

}  // namespace

void configure_logging() {
  static std::once_flag once;
  std::call_once(once, [] {
    auto logger = spdlog::stderr_color_mt("filament");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%H:%M:%S.%e] [%^%l%$] %v");
    spdlog::level::level_enum level = spdlog::level::warn;
    if (const char* env = std::getenv("FILAMENT_LOG")) {
      const std::string v = env;
      if (v == "error") level = spdlog::level::err;
      else if (v == "info") level = spdlog::level::info;
      else if (v == "debug") level = spdlog::level::debug;
      else spdlog::warn("FILAMENT_LOG='{}' not recognized (error, info, debug)", v);
    }
    spdlog::set_level(level);
  });
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  configure_logging();
  CLI::App app{"Simulator for inextensible filaments under slender-body and resistive-force dynamics", "filament"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string config_path, out_path, curve_path, model = "leps";
  bool force = false;
  int jobs = 0, kmax = 0;
  double eps = 0.0;
  std::vector<double> epsilons{1e-2, 1e-3, 1e-4, 1e-5};

  auto* sim = app.add_subcommand("simulate", "Run one trajectory from a key=value config");
  sim->add_option("--config", config_path, "Run configuration")->required();
  sim->add_option("--out", out_path, "Output directory")->required();
  sim->add_flag("--force", force, "Overwrite a non-empty output directory");

  auto* sweep = app.add_subcommand("sweep", "Slender-body versus resistive-force convergence study");
  sweep->add_option("--config", config_path, "Sweep configuration")->required();
  sweep->add_option("--out", out_path, "Output directory")->required();
  sweep->add_option("--jobs", jobs, "Concurrent epsilon jobs (overrides the config)");
  sweep->add_flag("--force", force, "Overwrite a non-empty output directory");

  auto* dump = app.add_subcommand("multiplier-dump", "Tabulate the multipliers as CSV");
  dump->add_option("--epsilon", eps, "Filament radius")->required();
  dump->add_option("--kmax", kmax, "Largest wavenumber")->required();
  dump->add_option("--out", out_path, "CSV path (stdout when omitted)");

  auto* tension = app.add_subcommand("tension-check", "Solve the tension problem for a curve");
  tension->add_option("--curve", curve_path, "Curve CSV with columns s,x,y,z")->required();
  tension->add_option("--epsilon", eps, "Filament radius")->required();
  tension->add_option("--model", model, "leps or rft");
  tension->add_option("--out", out_path, "Tension CSV path")->required();

  auto* lemma = app.add_subcommand("lemma-suite", "Multiplier bound and coercivity checks");
  lemma->add_option("--epsilons", epsilons, "Strictly decreasing radii")->delimiter(',');
  kmax = 4096;
  lemma->add_option("--kmax", kmax, "Largest wavenumber");
  lemma->add_option("--out", out_path, "JSON report path");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitValidation;
  }

  try {
    if (*sim) return cmd_simulate(config_path, out_path, force, args, out);
    if (*sweep) return cmd_sweep(config_path, out_path, jobs, force, args, out);
    if (*dump) return cmd_multiplier_dump(eps, kmax, out_path, args, out);
    if (*tension) return cmd_tension_check(curve_path, eps, model, out_path, args, out);
    if (*lemma) return cmd_lemma_suite(epsilons, kmax, out_path, args, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitValidation;
}

}  // namespace filament
