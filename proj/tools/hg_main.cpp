// Command-line front end; all simulation work goes through the C API in
// hgsim.h. Subcommands build a JSON task config (optionally seeded from
// --config) and hand it to the library.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hgsim.h"

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

int exit_code_for(hg_status status) {
  switch (status) {
    case HG_OK:
      return 0;
    case HG_ERROR_CONFIG:
      return kExitConfig;
    case HG_ERROR_NUMERICAL:
    case HG_ERROR_MEMORY:
      return kExitNumerical;
    default:
      return 1;
  }
}

json parse_complex_flag(const std::string& text, const std::string& flag) {
  double re = 0.0, im = 0.0;
  char sep = 0;
  std::istringstream ss(text);
  if (!(ss >> re)) throw CLI::ValidationError(flag, "expected re[,im]");
  if (ss >> sep) {
    if (sep != ',' || !(ss >> im)) throw CLI::ValidationError(flag, "expected re[,im]");
  }
  return json::array({re, im});
}

struct CommonFlags {
  std::string config_path;
  std::string out;
  std::int64_t seed = -1;
  double tail_tol = -1.0;
  int threads = -1;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file; flags override its fields");
    cmd->add_option("--out", out, "output directory");
    cmd->add_option("--seed", seed, "RNG seed (semiclassical engine)");
    cmd->add_option("--tail-tol", tail_tol, "discarded Poisson tail mass per mode");
    cmd->add_option("--threads", threads, "worker threads (0 = hardware)");
  }

  json base_config() const {
    json cfg = json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw CLI::ValidationError("--config", "cannot open " + config_path);
      try {
        cfg = json::parse(in);
      } catch (const json::exception& e) {
        throw CLI::ValidationError("--config", std::string("invalid JSON: ") + e.what());
      }
    }
    if (!out.empty()) cfg["out"] = out;
    if (seed >= 0) cfg["seed"] = seed;
    if (tail_tol > 0.0) cfg["tail_tol"] = tail_tol;
    if (threads >= 0) cfg["threads"] = threads;
    return cfg;
  }
};

int execute(const json& cfg) {
  hg_run* run = nullptr;
  hg_status status = hg_run_create(cfg.dump().c_str(), &run);
  if (status == HG_OK) status = hg_run_execute(run);
  if (status != HG_OK) {
    std::cerr << "error: " << hg_last_error() << "\n";
    hg_run_destroy(run);
    return exit_code_for(status);
  }
  std::cout << hg_run_summary_json(run);
  std::cerr << "wrote " << hg_run_output_count(run) << " file(s) to " << hg_run_output_dir(run)
            << "\n";
  hg_run_destroy(run);
  return 0;
}

void add_model_flags(CLI::App* cmd, json& overrides) {
  auto* order = cmd->add_option_function<int>(
      "-N,--order", [&overrides](int n) { overrides["model"]["order"] = n; }, "harmonic order");
  order->check(CLI::PositiveNumber);
  cmd->add_option_function<double>(
      "--coupling", [&overrides](double g) { overrides["model"]["coupling"] = g; },
      "nonlinear coupling g");
  cmd->add_option_function<std::string>(
      "--alpha1",
      [&overrides](const std::string& s) {
        overrides["input"]["alpha1"] = parse_complex_flag(s, "--alpha1");
      },
      "fundamental amplitude, re[,im]");
  cmd->add_option_function<std::string>(
      "--alphaN",
      [&overrides](const std::string& s) {
        overrides["input"]["alphaN"] = parse_complex_flag(s, "--alphaN");
      },
      "harmonic amplitude, re[,im]");
}

void add_grid_flags(CLI::App* cmd, json& overrides) {
  cmd->add_option_function<double>(
      "--t-end", [&overrides](double t) { overrides["grid"]["t_end"] = t; },
      "time grid end (gt units)");
  cmd->add_option_function<double>(
      "--tau-min", [&overrides](double t) { overrides["grid"]["tau_min"] = t; },
      "scaled grid start, tau = omega_bar*gt");
  cmd->add_option_function<double>(
      "--tau-max", [&overrides](double t) { overrides["grid"]["tau_max"] = t; },
      "scaled grid end");
  cmd->add_option_function<int>(
      "--samples", [&overrides](int n) { overrides["grid"]["samples"] = n; },
      "number of grid samples");
  cmd->add_option_function<double>(
      "--window-min", [&overrides](double t) { overrides["window"]["tau_min"] = t; },
      "summary window start (tau units)");
  cmd->add_option_function<double>(
      "--window-max", [&overrides](double t) { overrides["window"]["tau_max"] = t; },
      "summary window end (tau units)");
  cmd->add_flag_function(
      "--window",
      [&overrides](std::int64_t) {
        if (!overrides.contains("window")) overrides["window"] = json::object();
      },
      "report the quasi-stationary window summary (default tau 50..150)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"photon statistics of Nth-harmonic generation: exact quantum, classical and "
               "semiclassical engines"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(hg_version()));

  json overrides = json::object();

  // evolve -------------------------------------------------------------
  auto* evolve = app.add_subcommand("evolve", "exact quantum evolution (Fock-space blocks)");
  CommonFlags evolve_common;
  evolve_common.attach(evolve);
  add_model_flags(evolve, overrides);
  add_grid_flags(evolve, overrides);
  evolve->add_option_function<double>(
      "--angle", [&](double a) { overrides["quadrature_angle"] = a; }, "quadrature angle");
  evolve
      ->add_option_function<std::vector<double>>(
          "--snapshot-gt",
          [&](const std::vector<double>& v) { overrides["snapshots"]["gts"] = v; },
          "Husimi snapshot times (gt)")
      ->delimiter(',');
  evolve
      ->add_option_function<std::vector<int>>(
          "--snapshot-mode",
          [&](const std::vector<int>& v) { overrides["snapshots"]["modes"] = v; },
          "snapshot modes (1 and/or N)")
      ->delimiter(',');
  evolve->add_option_function<std::string>(
      "--eigen-cache", [&](const std::string& dir) { overrides["eigen_cache"] = dir; },
      "directory for binary eigendecomposition records");

  // classical ------------------------------------------------------------
  auto* classical = app.add_subcommand("classical", "deterministic coupled-mode trajectory");
  CommonFlags classical_common;
  classical_common.attach(classical);
  add_model_flags(classical, overrides);
  add_grid_flags(classical, overrides);
  classical->add_option_function<double>(
      "--tol", [&](double t) { overrides["integrator_tol"] = t; }, "integrator tolerance");

  // ensemble -------------------------------------------------------------
  auto* ensemble = app.add_subcommand("ensemble", "semiclassical trajectory Monte Carlo");
  CommonFlags ensemble_common;
  ensemble_common.attach(ensemble);
  add_model_flags(ensemble, overrides);
  add_grid_flags(ensemble, overrides);
  ensemble->add_option_function<int>(
      "--count", [&](int n) { overrides["noise"]["count"] = n; }, "trajectory count");
  ensemble->add_option_function<double>(
      "--sigma2", [&](double s) { overrides["noise"]["sigma2"] = s; },
      "noise variance per quadrature");
  ensemble->add_option_function<double>(
      "--tol", [&](double t) { overrides["integrator_tol"] = t; }, "integrator tolerance");
  ensemble->add_option_function<double>(
      "--angle", [&](double a) { overrides["quadrature_angle"] = a; }, "quadrature angle");
  ensemble
      ->add_option_function<std::vector<double>>(
          "--snapshot-gt",
          [&](const std::vector<double>& v) { overrides["snapshots"]["gts"] = v; },
          "cloud snapshot times (gt)")
      ->delimiter(',');
  ensemble
      ->add_option_function<std::vector<int>>(
          "--snapshot-mode",
          [&](const std::vector<int>& v) { overrides["snapshots"]["modes"] = v; },
          "snapshot modes (1 and/or N)")
      ->delimiter(',');

  // analytic ---------------------------------------------------------------
  auto* analytic = app.add_subcommand("analytic", "closed-form no-energy-transfer predictions");
  CommonFlags analytic_common;
  analytic_common.attach(analytic);
  add_model_flags(analytic, overrides);
  analytic->add_option_function<double>(
      "--r", [&](double r) { overrides["input"]["alphaN"] = json::array({r, 0.0}); },
      "harmonic amplitude r");

  // qfunc ------------------------------------------------------------------
  auto* qfunc = app.add_subcommand("qfunc", "Husimi Q-function of the evolved quantum state");
  CommonFlags qfunc_common;
  qfunc_common.attach(qfunc);
  add_model_flags(qfunc, overrides);
  double qfunc_gt = 2.5;
  int qfunc_mode = 0;
  qfunc->add_option("--gt", qfunc_gt, "evolution time (gt units)");
  qfunc->add_option("--mode", qfunc_mode, "mode (1 or N; default N)");
  qfunc->add_option_function<int>(
      "--resolution", [&](int r) { overrides["qgrid"]["resolution"] = r; },
      "grid points per axis");
  qfunc->add_option_function<double>(
      "--extent", [&](double e) { overrides["qgrid"]["half_extent"] = e; },
      "grid half extent (origin-centered)");

  // scan-global-fano ---------------------------------------------------------
  auto* scan = app.add_subcommand("scan-global-fano",
                                  "global Fano factor over a grid of input amplitudes");
  CommonFlags scan_common;
  scan_common.attach(scan);
  for (const char* key : {"alpha1_min", "alpha1_max", "alpha1_step", "alpha2_min", "alpha2_max",
                          "alpha2_step", "t_end"}) {
    std::string flag = "--" + std::string(key);
    for (auto& ch : flag)
      if (ch == '_') ch = '-';
    scan->add_option_function<double>(
        flag, [&overrides, key](double v) { overrides[key] = v; }, key);
  }
  scan->add_option_function<int>(
      "--samples", [&](int n) { overrides["samples"] = n; }, "time samples per cell");
  scan->add_option_function<int>(
      "-N,--order", [&](int n) { overrides["order"] = n; }, "harmonic order");

  // reproduce-table ------------------------------------------------------------
  auto* table = app.add_subcommand("reproduce-table",
                                   "quasi-stationary Fano factors vs the closed forms");
  CommonFlags table_common;
  table_common.attach(table);
  std::string which = "table2";
  table->add_option("--which", which, "table1 (fundamental) or table2 (harmonic)");
  table
      ->add_option_function<std::vector<int>>(
          "--orders", [&](const std::vector<int>& v) { overrides["orders"] = v; },
          "harmonic orders to run (subset of 1..5)")
      ->delimiter(',');
  table->add_option_function<double>(
      "--r", [&](double r) { overrides["r"] = r; }, "harmonic amplitude r (default 5)");
  table->add_flag_function(
      "--slow", [&](std::int64_t) { overrides["slow"] = true; },
      "allow the expensive orders 4 and 5");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    CommonFlags* common = nullptr;
    std::string task = "experiment";
    if (evolve->parsed()) common = &evolve_common;
    if (classical->parsed()) common = &classical_common;
    if (ensemble->parsed()) common = &ensemble_common;
    if (analytic->parsed()) common = &analytic_common;
    if (qfunc->parsed()) common = &qfunc_common;
    if (scan->parsed()) {
      common = &scan_common;
      task = "scan-global-fano";
    }
    if (table->parsed()) {
      common = &table_common;
      task = "reproduce-table";
    }

    json cfg = common->base_config();
    cfg["task"] = task;
    if (task == "experiment") {
      if (evolve->parsed()) cfg["engine"] = "quantum";
      if (classical->parsed()) cfg["engine"] = "classical";
      if (ensemble->parsed()) cfg["engine"] = "semiclassical";
      if (analytic->parsed()) cfg["engine"] = "analytic";
      if (qfunc->parsed()) {
        cfg["engine"] = "quantum";
        overrides["grid"]["t_end"] = qfunc_gt > 0.0 ? qfunc_gt : 1e-6;
        overrides["grid"]["samples"] = 2;
        overrides["snapshots"]["gts"] = json::array({qfunc_gt});
        int mode = qfunc_mode;
        if (mode == 0) {
          mode = 2;
          if (overrides.contains("model") && overrides["model"].contains("order"))
            mode = overrides["model"]["order"].get<int>();
          else if (cfg.contains("model") && cfg["model"].contains("order"))
            mode = cfg["model"]["order"].get<int>();
        }
        overrides["snapshots"]["modes"] = json::array({mode});
      }
    }
    if (table->parsed()) cfg["which"] = which;
    cfg.update(overrides, true);  // deep-merge flag overrides
    return execute(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
