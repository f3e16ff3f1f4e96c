#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>
#include <vector>

#include "mmcfrt/csv.hpp"
#include "mmcfrt/energy_budget.hpp"
#include "mmcfrt/scenario_file.hpp"
#include "mmcfrt/svg.hpp"

namespace fs = std::filesystem;
using namespace mmcfrt;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitAbort = 3;

struct CommonOpts {
  std::string scenario_path;
  std::string out_dir = "out";
  std::vector<std::string> overrides;
  double dt = 0;  // 0 = keep scenario value
  bool quiet = false;
};

Scenario load(const CommonOpts& o) {
  Scenario sc = load_scenario(o.scenario_path);
  for (const auto& ov : o.overrides) apply_override(sc, ov);
  if (o.dt > 0) sc.dt_s = o.dt;
  return sc;
}

int check_params(const Scenario& sc, bool quiet) {
  const ValidationReport rep = validate(sc.params);
  if (rep.ok()) return kExitOk;
  if (!quiet) {
    std::cerr << "parameter validation failed:\n";
    for (const auto& v : rep.violations) std::cerr << "  - " << v << "\n";
  }
  return kExitValidation;
}

int cmd_run(const CommonOpts& o) {
  Scenario sc = load(o);
  if (int rc = check_params(sc, o.quiet)) return rc;

  const auto start = std::chrono::steady_clock::now();
  const RunResult res = Engine::run(sc);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  fs::create_directories(o.out_dir);
  write_timeseries_csv(res.log, o.out_dir + "/timeseries.csv");
  write_panels_svg(res.log, o.out_dir + "/panels.svg");
  {
    std::ofstream f(o.out_dir + "/budget.txt");
    f << budget_report(res.budget, res);
  }
  if (!o.quiet) {
    std::cout << budget_report(res.budget, res);
    std::cout << "wall time: " << wall << " s, " << res.log.samples.size()
              << " samples -> " << o.out_dir << "/\n";
  }
  return res.aborted ? kExitAbort : kExitOk;
}

int cmd_budget(const CommonOpts& o) {
  Scenario sc = load(o);
  if (int rc = check_params(sc, o.quiet)) return rc;

  const SystemParams& p = sc.params;
  const double e_nom =
      nominal_energy(p.sm_per_arm, p.sm_capacitance_f, p.sm_rated_voltage_v);
  const EddSizingReport rep =
      size_edd(p, sc.fault, sc.gains.rec_energy_ceiling_pu,
               sc.gains.sec_energy_ceiling_pu,
               sc.gains.storing_power_limit_pu);

  std::cout.precision(6);
  std::cout << "Analytic energy budget (no dynamics)\n"
            << "  nominal MMC energy  " << e_nom / 1e6 << " MJ (1.0 p.u.)\n"
            << "  surplus integral    " << rep.surplus_j / 1e6 << " MJ\n"
            << "  storable margin     " << rep.storable_j / 1e6
            << " MJ (REC ceiling " << rep.rec_ceiling_pu << ", SEC ceiling "
            << rep.sec_ceiling_pu << " p.u.)\n"
            << "  EDD required energy " << rep.required_energy_j / 1e6
            << " MJ\n"
            << "  peak residual power " << rep.peak_residual_power_w / 1e6
            << " MW (rating " << p.edd_rated_power_w / 1e6 << " MW)\n"
            << "  feasible            " << (rep.feasible ? "yes" : "NO")
            << "\n"
            << "Assumed wind response: " << p.comm_delay_s * 1e3
            << " ms delay, " << p.turbine_rampdown_s * 1e3 << " ms ramp\n";
  return kExitOk;
}

int cmd_sweep(const CommonOpts& o, const std::string& key,
              const std::vector<std::string>& values) {
  Scenario base = load(o);
  if (int rc = check_params(base, o.quiet)) return rc;

  struct Row {
    std::string value;
    RunResult res;
  };
  std::vector<Row> rows(values.size());
  std::vector<std::thread> pool;
  std::mutex err_mu;
  std::string first_error;

  for (size_t i = 0; i < values.size(); ++i) {
    pool.emplace_back([&, i]() {
      try {
        Scenario sc = base;
        apply_override(sc, key + "=" + values[i]);
        rows[i] = {values[i], Engine::run(sc)};
      } catch (const std::exception& e) {
        std::scoped_lock lk(err_mu);
        if (first_error.empty()) first_error = e.what();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (!first_error.empty()) {
    std::cerr << "sweep failed: " << first_error << "\n";
    return kExitUsage;
  }

  fs::create_directories(o.out_dir);
  std::ofstream f(o.out_dir + "/sweep.csv");
  f.precision(12);
  f << "value,peak_v_dc_pu,rec_peak_energy_pu,sec_peak_energy_pu,"
       "edd_energy_j,aborted\n";
  for (const auto& r : rows) {
    f << r.value << ',' << r.res.peak_v_dc_pu << ','
      << r.res.rec_peak_energy_pu << ',' << r.res.sec_peak_energy_pu << ','
      << r.res.edd_total_j << ',' << (r.res.aborted ? 1 : 0) << "\n";
  }
  if (!o.quiet)
    std::cout << "swept " << key << " over " << values.size()
              << " values -> " << o.out_dir << "/sweep.csv\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MMC-HVDC fault ride-through simulator"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string sweep_key;
  std::vector<std::string> sweep_values;

  auto add_common = [&](CLI::App* cmd, bool needs_out) {
    cmd->add_option("scenario", opts.scenario_path, "scenario file")
        ->required();
    cmd->add_option("--set", opts.overrides,
                    "override section.key=value (repeatable)");
    cmd->add_option("--dt", opts.dt, "override simulation step (s)");
    cmd->add_flag("--quiet", opts.quiet, "suppress console summary");
    if (needs_out)
      cmd->add_option("--out", opts.out_dir, "output directory");
  };

  CLI::App* run = app.add_subcommand("run", "simulate and write CSV/SVG");
  add_common(run, true);
  CLI::App* budget =
      app.add_subcommand("budget", "analytic budget and EDD sizing");
  add_common(budget, false);
  CLI::App* sweep = app.add_subcommand("sweep", "one run per value");
  add_common(sweep, true);
  sweep->add_option("key", sweep_key, "scenario key to vary")->required();
  sweep->add_option("values", sweep_values, "values to sweep")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? kExitUsage : kExitOk;
  }

  try {
    if (run->parsed()) return cmd_run(opts);
    if (budget->parsed()) return cmd_budget(opts);
    if (sweep->parsed()) return cmd_sweep(opts, sweep_key, sweep_values);
  } catch (const ParseError& e) {
    std::cerr << "scenario error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
